"""JSON model files: validation and construction of runtime objects.

A model file is a single JSON object with a ``kind`` discriminator plus
kind-specific parameters, an optional ``measure`` block (weight table,
the stock geometric weights, or an interval carrier), and an optional
``integrand`` block.  Validation errors carry a JSON-pointer to the
offending location.  The supported kinds and their parameters are
documented in the README.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Any

from . import genealogy as gen
from .convergent import ConvergentConstruction, construct_convergent_evolution
from .core import (
    Chronology,
    Evolution,
    EvolutionError,
    Ground,
    from_chronology,
    example_square,
    naturals,
    sort_elements,
)
from .integrands import Integrand, parse_integrand
from .intervals import IntervalSet, RealEvolution, shell_evolution, sliding_window_evolution
from .measure import (
    AtomFamily,
    DiscreteMeasure,
    LebesgueModel,
    atom_augmented_evolution,
    order_preserving_onto_naturals,
)
from .probes import (
    ScalarPullbackEvolution,
    SpanEvolution,
    determinant_probe,
    distance_to_point,
    hyperplane_distance,
    inner_product_with,
    linear_functional,
    scalar_pullback_evolution,
    span_evolution,
)

KINDS = (
    "example-square",
    "chronology",
    "sliding-window",
    "shell",
    "scalar-pullback",
    "span",
    "genealogy",
    "prime-genealogy",
    "atom-augmented",
    "lebesgue-convergent",
    "explicit-stages",
)

MAX_LISTED_ELEMENTS = 10**6


class SchemaError(EvolutionError):
    def __init__(self, pointer: str, reason: str):
        self.pointer = pointer
        self.reason = reason
        super().__init__(f"{pointer or '/'}: {reason}")


class UnknownKind(EvolutionError):
    def __init__(self, kind: object):
        self.kind = kind
        super().__init__(f"unknown model kind {kind!r}")


@dataclass
class LoadedModel:
    kind: str
    label: str
    digest: str
    discrete: Evolution | None = None
    real: RealEvolution | None = None
    genealogy_model: gen.GenealogyModel | None = None
    founders_m: frozenset | None = None
    founders_f: frozenset | None = None
    symbolic: ScalarPullbackEvolution | SpanEvolution | None = None
    measure: DiscreteMeasure | None = None
    lebesgue: LebesgueModel | None = None
    integrand: Integrand | None = None
    construction: ConvergentConstruction | None = None
    notes: tuple[str, ...] = ()


def _expect(obj: Any, pointer: str, types: tuple[type, ...], what: str) -> Any:
    if not isinstance(obj, types):
        names = "/".join(t.__name__ for t in types)
        raise SchemaError(pointer, f"expected {what} ({names}), got {type(obj).__name__}")
    return obj


def _get(mapping: dict, key: str, pointer: str, types: tuple[type, ...], what: str) -> Any:
    if key not in mapping:
        raise SchemaError(f"{pointer}/{key}", f"missing required {what}")
    return _expect(mapping[key], f"{pointer}/{key}", types, what)


def _number(obj: Any, pointer: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise SchemaError(pointer, f"expected a number, got {type(obj).__name__}")
    return float(obj)


def _element(obj: Any, pointer: str):
    if isinstance(obj, bool) or not isinstance(obj, (int, str)):
        raise SchemaError(pointer, "elements must be integers or strings")
    return obj


def _element_from_key(key: str):
    try:
        return int(key)
    except ValueError:
        return key


def _interval_pairs(obj: Any, pointer: str) -> IntervalSet:
    pairs = _expect(obj, pointer, (list,), "a list of [a, b] pairs")
    cleaned = []
    for i, pair in enumerate(pairs):
        p = _expect(pair, f"{pointer}/{i}", (list,), "an [a, b] pair")
        if len(p) != 2:
            raise SchemaError(f"{pointer}/{i}", "interval pairs have exactly two numbers")
        a = _number(p[0], f"{pointer}/{i}/0")
        b = _number(p[1], f"{pointer}/{i}/1")
        if not a < b:
            raise SchemaError(f"{pointer}/{i}", f"need a < b, got [{a!r}, {b!r}]")
        cleaned.append((a, b))
    return IntervalSet.from_pairs(cleaned)


def _build_discrete(obj: dict, pointer: str) -> Evolution:
    model = _build(obj, pointer)
    if model.discrete is None:
        raise SchemaError(pointer, f"kind {model.kind!r} is not a discrete evolution")
    return model.discrete


def _build_real(obj: dict, pointer: str) -> RealEvolution:
    model = _build(obj, pointer)
    if model.real is None:
        raise SchemaError(pointer, f"kind {model.kind!r} is not an interval evolution")
    return model.real


def _build_probe(obj: dict, pointer: str):
    variant = _get(obj, "variant", pointer, (str,), "probe variant")
    if variant == "distance-to-point":
        point = _get(obj, "point", pointer, (list,), "coordinate list")
        return distance_to_point([_number(v, f"{pointer}/point") for v in point])
    if variant == "hyperplane-distance":
        dim = int(_number(_get(obj, "dim", pointer, (int,), "dimension"), f"{pointer}/dim"))
        axis = int(_number(obj.get("axis", 0), f"{pointer}/axis"))
        level = _number(obj.get("level", 0.0), f"{pointer}/level")
        return hyperplane_distance(dim, axis, level)
    if variant == "linear-functional":
        coeffs = _get(obj, "coeffs", pointer, (list,), "coefficient list")
        return linear_functional([_number(v, f"{pointer}/coeffs") for v in coeffs])
    if variant == "inner-product":
        vector = _get(obj, "vector", pointer, (list,), "anchor vector")
        return inner_product_with([_number(v, f"{pointer}/vector") for v in vector])
    if variant == "determinant":
        n = _get(obj, "n", pointer, (int,), "matrix dimension")
        return determinant_probe(int(n))
    raise SchemaError(f"{pointer}/variant", f"unknown probe variant {variant!r}")


def _build(obj: Any, pointer: str = "") -> LoadedModel:
    body = _expect(obj, pointer, (dict,), "a model object")
    kind = body.get("kind")
    if not isinstance(kind, str) or kind not in KINDS:
        raise UnknownKind(kind)
    label = body.get("label", kind)
    loaded = LoadedModel(kind=kind, label=label, digest="")

    if kind == "example-square":
        loaded.discrete = example_square()

    elif kind == "explicit-stages":
        stages = _get(body, "stages", pointer, (list,), "stage list")
        if stages and isinstance(stages[0], dict):
            interval_stages: list[IntervalSet] = []
            for i, st in enumerate(stages):
                st = _expect(st, f"{pointer}/stages/{i}", (dict,), "an interval stage")
                interval_stages.append(
                    _interval_pairs(
                        st.get("intervals", []), f"{pointer}/stages/{i}/intervals"
                    )
                )
            loaded.real = RealEvolution(
                lambda k: interval_stages[k - 1]
                if k <= len(interval_stages)
                else IntervalSet.empty(),
                label=label,
            )
        else:
            listed = 0
            parsed_stages: list[frozenset] = []
            for i, st in enumerate(stages):
                st = _expect(st, f"{pointer}/stages/{i}", (list,), "an element list")
                listed += len(st)
                if listed > MAX_LISTED_ELEMENTS:
                    raise SchemaError(
                        f"{pointer}/stages/{i}",
                        f"more than {MAX_LISTED_ELEMENTS} listed elements",
                    )
                parsed_stages.append(
                    frozenset(
                        _element(x, f"{pointer}/stages/{i}/{j}")
                        for j, x in enumerate(st)
                    )
                )
            union = frozenset().union(*parsed_stages) if parsed_stages else frozenset()
            loaded.discrete = Evolution(
                lambda k: parsed_stages[k - 1] if k <= len(parsed_stages) else frozenset(),
                Ground.finite(union, label=label),
                label=label,
            )

    elif kind == "chronology":
        entries = _get(body, "elements", pointer, (dict,), "element table")
        appears: dict = {}
        vanishes: dict = {}
        for key, value in entries.items():
            p = f"{pointer}/elements/{key}"
            pair = _expect(value, p, (list,), "[appearance, disappearance]")
            if len(pair) != 2:
                raise SchemaError(p, "expected [appearance, disappearance]")
            element = _element_from_key(key)
            a = int(_number(pair[0], f"{p}/0"))
            d = int(_number(pair[1], f"{p}/1"))
            appears[element] = a
            vanishes[element] = d
        loaded.discrete = from_chronology(
            Chronology.from_table(appears, vanishes, label=label),
            Ground.finite(appears.keys(), label=label),
        )

    elif kind == "sliding-window":
        width = _number(_get(body, "width", pointer, (int, float), "window width"), f"{pointer}/width")
        step = _number(_get(body, "step", pointer, (int, float), "window step"), f"{pointer}/step")
        loaded.real = sliding_window_evolution(width, step)

    elif kind == "shell":
        index = _get(body, "index", pointer, (dict,), "index model")
        loaded.real = shell_evolution(_build_discrete(index, f"{pointer}/index"))

    elif kind == "scalar-pullback":
        probe_obj = _get(body, "probe", pointer, (dict,), "probe object")
        base_obj = _get(body, "base", pointer, (dict,), "base model")
        probe = _build_probe(probe_obj, f"{pointer}/probe")
        base = _build_real(base_obj, f"{pointer}/base")
        loaded.symbolic = scalar_pullback_evolution(probe, base)

    elif kind == "span":
        index = _get(body, "index", pointer, (dict,), "index model")
        loaded.symbolic = span_evolution(_build_discrete(index, f"{pointer}/index"))

    elif kind == "genealogy":
        males = [
            _element(x, f"{pointer}/males/{i}")
            for i, x in enumerate(_get(body, "males", pointer, (list,), "male list"))
        ]
        females = [
            _element(x, f"{pointer}/females/{i}")
            for i, x in enumerate(_get(body, "females", pointer, (list,), "female list"))
        ]
        marriage = {}
        for i, pair in enumerate(_get(body, "marriages", pointer, (list,), "marriage list")):
            p = _expect(pair, f"{pointer}/marriages/{i}", (list,), "a [male, female] pair")
            if len(p) != 2:
                raise SchemaError(f"{pointer}/marriages/{i}", "expected [male, female]")
            marriage[_element(p[0], f"{pointer}/marriages/{i}/0")] = _element(
                p[1], f"{pointer}/marriages/{i}/1"
            )
        reproduction = {}
        for i, pair in enumerate(
            _get(body, "reproduction", pointer, (list,), "reproduction list")
        ):
            p = _expect(pair, f"{pointer}/reproduction/{i}", (list,), "a [child, mother] pair")
            if len(p) != 2:
                raise SchemaError(f"{pointer}/reproduction/{i}", "expected [child, mother]")
            child = _element(p[0], f"{pointer}/reproduction/{i}/0")
            if child in reproduction:
                raise SchemaError(
                    f"{pointer}/reproduction/{i}", f"child {child!r} has two mothers"
                )
            reproduction[child] = _element(p[1], f"{pointer}/reproduction/{i}/1")
        try:
            model = gen.genealogy_model(males, females, marriage, reproduction, label=label)
        except ValueError as exc:
            raise SchemaError(pointer, str(exc)) from exc
        loaded.genealogy_model = model
        default_m, default_f = gen.founders(model)
        seeds = body.get("founders")
        if seeds is not None:
            seeds = _expect(seeds, f"{pointer}/founders", (dict,), "founder seeds")
            loaded.founders_m = frozenset(
                _element(x, f"{pointer}/founders/males")
                for x in _expect(seeds.get("males", []), f"{pointer}/founders/males", (list,), "male seeds")
            )
            loaded.founders_f = frozenset(
                _element(x, f"{pointer}/founders/females")
                for x in _expect(seeds.get("females", []), f"{pointer}/founders/females", (list,), "female seeds")
            )
        else:
            loaded.founders_m = default_m
            loaded.founders_f = default_f

    elif kind == "prime-genealogy":
        bound = _get(body, "bound", pointer, (int,), "bound")
        if bound < 4:
            raise SchemaError(f"{pointer}/bound", "bound must be at least 4")
        model = gen.prime_model(int(bound))
        loaded.genealogy_model = model
        loaded.founders_m, loaded.founders_f = gen.founders(model)

    elif kind == "atom-augmented":
        base_obj = _get(body, "base", pointer, (dict,), "base model")
        base = _build_discrete(base_obj, f"{pointer}/base")
        atoms_obj = _get(body, "atoms", pointer, (dict, list), "atom family")
        if isinstance(atoms_obj, dict):
            start = _get(atoms_obj, "start", f"{pointer}/atoms", (int,), "start")
            step = _get(atoms_obj, "step", f"{pointer}/atoms", (int,), "step")
            atoms = AtomFamily.arithmetic(int(start), int(step))
        else:
            sets = []
            for i, entry in enumerate(atoms_obj):
                entry = _expect(entry, f"{pointer}/atoms/{i}", (list,), "an atom set")
                sets.append([_element(x, f"{pointer}/atoms/{i}/{j}") for j, x in enumerate(entry)])
            atoms = AtomFamily.from_list(sets)
        assert atoms.contains is not None
        bijection = order_preserving_onto_naturals(atoms.contains)
        loaded.measure = _parse_measure_block(body, pointer, loaded)
        loaded.discrete = atom_augmented_evolution(
            base, atoms, bijection, mu=loaded.measure
        )

    elif kind == "lebesgue-convergent":
        phi_text = _get(body, "phi", pointer, (str,), "integrand descriptor")
        tol = _number(_get(body, "tol", pointer, (int, float), "tolerance"), f"{pointer}/tol")
        horizon = _get(body, "horizon", pointer, (int,), "horizon")
        try:
            phi = parse_integrand(phi_text)
        except EvolutionError as exc:
            raise SchemaError(f"{pointer}/phi", str(exc)) from exc
        construction, _ = construct_convergent_evolution(phi, tol, int(horizon))
        loaded.construction = construction
        loaded.real = construction.evolution
        loaded.lebesgue = construction.model
        loaded.integrand = phi

    if loaded.measure is None:
        loaded.measure = _parse_measure_block(body, pointer, loaded)

    integrand_obj = body.get("integrand")
    if integrand_obj is not None:
        integrand_obj = _expect(
            integrand_obj, f"{pointer}/integrand", (dict,), "integrand block"
        )
        phi_text = _get(integrand_obj, "phi", f"{pointer}/integrand", (str,), "descriptor")
        bound = integrand_obj.get("bound")
        declared = None if bound is None else _number(bound, f"{pointer}/integrand/bound")
        try:
            loaded.integrand = parse_integrand(phi_text, declared_bound=declared)
        except EvolutionError as exc:
            raise SchemaError(f"{pointer}/integrand/phi", str(exc)) from exc

    return loaded


def _parse_measure_block(
    body: dict, pointer: str, loaded: LoadedModel
) -> DiscreteMeasure | None:
    """Parse the optional measure block; carriers attach a LebesgueModel."""
    measure_obj = body.get("measure")
    if measure_obj is None:
        return None
    measure_obj = _expect(measure_obj, f"{pointer}/measure", (dict,), "measure block")
    if "weights" in measure_obj:
        table = _expect(
            measure_obj["weights"], f"{pointer}/measure/weights", (dict,), "weight table"
        )
        weights = {
            _element_from_key(key): _number(v, f"{pointer}/measure/weights/{key}")
            for key, v in table.items()
        }
        try:
            return DiscreteMeasure.from_table(weights)
        except ValueError as exc:
            raise SchemaError(f"{pointer}/measure/weights", str(exc)) from exc
    if measure_obj.get("geometric"):
        return DiscreteMeasure.geometric()
    if "carrier" in measure_obj:
        carrier = _interval_pairs(measure_obj["carrier"], f"{pointer}/measure/carrier")
        if loaded.real is None:
            raise SchemaError(
                f"{pointer}/measure/carrier",
                "interval carriers require an interval-stage model",
            )
        try:
            loaded.lebesgue = LebesgueModel(carrier=carrier, evolution=loaded.real)
        except ValueError as exc:
            raise SchemaError(f"{pointer}/measure/carrier", str(exc)) from exc
        return None
    raise SchemaError(f"{pointer}/measure", "expected weights, geometric, or carrier")


def model_digest(obj: Any) -> str:
    canonical = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def parse_model_object(obj: Any) -> LoadedModel:
    loaded = _build(obj, "")
    loaded.digest = model_digest(obj)
    return loaded


def parse_model(path: str) -> LoadedModel:
    """Load and validate a UTF-8 JSON model file."""
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except FileNotFoundError:
        raise SchemaError("", f"model file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON: {exc}") from exc
    return parse_model_object(obj)


def convergent_stages_as_model(
    construction: ConvergentConstruction, horizon: int, label: str
) -> dict:
    """Render constructed stages as an explicit-stages model object."""
    stages = []
    for k in range(1, horizon + 1):
        stage = construction.evolution.stage(k)
        stages.append({"intervals": [[a, b] for a, b in stage.parts]})
    return {
        "kind": "explicit-stages",
        "label": label,
        "stages": stages,
        "meta": {
            "phi": construction.phi.descriptor(),
            "target": construction.target,
            "tolerance": construction.tol,
            "certificate": "constructive witness",
        },
    }
