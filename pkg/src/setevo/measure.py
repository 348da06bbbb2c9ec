"""Measures over evolutions: stage-mass traces, decay, and stage integrals.

Discrete measures sum weights in ascending element order so every reported
value is reproducible bit for bit; interval measures are exact lengths.
The decay check implements the finite-lifespan argument: when every element
of stage k lives at most d_k stages, far-apart stages are disjoint and the
stage masses must die out.  Stage integrals evaluate catalog integrands and
carry the bounded-integrand diagnostics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .core import (
    ElementId,
    Evolution,
    EvolutionError,
    Ground,
    chronology_of,
    sort_elements,
)
from .integrands import CatalogUnsupported, Integrand
from .intervals import IntervalSet, RealEvolution


class WeightMissing(EvolutionError):
    def __init__(self, element: ElementId):
        self.element = element
        super().__init__(f"no weight declared for element {element!r}")


class AtomsOverlap(EvolutionError):
    def __init__(self, witness: tuple):
        self.witness = witness
        super().__init__(f"atom sets overlap: {witness!r}")


class ZeroWeightAtom(EvolutionError):
    def __init__(self, stage_index: int):
        self.stage_index = stage_index
        super().__init__(f"atom set for stage {stage_index} has zero mass")


class NotInvertible(EvolutionError):
    pass


class DiscreteMeasure:
    """Nonnegative weights on elements, summed in ascending element order.

    Table-based measures validate that the weights total 1 within 1e-9.
    Rule-based measures (like the dyadic geometric family on the
    nonnegative integers) declare their total instead; restricted to a
    sub-ground they act as a subprobability, which is all the decay and
    integral machinery needs.
    """

    def __init__(
        self,
        weight: Callable[[ElementId], float],
        label: str = "measure",
        table: Mapping[ElementId, float] | None = None,
        declared_total: float | None = None,
    ):
        self._weight = weight
        self.label = label
        self.table = dict(table) if table is not None else None
        self.declared_total = declared_total

    @classmethod
    def from_table(
        cls, weights: Mapping[ElementId, float], label: str = "table-measure"
    ) -> "DiscreteMeasure":
        table = {k: float(v) for k, v in weights.items()}
        for element, w in table.items():
            if w < 0:
                raise ValueError(f"negative weight {w!r} for {element!r}")
        total = sum(table[k] for k in sort_elements(table))
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights sum to {total!r}, expected 1 within 1e-9")

        def weight(x: ElementId) -> float:
            try:
                return table[x]
            except KeyError:
                raise WeightMissing(x) from None

        return cls(weight, label=label, table=table, declared_total=total)

    @classmethod
    def geometric(cls) -> "DiscreteMeasure":
        """w(x) = 2**-(x+1) on the nonnegative integers; totals exactly 1."""

        def weight(x: ElementId) -> float:
            if isinstance(x, bool) or not isinstance(x, int) or x < 0:
                raise WeightMissing(x)
            return 2.0 ** -(x + 1)

        return cls(weight, label="geometric(1/2)", declared_total=1.0)

    def weight(self, x: ElementId) -> float:
        return self._weight(x)

    def mass_of(self, elements: Iterable[ElementId]) -> float:
        return sum(self._weight(x) for x in sort_elements(elements))


@dataclass(frozen=True)
class LebesgueModel:
    """A unit-mass interval carrier with stages restricted to it."""

    carrier: IntervalSet
    evolution: RealEvolution

    def __post_init__(self):
        total = self.carrier.measure()
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"carrier measure {total!r}, expected 1 within 1e-9")

    def stage_region(self, k: int) -> IntervalSet:
        return self.evolution.stage(k).intersection(self.carrier)

    def stage_measure(self, k: int) -> float:
        return self.stage_region(k).measure()


def mu_trace(
    evo: Evolution | RealEvolution,
    mu: DiscreteMeasure | LebesgueModel,
    horizon: int,
) -> list[float]:
    """Per-stage masses μ(E_1), ..., μ(E_horizon), computed exactly."""
    if isinstance(mu, LebesgueModel):
        return [mu.stage_measure(k) for k in range(1, horizon + 1)]
    if not isinstance(evo, Evolution):
        raise TypeError("discrete measures require a discrete evolution")
    return [mu.mass_of(evo.stage(k)) for k in range(1, horizon + 1)]


@dataclass(frozen=True)
class DecayReport:
    horizon: int
    epsilon: float
    masses: tuple[float, ...]
    lifespan_bounds: tuple[int | None, ...]
    threshold_index: int | None
    decayed: bool
    premise_violations: tuple[ElementId, ...]
    open_stages: tuple[int, ...]
    notes: tuple[str, ...] = ()

    def lines(self) -> list[str]:
        out = [f"epsilon: {self.epsilon!r}"]
        if self.decayed:
            out.append(
                f"masses stay below epsilon from stage {self.threshold_index} on"
            )
        else:
            out.append("non-decay within the horizon")
        if self.premise_violations:
            out.append(
                "lifespan premise violated by: "
                + ", ".join(repr(x) for x in self.premise_violations[:8])
            )
        return out


def decay_check(
    evo: Evolution | RealEvolution,
    mu: DiscreteMeasure | LebesgueModel,
    horizon: int,
    epsilon: float,
) -> DecayReport:
    """Trace stage masses and test the finite-lifespan decay prediction.

    Reports the per-stage lifespan bound d_k wherever every occupant of the
    stage has a closed occupancy interval, the first index K from which all
    masses stay below epsilon, and -- separately -- elements whose open
    occupancy spans at least half the horizon, which breaks the premise of
    the decay argument rather than merely exceeding it.
    """
    if horizon < 8:
        raise ValueError("horizon must be at least 8")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    masses = tuple(mu_trace(evo, mu, horizon))

    lifespans: list[int | None] = []
    premise_violations: list[ElementId] = []
    open_stages: list[int] = []
    notes: list[str] = []
    if isinstance(evo, Evolution):
        reading = chronology_of(evo, horizon)
        for k in range(1, horizon + 1):
            stage = evo.stage(k)
            bound: int | None = 0
            for x in stage:
                if x in reading.appears:
                    span = reading.vanishes[x] - reading.appears[x]
                    if bound is not None:
                        bound = max(bound, span)
                else:
                    bound = None
                    break
            if bound is None:
                open_stages.append(k)
                lifespans.append(None)
            else:
                lifespans.append(bound)
        first_seen: dict[ElementId, int] = {}
        for k in range(1, horizon + 1):
            for x in evo.stage(k):
                first_seen.setdefault(x, k)
        for x in sort_elements(evo.stage(horizon)):
            observed = horizon - first_seen[x] + 1
            if observed * 2 >= horizon:
                premise_violations.append(x)
    else:
        lifespans = [None] * horizon
        notes.append("lifespan bounds are not computed for interval stages")

    threshold: int | None = None
    for k in range(horizon, 0, -1):
        if masses[k - 1] < epsilon:
            threshold = k
        else:
            break
    decayed = threshold is not None

    return DecayReport(
        horizon=horizon,
        epsilon=epsilon,
        masses=masses,
        lifespan_bounds=tuple(lifespans),
        threshold_index=threshold,
        decayed=decayed,
        premise_violations=tuple(premise_violations),
        open_stages=tuple(open_stages),
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class IntegralReport:
    values: tuple[float, ...]
    masses: tuple[float, ...]
    declared_bound: float | None
    bound_respected: tuple[bool, ...]
    bound_violations: tuple[str, ...]
    contradiction_flag: bool
    notes: tuple[str, ...] = ()


def stage_integral(
    evo: Evolution | RealEvolution,
    mu: DiscreteMeasure | LebesgueModel,
    phi: Integrand | Callable[[int], Integrand],
    horizon: int,
) -> IntegralReport:
    """Exact stage integrals with bounded-integrand diagnostics.

    Discrete stages sum phi(x) * w(x) in ascending element order; interval
    stages use the antiderivative.  A declared sup bound C is audited two
    ways: the per-stage inequality |∫ φ| <= C * μ(E_k) (with 1e-12 slack),
    and pointwise spot checks of |φ| <= C on stage elements.  The
    contradiction flag fires when the integral trace keeps a persistent
    floor while C * μ vanishes below it -- possible only when the declared
    bound is false or lifespans are unbounded.
    """
    phi_at: Callable[[int], Integrand]
    if isinstance(phi, Integrand):
        phi_at = lambda k: phi
    else:
        phi_at = phi

    values: list[float] = []
    masses: list[float] = []
    bound_respected: list[bool] = []
    bound_violations: list[str] = []
    declared = None

    for k in range(1, horizon + 1):
        integrand = phi_at(k)
        if declared is None:
            declared = integrand.declared_bound
        if isinstance(mu, LebesgueModel):
            region = mu.stage_region(k)
            value = integrand.integral_on(region)
            mass = region.measure()
            sample_points = [a for a, _ in region.parts[:8]]
        else:
            if not isinstance(evo, Evolution):
                raise TypeError("discrete measures require a discrete evolution")
            stage = sort_elements(evo.stage(k))
            for x in stage:
                if isinstance(x, bool) or not isinstance(x, (int, float)):
                    raise CatalogUnsupported(
                        f"integrands act on numeric elements, got {x!r}"
                    )
            value = sum(integrand.evaluate(float(x)) * mu.weight(x) for x in stage)
            mass = sum(mu.weight(x) for x in stage)
            sample_points = [float(x) for x in stage[:8]]
        values.append(value)
        masses.append(mass)
        c = integrand.declared_bound
        if c is not None:
            bound_respected.append(abs(value) <= c * mass + 1e-12)
            for pt in sample_points:
                try:
                    v = integrand.evaluate(pt)
                except ValueError:
                    continue
                if abs(v) > c:
                    bound_violations.append(
                        f"stage {k}: |φ({pt!r})| = {abs(v)!r} exceeds declared {c!r}"
                    )
        else:
            bound_respected.append(True)

    contradiction = False
    if declared is not None and horizon >= 8:
        tail = range(3 * horizon // 4, horizon)
        floor = min(abs(values[i]) for i in tail)
        ceiling = max(declared * masses[i] for i in tail)
        contradiction = floor > 1e-12 and ceiling < floor - 1e-12

    return IntegralReport(
        values=tuple(values),
        masses=tuple(masses),
        declared_bound=declared,
        bound_respected=tuple(bound_respected),
        bound_violations=tuple(bound_violations),
        contradiction_flag=contradiction,
    )


@dataclass(frozen=True)
class InvertibleMap:
    """A bijection with a computable inverse, verified per use."""

    apply: Callable[[ElementId], ElementId]
    inverse: Callable[[ElementId], ElementId]
    label: str = "f"


def order_preserving_onto_naturals(
    atoms_contains: Callable[[int], bool], label: str = "order-bijection"
) -> InvertibleMap:
    """Order bijection from the non-atom naturals onto all naturals.

    ``inverse(n)`` is the n-th natural (0-based) outside the atom family;
    ``apply`` counts non-atoms below its argument.
    """
    cache: list[int] = []

    def inverse(n: ElementId) -> int:
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise NotInvertible(f"{n!r} is not a natural number")
        candidate = cache[-1] + 1 if cache else 0
        while len(cache) <= n:
            if not atoms_contains(candidate):
                cache.append(candidate)
            candidate += 1
        return cache[n]

    def apply(x: ElementId) -> int:
        if isinstance(x, bool) or not isinstance(x, int) or x < 0 or atoms_contains(x):
            raise NotInvertible(f"{x!r} is not in the non-atom domain")
        return sum(1 for y in range(x) if not atoms_contains(y))

    return InvertibleMap(apply=apply, inverse=inverse, label=label)


@dataclass(frozen=True)
class AtomFamily:
    """Pairwise-disjoint positive-mass sets, one per stage index."""

    per_stage: Callable[[int], frozenset]
    contains: Callable[[ElementId], bool] | None = None
    label: str = "atoms"

    @classmethod
    def from_list(cls, sets: Sequence[Iterable[ElementId]], label: str = "atoms") -> "AtomFamily":
        frozen = [frozenset(s) for s in sets]
        union = frozenset().union(*frozen) if frozen else frozenset()

        def per_stage(k: int) -> frozenset:
            return frozen[k - 1] if k <= len(frozen) else frozenset()

        return cls(per_stage=per_stage, contains=union.__contains__, label=label)

    @classmethod
    def arithmetic(cls, start: int, step: int, label: str | None = None) -> "AtomFamily":
        """Singleton atoms {start + (k-1)*step} for stage k."""
        if step <= 0:
            raise ValueError("step must be positive")

        def per_stage(k: int) -> frozenset:
            return frozenset({start + (k - 1) * step})

        def contains(x: ElementId) -> bool:
            return (
                isinstance(x, int)
                and not isinstance(x, bool)
                and x >= start
                and (x - start) % step == 0
            )

        return cls(
            per_stage=per_stage,
            contains=contains,
            label=label or f"atoms({start}+{step}k)",
        )


def atom_augmented_evolution(
    base: Evolution,
    atoms: AtomFamily,
    f: InvertibleMap,
    mu: DiscreteMeasure | None = None,
    ground: Ground | None = None,
) -> Evolution:
    """Stage k is the f-preimage of the base stage plus the k-th atom set.

    The atoms guarantee positive stage mass; the f-preimage part keeps the
    four conditions because f is a bijection between the non-atom part and
    the base ground.  Disjointness of the atoms, positivity of their mass,
    and invertibility of f are verified lazily for every stage queried.
    """
    seen_atoms: dict[ElementId, int] = {}
    checked_upto = [0]

    def check_atoms_through(k: int) -> None:
        while checked_upto[0] < k:
            idx = checked_upto[0] + 1
            atom_set = atoms.per_stage(idx)
            for x in sort_elements(atom_set):
                if x in seen_atoms:
                    raise AtomsOverlap((x, seen_atoms[x], idx))
                seen_atoms[x] = idx
            if mu is not None and atom_set:
                if sum(mu.weight(x) for x in sort_elements(atom_set)) <= 0.0:
                    raise ZeroWeightAtom(idx)
            if mu is not None and not atom_set:
                raise ZeroWeightAtom(idx)
            checked_upto[0] = idx

    def generate(k: int) -> frozenset:
        check_atoms_through(k)
        pulled = []
        for e in sort_elements(base.stage(k)):
            y = f.inverse(e)
            if f.apply(y) != e:
                raise NotInvertible(
                    f"inverse({e!r}) = {y!r} but apply({y!r}) = {f.apply(y)!r}"
                )
            if atoms.contains is not None and atoms.contains(y):
                raise NotInvertible(
                    f"inverse({e!r}) = {y!r} lands inside the atom family"
                )
            pulled.append(y)
        return frozenset(pulled) | atoms.per_stage(k)

    return Evolution(
        generate,
        ground or naturals_ground_for(base),
        label=f"{base.label}+{atoms.label}",
    )


def naturals_ground_for(base: Evolution) -> Ground:
    """Default augmented ground: the naturals (covers preimages and atoms)."""
    return Ground.countable(lambda: itertools.count(0), label="naturals>=0")
