"""Core machinery for evolutions on discrete ground sets.

An *evolution* is a sequence of finite subsets (stages) E_1, E_2, ... of a
ground set, subject to four structural conditions:

1. empty persistence -- an empty stage is followed only by empty stages;
2. churn -- between consecutive nonempty stages something survives,
   something leaves, and something arrives;
3. interval occupancy -- each element occupies a contiguous run of stages;
4. mortality -- every ground element eventually appears and eventually
   disappears for good.

Conditions are verified over a finite horizon, so verdicts are three-valued:
PASS, FAIL (always with a concrete witness), or UNKNOWN for claims a finite
prefix cannot decide.  Stage indices start at 1; a horizon ``H`` means stages
1 through ``H`` inclusive are examined.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Mapping

ElementId = Hashable

PASS = "PASS"
FAIL = "FAIL"
UNKNOWN = "UNKNOWN"

REDUCIBLE = "REDUCIBLE"
NOT_FOUND_WITHIN_BOUNDS = "NOT-FOUND-WITHIN-BOUNDS"


class EvolutionError(Exception):
    """Base class for structural errors raised by this package."""


class ChronologyInfeasible(EvolutionError):
    """An element's lifespan is shorter than the minimum of two stages."""

    def __init__(self, element: ElementId, appears: int, vanishes: int):
        self.element = element
        self.appears = appears
        self.vanishes = vanishes
        super().__init__(
            f"element {element!r} has appearance {appears} and disappearance "
            f"{vanishes}; appearance + 2 <= disappearance is required"
        )


class SurjectivityGap(EvolutionError):
    """No enumerated element realizes a required appearance/disappearance."""

    def __init__(self, stage_index: int, missing: str):
        self.stage_index = stage_index
        self.missing = missing
        super().__init__(
            f"stage {stage_index}: no enumerated element realizes {missing}"
        )


class SurjectivityViolated(EvolutionError):
    """A base-ground element has no preimage under the declared map."""

    def __init__(self, element: ElementId):
        self.element = element
        super().__init__(f"element {element!r} has no preimage")


class NotABijection(EvolutionError):
    def __init__(self, reason: str, witness: tuple = ()):
        self.reason = reason
        self.witness = witness
        super().__init__(f"not a bijection: {reason} (witness {witness!r})")


def element_key(x: ElementId) -> tuple:
    """Total order on element ids: numeric values first, then strings."""
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, (int, float)):
        return (0, x)
    return (1, str(x))


def sort_elements(elements: Iterable[ElementId]) -> list:
    return sorted(elements, key=element_key)


def format_elements(elements: Iterable[ElementId], limit: int = 8) -> str:
    """Deterministic, truncated rendering of an element set."""
    items = sort_elements(elements)
    if not items:
        return "{}"
    shown = ", ".join(repr(x) for x in items[:limit])
    if len(items) > limit:
        shown += f", ... ({len(items)} total)"
    return "{" + shown + "}"


@dataclass(frozen=True)
class Ground:
    """Enumerable ground set: a finite tuple or a lazy countable enumeration.

    Countable grounds supply a restartable enumerator; operations that must
    scan the ground document how far they enumerate.
    """

    label: str
    members: tuple | None = None
    enumerator: Callable[[], Iterator] | None = None

    @classmethod
    def finite(cls, elements: Iterable[ElementId], label: str = "finite") -> "Ground":
        return cls(label=label, members=tuple(sort_elements(set(elements))))

    @classmethod
    def countable(cls, enumerator: Callable[[], Iterator], label: str) -> "Ground":
        return cls(label=label, enumerator=enumerator)

    @property
    def is_finite(self) -> bool:
        return self.members is not None

    def member_set(self) -> frozenset:
        if self.members is None:
            raise ValueError(f"ground {self.label!r} is not finite")
        return frozenset(self.members)

    def prefix(self, n: int) -> list:
        """First ``n`` elements in enumeration order."""
        if self.members is not None:
            return list(self.members[:n])
        assert self.enumerator is not None
        return list(itertools.islice(self.enumerator(), n))

    def __iter__(self) -> Iterator:
        if self.members is not None:
            return iter(self.members)
        assert self.enumerator is not None
        return self.enumerator()


def naturals(start: int = 0, label: str | None = None) -> Ground:
    return Ground.countable(
        lambda: itertools.count(start),
        label or f"naturals>={start}",
    )


class Evolution:
    """Deterministic, prefix-memoized stage sequence over a ground set.

    The generator is consulted once per index; materialized stages are
    published under a lock so concurrent readers always see a consistent
    prefix.  Stages are immutable frozensets.
    """

    def __init__(
        self,
        generator: Callable[[int], Iterable[ElementId]],
        ground: Ground,
        label: str = "evolution",
    ):
        self._generator = generator
        self.ground = ground
        self.label = label
        self._memo: list[frozenset] = []
        self._lock = threading.Lock()

    def stage(self, k: int) -> frozenset:
        if k < 1:
            raise ValueError("stage indices start at 1")
        memo = self._memo
        if k <= len(memo):
            return memo[k - 1]
        with self._lock:
            while len(self._memo) < k:
                nxt = frozenset(self._generator(len(self._memo) + 1))
                self._memo.append(nxt)
        return self._memo[k - 1]

    def stages(self, horizon: int) -> list[frozenset]:
        return [self.stage(k) for k in range(1, horizon + 1)]

    def __repr__(self) -> str:
        return f"Evolution({self.label!r} on {self.ground.label!r})"


def example_square() -> Evolution:
    """The stock square-window evolution on the positive integers.

    Stage n is the integer range {n, ..., (n+1)^2}.
    """
    return Evolution(
        lambda n: range(n, (n + 1) ** 2 + 1),
        naturals(1),
        label="square-window",
    )


@dataclass(frozen=True)
class Violation:
    """One concrete axiom failure: which condition, where, and a witness."""

    condition: int
    location: object
    detail: str
    witness: tuple = ()

    def render(self) -> str:
        return f"condition {self.condition} FAIL at {self.location!r}: {self.detail}"


@dataclass(frozen=True)
class AxiomReport:
    """Three-valued verdicts for the four conditions over a checked prefix."""

    horizon: int
    verdicts: Mapping[int, str]
    violations: tuple[Violation, ...]
    element_verdicts: Mapping[ElementId, str]
    coverage: str
    unseen_sample: tuple
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return all(v != FAIL for v in self.verdicts.values())

    def condition(self, n: int) -> str:
        return self.verdicts[n]

    def violations_for(self, n: int) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.condition == n)

    def lines(self) -> list[str]:
        out = []
        for n in (1, 2, 3, 4):
            out.append(f"condition {n}: {self.verdicts[n]}")
        for v in self.violations:
            out.append("  " + v.render())
        passed = sum(1 for s in self.element_verdicts.values() if s == PASS)
        unknown = len(self.element_verdicts) - passed
        out.append(
            f"condition 4 elements: {passed} closed (PASS), {unknown} open (UNKNOWN)"
        )
        out.append(f"ground coverage: {self.coverage}")
        if self.unseen_sample:
            out.append(f"  unseen sample: {format_elements(self.unseen_sample)}")
        for note in self.notes:
            out.append(f"note: {note}")
        return out


def check_stage_list(
    stages: list[frozenset],
    ground: Ground | None = None,
    coverage_sample: int = 64,
) -> AxiomReport:
    """Check the four conditions on an explicit stage prefix.

    ``stages[i]`` is stage ``i+1``.  With ``ground=None`` the union of the
    stages plays the role of the ground set (used for subsequence checks).
    """
    horizon = len(stages)
    violations: list[Violation] = []

    # condition 1: empty persistence
    for i in range(horizon - 1):
        if not stages[i] and stages[i + 1]:
            violations.append(
                Violation(
                    condition=1,
                    location=i + 1,
                    detail=(
                        f"stage {i + 1} is empty but stage {i + 2} = "
                        f"{format_elements(stages[i + 1])}"
                    ),
                    witness=tuple(sort_elements(stages[i + 1])[:8]),
                )
            )

    # condition 2: churn between consecutive nonempty stages
    for n in range(horizon - 1):
        a, b = stages[n], stages[n + 1]
        if not a or not b:
            continue
        checks = (
            ("intersection", a & b, f"E_{n + 1} ∩ E_{n + 2} = ∅"),
            ("departure", a - b, f"E_{n + 1} ∖ E_{n + 2} = ∅"),
            ("arrival", b - a, f"E_{n + 2} ∖ E_{n + 1} = ∅"),
        )
        for _, subset, empty_msg in checks:
            if not subset:
                violations.append(
                    Violation(
                        condition=2,
                        location=n + 1,
                        detail=(
                            f"{empty_msg} with E_{n + 1} = {format_elements(a)}, "
                            f"E_{n + 2} = {format_elements(b)}"
                        ),
                    )
                )

    # occurrence index lists per element (1-based stage indices)
    occurrences: dict[ElementId, list[int]] = {}
    for i, s in enumerate(stages):
        for x in s:
            occurrences.setdefault(x, []).append(i + 1)

    # condition 3: contiguous occupancy
    contiguous: dict[ElementId, bool] = {}
    for x in sort_elements(occurrences):
        occ = occurrences[x]
        ok = occ[-1] - occ[0] + 1 == len(occ)
        contiguous[x] = ok
        if not ok:
            violations.append(
                Violation(
                    condition=3,
                    location=x,
                    detail=f"occurrence stages {tuple(occ[:12])} are not contiguous",
                    witness=tuple(occ[:12]),
                )
            )

    # condition 4 per element: closed interval observed => permanent exit
    element_verdicts: dict[ElementId, str] = {}
    for x in sort_elements(occurrences):
        occ = occurrences[x]
        if contiguous[x] and occ[-1] < horizon:
            element_verdicts[x] = PASS
        else:
            element_verdicts[x] = UNKNOWN

    # condition 4 coverage: does every ground element appear?
    seen = set(occurrences)
    unseen_sample: tuple = ()
    notes: list[str] = []
    if ground is None:
        coverage = PASS  # ground is the union of stages by construction
        notes.append("coverage relative to the union of the checked stages")
    elif ground.is_finite:
        unseen = [x for x in ground.members or () if x not in seen]
        if unseen:
            coverage = UNKNOWN
            unseen_sample = tuple(unseen[:coverage_sample])
        else:
            coverage = PASS
    else:
        coverage = UNKNOWN
        sampled = ground.prefix(coverage_sample)
        unseen_sample = tuple(x for x in sampled if x not in seen)
        notes.append(
            f"countable ground {ground.label!r}: coverage is horizon-limited"
        )

    def condition_verdict(n: int) -> str:
        if any(v.condition == n for v in violations):
            return FAIL
        return PASS

    verdicts = {
        1: condition_verdict(1),
        2: condition_verdict(2),
        3: condition_verdict(3),
    }
    if any(s == UNKNOWN for s in element_verdicts.values()) or coverage != PASS:
        verdicts[4] = UNKNOWN
    else:
        verdicts[4] = PASS

    return AxiomReport(
        horizon=horizon,
        verdicts=verdicts,
        violations=tuple(violations),
        element_verdicts=element_verdicts,
        coverage=coverage,
        unseen_sample=unseen_sample,
        notes=tuple(notes),
    )


def check_axioms(
    evo: Evolution, horizon: int, coverage_sample: int = 64
) -> AxiomReport:
    """Verify the four conditions on stages 1..horizon of ``evo``."""
    if horizon < 3:
        raise ValueError("horizon must be at least 3")
    return check_stage_list(
        evo.stages(horizon), ground=evo.ground, coverage_sample=coverage_sample
    )


@dataclass(frozen=True)
class ChronologyReading:
    """Observed appearance/disappearance indices extracted from a prefix.

    ``appears[x]`` is the first stage containing ``x`` and ``vanishes[x]``
    is one past the last.  Elements whose occupancy is still open at the
    horizon, or fails contiguity, land in ``undetermined`` with a reason.
    """

    appears: dict[ElementId, int]
    vanishes: dict[ElementId, int]
    undetermined: dict[ElementId, str]

    def lifespan(self, x: ElementId) -> int:
        return self.vanishes[x] - self.appears[x]


def chronology_of(evo: Evolution, horizon: int) -> ChronologyReading:
    """Read off appearance/disappearance for elements closed by ``horizon``."""
    stages = evo.stages(horizon)
    occurrences: dict[ElementId, list[int]] = {}
    for i, s in enumerate(stages):
        for x in s:
            occurrences.setdefault(x, []).append(i + 1)
    appears: dict[ElementId, int] = {}
    vanishes: dict[ElementId, int] = {}
    undetermined: dict[ElementId, str] = {}
    for x in sort_elements(occurrences):
        occ = occurrences[x]
        if occ[-1] - occ[0] + 1 != len(occ):
            undetermined[x] = "occurrence stages are not contiguous"
        elif occ[-1] == horizon:
            undetermined[x] = "still present at the horizon"
        else:
            appears[x] = occ[0]
            vanishes[x] = occ[-1] + 1
    return ChronologyReading(appears, vanishes, undetermined)


@dataclass(frozen=True)
class Chronology:
    """Appearance/disappearance rule pair used to generate an evolution.

    Appearance values range over the nonnegative integers and disappearance
    over integers >= 2, with ``appearance(x) + 2 <= disappearance(x)``.
    Stage membership only depends on ``max(appearance(x), 1)`` because stage
    indices start at 1.
    """

    appearance: Callable[[ElementId], int]
    disappearance: Callable[[ElementId], int]
    label: str = "chronology"

    @classmethod
    def from_table(
        cls,
        appears: Mapping[ElementId, int],
        vanishes: Mapping[ElementId, int],
        label: str = "chronology-table",
    ) -> "Chronology":
        a = dict(appears)
        d = dict(vanishes)
        if set(a) != set(d):
            raise ValueError("appearance and disappearance tables disagree on keys")
        return cls(a.__getitem__, d.__getitem__, label=label)

    @classmethod
    def from_rules(
        cls,
        appearance: Callable[[ElementId], int],
        disappearance: Callable[[ElementId], int],
        label: str = "chronology-rule",
    ) -> "Chronology":
        return cls(appearance, disappearance, label=label)


def from_chronology(
    chron: Chronology, ground: Ground, scan_window: int = 128
) -> Evolution:
    """Build the evolution whose stage k is {x : A(x) <= k < D(x)}.

    Feasibility (lifespan >= 2) and the appearance/disappearance coverage a
    valid stage sequence needs are verified lazily for every stage actually
    queried.  On countable grounds the membership scan stops once
    ``scan_window`` consecutive enumerated elements appear later than the
    queried stage; this is exact whenever the enumeration order is
    eventually appearance-monotone with disorder shorter than the window.
    """

    def generate(k: int) -> list[ElementId]:
        hits: list[ElementId] = []
        appearance_hit = False
        death_hit = False
        misses = 0
        for x in ground:
            a = chron.appearance(x)
            d = chron.disappearance(x)
            if d < a + 2:
                raise ChronologyInfeasible(x, a, d)
            if a <= k < d:
                hits.append(x)
                appearance_hit = appearance_hit or a == k
                death_hit = death_hit or d == k + 1
                misses = 0
            elif not ground.is_finite:
                if a > k:
                    misses += 1
                    if misses >= scan_window:
                        break
                else:
                    misses = 0
        if not appearance_hit:
            raise SurjectivityGap(k, f"appearance {k}")
        if not death_hit:
            raise SurjectivityGap(k, f"disappearance {k + 1}")
        return hits

    return Evolution(generate, ground, label=chron.label)


@dataclass(frozen=True)
class MapDescriptor:
    """A total map f from one ground into another, with optional exact fibers.

    ``preimage(e)`` must return every domain element mapping to ``e``; when
    absent the (finite) domain is scanned instead.
    """

    apply: Callable[[ElementId], ElementId]
    domain: Ground
    preimage: Callable[[ElementId], Iterable[ElementId]] | None = None
    label: str = "f"

    @classmethod
    def from_table(
        cls, mapping: Mapping[ElementId, ElementId], label: str = "f"
    ) -> "MapDescriptor":
        fibers: dict[ElementId, list[ElementId]] = {}
        for y in sort_elements(mapping):
            fibers.setdefault(mapping[y], []).append(y)
        return cls(
            apply=dict(mapping).__getitem__,
            domain=Ground.finite(mapping.keys(), label=f"dom({label})"),
            preimage=lambda e: fibers.get(e, ()),
            label=label,
        )


def pullback(f: MapDescriptor, evo: Evolution) -> Evolution:
    """Pull an evolution back along a surjection onto its ground.

    Stage k of the result is the full preimage of stage k.  Preimages
    preserve intersections and differences, so the new evolution keeps the
    base verdicts, and each point inherits the chronology of its image.
    Raises :class:`SurjectivityViolated` when a base element has no
    preimage (checked eagerly on finite base grounds, lazily otherwise).
    """
    if evo.ground.is_finite:
        if f.preimage is not None:
            for e in evo.ground.members or ():
                if not list(f.preimage(e)):
                    raise SurjectivityViolated(e)
        elif f.domain.is_finite:
            image = {f.apply(y) for y in f.domain.members or ()}
            for e in evo.ground.members or ():
                if e not in image:
                    raise SurjectivityViolated(e)

    def generate(k: int) -> list[ElementId]:
        base = evo.stage(k)
        if f.preimage is not None:
            out: list[ElementId] = []
            for e in sort_elements(base):
                fiber = list(f.preimage(e))
                if not fiber:
                    raise SurjectivityViolated(e)
                out.extend(fiber)
            return out
        if not f.domain.is_finite:
            raise ValueError(
                "pullback on a countable domain requires explicit preimages"
            )
        return [y for y in f.domain.members or () if f.apply(y) in base]

    return Evolution(generate, f.domain, label=f"{f.label}^-1({evo.label})")


@dataclass(frozen=True)
class Bijection:
    """A bijection descriptor between two grounds, applied elementwise."""

    forward: Callable[[ElementId], ElementId]
    label: str = "bijection"

    @classmethod
    def identity(cls) -> "Bijection":
        return cls(lambda x: x, label="identity")

    @classmethod
    def from_table(cls, mapping: Mapping[ElementId, ElementId], label: str = "bijection") -> "Bijection":
        table = dict(mapping)
        seen: dict[ElementId, ElementId] = {}
        for x in sort_elements(table):
            y = table[x]
            if y in seen:
                raise NotABijection("two elements share an image", (seen[y], x, y))
            seen[y] = x
        return cls(table.__getitem__, label=label)


@dataclass(frozen=True)
class IsoReport:
    verdict: str
    first_mismatch: int | None = None
    missing: tuple = ()  # expected in the image but absent from evoF's stage
    extra: tuple = ()  # present in evoF's stage but not in the image

    @property
    def ok(self) -> bool:
        return self.verdict == PASS


def is_isoevolved(
    evo_e: Evolution, evo_f: Evolution, bij: Bijection, horizon: int
) -> IsoReport:
    """Check whether ``bij`` carries each stage of one evolution onto the other.

    Verifies bijectivity across the grounds first (full check on finite
    grounds, collision check on the stages otherwise) and raises
    :class:`NotABijection` with a witness on failure.
    """
    if evo_e.ground.is_finite:
        image_seen: dict[ElementId, ElementId] = {}
        for x in evo_e.ground.members or ():
            y = bij.forward(x)
            if y in image_seen:
                raise NotABijection("two elements share an image", (image_seen[y], x, y))
            image_seen[y] = x
        if evo_f.ground.is_finite:
            target = set(evo_f.ground.members or ())
            if set(image_seen) != target:
                gap = sort_elements(target - set(image_seen))
                if gap:
                    raise NotABijection("image misses target elements", tuple(gap[:8]))
                spill = sort_elements(set(image_seen) - target)
                raise NotABijection("image leaves the target ground", tuple(spill[:8]))

    seen_images: dict[ElementId, ElementId] = {}
    for k in range(1, horizon + 1):
        stage_e = evo_e.stage(k)
        for x in sort_elements(stage_e):
            y = bij.forward(x)
            prior = seen_images.get(y)
            if prior is not None and prior != x:
                raise NotABijection("two elements share an image", (prior, x, y))
            seen_images[y] = x
        image = frozenset(bij.forward(x) for x in stage_e)
        stage_f = evo_f.stage(k)
        if image != stage_f:
            return IsoReport(
                verdict=FAIL,
                first_mismatch=k,
                missing=tuple(sort_elements(image - stage_f)[:16]),
                extra=tuple(sort_elements(stage_f - image)[:16]),
            )
    return IsoReport(verdict=PASS)


@dataclass(frozen=True)
class ReducibilityResult:
    verdict: str
    indices: tuple[int, ...] | None = None
    stride: int | None = None
    candidates_checked: int = 0
    note: str = "subsequence checked against the union of its own stages"

    @property
    def found(self) -> bool:
        return self.verdict == REDUCIBLE


def _subsequence_passes(stages: list[frozenset]) -> bool:
    if not stages or not stages[0]:
        return False
    report = check_stage_list(stages, ground=None)
    return all(report.verdicts[n] != FAIL for n in (1, 2, 3, 4))


def find_reducing_subsequence(evo: Evolution, horizon: int) -> ReducibilityResult:
    """Bounded search for a proper stage subsequence that is itself an evolution.

    Horizons up to 12 are searched exhaustively over all strictly increasing
    index subsequences of length >= 3; larger horizons search full arithmetic
    progressions with stride 2..horizon//3.  A miss never asserts
    irreducibility, only exhaustion of these bounds.  Candidate stage
    sequences are checked against the union of their own stages.
    """
    if horizon < 6:
        raise ValueError("horizon must be at least 6")
    checked = 0
    if horizon <= 12:
        indices_all = range(1, horizon + 1)
        for size in range(3, horizon):
            for combo in itertools.combinations(indices_all, size):
                checked += 1
                stages = [evo.stage(i) for i in combo]
                if _subsequence_passes(stages):
                    stride = None
                    gaps = {combo[i + 1] - combo[i] for i in range(len(combo) - 1)}
                    if len(gaps) == 1:
                        stride = gaps.pop()
                    return ReducibilityResult(
                        verdict=REDUCIBLE,
                        indices=combo,
                        stride=stride,
                        candidates_checked=checked,
                    )
        return ReducibilityResult(
            verdict=NOT_FOUND_WITHIN_BOUNDS, candidates_checked=checked
        )
    for stride in range(2, horizon // 3 + 1):
        for start in range(1, stride + 1):
            combo = tuple(range(start, horizon + 1, stride))
            if len(combo) < 3:
                continue
            checked += 1
            stages = [evo.stage(i) for i in combo]
            if _subsequence_passes(stages):
                return ReducibilityResult(
                    verdict=REDUCIBLE,
                    indices=combo,
                    stride=stride,
                    candidates_checked=checked,
                )
    return ReducibilityResult(
        verdict=NOT_FOUND_WITHIN_BOUNDS, candidates_checked=checked
    )
