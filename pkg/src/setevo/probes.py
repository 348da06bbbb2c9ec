"""Symbolic stage constructors driven by scalar probes.

A probe is a surjection from an ambient space onto ℝ or [0, ∞) packaged
with a witness sampler: for any target value t the sampler returns an
ambient point whose probe value is t.  Pulling a real evolution back
through a probe yields a symbolic evolution -- a membership oracle plus a
per-stage witness -- whose axiom verdicts delegate to the base evolution,
since preimages preserve intersections and differences.

Witness samplers prefer the left endpoint of the first stage part and fall
back to an interior point when floating-point inversion of the probe would
slip out of the half-open part; the returned witness is always re-verified
by exact interval membership.

The span construction is the discrete analogue: stages of an integer-set
evolution select which basis indices are switched on, and a nonzero
finitely supported vector belongs to stage k iff its support is covered.
The zero vector is excluded from the ground outright (it would live in
every span and never disappear).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .core import Evolution, EvolutionError, check_axioms
from .intervals import IntervalSet, RealEvolution, check_real_axioms

RANGE_REAL = "real"
RANGE_NONNEGATIVE = "nonnegative"


class RangeMismatch(EvolutionError):
    """Base stage leaves the declared range of the probe."""


class ZeroVectorRejected(EvolutionError):
    """Support vectors must have nonempty support with nonzero coefficients."""


class WitnessUnsound(EvolutionError):
    """Probe inversion failed to land inside the target stage."""


@dataclass(frozen=True)
class ScalarProbe:
    """A scalar-valued surjection with an exact witness sampler."""

    label: str
    value: Callable[[object], float]
    sample: Callable[[float], object]
    range: str = RANGE_REAL


def _as_vector(point: object) -> np.ndarray:
    return np.asarray(point, dtype=float)


def distance_to_point(center: Sequence[float]) -> ScalarProbe:
    """Euclidean distance to a fixed point; sampler walks the first axis.

    Sampled values are bit-exact when the center's first coordinate is zero
    (sqrt of a correctly rounded square recovers its argument); for other
    centers the walk coordinate may round by an ulp, which the stage
    witness machinery absorbs by re-verifying membership.
    """
    c = tuple(float(v) for v in center)

    def value(point: object) -> float:
        diff = _as_vector(point) - np.asarray(c)
        return float(math.sqrt(float(np.dot(diff, diff))))

    def sample(t: float) -> tuple[float, ...]:
        if t < 0:
            raise ValueError("distances are nonnegative")
        out = list(c)
        out[0] = c[0] + t
        return tuple(out)

    return ScalarProbe(
        label=f"d(·, {c})", value=value, sample=sample, range=RANGE_NONNEGATIVE
    )


def distance_to_set(
    distance: Callable[[object], float],
    sampler: Callable[[float], object],
    label: str = "d(·, E0)",
) -> ScalarProbe:
    """Distance to a caller-described set.

    The caller declares surjectivity onto [0, ∞) by supplying the sampler;
    the library spot-checks witnesses rather than proving the declaration.
    """
    return ScalarProbe(
        label=label, value=distance, sample=sampler, range=RANGE_NONNEGATIVE
    )


def hyperplane_distance(dim: int, axis: int = 0, level: float = 0.0) -> ScalarProbe:
    """Distance to the coordinate hyperplane {x : x[axis] = level}."""
    if not 0 <= axis < dim:
        raise ValueError("axis out of range")

    def value(point: object) -> float:
        return abs(float(_as_vector(point)[axis]) - level)

    def sample(t: float) -> tuple[float, ...]:
        if t < 0:
            raise ValueError("distances are nonnegative")
        out = [0.0] * dim
        out[axis] = level + t
        return tuple(out)

    return distance_to_set(value, sample, label=f"d(·, x[{axis}]={level})")


def linear_functional(coeffs: Sequence[float]) -> ScalarProbe:
    """A nonzero linear functional on ℝⁿ; always surjective onto ℝ."""
    a = tuple(float(v) for v in coeffs)
    pivots = [i for i, v in enumerate(a) if v != 0.0]
    if not pivots:
        raise ValueError("linear functional must be nonzero")
    pivot = pivots[0]

    def value(point: object) -> float:
        return float(np.dot(_as_vector(point), np.asarray(a)))

    def sample(t: float) -> tuple[float, ...]:
        out = [0.0] * len(a)
        out[pivot] = t / a[pivot]
        return tuple(out)

    return ScalarProbe(label=f"⟨·, {a}⟩ functional", value=value, sample=sample)


def inner_product_with(anchor: Sequence[float]) -> ScalarProbe:
    """The functional ⟨·, e0⟩ for a fixed nonzero anchor vector."""
    probe = linear_functional(anchor)
    return ScalarProbe(
        label=f"⟨·, {tuple(float(v) for v in anchor)}⟩",
        value=probe.value,
        sample=probe.sample,
    )


def determinant_probe(n: int) -> ScalarProbe:
    """Determinant on n×n matrices; witnesses are diagonal by construction.

    Triangular matrices are evaluated as the exact product of their
    diagonal; everything else goes through LAPACK.
    """
    if n < 1:
        raise ValueError("matrix dimension must be positive")

    def value(matrix: object) -> float:
        m = np.asarray(matrix, dtype=float)
        if m.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix")
        if np.array_equal(m, np.triu(m)) or np.array_equal(m, np.tril(m)):
            prod = 1.0
            for i in range(n):
                prod *= float(m[i, i])
            return prod
        return float(np.linalg.det(m))

    def sample(t: float) -> tuple[tuple[float, ...], ...]:
        m = np.eye(n)
        m[n - 1, n - 1] = t
        return tuple(tuple(float(v) for v in row) for row in m)

    return ScalarProbe(label=f"det({n}x{n})", value=value, sample=sample)


class ScalarPullbackEvolution:
    """Membership oracle for stages {e : probe(e) ∈ base stage k}."""

    def __init__(self, probe: ScalarProbe, base: RealEvolution):
        self.probe = probe
        self.base = base
        self.label = f"{probe.label} ∈ {base.label}"

    def _checked_stage(self, k: int) -> IntervalSet:
        stage = self.base.stage(k)
        if self.probe.range == RANGE_NONNEGATIVE and stage.parts:
            lo = stage.parts[0][0]
            if lo < 0:
                raise RangeMismatch(
                    f"stage {k} of {self.base.label!r} reaches {lo!r} but probe "
                    f"{self.probe.label!r} only takes nonnegative values"
                )
        return stage

    def membership(self, point: object, k: int) -> bool:
        return self._checked_stage(k).contains(self.probe.value(point))

    def witness(self, k: int) -> object | None:
        """An ambient point in stage k, or None when the base stage is empty."""
        stage = self._checked_stage(k)
        if stage.is_empty:
            return None
        lo, hi = stage.parts[0]
        for t in (lo, lo + (hi - lo) / 2):
            point = self.probe.sample(t)
            if stage.contains(self.probe.value(point)):
                return point
        raise WitnessUnsound(
            f"could not invert probe {self.probe.label!r} into stage {k}"
        )

    def occurrence_stages(self, point: object, horizon: int) -> list[int]:
        return [k for k in range(1, horizon + 1) if self.membership(point, k)]

    def axiom_report(self, horizon: int):
        """Delegated verdicts: the base report plus the surjectivity note."""
        report = check_real_axioms(self.base, horizon)
        note = (
            f"verdicts delegated to base {self.base.label!r}: preimages under "
            f"the declared-surjective probe {self.probe.label!r} preserve "
            f"intersections and differences"
        )
        return report, note


def scalar_pullback_evolution(
    probe: ScalarProbe, base: RealEvolution
) -> ScalarPullbackEvolution:
    return ScalarPullbackEvolution(probe, base)


@dataclass(frozen=True)
class SupportVector:
    """Finitely supported coordinate vector with all coefficients nonzero."""

    coords: tuple[tuple[int, float], ...]

    @classmethod
    def of(cls, coords: Mapping[int, float] | Iterable[tuple[int, float]]) -> "SupportVector":
        items = dict(coords)
        cleaned = tuple(
            (int(i), float(c)) for i, c in sorted(items.items()) if float(c) != 0.0
        )
        if not cleaned:
            raise ZeroVectorRejected(
                "the zero vector lies in every span and never disappears"
            )
        return cls(cleaned)

    @classmethod
    def basis(cls, index: int) -> "SupportVector":
        return cls.of({index: 1.0})

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.coords)


class SpanEvolution:
    """Stages are the spans of basis vectors selected by an index evolution."""

    def __init__(self, index_evo: Evolution):
        self.index_evo = index_evo
        self.label = f"span({index_evo.label})"

    def membership(self, vector: SupportVector, k: int) -> bool:
        return vector.support <= self.index_evo.stage(k)

    def witness(self, k: int) -> SupportVector | None:
        stage = self.index_evo.stage(k)
        if not stage:
            return None
        return SupportVector.basis(min(stage))

    def occurrence_stages(self, vector: SupportVector, horizon: int) -> list[int]:
        return [k for k in range(1, horizon + 1) if self.membership(vector, k)]

    def axiom_report(self, horizon: int):
        """Index-evolution verdicts plus the zero-vector exclusion note."""
        report = check_axioms(self.index_evo, horizon)
        note = (
            "verdicts delegated to the index evolution; the ground set is the "
            "union of the spans minus the zero vector, which is excluded so "
            "that every vector eventually disappears"
        )
        return report, note


def span_evolution(index_evo: Evolution) -> SpanEvolution:
    return SpanEvolution(index_evo)
