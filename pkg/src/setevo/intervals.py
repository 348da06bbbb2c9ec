"""Exact algebra of finite unions of half-open real intervals.

Interval sets are kept canonical: parts are sorted, pairwise disjoint,
non-adjacent, and each part [a, b) has a < b.  All set operations compare
binary64 endpoints exactly -- there is no epsilon anywhere.  Closed shells
[n, n+1] are encoded as [n, nextafter(n+1)), which is bit-exact and keeps
the algebra closed.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable, Iterable

from .core import (
    FAIL,
    PASS,
    UNKNOWN,
    AxiomReport,
    EvolutionError,
    Evolution,
    Violation,
)


class EmptySetError(EvolutionError):
    """Sampling from an empty interval set."""


class BadWindow(EvolutionError):
    """Sliding-window parameters must satisfy 0 < step < width."""


@dataclass(frozen=True)
class IntervalSet:
    """Canonical finite union of half-open intervals [a, b)."""

    parts: tuple[tuple[float, float], ...] = ()

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def of(cls, *pairs: tuple[float, float]) -> "IntervalSet":
        return cls.from_pairs(pairs)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> "IntervalSet":
        cleaned = []
        for a, b in pairs:
            a, b = float(a), float(b)
            if math.isnan(a) or math.isnan(b):
                raise ValueError("interval endpoints must not be NaN")
            if a > b:
                raise ValueError(f"interval [{a}, {b}) has negative length")
            if a < b:
                cleaned.append((a, b))
        cleaned.sort()
        merged: list[tuple[float, float]] = []
        for a, b in cleaned:
            if merged and a <= merged[-1][1]:
                if b > merged[-1][1]:
                    merged[-1] = (merged[-1][0], b)
            else:
                merged.append((a, b))
        return cls(tuple(merged))

    @classmethod
    def closed_shell(cls, n: float, m: float | None = None) -> "IntervalSet":
        """The closed interval [n, m] (default m = n + 1) as a canonical set."""
        m = n + 1 if m is None else m
        return cls.from_pairs([(float(n), math.nextafter(float(m), math.inf))])

    @property
    def is_empty(self) -> bool:
        return not self.parts

    def measure(self) -> float:
        return sum((b - a for a, b in self.parts), 0.0)

    def contains(self, x: float) -> bool:
        for a, b in self.parts:
            if a <= x < b:
                return True
            if x < a:
                return False
        return False

    def sample_point(self) -> float:
        """Left endpoint of the first part."""
        if not self.parts:
            raise EmptySetError("cannot sample from an empty interval set")
        return self.parts[0][0]

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet.from_pairs(self.parts + other.parts)

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        i = j = 0
        p, q = self.parts, other.parts
        while i < len(p) and j < len(q):
            lo = max(p[i][0], q[j][0])
            hi = min(p[i][1], q[j][1])
            if lo < hi:
                out.append((lo, hi))
            if p[i][1] <= q[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(tuple(out))

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        j = 0
        q = other.parts
        for a, b in self.parts:
            cur = a
            while j < len(q) and q[j][1] <= cur:
                j += 1
            jj = j
            while jj < len(q) and q[jj][0] < b:
                lo, hi = q[jj]
                if lo > cur:
                    out.append((cur, lo))
                cur = max(cur, hi)
                if cur >= b:
                    break
                jj += 1
            if cur < b:
                out.append((cur, b))
        return IntervalSet(tuple(out))

    def subset_of(self, other: "IntervalSet") -> bool:
        return self.difference(other).is_empty

    def __bool__(self) -> bool:
        return not self.is_empty

    def __repr__(self) -> str:
        if not self.parts:
            return "IntervalSet(∅)"
        body = " ∪ ".join(f"[{a!r}, {b!r})" for a, b in self.parts)
        return f"IntervalSet({body})"


class RealEvolution:
    """Memoized stage sequence whose stages are canonical interval sets."""

    def __init__(
        self,
        generator: Callable[[int], IntervalSet],
        label: str = "real-evolution",
        carrier: IntervalSet | None = None,
    ):
        self._generator = generator
        self.label = label
        self.carrier = carrier
        self._memo: list[IntervalSet] = []
        self._lock = threading.Lock()

    def stage(self, k: int) -> IntervalSet:
        if k < 1:
            raise ValueError("stage indices start at 1")
        memo = self._memo
        if k <= len(memo):
            return memo[k - 1]
        with self._lock:
            while len(self._memo) < k:
                nxt = self._generator(len(self._memo) + 1)
                if not isinstance(nxt, IntervalSet):
                    nxt = IntervalSet.from_pairs(nxt)
                self._memo.append(nxt)
        return self._memo[k - 1]

    def stages(self, horizon: int) -> list[IntervalSet]:
        return [self.stage(k) for k in range(1, horizon + 1)]

    def __repr__(self) -> str:
        return f"RealEvolution({self.label!r})"


def sliding_window_evolution(width: float, step: float) -> RealEvolution:
    """Stage k is the window [(k-1)*step, (k-1)*step + width).

    Consecutive windows overlap by width - step > 0 and every point lies in
    finitely many windows, so all four conditions hold on [0, ∞).
    """
    width, step = float(width), float(step)
    if not (0 < step < width):
        raise BadWindow(f"need 0 < step < width, got step={step}, width={width}")
    return RealEvolution(
        lambda k: IntervalSet.of(((k - 1) * step, (k - 1) * step + width)),
        label=f"window(w={width},s={step})",
    )


def shell_evolution(index_evo: Evolution) -> RealEvolution:
    """Unit shells [n, n+1] selected by an integer-set evolution.

    Stage k is the union of closed shells for each natural n in stage k of
    ``index_evo``; the closed right end is stored via nextafter.
    """

    def generate(k: int) -> IntervalSet:
        shells = []
        for n in index_evo.stage(k):
            if not isinstance(n, int) or isinstance(n, bool) or n < 0:
                raise ValueError(f"shell index {n!r} is not a natural number")
            shells.append((float(n), math.nextafter(float(n + 1), math.inf)))
        return IntervalSet.from_pairs(shells)

    return RealEvolution(generate, label=f"shells({index_evo.label})")


def check_real_axioms(
    revo: RealEvolution, horizon: int, carrier: IntervalSet | None = None
) -> AxiomReport:
    """Exact four-condition check for interval-set stages.

    Conditions 1-3 are decided exactly by interval algebra; the occupancy
    condition uses the identity "a point violates contiguity iff it is
    absent at some stage but present both earlier and later", checked with
    prefix and suffix unions.  The mortality condition is region-based:
    points absent at the horizon with contiguity verified count as closed,
    the final stage itself is horizon-limited.
    """
    if horizon < 3:
        raise ValueError("horizon must be at least 3")
    stages = revo.stages(horizon)
    violations: list[Violation] = []

    for i in range(horizon - 1):
        if stages[i].is_empty and not stages[i + 1].is_empty:
            violations.append(
                Violation(
                    condition=1,
                    location=i + 1,
                    detail=f"stage {i + 1} is empty but stage {i + 2} = {stages[i + 1]!r}",
                )
            )

    for n in range(horizon - 1):
        a, b = stages[n], stages[n + 1]
        if a.is_empty or b.is_empty:
            continue
        for name, part in (
            (f"F_{n + 1} ∩ F_{n + 2}", a.intersection(b)),
            (f"F_{n + 1} ∖ F_{n + 2}", a.difference(b)),
            (f"F_{n + 2} ∖ F_{n + 1}", b.difference(a)),
        ):
            if part.is_empty:
                violations.append(
                    Violation(condition=2, location=n + 1, detail=f"{name} = ∅")
                )

    prefix: list[IntervalSet] = [IntervalSet.empty()]
    for s in stages:
        prefix.append(prefix[-1].union(s))
    suffix: list[IntervalSet] = [IntervalSet.empty()] * (horizon + 2)
    for i in range(horizon, 0, -1):
        suffix[i] = suffix[i + 1].union(stages[i - 1])
    for i in range(2, horizon):
        gap = prefix[i - 1].intersection(suffix[i + 1]).difference(stages[i - 1])
        if not gap.is_empty:
            t = gap.sample_point()
            violations.append(
                Violation(
                    condition=3,
                    location=i,
                    detail=(
                        f"points near {t!r} are absent at stage {i} but present "
                        f"both before and after"
                    ),
                    witness=(t,),
                )
            )

    seen = prefix[horizon]
    closed_region = seen.difference(stages[horizon - 1])
    notes = [
        f"closed region measure {closed_region.measure()!r}, "
        f"open region measure {stages[horizon - 1].measure()!r}"
    ]
    unseen_sample: tuple = ()
    if carrier is not None:
        uncovered = carrier.difference(seen)
        coverage = PASS if uncovered.is_empty else UNKNOWN
        if not uncovered.is_empty:
            unseen_sample = (uncovered.sample_point(),)
    else:
        coverage = UNKNOWN
        notes.append("no carrier declared: coverage is horizon-limited")

    def condition_verdict(n: int) -> str:
        return FAIL if any(v.condition == n for v in violations) else PASS

    verdicts = {1: condition_verdict(1), 2: condition_verdict(2), 3: condition_verdict(3)}
    if (
        coverage == PASS
        and stages[horizon - 1].is_empty
        and verdicts[3] == PASS
    ):
        verdicts[4] = PASS
    else:
        verdicts[4] = UNKNOWN

    return AxiomReport(
        horizon=horizon,
        verdicts=verdicts,
        violations=tuple(violations),
        element_verdicts={},
        coverage=coverage,
        unseen_sample=unseen_sample,
        notes=tuple(notes),
    )
