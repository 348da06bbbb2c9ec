"""Closed-form integrand catalog with exact antiderivatives.

Integrands are finite sums of catalog terms: constants, polynomials,
scaled power terms ``scale * (x - shift)**alpha`` with alpha > -1, and
half-open indicator functions.  Every term carries a closed-form
antiderivative, so integrals over interval sets are evaluated exactly
instead of by quadrature, and every reported value is auditable.

The descriptor mini-syntax (used by model files and the command line) is

    const:c
    pow:alpha[,scale][,shift]
    poly:a0,a1,...
    ind:a,b

joined with ``+``.  Numbers are parsed as binary64 verbatim.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import EvolutionError
from .intervals import IntervalSet


class CatalogUnsupported(EvolutionError):
    """Descriptor outside the closed-form catalog."""


@dataclass(frozen=True)
class ConstTerm:
    value: float

    def evaluate(self, x: float) -> float:
        return self.value

    def antiderivative(self, x: float) -> float:
        return self.value * x

    def descriptor(self) -> str:
        return f"const:{self.value!r}"

    def bounded_on(self, lo: float, hi: float) -> bool:
        return True


@dataclass(frozen=True)
class PolyTerm:
    coeffs: tuple[float, ...]

    def evaluate(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def antiderivative(self, x: float) -> float:
        acc = 0.0
        for i in range(len(self.coeffs) - 1, -1, -1):
            acc = acc * x + self.coeffs[i] / (i + 1)
        return acc * x

    def descriptor(self) -> str:
        return "poly:" + ",".join(repr(c) for c in self.coeffs)

    def bounded_on(self, lo: float, hi: float) -> bool:
        return True


@dataclass(frozen=True)
class PowTerm:
    """scale * (x - shift)**alpha with alpha > -1, defined for x > shift."""

    alpha: float
    scale: float = 1.0
    shift: float = 0.0

    def evaluate(self, x: float) -> float:
        base = x - self.shift
        if base < 0:
            raise ValueError(
                f"power term {self.descriptor()} undefined at x={x!r}"
            )
        if base == 0 and self.alpha < 0:
            raise ValueError(
                f"power term {self.descriptor()} has a pole at x={x!r}"
            )
        return self.scale * base**self.alpha

    def antiderivative(self, x: float) -> float:
        base = x - self.shift
        if base < 0:
            raise ValueError(
                f"antiderivative of {self.descriptor()} undefined at x={x!r}"
            )
        exponent = self.alpha + 1.0
        return self.scale * base**exponent / exponent

    def descriptor(self) -> str:
        return f"pow:{self.alpha!r},{self.scale!r},{self.shift!r}"

    def bounded_on(self, lo: float, hi: float) -> bool:
        return self.alpha >= 0 or self.shift < lo


@dataclass(frozen=True)
class IndicatorTerm:
    lo: float
    hi: float

    def evaluate(self, x: float) -> float:
        return 1.0 if self.lo <= x < self.hi else 0.0

    def antiderivative(self, x: float) -> float:
        return min(max(x, self.lo), self.hi) - self.lo

    def descriptor(self) -> str:
        return f"ind:{self.lo!r},{self.hi!r}"

    def bounded_on(self, lo: float, hi: float) -> bool:
        return True


Term = ConstTerm | PolyTerm | PowTerm | IndicatorTerm


@dataclass(frozen=True)
class Integrand:
    """A finite sum of catalog terms, with an optional declared sup bound."""

    terms: tuple[Term, ...]
    declared_bound: float | None = None

    def evaluate(self, x: float) -> float:
        return sum(t.evaluate(x) for t in self.terms)

    def antiderivative(self, x: float) -> float:
        return sum(t.antiderivative(x) for t in self.terms)

    def integral_between(self, lo: float, hi: float) -> float:
        if hi < lo:
            raise ValueError("reversed integration bounds")
        return self.antiderivative(hi) - self.antiderivative(lo)

    def integral_on(self, region: IntervalSet) -> float:
        return sum(self.integral_between(a, b) for a, b in region.parts)

    def descriptor(self) -> str:
        return "+".join(t.descriptor() for t in self.terms)

    def bounded_on(self, lo: float, hi: float) -> bool:
        return all(t.bounded_on(lo, hi) for t in self.terms)

    def is_zero(self) -> bool:
        return all(
            (isinstance(t, ConstTerm) and t.value == 0.0)
            or (isinstance(t, PolyTerm) and all(c == 0.0 for c in t.coeffs))
            for t in self.terms
        ) or not self.terms

    def with_bound(self, bound: float) -> "Integrand":
        return Integrand(self.terms, declared_bound=float(bound))

    def sign_pattern(self, lo: float, hi: float, samples: int = 4097) -> str:
        """Observed sign pattern on a dense interior grid: zero/positive/negative/mixed."""
        has_pos = has_neg = False
        span = hi - lo
        for i in range(1, samples + 1):
            x = lo + span * i / (samples + 1)
            try:
                v = self.evaluate(x)
            except ValueError:
                continue
            if v > 0:
                has_pos = True
            elif v < 0:
                has_neg = True
            if has_pos and has_neg:
                return "mixed"
        if has_pos:
            return "positive"
        if has_neg:
            return "negative"
        return "zero"


def _parse_floats(body: str, what: str) -> list[float]:
    out = []
    for tok in body.split(","):
        tok = tok.strip()
        try:
            out.append(float(tok))
        except ValueError as exc:
            raise CatalogUnsupported(f"bad number {tok!r} in {what}") from exc
    return out


def parse_integrand(text: str, declared_bound: float | None = None) -> Integrand:
    """Parse the ``+``-separated descriptor mini-syntax."""
    terms: list[Term] = []
    stripped = text.strip()
    if not stripped:
        raise CatalogUnsupported("empty integrand descriptor")
    # "+" separates terms except inside exponents like 1e+5
    for piece in re.split(r"(?<![eE])\+", stripped):
        piece = piece.strip()
        if ":" not in piece:
            raise CatalogUnsupported(f"term {piece!r} lacks a kind prefix")
        kind, body = piece.split(":", 1)
        kind = kind.strip()
        if kind == "const":
            numbers = _parse_floats(body, "const")
            if len(numbers) != 1:
                raise CatalogUnsupported("const takes exactly one number")
            terms.append(ConstTerm(numbers[0]))
        elif kind == "pow":
            numbers = _parse_floats(body, "pow")
            if not 1 <= len(numbers) <= 3:
                raise CatalogUnsupported("pow takes alpha[,scale][,shift]")
            alpha = numbers[0]
            if alpha <= -1:
                raise CatalogUnsupported(
                    f"pow alpha must exceed -1 for integrability, got {alpha!r}"
                )
            scale = numbers[1] if len(numbers) > 1 else 1.0
            shift = numbers[2] if len(numbers) > 2 else 0.0
            terms.append(PowTerm(alpha=alpha, scale=scale, shift=shift))
        elif kind == "poly":
            coeffs = _parse_floats(body, "poly")
            if not coeffs:
                raise CatalogUnsupported("poly needs at least one coefficient")
            terms.append(PolyTerm(tuple(coeffs)))
        elif kind == "ind":
            numbers = _parse_floats(body, "ind")
            if len(numbers) != 2:
                raise CatalogUnsupported("ind takes exactly a,b")
            lo, hi = numbers
            if not lo < hi:
                raise CatalogUnsupported(f"ind needs a < b, got {lo!r}, {hi!r}")
            terms.append(IndicatorTerm(lo, hi))
        else:
            raise CatalogUnsupported(f"unknown term kind {kind!r}")
    return Integrand(tuple(terms), declared_bound=declared_bound)


def constant(value: float) -> Integrand:
    return Integrand((ConstTerm(float(value)),))


def identity_map() -> Integrand:
    """The integrand φ(x) = x."""
    return Integrand((PolyTerm((0.0, 1.0)),))
