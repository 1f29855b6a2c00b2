"""Exact arithmetic for rationals read p-adically, and the Tate fundamental domain.

Everything is ``fractions.Fraction`` based: valuations, norms, and the
reduction into the fundamental domain E (the union of the shells
p^i Z_p^x for 0 <= i < m) are computed exactly, so the identities asserted
elsewhere in the package hold with zero tolerance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/[1-9]\d*)?")


def is_prime(n: int) -> bool:
    """Trial-division primality check; every prime in this package is desk scale."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def parse_rational(text: str) -> Fraction:
    """Parse a base-10 rational written as ``a`` or ``a/b``."""
    text = text.strip()
    if not _RATIONAL_RE.fullmatch(text):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text)


def format_rational(x: Rational) -> str:
    """Serialize exactly as parsed: ``a`` for integers, ``a/b`` otherwise."""
    return str(Fraction(x))


@dataclass(frozen=True)
class PrimeParams:
    """Prime p and period exponent m; the curve is Q_p^* modulo powers of q = p^m."""

    p: int
    m: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p = {self.p!r} is not a prime integer")
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"m = {self.m!r} must be an integer >= 1")

    @property
    def q(self) -> int:
        return self.p**self.m


def int_valuation(n: int, p: int) -> int:
    """Exponent of p in a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero undefined")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x: Rational, p: int) -> int:
    """p-adic valuation of a nonzero rational: v(a/b) = v(a) - v(b)."""
    frac = Fraction(x)
    if frac == 0:
        raise ValueError("valuation of zero undefined")
    return int_valuation(frac.numerator, p) - int_valuation(frac.denominator, p)


def norm_from_valuation(v: int, p: int) -> Fraction:
    """p^(-v) as an exact rational."""
    return Fraction(1, p**v) if v >= 0 else Fraction(p ** (-v))


def norm(x: Rational, p: int) -> Fraction:
    """p-adic norm |x| = p^(-v(x)), exact."""
    return norm_from_valuation(valuation(x, p), p)


@dataclass(frozen=True)
class PAdicRational:
    """A rational number carrying the prime context it is read in."""

    value: Fraction
    ctx: PrimeParams

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))

    def valuation(self) -> int:
        return valuation(self.value, self.ctx.p)

    def norm(self) -> Fraction:
        return norm(self.value, self.ctx.p)

    def is_unit(self) -> bool:
        return self.value != 0 and self.valuation() == 0

    def unit_part(self) -> Fraction:
        """x / p^v(x), a p-adic unit."""
        return self.value * Fraction(self.ctx.p) ** (-self.valuation())

    def _other_value(self, other: "PAdicRational | Rational") -> Fraction:
        if isinstance(other, PAdicRational):
            if other.ctx != self.ctx:
                raise ValueError("mixed prime contexts")
            return other.value
        return Fraction(other)

    def __mul__(self, other):
        return PAdicRational(self.value * self._other_value(other), self.ctx)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return PAdicRational(self.value / self._other_value(other), self.ctx)

    def __add__(self, other):
        return PAdicRational(self.value + self._other_value(other), self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        return PAdicRational(self.value - self._other_value(other), self.ctx)

    def __neg__(self):
        return PAdicRational(-self.value, self.ctx)


@dataclass(frozen=True)
class TatePoint:
    """Canonical representative of a curve point: nonzero rational with 0 <= v < m."""

    rep: PAdicRational

    def __post_init__(self) -> None:
        if self.rep.value == 0:
            raise ValueError("zero is not a point of the multiplicative curve")
        v = self.rep.valuation()
        if not 0 <= v < self.rep.ctx.m:
            raise ValueError(
                f"representative has valuation {v}, outside [0, {self.rep.ctx.m})"
            )
        object.__setattr__(self, "_v", v)
        object.__setattr__(self, "_unit", self.rep.value * Fraction(self.rep.ctx.p) ** (-v))

    @property
    def ctx(self) -> PrimeParams:
        return self.rep.ctx

    @property
    def value(self) -> Fraction:
        return self.rep.value

    @property
    def v(self) -> int:
        """Valuation of the canonical representative; lies in [0, m)."""
        return self._v  # type: ignore[attr-defined]

    def norm(self) -> Fraction:
        return norm_from_valuation(self.v, self.ctx.p)

    def unit_part(self) -> Fraction:
        return self._unit  # type: ignore[attr-defined]


def reduce_to_E(x: "TatePoint | PAdicRational | Rational", ctx: PrimeParams | None = None) -> TatePoint:
    """Multiply by the power of q = p^m that lands the valuation in [0, m)."""
    if isinstance(x, TatePoint):
        if ctx is not None and x.ctx != ctx:
            raise ValueError("mixed prime contexts")
        return x
    if isinstance(x, PAdicRational):
        if ctx is not None and x.ctx != ctx:
            raise ValueError("mixed prime contexts")
        ctx = x.ctx
        val = x.value
    else:
        if ctx is None:
            raise TypeError("ctx required when reducing a bare rational")
        val = Fraction(x)
    if val == 0:
        raise ValueError("zero cannot be reduced to the fundamental domain")
    v = valuation(val, ctx.p)
    shift = (v % ctx.m - v) // ctx.m
    rep = val * Fraction(ctx.q) ** shift
    return TatePoint(PAdicRational(rep, ctx))


def point(x: Rational, ctx: PrimeParams) -> TatePoint:
    """Shorthand for :func:`reduce_to_E` on a bare rational."""
    return reduce_to_E(Fraction(x), ctx)


def tate_mul(x: TatePoint, y: TatePoint) -> TatePoint:
    if x.ctx != y.ctx:
        raise ValueError("mixed prime contexts")
    return reduce_to_E(x.value * y.value, x.ctx)


def tate_inv(x: TatePoint) -> TatePoint:
    return reduce_to_E(1 / x.value, x.ctx)


def tate_div(x: TatePoint, y: TatePoint) -> TatePoint:
    return tate_mul(x, tate_inv(y))
