"""Boundary two-point function, the mass-dimension relation, and the
small-dimension limit that recovers the height.

Floating point throughout: the scaling dimension is a continuous
parameter and log p is transcendental.  The one exception: integer
dimensions evaluate through exact rationals before the final float, so
the degeneration to the kernel at dimension 1 is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .domain import local_height
from .padic import PrimeParams, TatePoint, tate_div, valuation


@dataclass(frozen=True)
class ScalingDimension:
    """The two real roots of the mass relation, delta_plus + delta_minus = 1."""

    delta_plus: float
    delta_minus: float
    mass_squared: float

    def __post_init__(self) -> None:
        if abs(self.delta_plus + self.delta_minus - 1.0) > 1e-9:
            raise ValueError("scaling dimensions must sum to 1")


def mass_from_delta(delta: float, ctx: PrimeParams) -> float:
    """Bulk mass squared: p^(1-delta) + p^delta - p - 1."""
    p = ctx.p
    return float(p) ** (1 - delta) + float(p) ** delta - p - 1


def real_dimension_threshold(ctx: PrimeParams) -> float:
    """Smallest mass squared with real dimensions: 2 sqrt(p) - p - 1."""
    return 2 * math.sqrt(ctx.p) - ctx.p - 1


def delta_from_mass(msq: float, ctx: PrimeParams) -> ScalingDimension:
    """Solve t + p/t = msq + p + 1 for t = p^delta; the two roots give
    delta_plus >= 1/2 >= delta_minus."""
    p = ctx.p
    if msq < real_dimension_threshold(ctx) - 1e-12:
        raise ValueError(
            "mass squared below 2 sqrt(p) - p - 1: complex-dimension regime"
        )
    b = msq + p + 1
    disc = max(b * b - 4 * p, 0.0)
    t_plus = (b + math.sqrt(disc)) / 2
    t_minus = p / t_plus
    lp = math.log(p)
    delta_plus = math.log(t_plus) / lp
    delta_minus = math.log(t_minus) / lp
    for d in (delta_plus, delta_minus):
        if abs(mass_from_delta(d, ctx) - msq) > 1e-12 * (1 + abs(msq)):
            raise ArithmeticError("dimension does not reproduce the mass relation")
    return ScalingDimension(delta_plus, delta_minus, msq)


def _pair_valuations(x1: TatePoint, x2: TatePoint) -> tuple[int, int, int]:
    if x1.ctx != x2.ctx:
        raise ValueError("mixed prime contexts")
    if x1.value == x2.value:
        raise ValueError("coincident points")
    return x1.v, x2.v, valuation(x1.value - x2.value, x1.ctx.p)


def two_point(x1: TatePoint, x2: TatePoint, delta: float, ctx: PrimeParams) -> float:
    """(|x1||x2|/|x1-x2|^2)^delta + (r^delta + r^(-delta))/(p^(m delta) - 1),
    r = |x1|/|x2|.

    Integer dimensions take an exact rational path, so delta = 1
    reproduces the kernel on the nose.
    """
    if delta <= 0:
        raise ValueError("dimension must be positive")
    p, m = ctx.p, ctx.m
    v1, v2, vd = _pair_valuations(x1, x2)
    if float(delta).is_integer():
        d = int(delta)
        base = Fraction(p)
        exact = base ** (d * (2 * vd - v1 - v2)) + (
            base ** (d * (v2 - v1)) + base ** (d * (v1 - v2))
        ) / (p ** (m * d) - 1)
        return float(exact)
    lp = math.log(p)
    first = math.exp(delta * (2 * vd - v1 - v2) * lp)
    second = (
        math.exp(delta * (v2 - v1) * lp) + math.exp(delta * (v1 - v2) * lp)
    ) / math.expm1(m * delta * lp)
    return first + second


def limit_finite_part(x1: TatePoint, x2: TatePoint, ctx: PrimeParams) -> float:
    """The explicit four-term finite part of the small-dimension expansion,
    assembled literally from the logarithms of the norms."""
    p, m = ctx.p, ctx.m
    v1, v2, vd = _pair_valuations(x1, x2)
    lp = math.log(p)
    log_n1 = -v1 * lp
    log_n2 = -v2 * lp
    log_nd = -vd * lp
    inner = (
        -log_nd / lp
        + (log_n1 + log_n2) / (2 * lp)
        + (log_n1 - log_n2) ** 2 / (2 * m * lp * lp)
        + m / 12
    )
    return 2 * lp * inner


_RICHARDSON_STEPS = (1e-3, 5e-4, 2.5e-4)


def height_limit_check(
    x1: TatePoint, x2: TatePoint, ctx: PrimeParams
) -> tuple[float, float]:
    """Estimate the dimensionless limit of the correlator against
    2 log p times the height of the point ratio.

    Subtracting the constant divergence 2/(delta m log p) leaves a
    remainder that vanishes linearly in the dimension (the two constant
    terms of the expansion cancel each other), so the height sits in the
    slope at zero: divide out one power of the dimension, then run two
    Richardson stages over the halving step sequence to cancel the linear
    and quadratic corrections of the quotient.
    """
    p, m = ctx.p, ctx.m
    lp = math.log(p)

    def slope(delta: float) -> float:
        return (two_point(x1, x2, delta, ctx) - 2 / (delta * m * lp)) / delta

    f1, f2, f3 = (slope(d) for d in _RICHARDSON_STEPS)
    r1 = 2 * f2 - f1
    r2 = 2 * f3 - f2
    estimate = (4 * r2 - r1) / 3
    target = 2 * lp * float(local_height(tate_div(x1, x2)))
    return estimate, target
