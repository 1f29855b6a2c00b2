"""Zeta-regularized determinant of the operator.

The angular eigenvalues contribute a finite exact product; the radial
tower is resummed through a spectral zeta function whose closed form is
its own analytic continuation, so the determinant factorizes exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .padic import PrimeParams
from .spectral import eigenvalue_angular


def angular_determinant(ctx: PrimeParams) -> Fraction:
    """Product of the nonzero angular eigenvalues:
    m^2 (p-1)^(m+1) p^(m-1) / (p^m - 1)^2, exactly.

    The float product over l = 1..m-1 is recomputed as a guard; the two
    must agree to 1e-9 relative.
    """
    p, m = ctx.p, ctx.m
    closed = Fraction(m * m * (p - 1) ** (m + 1) * p ** (m - 1), (p**m - 1) ** 2)
    product = 1.0
    for l in range(1, m):
        product *= float(eigenvalue_angular(l, ctx))
    if abs(product - float(closed)) > 1e-9 * abs(float(closed)):
        raise ArithmeticError("angular product disagrees with its closed form")
    return closed


def zeta_pi_value(s: float, ctx: PrimeParams) -> float:
    """Closed form m (p^(s+1) - 2 p^s + 1) / ((p^s - p)(p-1)^s).

    A finite expression in s, hence its own analytic continuation;
    the only pole in range is s = 1.
    """
    p, m = ctx.p, ctx.m
    if s == 1:
        raise ValueError("s = 1 is the pole of the radial zeta function")
    ps = float(p) ** s
    return m * (ps * p - 2 * ps + 1) / ((ps - p) * float(p - 1) ** s)


def zeta_pi_series(s: float, ctx: PrimeParams, terms: int = 200) -> float:
    """Direct eigenvalue sum sum_n mult(n) lambda_n^(-s), truncated.

    Converges for s > 1.  Terms are assembled in log space: the raw
    integer multiplicities overflow doubles long before the truncation
    point.
    """
    p, m = ctx.p, ctx.m
    if s <= 1:
        raise ValueError("the defining series only converges for s > 1")
    lp, lp1 = math.log(p), math.log(p - 1)
    total = m * (p - 2) * math.exp(-s * lp1)
    for n in range(2, terms + 1):
        log_mult = math.log(m) + 2 * lp1 + (n - 2) * lp
        log_lam = lp1 + (n - 1) * lp
        total += math.exp(log_mult - s * log_lam)
    return total


def zeta_prime_at_zero(ctx: PrimeParams) -> float:
    """zeta'(0) = -m log(p/(p-1)), checked against a central difference.

    Differentiating the closed form at s = 0 collapses: with
    N(s) = m(p^(s+1) - 2p^s + 1) and D(s) = (p^s - p)(p-1)^s one gets
    (N'D - ND')/D^2 |_{s=0} = m(log(p-1) - log p).
    """
    p, m = ctx.p, ctx.m
    analytic = -m * math.log(p / (p - 1))
    h = 1e-6
    fd = (zeta_pi_value(h, ctx) - zeta_pi_value(-h, ctx)) / (2 * h)
    if abs(analytic - fd) > 1e-6:
        raise ArithmeticError("zeta derivative disagrees with finite differences")
    return analytic


def radial_det_contribution(ctx: PrimeParams) -> Fraction:
    """exp(-zeta'(0)) resummed over the radial tower: (p/(p-1))^m exactly."""
    p, m = ctx.p, ctx.m
    closed = Fraction(p, p - 1) ** m
    if abs(math.exp(-zeta_prime_at_zero(ctx)) - float(closed)) > 1e-8:
        raise ArithmeticError("exponentiated zeta derivative misses the closed form")
    return closed


def det_D(ctx: PrimeParams) -> Fraction:
    """m^2 (1 - 1/p) / (1 - p^(-m))^2; equals angular x radial exactly."""
    p, m = ctx.p, ctx.m
    closed = Fraction(m * m) * (1 - Fraction(1, p)) / (1 - Fraction(1, p**m)) ** 2
    if closed != angular_determinant(ctx) * radial_det_contribution(ctx):
        raise ArithmeticError("determinant does not factor as angular x radial")
    return closed


@dataclass(frozen=True)
class ZetaClosedForm:
    """The radial zeta function of one prime context, pole at s = 1."""

    ctx: PrimeParams

    def value(self, s: float) -> float:
        return zeta_pi_value(s, self.ctx)

    def series(self, s: float, terms: int = 200) -> float:
        return zeta_pi_series(s, self.ctx, terms)

    @property
    def pole(self) -> float:
        return 1.0
