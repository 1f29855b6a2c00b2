"""Angular product, radial zeta function, and the regularized determinant."""

import math
from fractions import Fraction

import pytest

from tateop.determinant import (
    ZetaClosedForm,
    angular_determinant,
    det_D,
    radial_det_contribution,
    zeta_pi_series,
    zeta_pi_value,
    zeta_prime_at_zero,
)
from tateop.padic import PrimeParams
from tateop.spectral import eigenvalue_angular


def test_angular_determinant_oracles():
    assert angular_determinant(PrimeParams(3, 2)) == Fraction(3, 2)
    assert angular_determinant(PrimeParams(2, 1)) == 1  # empty product
    # independent oracle: the two eigenvalues at (2,3) are both 6/7
    assert angular_determinant(PrimeParams(2, 3)) == Fraction(36, 49)


def test_angular_determinant_equals_eigenvalue_product():
    # m in {2, 3, 4, 6} has rational eigenvalues: compare exactly.
    for p, m in [(2, 2), (2, 3), (3, 3), (3, 4), (5, 2), (7, 6)]:
        ctx = PrimeParams(p, m)
        prod = Fraction(1)
        for ell in range(1, m):
            prod *= Fraction(eigenvalue_angular(ell if ell <= m // 2 else m - ell, ctx))
        assert angular_determinant(ctx) == prod
    # elsewhere the cosines are irrational: float product within 1e-12
    for p, m in [(2, 5), (3, 7), (5, 9)]:
        ctx = PrimeParams(p, m)
        prod = 1.0
        for ell in range(1, m):
            prod *= float(eigenvalue_angular(ell if ell <= m // 2 else m - ell, ctx))
        assert prod == pytest.approx(float(angular_determinant(ctx)), rel=1e-12)


def test_zeta_value_oracles():
    assert zeta_pi_value(2, PrimeParams(3, 1)) == pytest.approx(5 / 12, abs=1e-15)
    assert zeta_pi_value(2, PrimeParams(3, 2)) == pytest.approx(5 / 6, abs=1e-15)
    assert zeta_pi_value(3, PrimeParams(2, 1)) == pytest.approx(1 / 6, abs=1e-15)


def test_zeta_pole_raises():
    for ctx in [PrimeParams(3, 1), PrimeParams(2, 4)]:
        with pytest.raises(ValueError):
            zeta_pi_value(1, ctx)


def test_zeta_series_matches_closed_form():
    for p in (2, 3, 5, 7):
        for m in (1, 2, 4):
            ctx = PrimeParams(p, m)
            for s in (2, 3, 4):
                assert abs(zeta_pi_series(s, ctx) - zeta_pi_value(s, ctx)) < 1e-12


def test_zeta_series_requires_convergence():
    with pytest.raises(ValueError):
        zeta_pi_series(1, PrimeParams(3, 1))


def test_zeta_dominant_term_at_large_s():
    # For p > 2 the n=1 stratum dominates as s grows.
    for p in (3, 5, 7):
        ctx = PrimeParams(p, 2)
        s = 40.0
        lead = 2 * (p - 2) * (p - 1) ** (-s)
        assert zeta_pi_value(s, ctx) / lead == pytest.approx(1.0, rel=1e-6)


def test_zeta_prime_at_zero():
    for p, m in [(2, 1), (3, 1), (3, 2), (5, 3), (7, 6)]:
        got = zeta_prime_at_zero(PrimeParams(p, m))
        assert got == pytest.approx(-m * math.log(p / (p - 1)), abs=1e-12)


def test_radial_contribution_oracles():
    assert radial_det_contribution(PrimeParams(3, 2)) == Fraction(9, 4)
    assert radial_det_contribution(PrimeParams(2, 1)) == 2
    assert radial_det_contribution(PrimeParams(5, 3)) == Fraction(125, 64)


def test_det_oracles():
    assert det_D(PrimeParams(3, 2)) == Fraction(27, 8)
    assert det_D(PrimeParams(2, 1)) == 2
    assert det_D(PrimeParams(5, 1)) == Fraction(5, 4)


def test_det_factorization_exact():
    for p in (2, 3, 5, 7):
        for m in range(1, 7):
            ctx = PrimeParams(p, m)
            assert det_D(ctx) == angular_determinant(ctx) * Fraction(p, p - 1) ** m
            closed = (
                Fraction(m * m)
                * (1 - Fraction(1, p))
                / (1 - Fraction(1, ctx.q)) ** 2
            )
            assert det_D(ctx) == closed


def test_zeta_closed_form_wrapper():
    zc = ZetaClosedForm(PrimeParams(3, 1))
    assert zc.value(2) == pytest.approx(5 / 12, abs=1e-15)
    assert zc.pole == 1
    assert abs(zc.series(2.0) - zc.value(2)) < 1e-12
