"""Multiplicative characters of the domain and the operator's spectrum.

Radial characters (characters of the unit group mod p^n) are realized
through discrete-log tables, angular characters are characters of Z/mZ
acting on the valuation.  Eigenvalues come in a closed form per conductor
and are cross-checked against the defining integrals; multiplicities,
the spectral gap, the eigenvalue counting function, and the m = 1
boundary-operator comparison all live here.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .domain import ShellPartition, StepFunction, canonical_center
from .operator import c_p_const
from .padic import PAdicRational, PrimeParams, Rational, int_valuation, is_prime

DLOG_TABLE_LIMIT = 10**6


class OutOfRegimeError(ArithmeticError):
    """Raised when the eigenvalue counting formula is used below its range."""


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Smallest primitive root mod p, adjusted to generate mod every p^n.

    If g^(p-1) = 1 mod p^2 the lift g + p is returned; such a generator
    of (Z/p)^x generates (Z/p^n)^x for all n.
    """
    if p == 2:
        return 1
    factors = []
    r = p - 1
    d = 2
    while d * d <= r:
        if r % d == 0:
            factors.append(d)
            while r % d == 0:
                r //= d
        d += 1
    if r > 1:
        factors.append(r)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            if pow(g, p - 1, p * p) == 1:
                g += p
            return g
    raise ArithmeticError(f"no primitive root found mod {p}")


@lru_cache(maxsize=None)
def _unit_dlog_table(p: int, n: int) -> dict:
    """u -> t with g^t = u mod p^n, over all units u; odd p only."""
    mod = p**n
    if mod > DLOG_TABLE_LIMIT:
        raise ValueError(f"discrete log table for modulus {mod} exceeds cap")
    g = primitive_root(p)
    phi = (p - 1) * p ** (n - 1)
    table: dict[int, int] = {}
    cur = 1
    for t in range(phi):
        table[cur] = t
        cur = cur * g % mod
    assert len(table) == phi and cur == 1
    return table


@lru_cache(maxsize=None)
def _two_adic_table(n: int) -> dict:
    """u -> (s, t) with u = (-1)^s 3^t mod 2^n, for n >= 3."""
    mod = 2**n
    if mod > DLOG_TABLE_LIMIT:
        raise ValueError(f"discrete log table for modulus {mod} exceeds cap")
    table: dict[int, tuple[int, int]] = {}
    cur = 1
    for t in range(2 ** (n - 2)):
        table[cur] = (0, t)
        table[mod - cur] = (1, t)
        cur = cur * 3 % mod
    assert len(table) == 2 ** (n - 1)
    return table


def root_of_unity(turns: Fraction):
    """e^(2 pi i turns), exact (Fraction or exact imaginary) at quarter turns."""
    r = Fraction(turns) % 1
    if r == 0:
        return Fraction(1)
    if r == Fraction(1, 2):
        return Fraction(-1)
    if r == Fraction(1, 4):
        return 1j
    if r == Fraction(3, 4):
        return -1j
    return cmath.exp(2j * cmath.pi * float(r))


@dataclass(frozen=True)
class UnitCharacter:
    """Character of the unit group mod p^n.

    n is the level of the defining data; n = 0 is the trivial character.
    For odd p the index a is an exponent relative to a fixed primitive
    root; for p = 2 and n >= 3 the pair (eps, a) refers to the
    generators (-1, 3), while n = 2 carries only the sign bit eps.
    The stored data may be imprimitive: the true conductor is computed
    by evaluation and may be smaller than n.
    """

    p: int
    n: int
    a: int = 0
    eps: int = 0

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.n < 0:
            raise ValueError("level must be >= 0")
        if self.p == 2 and self.n == 1:
            raise ValueError("the unit group mod 2 is trivial; use level 0 or >= 2")
        a, eps = self.a, self.eps
        if self.n == 0:
            a, eps = 0, 0
        elif self.p == 2:
            eps %= 2
            a = a % 2 ** (self.n - 2) if self.n >= 3 else 0
        else:
            eps = 0
            a %= (self.p - 1) * self.p ** (self.n - 1)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "eps", eps)

    @classmethod
    def trivial(cls, p: int) -> "UnitCharacter":
        return cls(p, 0)

    def exponent(self, u) -> Fraction:
        """Fraction of a turn: the character value is e^(2 pi i exponent)."""
        if self.n == 0:
            return Fraction(0)
        u_res = _unit_residue(u, self.p, self.n)
        if self.p != 2:
            t = _unit_dlog_table(self.p, self.n)[u_res]
            phi = (self.p - 1) * self.p ** (self.n - 1)
            return Fraction(self.a * t, phi) % 1
        if self.n == 2:
            s = 0 if u_res % 4 == 1 else 1
            return Fraction(self.eps * s, 2) % 1
        s, t = _two_adic_table(self.n)[u_res]
        return (Fraction(self.eps * s, 2) + Fraction(self.a * t, 2 ** (self.n - 2))) % 1

    def value(self, u):
        return root_of_unity(self.exponent(u))

    @property
    def conductor(self) -> int:
        return _conductor_of(self)

    @property
    def is_trivial(self) -> bool:
        return self.conductor == 0


def _unit_residue(u, p: int, n: int) -> int:
    val = u.value if isinstance(u, PAdicRational) else Fraction(u)
    return canonical_center(val, n, p)


def _level_generators(p: int, n: int, f: int) -> tuple[int, ...]:
    """Generators of the subgroup (1 + p^f Z_p) inside (Z/p^n)^x; f = 0
    means the whole unit group."""
    if n == 0:
        return ()
    if f == 0 or (p == 2 and f == 1):
        if p != 2:
            return (primitive_root(p) % p**n,)
        return (3,) if n == 2 else (2**n - 1, 3)
    return (1 + p**f,)


@lru_cache(maxsize=None)
def _conductor_of(chi: UnitCharacter) -> int:
    for f in range(chi.n + 1):
        if all(chi.exponent(g) == 0 for g in _level_generators(chi.p, chi.n, f)):
            return f
    return chi.n


def character_value(chi: UnitCharacter, u):
    """Value of a radial character at a unit; a root of unity."""
    val = u.value if isinstance(u, PAdicRational) else Fraction(u)
    if val.numerator % chi.p == 0 or val.denominator % chi.p == 0:
        raise ValueError("character argument must be a p-adic unit")
    return chi.value(val)


def enumerate_conductor(p: int, n: int) -> tuple[UnitCharacter, ...]:
    """All characters of exact conductor n, with the count asserted."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 0:
        raise ValueError("conductor must be >= 0")
    if n == 0:
        return (UnitCharacter.trivial(p),)
    candidates: list[UnitCharacter] = []
    if p == 2:
        if n == 2:
            candidates.append(UnitCharacter(2, 2, 0, 1))
        elif n >= 3:
            # The generators interact (e.g. 1 + 4 = -3 mod 8), so the
            # exact conductor is decided by evaluation, not by the index.
            candidates.extend(
                UnitCharacter(2, n, a, eps)
                for eps in (0, 1)
                for a in range(2 ** (n - 2))
            )
        expected = 0 if n == 1 else (1 if n == 2 else 2 ** (n - 2))
    else:
        phi = (p - 1) * p ** (n - 1)
        candidates.extend(UnitCharacter(p, n, a) for a in range(1, phi))
        expected = p - 2 if n == 1 else (p - 1) ** 2 * p ** (n - 2)
    chars = tuple(chi for chi in candidates if chi.conductor == n)
    assert len(chars) == expected
    return chars


@dataclass(frozen=True)
class AngularCharacter:
    """Character of Z/mZ acting on the valuation class: v -> e^(2 pi i l v / m)."""

    m: int
    l: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("modulus must be >= 1")
        object.__setattr__(self, "l", self.l % self.m)

    def exponent(self, v: int) -> Fraction:
        return Fraction(self.l * v, self.m) % 1

    def value(self, v: int):
        return root_of_unity(self.exponent(v))

    @property
    def is_trivial(self) -> bool:
        return self.l == 0


@dataclass(frozen=True)
class CharacterLabel:
    """A joint character: angular part on the valuation, radial part on units."""

    angular: AngularCharacter
    radial: UnitCharacter


def character_step_function(label: CharacterLabel, ctx: PrimeParams) -> StepFunction:
    """The character as a step function at level max(n, 1); an eigenfunction."""
    chi, ang = label.radial, label.angular
    if chi.p != ctx.p or ang.m != ctx.m:
        raise ValueError("character data does not match the prime context")
    part = ShellPartition.full(ctx, max(chi.n, 1))
    values = tuple(
        root_of_unity(ang.exponent(b.v) + chi.exponent(b.center)) for b in part.balls
    )
    return StepFunction(part, values)


def eigenvalue_radial_closed(n: int, ctx: PrimeParams) -> Fraction:
    """(p - 1) p^(n - 1) for conductor n >= 1; independent of m."""
    if n < 1:
        raise ValueError("radial eigenvalues require conductor >= 1")
    return Fraction((ctx.p - 1) * ctx.p ** (n - 1))


def eigenvalue_radial_integral(
    chi: UnitCharacter, zeta: AngularCharacter, ctx: PrimeParams
) -> complex:
    """Defining integral of the eigenvalue at a nontrivial radial character.

    Expands -c_p * int H(z,1) (pi(z) - 1) d*z over level-N balls,
    N = level of chi: a singular-term sum over unit residues plus the
    finite-volume corrections, shell by shell.  The unit-average of the
    character (exactly zero) is kept in the formula, which is what makes
    the result visibly independent of the angular part.
    """
    if chi.p != ctx.p or zeta.m != ctx.m:
        raise ValueError("character data does not match the prime context")
    if chi.is_trivial:
        raise ValueError("trivial radial character: use eigenvalue_angular")
    p, m = ctx.p, ctx.m
    n_lvl = max(chi.n, 1)
    p_n = p**n_lvl
    mu_units = Fraction(p - 1, p)
    s_main = 0j
    s_hat = 0j
    for u in range(1, p_n):
        if u % p == 0:
            continue
        val = complex(chi.value(u))
        s_hat += val / p_n
        if u != 1:
            s_main += p ** (2 * int_valuation(u - 1, p)) * (1 - val) / p_n
    q1 = p**m - 1
    total = s_main + Fraction(2, q1) * (complex(mu_units) - s_hat)
    for v in range(1, m):
        w = complex(zeta.value(v))
        total += Fraction(p ** (m - v) + p**v, q1) * (complex(mu_units) - w * s_hat)
    return complex(c_p_const(p)) * total


_EXACT_TWO_COS = {
    Fraction(0): Fraction(2),
    Fraction(1, 2): Fraction(-2),
    Fraction(1, 3): Fraction(-1),
    Fraction(2, 3): Fraction(-1),
    Fraction(1, 4): Fraction(0),
    Fraction(3, 4): Fraction(0),
    Fraction(1, 6): Fraction(1),
    Fraction(5, 6): Fraction(1),
}


def eigenvalue_angular_sum(l: int, ctx: PrimeParams) -> complex:
    """Defining sum for an angular eigenvalue, evaluated shell by shell."""
    p, m = ctx.p, ctx.m
    zeta = AngularCharacter(m, l)
    mu_units = Fraction(p - 1, p)
    q1 = p**m - 1
    total = 0j
    for v in range(1, m):
        total += (
            Fraction(p ** (m - v) + p**v, q1)
            * (complex(zeta.value(v)) - 1)
            * complex(mu_units)
        )
    return -complex(c_p_const(p)) * total


def eigenvalue_angular(l: int, ctx: PrimeParams):
    """p(p-1)(2-c)/(p^2 - pc + 1) with c = 2 cos(2 pi l/m); exact when c is.

    Cross-evaluated against the defining sum to 1e-10 on every call.
    """
    p, m = ctx.p, ctx.m
    if not 0 <= l % m < m:
        raise ValueError("angular index out of range")
    turns = Fraction(l % m, m)
    c = _EXACT_TWO_COS.get(turns)
    if c is not None:
        lam = Fraction(p * (p - 1) * (2 - c), p * p - p * c + 1)
    else:
        cf = 2.0 * cmath.cos(2 * cmath.pi * float(turns)).real
        lam = p * (p - 1) * (2 - cf) / (p * p - p * cf + 1)
    check = eigenvalue_angular_sum(l, ctx)
    if abs(complex(lam) - check) > 1e-10:
        raise ArithmeticError(
            f"angular eigenvalue mismatch at l={l}: closed {lam}, sum {check}"
        )
    return lam


def multiplicity(kind: str, index: int, ctx: PrimeParams) -> int:
    """Eigenvalue multiplicities: the zero mode, conjugate angular pairs,
    and the per-conductor radial counts."""
    p, m = ctx.p, ctx.m
    if kind == "zero":
        return 1
    if kind == "radial":
        if index < 1:
            raise ValueError("radial multiplicity requires conductor >= 1")
        if index == 1:
            return m * (p - 2)
        return m * (p - 1) ** 2 * p ** (index - 2)
    if kind == "angular":
        l = index % m
        if l == 0:
            raise ValueError("l = 0 is the zero mode")
        return 1 if (2 * l) % m == 0 else 2
    raise ValueError(f"unknown spectrum kind {kind!r}")


@dataclass(frozen=True)
class SpectrumEntry:
    """One eigenvalue with its multiplicity and its character label data."""

    kind: str
    index: int
    eigenvalue: object
    multiplicity: int

    def to_json_dict(self) -> dict:
        lam = (
            f"{self.eigenvalue.numerator}/{self.eigenvalue.denominator}"
            if isinstance(self.eigenvalue, Fraction) and self.eigenvalue.denominator != 1
            else (
                str(self.eigenvalue.numerator)
                if isinstance(self.eigenvalue, Fraction)
                else float(self.eigenvalue)
            )
        )
        out: dict = {"kind": self.kind}
        if self.kind == "radial":
            out["n"] = self.index
        elif self.kind == "angular":
            out["l"] = self.index
        out["lambda"] = lam
        out["mult"] = self.multiplicity
        return out


def enumerate_spectrum(max_conductor: int, ctx: PrimeParams) -> tuple[SpectrumEntry, ...]:
    """Zero mode, angular pairs, and radial levels up to the given conductor.

    The total multiplicity must equal m (p-1) p^(N-1), the dimension of
    the level-N step-function space; anything else raises.
    """
    if max_conductor < 1:
        raise ValueError("max conductor must be >= 1")
    p, m = ctx.p, ctx.m
    entries = [SpectrumEntry("zero", 0, Fraction(0), 1)]
    for l in range(1, m // 2 + 1):
        entries.append(
            SpectrumEntry(
                "angular", l, eigenvalue_angular(l, ctx), multiplicity("angular", l, ctx)
            )
        )
    for n in range(1, max_conductor + 1):
        mult = multiplicity("radial", n, ctx)
        if mult == 0:
            continue
        entries.append(SpectrumEntry("radial", n, eigenvalue_radial_closed(n, ctx), mult))
    total = sum(e.multiplicity for e in entries)
    if total != m * (p - 1) * p ** (max_conductor - 1):
        raise ArithmeticError("spectrum multiplicities violate the count identity")
    return tuple(entries)


def spectral_gap(ctx: PrimeParams):
    """Smallest positive eigenvalue by the closed forms.

    For m >= 2 this is the fundamental angular eigenvalue, checked to lie
    below the radial floor p - 1; for m = 1 it is p - 1 itself.
    """
    p, m = ctx.p, ctx.m
    if m == 1:
        return Fraction(p - 1)
    gap = eigenvalue_angular(1, ctx)
    if not gap < p - 1:
        raise ArithmeticError("angular gap is not below the radial floor")
    return gap


def weyl_count(lam: Rational, ctx: PrimeParams) -> int:
    """Number of eigenvalues <= lam, counted with multiplicity.

    Valid once lam clears every angular eigenvalue, i.e. lam >= p - 1;
    then the count is m (p-1) p^(M-1) = m * lambda_M with M the largest
    radial level at or below lam.  Computed by the closed formula and by
    enumeration, which must agree.
    """
    p, m = ctx.p, ctx.m
    bound = Fraction(lam)
    if bound < p - 1:
        raise OutOfRegimeError(
            f"counting formula needs lam >= p - 1 = {p - 1}, got {bound}"
        )
    big_m = 1
    while Fraction((p - 1) * p**big_m) <= bound:
        big_m += 1
    formula = m * (p - 1) ** 2 * sum(p**i for i in range(big_m - 1)) + m * (p - 2) + m
    expected = m * (p - 1) * p ** (big_m - 1)
    enumerated = sum(
        e.multiplicity for e in enumerate_spectrum(big_m, ctx) if e.eigenvalue <= bound
    )
    if formula != expected or enumerated != expected:
        raise ArithmeticError("eigenvalue count mismatch between formula and enumeration")
    return formula


def dtn_cross_check(ctx: PrimeParams, n_max: int = 6) -> list[tuple[int, Fraction, Fraction]]:
    """m = 1 comparison against the half-plane boundary operator.

    The boundary operator's eigenvalue (p+1)p^(n-2) - 2/p, corrected by
    the finite-volume term and scaled by c_p, must reproduce
    (p-1)p^(n-1) exactly.
    """
    if ctx.m != 1:
        raise ValueError("boundary-operator comparison is defined for m = 1 only")
    p = ctx.p
    cp = c_p_const(p)
    out = []
    for n in range(1, n_max + 1):
        lam_prime = Fraction(p + 1) * Fraction(p) ** (n - 2) - Fraction(2, p)
        lhs = cp * (lam_prime + Fraction(2, p - 1) * Fraction(p - 1, p))
        rhs = Fraction((p - 1) * p ** (n - 1))
        out.append((n, lhs, rhs))
    return out


def eigenvalue_for_label(label: CharacterLabel, ctx: PrimeParams):
    """Eigenvalue of the label's eigenfunction: radial closed form when the
    radial conductor is positive, angular closed form otherwise."""
    cond = label.radial.conductor
    if cond >= 1:
        return eigenvalue_radial_closed(cond, ctx)
    return eigenvalue_angular(label.angular.l, ctx)
