"""Closed-form character counts and the exact / summatory form counts.

Roots of unity are passed as an index j into the group of unit values
u = exp(2*pi*i*j/m), m = fc.unit_classes: for Q(i) j = 0, 1 stand for
u = +1, -1 (the value at i); for Q(zeta_3) j = 0, 1, 2 stand for
1, zeta_3, conj(zeta_3) (the value at zeta_6).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, log

import numpy as np

from normtorus._arith import divisors as int_divisors
from normtorus._arith import (
    factorize,
    moebius,
    moebius_table,
    multiplicative_table,
    square_root_or_none,
)
from normtorus.field import FieldContext, Splitting, splitting_type
from normtorus.ideals import (
    IdealFactored,
    divisors,
    enumerate_ideals_of_norm,
    is_primitive,
    moebius_ideal,
    quotient,
)

INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class InfinityType:
    """Archimedean character z -> (z/|z|)^(2k)."""

    k: int

    @property
    def c_infty(self) -> int:
        return (1 + abs(self.k)) ** 2


@dataclass(frozen=True)
class ConductorBudget:
    C: int
    n: int


def conductor_budget(fc: FieldContext, C: int) -> ConductorBudget | None:
    if C % fc.abs_disc:
        return None
    return ConductorBudget(C=C, n=C // fc.abs_disc)


# ---------------------------------------------------------------- local blocks


def _phi_block(p: int, kind: Splitting, exps: tuple[int, ...]) -> int:
    if kind is Splitting.SPLIT:
        lo = min(exps)
        return 1 if lo == 0 else p ** (lo - 1) * (p - 1)
    n = exps[0]
    if kind is Splitting.INERT:
        return 1 if n == 0 else p ** (n - 1) * (p + 1)
    return p ** (n // 2)


def _phi_star_block(p: int, kind: Splitting, exps: tuple[int, ...]) -> int:
    if kind is Splitting.SPLIT:
        n, m = exps
        if n != m:
            return 0
        if n == 0:
            return 1
        return p - 2 if n == 1 else p ** (n - 2) * (p - 1) ** 2
    n = exps[0]
    if kind is Splitting.INERT:
        if n == 0:
            return 1
        return p if n == 1 else p**n - p ** (n - 2)
    if n % 2:
        return 0
    return 1 if n == 0 else p ** (n // 2) - p ** (n // 2 - 1)


def phi_star_prime_power(kind: Splitting, p: int, j: int) -> int:
    """phi*(p^j) for the rational integer p^j, by splitting type."""
    if j == 0:
        return 1
    if j % 2:
        return 0
    if kind is Splitting.SPLIT:
        return p - 2 if j == 2 else p ** (j // 2 - 2) * (p - 1) ** 2
    if kind is Splitting.INERT:
        return p if j == 2 else p ** (j // 2 - 2) * (p * p - 1)
    return p ** (j // 2 - 1) * (p - 1)


# ---------------------------------------------------------------- per ideal


def phi_ideal(fc: FieldContext, a: IdealFactored) -> int:
    """Characters of (O/a)^x trivial on the image of (Z/(a cap Z))^x."""
    out = 1
    for p, kind, exps in a.blocks:
        out *= _phi_block(p, kind, exps)
    return out


def phi_star_ideal(fc: FieldContext, a: IdealFactored) -> int:
    """Characters counted by phi_ideal whose conductor is exactly a."""
    out = 1
    for p, kind, exps in a.blocks:
        out *= _phi_star_block(p, kind, exps)
        if not out:
            return 0
    return out


def phi_star_by_inversion(fc: FieldContext, a: IdealFactored) -> int:
    return sum(
        moebius_ideal(d) * phi_ideal(fc, quotient(a, d)) for d in divisors(a)
    )


def primitive_moebius_sum(a: IdealFactored) -> int:
    """Sum of mu(a/d) over divisors d of a with no rational integer factor."""
    return sum(moebius_ideal(quotient(a, d)) for d in divisors(a) if is_primitive(d))


def _check_unit_index(fc: FieldContext, j: int) -> None:
    if not (fc.is_gaussian or fc.is_eisenstein):
        raise ValueError(f"unit-value refinement only exists for Q(i) and Q(zeta_3), not d = {fc.d}")
    if not 0 <= j < fc.unit_classes:
        raise ValueError(f"unit index {j} out of range for d = {fc.d}")


def _unit_weight(fc: FieldContext, j: int) -> int:
    # sum over r = 1..m-1 of conj(u)^r for u = exp(2 pi i j / m)
    m = fc.unit_classes
    return m - 1 if j == 0 else -1


def phi_star_u(fc: FieldContext, a: IdealFactored, j: int) -> int:
    """phi*(a) restricted to characters taking the value indexed by j at i (or zeta_6)."""
    _check_unit_index(fc, j)
    m = fc.unit_classes
    val = Fraction(phi_star_ideal(fc, a) + _unit_weight(fc, j) * primitive_moebius_sum(a), m)
    if val.denominator != 1 or val < 0:
        raise ArithmeticError(f"phi*_u({a}, {j}) = {val} is not a non-negative integer")
    return int(val)


def unit_index_for_infinity_type(fc: FieldContext, k: int) -> int:
    """Index of chi_inf(i) = (-1)^k resp. chi_inf(zeta_6) = zeta_3^k; 0 for other fields."""
    return k % fc.unit_classes


# ---------------------------------------------------------------- rational n


def phi_star_rational(fc: FieldContext, n: int) -> int:
    out = 1
    for p, j in factorize(n):
        out *= phi_star_prime_power(splitting_type(fc, p), p, j)
        if not out:
            return 0
    return out


def phi_infinity(n: int) -> int:
    if n == 1:
        return 1
    return 2 if n >= 4 and square_root_or_none(n) is not None else 0


def finite_part_count(fc: FieldContext, a: int, j: int = 0) -> int:
    """Sum over ideals of norm a of phi*_u (Q(i), Q(zeta_3)) or phi* (other fields)."""
    if fc.unit_classes == 1:
        return phi_star_rational(fc, a)
    return sum(phi_star_u(fc, ideal, j) for ideal in enumerate_ideals_of_norm(fc, a))


def capital_phi(fc: FieldContext, n: int) -> int:
    """Compatible (chi_inf, chi_f) pairs with c(chi_inf) * N(cond chi_f) = n."""
    total = 0
    for b in int_divisors(n):
        arch = phi_infinity(b)
        if not arch:
            continue
        k = isqrt(b) - 1
        total += finite_part_count(fc, n // b, unit_index_for_infinity_type(fc, k)) * arch
    return total


def capital_phi1(fc: FieldContext, n: int) -> int:
    return finite_part_count(fc, n, 0)


def closed_form_count(fc: FieldContext, n: int) -> int:
    """Closed-form count of trivial-infinity-type forms of conductor n*|disc|."""
    root = square_root_or_none(n)
    mu_root = moebius(root) if root is not None else 0
    m = fc.unit_classes
    val = Fraction(fc.h) * (Fraction(phi_star_rational(fc, n), m) + Fraction(m - 1, m) * mu_root)
    if val.denominator != 1:
        raise ArithmeticError(f"non-integral closed form {val} at n = {n}")
    return int(val)


def count_conductor_exact(fc: FieldContext, C: int, trivial_infinity: bool) -> int:
    budget = conductor_budget(fc, C)
    if budget is None:
        return 0
    per = capital_phi1 if trivial_infinity else capital_phi
    return fc.h * per(fc, budget.n)


# ---------------------------------------------------------------- sieve tables


@dataclass(frozen=True)
class CountTables:
    """Read-only int64 tables on 0..N (index 0 unused, value 0)."""

    N: int
    phi_star: np.ndarray
    finite: tuple[np.ndarray, ...]
    Phi: np.ndarray
    Phi1: np.ndarray
    Phi_cum: np.ndarray
    Phi1_cum: np.ndarray
    finite_cum: tuple[np.ndarray, ...]


def _guard_int64(N: int) -> None:
    # Phi(m^2) <= 2 sigma(m) <= 2 m (1 + ln m); partial sums stay below this
    bound = 2 * N * (2 + log(N + 1))
    if bound >= INT64_MAX:
        raise OverflowError(f"sieve length {N} would overflow int64 partial sums")


def _cumsum_checked(arr: np.ndarray) -> np.ndarray:
    out = np.cumsum(arr)
    if len(out) > 1 and (np.any(arr < 0) or np.any(np.diff(out) < 0)):
        raise OverflowError("negative entry or wraparound in a count table")
    return out


def build_tables(fc: FieldContext, N: int) -> CountTables:
    """phi*, the unit-refined finite counts, Phi and Phi1 on 1..N by sieve."""
    if N < 1:
        raise ValueError("table length must be positive")
    _guard_int64(N)
    kinds: dict[int, Splitting] = {}

    def local(p: int, j: int) -> int:
        if p not in kinds:
            kinds[p] = splitting_type(fc, p)
        return phi_star_prime_power(kinds[p], p, j)

    phi_star = multiplicative_table(N, local)
    m = fc.unit_classes
    if m == 1:
        finite = (phi_star,)
    else:
        r = isqrt(N)
        mu = moebius_table(r)
        mu_sq = np.zeros(N + 1, dtype=np.int64)
        mu_sq[np.arange(1, r + 1) ** 2] = mu[1:]
        finite = []
        for j in range(m):
            num = phi_star + (m - 1 if j == 0 else -1) * mu_sq
            if np.any(num % m) or np.any(num < 0):
                raise ArithmeticError(f"unit-refined count not a non-negative integer (j = {j})")
            finite.append(num // m)
        finite = tuple(finite)

    Phi = np.zeros(N + 1, dtype=np.int64)
    for root in range(1, isqrt(N) + 1):
        b = root * root
        arch = 1 if root == 1 else 2
        src = finite[(root - 1) % m]
        Phi[b::b] += arch * src[1 : N // b + 1]
    Phi1 = finite[0]
    return CountTables(
        N=N,
        phi_star=phi_star,
        finite=finite,
        Phi=Phi,
        Phi1=Phi1,
        Phi_cum=_cumsum_checked(Phi),
        Phi1_cum=_cumsum_checked(Phi1),
        finite_cum=tuple(_cumsum_checked(f) for f in finite),
    )


_TABLES: dict[FieldContext, CountTables] = {}
_TABLES_LOCK = threading.Lock()


def tables(fc: FieldContext, N: int) -> CountTables:
    """Cached tables covering at least 1..N."""
    N = max(N, 1)
    with _TABLES_LOCK:
        t = _TABLES.get(fc)
        if t is None or t.N < N:
            t = build_tables(fc, max(N, 2 * t.N if t is not None else N))
            _TABLES[fc] = t
    return t


def summatory_count(fc: FieldContext, X: int, trivial_infinity: bool) -> int:
    """Forms with analytic conductor <= X (optionally trivial infinity type only)."""
    if X < 1:
        raise ValueError("X must be >= 1")
    N = X // fc.abs_disc
    if N == 0:
        return 0
    t = tables(fc, N)
    cum = t.Phi1_cum if trivial_infinity else t.Phi_cum
    return fc.h * int(cum[N])


def count_fixed_infinity_type(fc: FieldContext, k: int, X: int) -> int:
    """Forms of infinity type exactly k with analytic conductor <= X."""
    N = X // (fc.abs_disc * InfinityType(k).c_infty)
    if N == 0:
        return 0
    t = tables(fc, N)
    return fc.h * int(t.finite_cum[unit_index_for_infinity_type(fc, k)][N])


def max_infinity_type(fc: FieldContext, X: int) -> int:
    """Largest |k| that can occur below conductor X."""
    return max(isqrt(X // fc.abs_disc) - 1, -1)
