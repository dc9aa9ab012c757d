"""Brute-force ground truth from explicit quotient rings O/a.

Elements of O are coordinate pairs (x, y) meaning x + y*omega. An ideal
lattice is kept in Hermite normal form (a, b, c): it is spanned by
a and b + c*omega, with c | a and 0 <= b < a, so O/a has the coset
representatives x + y*omega, 0 <= x < a, 0 <= y < c.

Nothing here uses the closed forms of ``charcount``; the counts come from
unit detection, group orders and element orders in the concrete ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from normtorus.field import FieldContext, Splitting
from normtorus.ideals import (
    IdealFactored,
    divisors,
    enumerate_ideals_of_norm,
    moebius_ideal,
    quotient,
)

DEFAULT_CAP = 4096


class OracleCapExceeded(ValueError):
    pass


# ---------------------------------------------------------------- lattices


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf(vectors: list[tuple[int, int]]) -> tuple[int, int, int]:
    """HNF (a, b, c) of the full-rank lattice in Z^2 spanned by ``vectors``."""
    pivot = (0, 0)
    flat = []
    for x, y in vectors:
        if y == 0:
            flat.append(x)
            continue
        px, py = pivot
        if py == 0:
            pivot = (x, y)
            continue
        g, s, t = _ext_gcd(py, y)
        # unimodular change of the pair keeps the span
        new_pivot = (s * px + t * x, g)
        flat.append((y // g) * px - (py // g) * x)
        pivot = new_pivot
    px, py = pivot
    a = 0
    for x in flat:
        a = gcd(a, x)
    if a == 0 or py == 0:
        raise ValueError("lattice is not of full rank")
    if py < 0:
        px, py = -px, -py
    return a, px % a, py


def _mul_elements(fc: FieldContext, u: tuple[int, int], v: tuple[int, int]) -> tuple[int, int]:
    t, n = fc.omega_minpoly
    x1, y1 = u
    x2, y2 = v
    return x1 * x2 - n * y1 * y2, x1 * y2 + x2 * y1 + t * y1 * y2


def _hnf_basis(h: tuple[int, int, int]) -> list[tuple[int, int]]:
    a, b, c = h
    return [(a, 0), (b, c)]


def hnf_product(fc: FieldContext, h1: tuple[int, int, int], h2: tuple[int, int, int]) -> tuple[int, int, int]:
    gens = [_mul_elements(fc, u, v) for u in _hnf_basis(h1) for v in _hnf_basis(h2)]
    return hnf(gens)


def _minpoly_roots_mod(fc: FieldContext, p: int) -> list[int]:
    t, n = fc.omega_minpoly
    return [r for r in range(p) if (r * r - t * r + n) % p == 0]


def prime_ideal_hnf(fc: FieldContext, p: int, kind: Splitting, conjugate: bool = False) -> tuple[int, int, int]:
    """HNF of a prime ideal over p; the split label P uses the smaller root."""
    if kind is Splitting.INERT:
        return p, 0, p
    roots = _minpoly_roots_mod(fc, p)
    if kind is Splitting.SPLIT:
        if len(roots) != 2:
            raise ValueError(f"{p} does not split")
        r = roots[1] if conjugate else roots[0]
    else:
        if len(roots) != 1:
            raise ValueError(f"{p} does not ramify")
        r = roots[0]
    # P = (p, omega - r)
    return hnf([(p, 0), (-r, 1), _mul_elements(fc, (-r, 1), (0, 1)), (0, p)])


@lru_cache(maxsize=None)
def ideal_hnf(fc: FieldContext, ideal: IdealFactored) -> tuple[int, int, int]:
    h = (1, 0, 1)
    for p, kind, exps in ideal.blocks:
        if kind is Splitting.SPLIT:
            for e, conj in zip(exps, (False, True)):
                base = prime_ideal_hnf(fc, p, kind, conj)
                for _ in range(e):
                    h = hnf_product(fc, h, base)
        else:
            base = prime_ideal_hnf(fc, p, kind)
            for _ in range(exps[0]):
                h = hnf_product(fc, h, base)
    return h


def is_ideal_lattice(fc: FieldContext, h: tuple[int, int, int]) -> bool:
    """A sublattice of O is an ideal iff omega times each basis vector stays inside."""
    a, b, c = h
    for v in _hnf_basis(h):
        x, y = _mul_elements(fc, v, (0, 1))
        if y % c:
            return False
        if (x - (y // c) * b) % a:
            return False
    return True


def hnf_ideals_of_norm(fc: FieldContext, n: int) -> list[tuple[int, int, int]]:
    """All ideals of norm n found by scanning every index-n lattice in HNF."""
    out = []
    for c in range(1, n + 1):
        if n % c:
            continue
        a = n // c
        for b in range(a):
            if is_ideal_lattice(fc, (a, b, c)):
                out.append((a, b, c))
    return out


# ---------------------------------------------------------------- rings


@dataclass(frozen=True)
class QuotientRing:
    fc: FieldContext
    ideal: IdealFactored
    basis: tuple[int, int, int]
    size: int = field(init=False)

    def __post_init__(self):
        a, _, c = self.basis
        object.__setattr__(self, "size", a * c)

    def reduce(self, x, y):
        """Canonical representative of x + y*omega (works on numpy arrays)."""
        a, b, c = self.basis
        q = y // c
        return (x - q * b) % a, y - q * c

    def index(self, x, y):
        a = self.basis[0]
        x, y = self.reduce(x, y)
        return y * a + x

    def elements(self) -> tuple[np.ndarray, np.ndarray]:
        a, _, c = self.basis
        idx = np.arange(self.size, dtype=np.int64)
        return idx % a, idx // a

    def mul(self, u, v):
        t, n = self.fc.omega_minpoly
        x1, y1 = u
        x2, y2 = v
        return self.reduce(x1 * x2 - n * y1 * y2, x1 * y2 + x2 * y1 + t * y1 * y2)

    def check_associativity(self, samples: int = 64, seed: int = 0) -> bool:
        rng = np.random.default_rng(seed)
        xs, ys = self.elements()
        picks = rng.integers(0, self.size, size=(samples, 3))
        for i, j, k in picks:
            u, v, w = (int(xs[i]), int(ys[i])), (int(xs[j]), int(ys[j])), (int(xs[k]), int(ys[k]))
            if self.mul(self.mul(u, v), w) != self.mul(u, self.mul(v, w)):
                return False
        return True

    def unit_mask(self, method: str = "lattice") -> np.ndarray:
        """Boolean mask over element indices marking the units.

        ``lattice``: e is a unit iff (e) + a = O, i.e. the lattice spanned by
        the ideal basis, e and e*omega has index 1 (gcd of its 2x2 minors).
        ``permutation``: e is a unit iff multiplication by e is a bijection.
        """
        xs, ys = self.elements()
        if method == "permutation":
            mask = np.zeros(self.size, dtype=bool)
            for i in range(self.size):
                prod = self.index(*self.mul((int(xs[i]), int(ys[i])), (xs, ys)))
                mask[i] = len(np.unique(prod)) == self.size
            return mask
        if method != "lattice":
            raise ValueError(f"unknown unit test {method!r}")
        a, b, c = self.basis
        t, n = self.fc.omega_minpoly
        ox, oy = -n * ys, xs + t * ys  # e * omega
        g = np.gcd.reduce(
            [
                np.full_like(xs, a * c),
                a * ys,
                a * oy,
                b * ys - c * xs,
                b * oy - c * ox,
                xs * oy - ys * ox,
            ]
        )
        return g == 1

    def rational_residues(self) -> np.ndarray:
        """Indices of the classes of 0, 1, 2, ... up to the additive order of 1."""
        a, b, c = self.basis
        # t is in the ideal iff t = 0 mod a (the y-coordinate of t is 0)
        return self.index(np.arange(a, dtype=np.int64), np.zeros(a, dtype=np.int64))


def build_quotient(fc: FieldContext, ideal: IdealFactored, cap: int = DEFAULT_CAP) -> QuotientRing:
    if ideal.norm > cap:
        raise OracleCapExceeded(f"norm {ideal.norm} exceeds oracle cap {cap}")
    q = QuotientRing(fc, ideal, ideal_hnf(fc, ideal))
    if q.size != ideal.norm:
        raise AssertionError(f"lattice index {q.size} != norm {ideal.norm} for {ideal}")
    return q


@dataclass(frozen=True)
class UnitGroupStats:
    order: int
    rational_image_order: int
    rational_content: int
    element_orders: dict[str, int]

    @property
    def quotient_order(self) -> int:
        return self.order // self.rational_image_order


def _distinguished_units(fc: FieldContext) -> dict[str, tuple[int, int]]:
    # omega = i for d = -1 and omega = (1 + sqrt(-3))/2 = zeta_6 for d = -3
    if fc.is_gaussian:
        return {"i": (0, 1)}
    if fc.is_eisenstein:
        return {"zeta6": (0, 1)}
    return {}


def unit_stats(q: QuotientRing, method: str = "lattice") -> UnitGroupStats:
    units = q.unit_mask(method)
    rat = q.rational_residues()
    rat_units = rat[units[rat]]
    image = set(int(i) for i in rat_units)
    orders = {}
    for name, g in _distinguished_units(q.fc).items():
        x = (1, 0)
        for k in range(1, 13):
            x = q.mul(x, g)
            if int(q.index(*x)) in image:
                orders[name] = k
                break
        else:
            raise AssertionError(f"{name} has no finite order modulo the rational image")
    return UnitGroupStats(
        order=int(units.sum()),
        rational_image_order=len(image),
        rational_content=len(rat),
        element_orders=orders,
    )


# ---------------------------------------------------------------- counts


class Oracle:
    """Caches ring statistics per ideal for one field."""

    def __init__(self, fc: FieldContext, cap: int = DEFAULT_CAP):
        self.fc = fc
        self.cap = cap
        self._stats: dict[IdealFactored, UnitGroupStats] = {}

    def stats(self, ideal: IdealFactored) -> UnitGroupStats:
        s = self._stats.get(ideal)
        if s is None:
            s = unit_stats(build_quotient(self.fc, ideal, self.cap))
            self._stats[ideal] = s
        return s

    def phi(self, ideal: IdealFactored) -> int:
        s = self.stats(ideal)
        if s.order % s.rational_image_order:
            raise AssertionError(f"image order does not divide unit group order at {ideal}")
        return s.quotient_order

    def phi_star(self, ideal: IdealFactored) -> int:
        return sum(moebius_ideal(d) * self.phi(quotient(ideal, d)) for d in divisors(ideal))

    def _characters_with_value(self, ideal: IdealFactored, turn: Fraction) -> int:
        """Characters of Q = (O/a)^x / image whose value at the distinguished unit is exp(2 pi i turn)."""
        s = self.stats(ideal)
        if not s.element_orders:
            return s.quotient_order if turn % 1 == 0 else 0
        (order,) = s.element_orders.values()
        return s.quotient_order // order if (order * turn) % 1 == 0 else 0

    def phi_star_turn(self, ideal: IdealFactored, turn: Fraction) -> int:
        """Exact-conductor characters with prescribed value at the distinguished unit."""
        return sum(
            moebius_ideal(d) * self._characters_with_value(quotient(ideal, d), turn)
            for d in divisors(ideal)
        )

    def phi_star_u(self, ideal: IdealFactored, j: int) -> int:
        fc = self.fc
        if not (fc.is_gaussian or fc.is_eisenstein) or not 0 <= j < fc.unit_classes:
            raise ValueError(f"invalid unit index {j} for d = {fc.d}")
        return self.phi_star_turn(ideal, Fraction(j, fc.unit_classes))

    def archimedean_turn(self, k: int) -> Fraction:
        """chi_inf(z) = (z/|z|)^(2k) at i = exp(2 pi i/4) or zeta_6 = exp(2 pi i/6)."""
        if self.fc.is_gaussian:
            return Fraction(2 * k, 4) % 1
        if self.fc.is_eisenstein:
            return Fraction(2 * k, 6) % 1
        return Fraction(0)

    def pair_count(self, C: int, trivial_infinity: bool, infinity_type: int | None = None) -> int:
        """h times the number of compatible pairs (chi_inf, chi_f) of analytic conductor C."""
        fc = self.fc
        if C % fc.abs_disc:
            return 0
        n = C // fc.abs_disc
        if trivial_infinity:
            ks = [0]
        elif infinity_type is not None:
            ks = [infinity_type]
        else:
            ks = []
            k = 0
            while (1 + k) ** 2 <= n:
                ks.extend([k] if k == 0 else [k, -k])
                k += 1
        total = 0
        for k in ks:
            c_inf = (1 + abs(k)) ** 2
            if n % c_inf:
                continue
            turn = self.archimedean_turn(k)
            for ideal in enumerate_ideals_of_norm(fc, n // c_inf):
                total += self.phi_star_turn(ideal, turn)
        return fc.h * total


def phi_oracle(fc: FieldContext, ideal: IdealFactored, cap: int = DEFAULT_CAP) -> int:
    return Oracle(fc, cap).phi(ideal)


def phi_star_oracle(fc: FieldContext, ideal: IdealFactored, cap: int = DEFAULT_CAP) -> int:
    return Oracle(fc, cap).phi_star(ideal)


def phi_star_u_oracle(fc: FieldContext, ideal: IdealFactored, j: int, cap: int = DEFAULT_CAP) -> int:
    return Oracle(fc, cap).phi_star_u(ideal, j)


def pair_count_oracle(
    fc: FieldContext,
    C: int,
    trivial_infinity: bool,
    cap: int = DEFAULT_CAP,
    infinity_type: int | None = None,
) -> int:
    if C // fc.abs_disc > cap:
        raise OracleCapExceeded(f"C/|disc| = {C // fc.abs_disc} exceeds oracle cap {cap}")
    return Oracle(fc, cap).pair_count(C, trivial_infinity, infinity_type)
