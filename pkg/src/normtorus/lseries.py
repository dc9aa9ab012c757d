"""Real-variable Dirichlet series with certified truncation bounds.

Every ``SeriesValue`` carries an absolute error bound that covers both the
truncation tail and floating-point summation error. Arithmetic on
``SeriesValue`` propagates the bounds conservatively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from normtorus import charcount
from normtorus.charcount import phi_star_ideal, phi_star_prime_power
from normtorus.field import FieldContext, Splitting, kronecker, splitting_type
from normtorus.ideals import enumerate_ideals_of_norm, is_primitive, iter_ideals_up_to

EPS = np.finfo(float).eps
MIN_S = 1.05

# B_2, B_4, ..., B_12
_BERNOULLI = [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
              Fraction(5, 66), Fraction(-691, 2730)]
_EM_ORDER = len(_BERNOULLI)


@dataclass(frozen=True)
class SeriesValue:
    value: float
    abs_error_bound: float
    terms_used: int = 1

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "abs_error_bound", float(self.abs_error_bound))
        if not (math.isfinite(self.abs_error_bound) and self.abs_error_bound >= 0):
            raise ValueError(f"invalid error bound {self.abs_error_bound}")

    @staticmethod
    def exact(x: float) -> "SeriesValue":
        return SeriesValue(float(x), abs(x) * EPS)

    def _lift(self, other) -> "SeriesValue":
        return other if isinstance(other, SeriesValue) else SeriesValue.exact(other)

    def _round(self, v: float, err: float, terms: int) -> "SeriesValue":
        return SeriesValue(v, err + 2 * EPS * abs(v), terms)

    def __add__(self, other):
        o = self._lift(other)
        return self._round(self.value + o.value, self.abs_error_bound + o.abs_error_bound,
                           max(self.terms_used, o.terms_used))

    __radd__ = __add__

    def __neg__(self):
        return SeriesValue(-self.value, self.abs_error_bound, self.terms_used)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        err = (abs(self.value) * o.abs_error_bound + abs(o.value) * self.abs_error_bound
               + self.abs_error_bound * o.abs_error_bound)
        return self._round(self.value * o.value, err, max(self.terms_used, o.terms_used))

    __rmul__ = __mul__

    def reciprocal(self) -> "SeriesValue":
        v, e = self.value, self.abs_error_bound
        if abs(v) <= e:
            raise ZeroDivisionError("interval contains zero")
        return self._round(1.0 / v, e / (abs(v) * (abs(v) - e)), self.terms_used)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def contains(self, x: float) -> bool:
        return abs(self.value - x) <= self.abs_error_bound


def _rising(s: float, m: int) -> float:
    out = 1.0
    for i in range(m):
        out *= s + i
    return out


def periodic_series(coeffs, s: float, blocks: int | None = None) -> SeriesValue:
    """sum_{n >= 1} c(n) n^-s for c periodic: c(n) = coeffs[(n - 1) % q].

    The first ``blocks`` periods are summed directly; the tail of each
    residue class is handled by Euler-Maclaurin to order 12 with the
    standard remainder bound. At s = 1 the coefficients must sum to zero
    over a period.
    """
    c = np.asarray(coeffs, dtype=float)
    q = len(c)
    if s < 1:
        raise ValueError("s must be >= 1")
    if s == 1 and abs(c.sum()) > 1e-12:
        raise ValueError("s = 1 needs coefficients summing to zero over a period")
    if blocks is None:
        blocks = max(40, -(-256 // q))
    K = blocks
    n = np.arange(1, K * q + 1, dtype=float)
    terms = np.tile(c, K) * n**-s
    head = math.fsum(terms)
    head_err = 4 * EPS * float(np.abs(terms).sum())

    a = np.arange(1, q + 1, dtype=float)
    base = K * q + a  # first omitted term of each class
    if s == 1:
        integral = -np.log(base) / q
    else:
        integral = base ** (1 - s) / (q * (s - 1))
    tail_cls = integral + 0.5 * base**-s
    for j, b2j in enumerate(_BERNOULLI, start=1):
        m = 2 * j - 1
        deriv = -_rising(s, m) * q**m * base ** (-s - m)  # f^(2j-1) is negative
        tail_cls = tail_cls - float(b2j) / math.factorial(2 * j) * deriv
    m = 2 * _EM_ORDER - 1
    zeta2p = 1.001  # >= zeta(12)
    rem = 2 * zeta2p / (2 * math.pi) ** (2 * _EM_ORDER) * _rising(s, m) * q**m * base ** (-s - m)
    tail = math.fsum(c * tail_cls)
    tail_err = float(np.abs(c) @ rem) + 8 * EPS * float(np.abs(c * tail_cls).sum())
    return SeriesValue(head + tail, head_err + tail_err + 2 * EPS * abs(head + tail), K * q)


def zeta(s: float) -> SeriesValue:
    if s < MIN_S:
        raise ValueError(f"s = {s} too close to 1 (need s >= {MIN_S})")
    return periodic_series([1.0], s)


def character_values(disc: int) -> list[int]:
    q = abs(disc)
    return [kronecker(disc, n) for n in range(1, q + 1)]


def dirichlet_L(disc: int, s: float) -> SeriesValue:
    """L(s, chi_disc) for the Kronecker character of a fundamental discriminant, s >= 1."""
    return periodic_series(character_values(disc), s)


def zeta_K(fc: FieldContext, s: float) -> SeriesValue:
    if s < MIN_S:
        raise ValueError(f"s = {s} too close to 1 (need s >= {MIN_S})")
    return zeta(s) * dirichlet_L(fc.disc, s)


def _character_sum_bound(disc: int) -> int:
    partial = np.cumsum(character_values(disc))
    return int(np.max(np.abs(partial)))


def ideal_counts(fc: FieldContext, N: int) -> np.ndarray:
    """r(n) = sum_{m | n} chi(m), the number of ideals of norm n, for n <= N."""
    q = fc.abs_disc
    chi = np.array(character_values(fc.disc), dtype=np.int64)
    r = np.zeros(N + 1, dtype=np.int64)
    for m in range(1, N + 1):
        v = chi[(m - 1) % q]
        if v:
            r[m::m] += v
    return r


def _ideal_count_tail(fc: FieldContext, s: float, N: int, R_N: int) -> SeriesValue:
    """Certified value of sum_{n > N} r(n) n^-s.

    With R(x) = L(1, chi) x + E(x), the hyperbola method gives
    |E(x)| <= (4B + 1) sqrt(x), B the maximal partial character sum, and
    partial summation turns that into the bound below.
    """
    L1 = dirichlet_L(fc.disc, 1.0)
    B = _character_sum_bound(fc.disc)
    main = -R_N * N**-s + s * L1 * (N ** (1 - s) / (s - 1))
    err = s * (4 * B + 1) * N ** (0.5 - s) / (s - 0.5)
    return SeriesValue(main.value, main.abs_error_bound + err, N)


def zeta_K_by_coefficients(fc: FieldContext, s: float, N: int = 200_000) -> SeriesValue:
    """zeta_K(s) as sum r(n) n^-s, independent of the zeta * L factorization."""
    if s < MIN_S:
        raise ValueError(f"s = {s} too close to 1 (need s >= {MIN_S})")
    r = ideal_counts(fc, N)
    n = np.arange(1, N + 1, dtype=float)
    terms = r[1:] * n**-s
    head = SeriesValue(math.fsum(terms), 4 * EPS * float(np.abs(terms).sum()), N)
    return head + _ideal_count_tail(fc, s, N, int(r.sum()))


# ---------------------------------------------------------------- phi* series


def _square_support_tail(s: float, N: int, log_weight: bool = False) -> float:
    """Bound for sum_{n > N, n = m^2} g(n) n^-s with g(m^2) <= m, or <= 2 m (1 + ln m).

    Both summands are decreasing in m here, so the tail sum is at most the
    integral from M = floor(sqrt N).
    """
    M = math.isqrt(N)
    e = 2 * s - 2  # m * m^-2s = m^-(e+1)
    if not log_weight:
        return M**-e / e
    return 2 * ((1 + math.log(M)) * M**-e / e + M**-e / e**2)


def L_phi_star_truncated(fc: FieldContext, s: float, N: int) -> SeriesValue:
    """sum over ideals of norm <= N of phi*(a) N(a)^-s, with a tail bound.

    phi* vanishes off square norms and phi*(m^2) <= m, which the prime-power
    table makes evident; that gives the tail estimate.
    """
    if s < MIN_S:
        raise ValueError(f"s = {s} too close to 1 (need s >= {MIN_S})")
    terms = []
    for ideal in iter_ideals_up_to(fc, N):
        v = phi_star_ideal(fc, ideal)
        if v:
            terms.append(v * float(ideal.norm) ** -s)
    acc = math.fsum(terms)
    err = 4 * EPS * acc + _square_support_tail(s, N)
    return SeriesValue(acc, err, N)


def L_phi_star_closed(fc: FieldContext, s: float) -> SeriesValue:
    return zeta(2 * s - 1) / zeta_K(fc, 2 * s)


_LOCAL_NUMERATORS = {
    Splitting.SPLIT: [1, -2, 1],
    Splitting.INERT: [1, 0, -1],
    Splitting.RAMIFIED: [1, -1],
}


def local_factor_coefficients(kind: Splitting, p: int, depth: int) -> list[int]:
    """X^0..X^depth coefficients of the closed local factor, X = p^-2s."""
    numer = _LOCAL_NUMERATORS[kind]
    # (numerator) * sum_i p^i X^i
    return [
        sum(numer[i] * p ** (k - i) for i in range(min(k, len(numer) - 1) + 1))
        for k in range(depth + 1)
    ]


def verify_euler_factor(fc: FieldContext, p: int, s: float, depth: int) -> bool:
    """Compare the local factor of zeta(2s-1)/zeta_K(2s) at p with phi* over ideals above p.

    In X = p^-2s the closed factor is (1-X)^2/(1-pX), (1-X^2)/(1-pX) or
    (1-X)/(1-pX) for split, inert, ramified p. Its X^k coefficient must equal
    the sum of phi* over ideals of norm p^(2k), and ideals of odd norm
    exponent must contribute nothing. A numeric evaluation at s is checked
    last.
    """
    if depth > 20:
        raise ValueError("depth must be <= 20")
    kind = splitting_type(fc, p)
    numer = _LOCAL_NUMERATORS[kind]
    coeffs = local_factor_coefficients(kind, p, depth)
    for j in range(2 * depth + 1):
        total = sum(phi_star_ideal(fc, a) for a in enumerate_ideals_of_norm(fc, p**j))
        expected = coeffs[j // 2] if j % 2 == 0 else 0
        if total != expected:
            return False
        if total != phi_star_prime_power(kind, p, j):
            return False
    X = float(p) ** (-2 * s)
    closed = np.polyval(numer[::-1], X) / (1 - p * X)
    partial = sum(c * X**k for k, c in enumerate(coeffs))
    # coefficients are bounded by p^k (1 + 1/p)^2, a geometric tail in pX
    pX = p * X
    if pX >= 1:
        return True
    tail = 4 * pX ** (depth + 1) / (1 - pX)
    return abs(closed - partial) <= tail + 1e-12 * abs(closed)


# ---------------------------------------------------------------- Phi series


def L_capital_phi_closed(fc: FieldContext, s: float) -> SeriesValue:
    """sum Phi(n) n^-s in closed form, for each field class."""
    z2s = zeta(2 * s)
    main = (2 * z2s - 1) * zeta(2 * s - 1) / zeta_K(fc, 2 * s)
    if fc.is_gaussian:
        extra = (2 * (1 - 2 * 2.0 ** (-2 * s)) * z2s - 1) / z2s
        return 0.5 * main + 0.5 * extra
    if fc.is_eisenstein:
        L3 = dirichlet_L(-3, 2 * s)
        extra = ((1 - 3 * 3.0 ** (-2 * s)) / 3 * z2s + L3 - 2 / 3) / z2s
        return (1 / 3) * main + extra
    return main


def L_capital_phi1_closed(fc: FieldContext, s: float) -> SeriesValue:
    main = zeta(2 * s - 1) / zeta_K(fc, 2 * s)
    m = fc.unit_classes
    if m == 1:
        return main
    return (1 / m) * main + ((m - 1) / m) / zeta(2 * s)


def L_capital_phi_by_unit_values(fc: FieldContext, s: float) -> SeriesValue:
    """The same series assembled from the unit-refined series, before simplification."""
    z2s = zeta(2 * s)
    Lstar = L_phi_star_closed(fc, s)
    if fc.is_gaussian:
        L_plus = 0.5 * Lstar + 0.5 / z2s
        L_minus = 0.5 * Lstar - 0.5 / z2s
        return 2 * (1 - 2.0 ** (-2 * s)) * z2s * L_plus + 2 * 2.0 ** (-2 * s) * z2s * L_minus - L_plus
    if fc.is_eisenstein:
        L1 = (1 / 3) * Lstar + (2 / 3) / z2s
        Lz = (1 / 3) * Lstar - (1 / 3) / z2s
        L3 = dirichlet_L(-3, 2 * s)
        a = (1 - 3.0 ** (-2 * s)) * z2s
        return (a + L3) * L1 + (a - L3) * Lz + 2 * 3.0 ** (-2 * s) * z2s * Lz - L1
    return (2 * z2s - 1) * Lstar


@dataclass(frozen=True)
class IdentityCheck:
    truncated: SeriesValue
    closed: SeriesValue

    @property
    def residual(self) -> float:
        return abs(self.truncated.value - self.closed.value)

    @property
    def bound(self) -> float:
        return self.truncated.abs_error_bound + self.closed.abs_error_bound

    @property
    def ok(self) -> bool:
        return self.residual <= self.bound


def _truncated_table_series(values: np.ndarray, s: float, N: int) -> SeriesValue:
    n = np.arange(1, N + 1, dtype=float)
    terms = values[1 : N + 1] * n**-s
    total = math.fsum(terms)
    return SeriesValue(total, 4 * EPS * float(np.abs(terms).sum()) + _square_support_tail(s, N, log_weight=True), N)


def L_capital_phi_identity_check(fc: FieldContext, s: float, N: int) -> IdentityCheck:
    """Truncated sum Phi(n) n^-s against its closed form.

    Phi lives on squares with Phi(m^2) <= 2 sigma(m) <= 2 m (1 + ln m).
    """
    if s < MIN_S:
        raise ValueError(f"s = {s} too close to 1 (need s >= {MIN_S})")
    t = charcount.tables(fc, N)
    return IdentityCheck(_truncated_table_series(t.Phi, s, N), L_capital_phi_closed(fc, s))


def L_capital_phi1_identity_check(fc: FieldContext, s: float, N: int) -> IdentityCheck:
    if s < MIN_S:
        raise ValueError(f"s = {s} too close to 1 (need s >= {MIN_S})")
    t = charcount.tables(fc, N)
    return IdentityCheck(_truncated_table_series(t.Phi1, s, N), L_capital_phi1_closed(fc, s))


def phi_star_identity_check(fc: FieldContext, s: float, N: int) -> IdentityCheck:
    return IdentityCheck(L_phi_star_truncated(fc, s, N), L_phi_star_closed(fc, s))


def primitive_ideal_identity_check(fc: FieldContext, s: float, N: int) -> IdentityCheck:
    """zeta(2s) * (sum over primitive ideals of N(a)^-s) against zeta_K(s).

    Primitive ideals of norm n number at most r(n), so the zeta_K tail
    bounds the omitted part.
    """
    counts = np.zeros(N + 1, dtype=np.int64)
    for ideal in iter_ideals_up_to(fc, N):
        if is_primitive(ideal):
            counts[ideal.norm] += 1
    n = np.arange(1, N + 1, dtype=float)
    terms = counts[1:] * n**-s
    r_total = int(ideal_counts(fc, N).sum())
    tail = _ideal_count_tail(fc, s, N, r_total)
    W = SeriesValue(math.fsum(terms), 4 * EPS * float(terms.sum()) + abs(tail.value) + tail.abs_error_bound, N)
    return IdentityCheck(zeta(2 * s) * W, zeta_K(fc, s))


# ---------------------------------------------------------------- asymptotics


def leading_constant(fc: FieldContext, trivial_infinity: bool) -> float:
    """Coefficient of X in the count of forms with analytic conductor <= X."""
    z2 = zeta(2.0).value
    zk = zeta_K(fc, 2.0).value
    factor = 1.0 if trivial_infinity else 2 * z2 - 1
    return fc.h / fc.w * factor / zk / fc.abs_disc


@dataclass(frozen=True)
class AsymptoticReport:
    Y: int
    partial_sum: int
    main_term: float
    abs_error: float
    fitted_exponent: float
    sup_error: float = 0.0
    envelope_exponent: float = 0.0

    @property
    def rel_error(self) -> float:
        return self.abs_error / self.main_term


MAX_CUTOFF = 10**7


def fit_exponent(Ys, errors) -> float:
    """Least-squares slope of log|error| against log Y."""
    Ys = np.asarray(Ys, dtype=float)
    errors = np.maximum(np.asarray(errors, dtype=float), 1e-300)
    slope, _ = np.polyfit(np.log(Ys), np.log(errors), 1)
    return float(slope)


def asymptotic_report(fc: FieldContext, Y_grid, trivial_infinity: bool = False) -> list[AsymptoticReport]:
    """Partial sums of Phi (or Phi1) up to each Y against the residue main term.

    The main term is (1/w)(2 zeta(2) - 1)/zeta_K(2) * Y, resp.
    (1/w)/zeta_K(2) * Y, i.e. leading_constant * |disc| / h * Y.

    fitted_exponent regresses the pointwise error at the grid points.
    Because the error is a sawtooth (jumps at squares), a grid point can land
    near a zero crossing; sup_error = max over y <= Y of |error(y)| and its
    slope envelope_exponent are reported alongside as a steadier diagnostic.
    """
    Y_grid = sorted(int(y) for y in Y_grid)
    if len(Y_grid) < 5:
        raise ValueError("the exponent fit needs at least 5 grid points")
    if Y_grid[0] < 1 or Y_grid[-1] > MAX_CUTOFF:
        raise ValueError(f"cutoffs must lie in [1, {MAX_CUTOFF}]")
    t = charcount.tables(fc, Y_grid[-1])
    cum = t.Phi1_cum if trivial_infinity else t.Phi_cum
    slope = leading_constant(fc, trivial_infinity) * fc.abs_disc / fc.h
    sums = [int(cum[y]) for y in Y_grid]
    mains = [slope * y for y in Y_grid]
    errs = [abs(a - b) for a, b in zip(sums, mains)]
    exponent = fit_exponent(Y_grid, errs)
    ys = np.arange(Y_grid[-1] + 1, dtype=float)
    running = np.maximum.accumulate(np.abs(cum[: Y_grid[-1] + 1] - slope * ys))
    sups = [float(running[y]) for y in Y_grid]
    envelope = fit_exponent(Y_grid, sups)
    return [
        AsymptoticReport(y, ps, mt, er, exponent, sup, envelope)
        for y, ps, mt, er, sup in zip(Y_grid, sums, mains, errs, sups)
    ]


def class_number_formula_value(fc: FieldContext) -> SeriesValue:
    """(2 pi)^-1 sqrt|disc| L(1, chi_disc), which should equal h / w."""
    return dirichlet_L(fc.disc, 1.0) * (math.sqrt(fc.abs_disc) / (2 * math.pi))
