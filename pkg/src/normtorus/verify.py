"""Verification suites pitting every closed form against an independent route."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from normtorus import charcount, lseries
from normtorus._arith import euler_phi, primes_up_to
from normtorus.field import FieldContext
from normtorus.ideals import divisors, iter_ideals_up_to, rational_content
from normtorus.oracle import Oracle

DEFAULT_FIELDS = (-1, -3, -7, -8, -11, -15, -20, -23)


@dataclass
class SuiteResult:
    suite: str
    passed: bool
    checked: int
    counterexample: str = ""


class _Mismatch(Exception):
    pass


def _expect(fc: FieldContext, where, expected, got) -> None:
    if expected != got:
        raise _Mismatch(f"d={fc.d} {where}: expected {expected}, got {got}")


def _sorted_ideals(fc: FieldContext, bound: int):
    return sorted(iter_ideals_up_to(fc, bound), key=lambda a: (a.norm, a.blocks))


@dataclass
class VerifyConfig:
    fields: list[FieldContext]
    n_max: int = 2000
    oracle_cap: int = 4096
    series_n: int = 100_000
    euler_p_max: int = 50
    euler_depth: int = 10


def _moebius_roundtrip(cfg: VerifyConfig, oracles) -> int:
    n = 0
    for fc in cfg.fields:
        for a in _sorted_ideals(fc, cfg.n_max):
            got = sum(charcount.phi_star_ideal(fc, d) for d in divisors(a))
            _expect(fc, f"sum of phi* over divisors of {a}", charcount.phi_ideal(fc, a), got)
            n += 1
    return n


def _oracle_phi(cfg: VerifyConfig, oracles) -> int:
    n = 0
    for fc in cfg.fields:
        o = oracles(fc)
        for a in _sorted_ideals(fc, min(cfg.n_max, cfg.oracle_cap)):
            s = o.stats(a)
            m = rational_content(a).m
            _expect(fc, f"rational content of {a}", m, s.rational_content)
            _expect(fc, f"rational image order at {a}", euler_phi(m), s.rational_image_order)
            _expect(fc, f"phi({a})", o.phi(a), charcount.phi_ideal(fc, a))
            n += 1
    return n


def _oracle_phi_star(cfg: VerifyConfig, oracles) -> int:
    n = 0
    for fc in cfg.fields:
        o = oracles(fc)
        for a in _sorted_ideals(fc, min(cfg.n_max, cfg.oracle_cap)):
            _expect(fc, f"phi*({a})", o.phi_star(a), charcount.phi_star_ideal(fc, a))
            n += 1
    return n


def _oracle_u(cfg: VerifyConfig, oracles) -> int:
    n = 0
    for fc in cfg.fields:
        if fc.unit_classes == 1:
            continue
        o = oracles(fc)
        for a in _sorted_ideals(fc, min(cfg.n_max, cfg.oracle_cap)):
            parts = []
            for j in range(fc.unit_classes):
                want = o.phi_star_u(a, j)
                _expect(fc, f"phi*_u({a}, j={j})", want, charcount.phi_star_u(fc, a, j))
                parts.append(want)
            _expect(fc, f"sum over unit values of phi*_u({a})", o.phi_star(a), sum(parts))
            n += 1
    return n


def _pair_count(cfg: VerifyConfig, oracles) -> int:
    n = 0
    for fc in cfg.fields:
        o = oracles(fc)
        for k in range(1, min(cfg.n_max, cfg.oracle_cap) + 1):
            C = k * fc.abs_disc
            for trivial in (True, False):
                want = o.pair_count(C, trivial)
                _expect(fc, f"pair count at C={C} trivial_infinity={trivial}", want,
                        charcount.count_conductor_exact(fc, C, trivial))
            _expect(fc, f"closed form at n={k}", charcount.closed_form_count(fc, k),
                    charcount.count_conductor_exact(fc, C, True))
            n += 1
    return n


def _euler_factors(cfg: VerifyConfig, oracles) -> int:
    n = 0
    for fc in cfg.fields:
        for p in primes_up_to(cfg.euler_p_max):
            p = int(p)
            if not lseries.verify_euler_factor(fc, p, 2.0, cfg.euler_depth):
                raise _Mismatch(f"d={fc.d} Euler factor at p={p} (depth {cfg.euler_depth})")
            n += 1
    return n


def _series_identities(cfg: VerifyConfig, oracles) -> int:
    n = 0
    N = cfg.series_n
    for fc in cfg.fields:
        checks = [
            ("L(s, phi*) at s=2", lseries.phi_star_identity_check(fc, 2.0, N)),
            ("L(s, phi*) at s=3", lseries.phi_star_identity_check(fc, 3.0, N)),
            ("L(s, Phi) at s=2", lseries.L_capital_phi_identity_check(fc, 2.0, N)),
            ("L(s, Phi1) at s=2", lseries.L_capital_phi1_identity_check(fc, 2.0, N)),
            ("primitive-ideal series at s=2", lseries.primitive_ideal_identity_check(fc, 2.0, min(N, 20_000))),
            ("primitive-ideal series at s=3", lseries.primitive_ideal_identity_check(fc, 3.0, min(N, 20_000))),
        ]
        zk = lseries.zeta_K(fc, 2.0)
        zk2 = lseries.zeta_K_by_coefficients(fc, 2.0)
        checks.append(("zeta_K(2) two ways", lseries.IdentityCheck(zk2, zk)))
        for name, chk in checks:
            if not chk.ok:
                raise _Mismatch(f"d={fc.d} {name}: residual {chk.residual:.3e} > bound {chk.bound:.3e}")
            n += 1
    return n


def _class_number_formula(cfg: VerifyConfig, oracles) -> int:
    for fc in cfg.fields:
        v = lseries.class_number_formula_value(fc)
        gap = abs(v.value - fc.h / fc.w)
        if gap >= 1e-6:
            raise _Mismatch(f"d={fc.d} class number formula: h/w = {fc.h}/{fc.w}, analytic {v.value!r}")
    return len(cfg.fields)


SUITES: dict[str, Callable[[VerifyConfig, Callable[[FieldContext], Oracle]], int]] = {
    "moebius-roundtrip": _moebius_roundtrip,
    "oracle-phi": _oracle_phi,
    "oracle-phi-star": _oracle_phi_star,
    "oracle-u": _oracle_u,
    "pair-count": _pair_count,
    "euler-factors": _euler_factors,
    "series-identities": _series_identities,
    "class-number-formula": _class_number_formula,
}


def run_suites(cfg: VerifyConfig, names: Iterable[str] | None = None) -> list[SuiteResult]:
    names = list(names) if names else list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    cache: dict[FieldContext, Oracle] = {}

    def oracles(fc: FieldContext) -> Oracle:
        if fc not in cache:
            cache[fc] = Oracle(fc, cfg.oracle_cap)
        return cache[fc]

    results = []
    for name in names:
        try:
            checked = SUITES[name](cfg, oracles)
        except _Mismatch as exc:
            results.append(SuiteResult(name, False, 0, str(exc)))
        else:
            results.append(SuiteResult(name, True, checked))
    return results
