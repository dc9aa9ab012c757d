"""Integral ideals of O_K kept in factored form over the rational primes.

A split prime p = P * Pbar carries an exponent pair (e, ebar). Which prime
is P is an abstract label fixed per field (the oracle ties it to the smaller
root of the minimal polynomial of omega mod p); every counting function
here is symmetric under swapping the pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Mapping

from normtorus._arith import factorize, primes_up_to
from normtorus.field import FieldContext, Splitting, splitting_type

Block = tuple[int, Splitting, tuple[int, ...]]


@dataclass(frozen=True)
class IdealFactored:
    blocks: tuple[Block, ...] = ()

    def __post_init__(self):
        last = 0
        for p, kind, exps in self.blocks:
            if p <= last:
                raise ValueError("blocks must be sorted by prime without repeats")
            last = p
            if len(exps) != (2 if kind is Splitting.SPLIT else 1):
                raise ValueError(f"bad exponent data {exps} for {kind.value} prime {p}")
            if min(exps) < 0 or not any(exps):
                raise ValueError(f"bad exponent data {exps} at {p}")

    @property
    def norm(self) -> int:
        n = 1
        for p, kind, exps in self.blocks:
            if kind is Splitting.INERT:
                n *= p ** (2 * exps[0])
            else:
                n *= p ** sum(exps)
        return n

    def is_unit(self) -> bool:
        return not self.blocks

    def exponents(self) -> dict[int, tuple[int, ...]]:
        return {p: exps for p, _, exps in self.blocks}

    def __repr__(self) -> str:
        if not self.blocks:
            return "(1)"
        parts = []
        for p, kind, exps in self.blocks:
            if kind is Splitting.SPLIT:
                parts.append(f"P{p}^{exps[0]}*Pbar{p}^{exps[1]}")
            else:
                parts.append(f"P{p}^{exps[0]}")
        return "*".join(parts)


@dataclass(frozen=True)
class RationalContent:
    """Positive generator m of the ideal's intersection with Z."""

    m: int


UNIT_IDEAL = IdealFactored()


def _make(blocks: dict[int, tuple[Splitting, tuple[int, ...]]]) -> IdealFactored:
    return IdealFactored(
        tuple((p, kind, exps) for p, (kind, exps) in sorted(blocks.items()) if any(exps))
    )


def make_ideal(fc: FieldContext, exps: Mapping[int, int | tuple[int, int]]) -> IdealFactored:
    """Ideal from {p: e} (inert/ramified) or {p: (e, ebar)} (split)."""
    blocks = {}
    for p, e in exps.items():
        kind = splitting_type(fc, p)
        if kind is Splitting.SPLIT:
            if isinstance(e, int):
                raise ValueError(f"split prime {p} needs an exponent pair")
            blocks[p] = (kind, tuple(e))
        else:
            if not isinstance(e, int):
                raise ValueError(f"{kind.value} prime {p} takes a single exponent")
            blocks[p] = (kind, (e,))
    return _make(blocks)


def multiply(a: IdealFactored, b: IdealFactored) -> IdealFactored:
    blocks = {p: (kind, exps) for p, kind, exps in a.blocks}
    for p, kind, exps in b.blocks:
        if p in blocks:
            exps = tuple(x + y for x, y in zip(blocks[p][1], exps))
        blocks[p] = (kind, exps)
    return _make(blocks)


def divides(d: IdealFactored, a: IdealFactored) -> bool:
    ea = a.exponents()
    for p, _, exps in d.blocks:
        if p not in ea or any(x > y for x, y in zip(exps, ea[p])):
            return False
    return True


def quotient(a: IdealFactored, d: IdealFactored) -> IdealFactored:
    """a * d^-1 for d | a."""
    if not divides(d, a):
        raise ValueError(f"{d} does not divide {a}")
    ed = d.exponents()
    blocks = {}
    for p, kind, exps in a.blocks:
        sub = ed.get(p, (0,) * len(exps))
        blocks[p] = (kind, tuple(x - y for x, y in zip(exps, sub)))
    return _make(blocks)


def conjugate(a: IdealFactored) -> IdealFactored:
    """Swap P and Pbar at every split prime."""
    return IdealFactored(
        tuple((p, kind, exps[::-1]) for p, kind, exps in a.blocks)
    )


def _local_patterns(kind: Splitting, k: int) -> list[tuple[int, ...]]:
    """Exponent data of the ideals of norm p^k supported over p."""
    if kind is Splitting.SPLIT:
        return [(e, k - e) for e in range(k + 1)]
    if kind is Splitting.INERT:
        return [(k // 2,)] if k % 2 == 0 else []
    return [(k,)]


def enumerate_ideals_of_norm(fc: FieldContext, n: int) -> list[IdealFactored]:
    if n < 1:
        raise ValueError("norm must be positive")
    per_prime = []
    for p, k in factorize(n):
        kind = splitting_type(fc, p)
        pats = _local_patterns(kind, k)
        if not pats:
            return []
        per_prime.append([(p, kind, pat) for pat in pats])
    return [
        _make({p: (kind, pat) for p, kind, pat in choice})
        for choice in product(*per_prime)
    ]


def iter_ideals_up_to(fc: FieldContext, bound: int) -> Iterator[IdealFactored]:
    """Every ideal of norm <= bound, each exactly once (order unspecified)."""
    primes = [int(p) for p in primes_up_to(bound)]
    kinds = [splitting_type(fc, p) for p in primes]

    def rec(start: int, norm: int, blocks: list[Block]) -> Iterator[IdealFactored]:
        yield IdealFactored(tuple(blocks))
        for i in range(start, len(primes)):
            p, kind = primes[i], kinds[i]
            if norm * p > bound:
                break
            pn = p * p if kind is Splitting.INERT else p
            if norm * pn > bound:
                continue
            e_max = 0
            q = norm
            while q * pn <= bound:
                q *= pn
                e_max += 1
            if kind is Splitting.SPLIT:
                for e in range(e_max + 1):
                    for eb in range(e_max + 1 - e):
                        if e + eb == 0:
                            continue
                        yield from rec(i + 1, norm * p ** (e + eb), blocks + [(p, kind, (e, eb))])
            else:
                for e in range(1, e_max + 1):
                    yield from rec(i + 1, norm * pn**e, blocks + [(p, kind, (e,))])

    yield from rec(0, 1, [])


def moebius_ideal(a: IdealFactored) -> int:
    sign = 1
    for _, _, exps in a.blocks:
        for e in exps:
            if e >= 2:
                return 0
            if e == 1:
                sign = -sign
    return sign


def divisors(a: IdealFactored) -> list[IdealFactored]:
    choices = []
    for p, kind, exps in a.blocks:
        choices.append([(p, kind, sub) for sub in product(*(range(e + 1) for e in exps))])
    return [_make({p: (kind, sub) for p, kind, sub in pick}) for pick in product(*choices)]


def rational_content(a: IdealFactored) -> RationalContent:
    m = 1
    for p, kind, exps in a.blocks:
        if kind is Splitting.SPLIT:
            m *= p ** max(exps)
        elif kind is Splitting.INERT:
            m *= p ** exps[0]
        else:
            m *= p ** ((exps[0] + 1) // 2)
    return RationalContent(m)


def is_primitive(a: IdealFactored) -> bool:
    """True when no rational integer > 1 divides a."""
    for _, kind, exps in a.blocks:
        if kind is Splitting.SPLIT and min(exps) > 0:
            return False
        if kind is Splitting.INERT:
            return False
        if kind is Splitting.RAMIFIED and exps[0] >= 2:
            return False
    return True
