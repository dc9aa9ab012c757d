"""Small integer helpers shared by the counting modules."""

from __future__ import annotations

from functools import lru_cache
from math import isqrt

import numpy as np


def primes_up_to(n: int) -> np.ndarray:
    """Sieve of Eratosthenes; returns the primes <= n as an int64 array."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


@lru_cache(maxsize=65536)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Trial-division factorization as sorted ((p, e), ...)."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p = 5
    step = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == ((n, 1),)


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(abs(n)))


def moebius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def square_root_or_none(n: int) -> int | None:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def moebius_table(n: int) -> np.ndarray:
    """mu(0..n) by sieve, mu(0) = 0."""
    mu = np.ones(n + 1, dtype=np.int64)
    mu[0] = 0
    for p in primes_up_to(n):
        p = int(p)
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu


def multiplicative_table(n: int, local) -> np.ndarray:
    """Values f(0..n) of the multiplicative f with f(p^k) = local(p, k).

    Entries are int64; f(0) is set to 0.
    """
    out = np.ones(n + 1, dtype=np.int64)
    out[0] = 0
    for p in primes_up_to(n):
        p = int(p)
        if p * p > n:
            out[p::p] *= local(p, 1)
            continue
        pk, k = p, 1
        while pk <= n:
            m = np.arange(pk, n + 1, pk)
            exact = m[(m // pk) % p != 0]
            out[exact] *= local(p, k)
            pk *= p
            k += 1
    return out
