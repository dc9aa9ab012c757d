from math import gcd, prod

import numpy as np
from hypothesis import given, strategies as st

from normtorus._arith import (
    divisors,
    euler_phi,
    factorize,
    is_prime,
    moebius,
    moebius_table,
    multiplicative_table,
    primes_up_to,
    square_root_or_none,
)


def test_primes_up_to_small():
    assert list(primes_up_to(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_up_to(1)) == 0


@given(st.integers(1, 10**9))
def test_factorize_reassembles(n):
    f = factorize(n)
    assert prod(p**e for p, e in f) == n
    assert all(is_prime(p) and e >= 1 for p, e in f)
    assert [p for p, _ in f] == sorted({p for p, _ in f})


@given(st.integers(1, 5000))
def test_euler_phi_counts_coprime_residues(n):
    assert euler_phi(n) == sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


@given(st.integers(1, 5000))
def test_moebius_sums_to_indicator(n):
    assert sum(moebius(d) for d in divisors(n)) == (1 if n == 1 else 0)


def test_moebius_table_matches_pointwise():
    t = moebius_table(3000)
    assert [int(t[n]) for n in range(1, 3001)] == [moebius(n) for n in range(1, 3001)]


def test_multiplicative_table_matches_direct_product():
    def local(p, k):
        return p ** (k - 1) * (p + k)

    t = multiplicative_table(5000, local)
    for n in range(1, 5001):
        assert t[n] == prod(local(p, k) for p, k in factorize(n)), n
    assert t.dtype == np.int64


@given(st.integers(0, 10**12))
def test_square_root_or_none(n):
    r = square_root_or_none(n)
    if r is None:
        assert all(k * k != n for k in range(int(n**0.5) - 1, int(n**0.5) + 2))
    else:
        assert r * r == n
