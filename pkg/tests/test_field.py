from math import gcd

import pytest
from hypothesis import given, strategies as st

from normtorus._arith import is_squarefree, primes_up_to
from normtorus.field import (
    Splitting,
    count_reduced_forms,
    field_from_label,
    is_fundamental_discriminant,
    kronecker,
    new_field,
    splitting_type,
)

ODD_PRIMES = [int(p) for p in primes_up_to(400)[1:]]


@pytest.mark.parametrize(
    "d, disc, w, h",
    [(-1, -4, 4, 1), (-3, -3, 6, 1), (-23, -23, 2, 3), (-5, -20, 2, 2), (-2, -8, 2, 1), (-15, -15, 2, 2)],
)
def test_field_invariants(d, disc, w, h):
    fc = new_field(d)
    assert (fc.disc, fc.w, fc.h) == (disc, w, h)


@pytest.mark.parametrize("bad", [0, 1, 5, -4, -12, -18])
def test_new_field_rejects(bad):
    with pytest.raises(ValueError):
        new_field(bad)


def test_field_from_label_accepts_both_readings():
    assert field_from_label(-8) == new_field(-2)
    assert field_from_label(-20) == new_field(-5)
    assert field_from_label(-4) == new_field(-1)
    assert field_from_label(-15) == new_field(-15)
    with pytest.raises(ValueError):
        field_from_label(-12)
    with pytest.raises(ValueError):
        field_from_label(7)


def test_kronecker_examples():
    assert kronecker(-4, 5) == 1
    assert kronecker(-4, 3) == -1
    assert kronecker(-4, 2) == 0


@given(st.integers(-2000, -1), st.sampled_from(ODD_PRIMES))
def test_kronecker_is_euler_criterion_at_odd_primes(a, p):
    if a % p == 0:
        expected = 0
    else:
        expected = 1 if any((x * x - a) % p == 0 for x in range(p)) else -1
    assert kronecker(a, p) == expected


@given(st.integers(-500, 500), st.integers(1, 200), st.integers(1, 200))
def test_kronecker_multiplicative_in_n(a, m, n):
    assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)


def test_splitting_examples():
    fc = new_field(-1)
    assert splitting_type(fc, 5) is Splitting.SPLIT
    assert splitting_type(fc, 3) is Splitting.INERT
    assert splitting_type(fc, 2) is Splitting.RAMIFIED


@pytest.mark.parametrize("d", [-1, -2, -3, -5, -7, -11, -15, -23])
def test_splitting_matches_minimal_polynomial_roots(d):
    fc = new_field(d)
    for p in primes_up_to(200):
        p = int(p)
        kind = splitting_type(fc, p)
        roots = sum(1 for x in range(p) if (x * x - fc.omega_minpoly[0] * x + fc.omega_minpoly[1]) % p == 0)
        assert {Splitting.SPLIT: 2, Splitting.INERT: 0, Splitting.RAMIFIED: 1}[kind] == roots, (d, p)


def _brute_class_number(disc):
    # every primitive form a x^2 + b x y + c y^2 up to SL2(Z), via reduction
    seen = set()
    bound = 60
    for a in range(1, bound):
        for b in range(-bound, bound):
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            A, B, C = a, b, c
            while True:
                if C < A or (C == A and B < 0):
                    A, B, C = C, -B, A
                elif not -A < B <= A:
                    k = (A - B) // (2 * A)
                    B, C = B + 2 * k * A, A * k * k + B * k + C
                else:
                    break
            seen.add((A, B, C))
    return len(seen)


@pytest.mark.parametrize("disc", [-3, -4, -7, -8, -15, -20, -23, -47, -71, -84])
def test_count_reduced_forms_against_reduction(disc):
    assert count_reduced_forms(disc) == _brute_class_number(disc)


def test_count_reduced_forms_examples():
    assert count_reduced_forms(-4) == 1
    assert count_reduced_forms(-23) == 3
    assert count_reduced_forms(-20) == 2
    with pytest.raises(ValueError):
        count_reduced_forms(-12)


@given(st.integers(-3000, -3))
def test_fundamental_discriminant_shape(disc):
    expected = (disc % 4 == 1 and is_squarefree(disc)) or (
        disc % 4 == 0 and (disc // 4) % 4 in (2, 3) and is_squarefree(disc // 4)
    )
    assert is_fundamental_discriminant(disc) == expected
