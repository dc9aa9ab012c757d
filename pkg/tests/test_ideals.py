import pytest
from hypothesis import given, strategies as st

from normtorus.field import Splitting, kronecker, new_field, splitting_type
from normtorus._arith import divisors as int_divisors
from normtorus.ideals import (
    UNIT_IDEAL,
    IdealFactored,
    conjugate,
    divides,
    divisors,
    enumerate_ideals_of_norm,
    is_primitive,
    iter_ideals_up_to,
    make_ideal,
    moebius_ideal,
    multiply,
    quotient,
    rational_content,
)

GAUSS = new_field(-1)


def test_norm_examples():
    assert enumerate_ideals_of_norm(GAUSS, 1) == [UNIT_IDEAL]
    fives = enumerate_ideals_of_norm(GAUSS, 5)
    assert len(fives) == 2 and {a.norm for a in fives} == {5}
    assert enumerate_ideals_of_norm(GAUSS, 3) == []
    assert enumerate_ideals_of_norm(GAUSS, 9) == [make_ideal(GAUSS, {3: 1})]


def test_ideal_counts_are_zeta_coefficients(fc):
    # number of ideals of norm n is sum_{d | n} chi(d)
    counts = {}
    for a in iter_ideals_up_to(fc, 3000):
        counts[a.norm] = counts.get(a.norm, 0) + 1
    for n in range(1, 3001):
        expected = sum(kronecker(fc.disc, d) for d in int_divisors(n))
        assert counts.get(n, 0) == expected == len(enumerate_ideals_of_norm(fc, n)), n


def test_iter_yields_each_ideal_once(fc):
    ideals = list(iter_ideals_up_to(fc, 1500))
    assert len(ideals) == len(set(ideals))
    assert all(a.norm <= 1500 for a in ideals)


def test_moebius_examples():
    assert moebius_ideal(UNIT_IDEAL) == 1
    assert moebius_ideal(make_ideal(GAUSS, {5: (1, 1)})) == 1
    assert moebius_ideal(make_ideal(GAUSS, {2: 2})) == 0


def test_divisor_examples():
    assert divisors(UNIT_IDEAL) == [UNIT_IDEAL]
    assert len(divisors(make_ideal(GAUSS, {5: (2, 1)}))) == 6
    assert len(divisors(make_ideal(GAUSS, {2: 3}))) == 4


def test_moebius_inversion_on_ideal_lattice(fc):
    for a in iter_ideals_up_to(fc, 600):
        total = sum(moebius_ideal(d) for d in divisors(a))
        assert total == (1 if a.is_unit() else 0), a


def test_rational_content_examples():
    assert rational_content(make_ideal(GAUSS, {5: (1, 0)})).m == 5
    assert rational_content(make_ideal(GAUSS, {2: 1})).m == 2
    assert rational_content(make_ideal(GAUSS, {3: 1})).m == 3
    assert rational_content(make_ideal(GAUSS, {2: 3})).m == 4


def _principal_rational(fc, p):
    kind = splitting_type(fc, p)
    exps = {Splitting.SPLIT: (1, 1), Splitting.INERT: 1, Splitting.RAMIFIED: 2}[kind]
    return make_ideal(fc, {p: exps})


def test_primitive_means_no_rational_factor(fc):
    for a in iter_ideals_up_to(fc, 800):
        has_rational_factor = any(divides(_principal_rational(fc, p), a) for p in a.exponents())
        assert is_primitive(a) == (not has_rational_factor), a


def _ideals(fc, bound):
    return sorted(iter_ideals_up_to(fc, bound), key=lambda a: (a.norm, a.blocks))


@pytest.mark.parametrize("d", [-1, -3, -7, -5])
def test_multiply_quotient_roundtrip(d):
    fc = new_field(d)
    pool = _ideals(fc, 200)

    @given(st.sampled_from(pool), st.sampled_from(pool))
    def check(a, b):
        ab = multiply(a, b)
        assert ab.norm == a.norm * b.norm
        assert divides(a, ab) and divides(b, ab)
        assert quotient(ab, b) == a
        assert conjugate(conjugate(a)) == a
        assert conjugate(ab) == multiply(conjugate(a), conjugate(b))

    check()


def test_make_ideal_validation():
    with pytest.raises(ValueError):
        make_ideal(GAUSS, {5: 1})
    with pytest.raises(ValueError):
        make_ideal(GAUSS, {3: (1, 1)})
    with pytest.raises(ValueError):
        quotient(make_ideal(GAUSS, {3: 1}), make_ideal(GAUSS, {5: (1, 0)}))
    with pytest.raises(ValueError):
        IdealFactored(((5, Splitting.SPLIT, (1,)),))
