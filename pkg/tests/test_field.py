import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cigraph.field import (FieldError, Square, field_of_order, is_irreducible_mod_p,
                           least_irreducible, make_field, prime_power)

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 81]


def test_prime_power():
    assert prime_power(81) == (3, 4)
    assert prime_power(7) == (7, 1)
    for bad in (1, 6, 12, 0, -9):
        with pytest.raises(FieldError):
            prime_power(bad)


def test_least_irreducible_examples():
    assert least_irreducible(3, 2) == (1, 0, 1)  # x^2 + 1
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert not is_irreducible_mod_p((1, 0, 1), 5)  # x^2 + 1 = (x - 2)(x - 3) mod 5


@pytest.mark.parametrize("q", SMALL_Q)
def test_field_axioms_exhaustive(q):
    F = field_of_order(q)
    els = list(F.elements())
    assert len(els) == q
    for a, b in itertools.product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
        if b:
            assert F.mul(F.div(a, b), b) == a
    for a in els:
        assert F.add(a, 0) == a and F.mul(a, 1) == a
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, q) == a


@pytest.mark.parametrize("q", [9, 25, 27, 81])
def test_distributivity_and_associativity(q):
    F = field_of_order(q)
    els = list(F.elements())
    for a, b, c in itertools.product(els[::3] if q > 27 else els, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        make_field(7).inv(0)


@pytest.mark.parametrize("q", [5, 7, 9, 13, 25, 27, 49, 81])
def test_square_classification_matches_enumeration(q):
    F = field_of_order(q)
    squares = {F.mul(x, x) for x in F.elements() if x}
    assert len(squares) == (q - 1) // 2
    for a in F.elements():
        expected = Square.ZERO if a == 0 else (
            Square.NONZERO_SQUARE if a in squares else Square.NON_SQUARE)
        assert F.is_square(a) is expected
        assert F.chi(a) == {Square.ZERO: 0, Square.NONZERO_SQUARE: 1, Square.NON_SQUARE: -1}[expected]
        assert int(F.chi_table[a]) == F.chi(a)
        if expected is Square.NONZERO_SQUARE:
            r = F.sqrt(a)
            assert F.mul(r, r) == a
            assert r < F.neg(r)


def test_sqrt_examples():
    assert make_field(13).sqrt(12) == 5
    assert make_field(7).sqrt(2) == 3
    for bad in (0, 3):  # zero is not a nonzero square
        with pytest.raises(FieldError):
            make_field(7).sqrt(bad)


def test_even_characteristic_has_no_square_classes():
    with pytest.raises(FieldError):
        make_field(2, 3).is_square(1)


def test_frobenius_is_automorphism():
    F = make_field(3, 3)
    for a in F.elements():
        for b in F.elements():
            assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))


def test_element_wrapper():
    F = make_field(3, 2)
    a, b = F(4), F(7)
    assert int(a * b) == F.mul(4, 7)
    assert int(a - b) == F.sub(4, 7)
    assert (a / b) * b == a
    assert a ** (F.q - 1) == F(1)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([5, 7, 11, 9, 25, 27, 49, 81, 121]), st.data())
def test_random_identities(q, data):
    F = field_of_order(q)
    a = data.draw(st.integers(0, q - 1))
    b = data.draw(st.integers(1, q - 1))
    e = data.draw(st.integers(0, 3 * q))
    assert F.pow(a, e) == F.pow(a, e % (q - 1) if a and e else e) or a == 0
    assert F.div(F.mul(a, b), b) == a
    if a:
        assert F.chi(F.mul(a, a)) == 1
        assert F.chi(F.mul(a, b)) == F.chi(a) * F.chi(b)


def test_vectorised_ops_agree_with_scalar():
    import numpy as np

    F = make_field(3, 3)
    a = np.arange(F.q).repeat(F.q)
    b = np.tile(np.arange(F.q), F.q)
    assert all(int(s) == F.add(int(x), int(y)) for s, x, y in zip(F.vadd(a, b), a, b))
    assert all(int(s) == F.mul(int(x), int(y)) for s, x, y in zip(F.vmul(a, b), a, b))
