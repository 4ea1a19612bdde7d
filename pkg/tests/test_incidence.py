import math

import pytest
from hypothesis import given, settings, strategies as st

from htl.incidence import (
    CASE_FAMILY_INDEX, IncidenceElem, NonUnitDiagonal, PosetWindow,
    WindowMismatch, convolve, family, formal_implication_check, from_formula,
    identity_elem, invert, scale_auto, verify_family_identities,
)
from htl.scalars import CaseTag, ONE, Q, Scalar, ZERO, gauss_binom, q_pow


W6 = PosetWindow(0, 6)


def _qbinom_elem(window=W6):
    return from_formula(window, lambda x, y: gauss_binom(int(y), int(x), Q))


def test_identity_neutral():
    f = _qbinom_elem()
    assert convolve(identity_elem(W6), f) == f
    assert convolve(f, identity_elem(W6)) == f


def test_qbinom_inverse_formula():
    inv = invert(_qbinom_elem())
    for x in range(7):
        for y in range(x, 7):
            want = ((-1) ** (y - x) * gauss_binom(y, x, Q)
                    * q_pow(math.comb(y - x, 2)))
            assert inv.get(x, y) == want


def test_invert_two_sided_and_involutive():
    f = _qbinom_elem()
    inv = invert(f)
    assert convolve(f, inv) == identity_elem(W6)
    assert convolve(inv, f) == identity_elem(W6)
    assert invert(inv) == f


def test_window_mismatch():
    with pytest.raises(WindowMismatch):
        convolve(_qbinom_elem(), identity_elem(PosetWindow(0, 4)))


def test_non_unit_diagonal():
    bad = from_formula(W6, lambda x, y: Q + ONE if x == y else ONE)
    with pytest.raises(NonUnitDiagonal):
        invert(bad)


def test_scale_auto_trivial_and_morphism():
    f = _qbinom_elem()
    assert scale_auto(f, lambda x: ONE) == f
    h = lambda x: Q ** x + ONE
    g = invert(f)
    lhs = scale_auto(convolve(f, g), h)
    rhs = convolve(scale_auto(f, h), scale_auto(g, h))
    assert lhs == rhs


def test_family_diagonals_are_one():
    for i in (1, 2, 3, 4, 5):
        for which in "ABCD":
            elem = family(i, which, PosetWindow(0, 4))
            for x in range(5):
                assert elem.get(x, x) == ONE, (i, which, x)


def test_family_e5_entry():
    elem = family(5, "E", PosetWindow(0, 4))
    for x in range(5):
        for y in range(x, 5):
            want = (-1) ** (y - x) * gauss_binom(2 * y, y - x, Q)
            assert elem.get(x, y) == want


def test_family_c2_entry():
    elem = family(2, "C", PosetWindow(0, 3))
    assert elem.get(0, 1) == gauss_binom(2, 1, -Q) == ONE - Q


@pytest.mark.parametrize("i", [1, 2, 3, 4, 5])
def test_family_identities_window6(i):
    rep = verify_family_identities(i, W6)
    assert rep["ok"], rep


def test_degenerate_window():
    rep = verify_family_identities(3, PosetWindow(0, 0))
    assert rep["ok"]


@pytest.mark.parametrize("label", list(CASE_FAMILY_INDEX))
def test_formal_implication(label):
    fam, var = label
    case = CaseTag(fam, var)
    rep = formal_implication_check(case, 2)
    assert rep["ok"], rep
    assert "s_1(mu)" in rep["consequence"][1]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_convolution_associative(a, b, c):
    w = PosetWindow(0, 4)
    f = from_formula(w, lambda x, y: Q ** (int(x) + a) + ONE)
    g = from_formula(w, lambda x, y: Q ** (int(y - x) * b) - Q)
    h = from_formula(w, lambda x, y: Scalar.integer(c + 1))
    assert convolve(f, convolve(g, h)) == convolve(convolve(f, g), h)
