from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from htl.scalars import (
    CaseTag, Scalar, EPS, ONE, Q, Z, ZERO, OddGradeAtIrrationalPoint,
    d_case, divide, eval_scalar, falling, gauss_binom, gauss_multinom,
    inv_sets, inv_stat, lambda_stat, pochhammer, q_pow, sigma_stat,
    tilde_inv_stat, w_poly, w_poly_rec_first, w_poly_rec_last,
)


def test_pochhammer_empty_product():
    assert pochhammer(Q, Q, 0) == ONE


def test_pochhammer_expansion():
    # (-q; q)_2 = (1+q)(1+q^2)
    assert pochhammer(-Q, Q, 2) == (ONE + Q) * (ONE + Q * Q)


def test_pochhammer_half_grade():
    # (q0; q0^2)_1 = 1 - q^(1/2)
    assert pochhammer(Z, Z * Z, 1) == ONE - Z


def test_falling_examples():
    assert falling(Q, 0) == ONE
    assert falling(Q, 2) == (Q - ONE) * (Q * Q - ONE)


@pytest.mark.parametrize("n", range(7))
def test_falling_vs_pochhammer(n):
    assert falling(Q, n) == (-1) ** n * pochhammer(Q, Q, n)


def test_gauss_binom_42():
    want = Q ** 4 + Q ** 3 + 2 * Q * Q + Q + ONE
    assert gauss_binom(4, 2, Q) == want


def test_gauss_binom_conventions():
    assert gauss_binom(3, -1, Q) == ZERO
    assert gauss_binom(2, 3, Q) == ZERO
    assert gauss_binom(-1, 0, Q) == ZERO
    for n in range(5):
        assert gauss_binom(n, 0, Q) == ONE
    assert gauss_multinom(3, (1, -1, 3), Q) == ZERO


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("m", range(0, 9))
def test_pascal_recurrence(n, m):
    if m > n:
        pytest.skip("out of range")
    lhs = gauss_binom(n, m, Q)
    rhs = gauss_binom(n - 1, m - 1, Q) + Q ** m * gauss_binom(n - 1, m, Q)
    assert lhs == rhs


def test_d_case_values():
    assert d_case(0, CaseTag("uH")) == ONE
    assert d_case(2, CaseTag("uH")) == Z ** 4      # q0^4
    assert d_case(2, CaseTag("A")) == Q ** 3
    assert d_case(2, CaseTag("S")) == Q


def test_seq_stats():
    assert inv_stat((2, 0, 1)) == 2
    assert tilde_inv_stat((2, 0, 1)) == 3
    assert inv_stat((0, 0, 1, 2)) == 0
    assert lambda_stat((1, 0, 1), 1) == 2
    assert sigma_stat((1, 0, 1)) == 2
    assert inv_sets([0, 2], [1, 3]) == 3


def test_w_poly_examples():
    assert w_poly(0, 3, 3) == ONE
    assert w_poly(0, 0, 4) == Scalar.integer(16)
    assert w_poly(Fraction(1, 2), 0, 1) == Z + Z.inverse()


@pytest.mark.parametrize("beta", [Fraction(0), Fraction(1, 2), Fraction(1),
                                  Fraction(3, 2)])
def test_w_poly_recursions(beta):
    for n in range(0, 7):
        for a in range(0, n + 1):
            w = w_poly(beta, a, n)
            assert w == w_poly_rec_last(beta, a, n)
            assert w == w_poly_rec_first(beta, a, n)


def test_eval_scalar():
    assert eval_scalar(Q + ONE, q=3) == 4
    assert eval_scalar(Z * (Q - ONE), z=3) == 24
    with pytest.raises(OddGradeAtIrrationalPoint):
        eval_scalar(Z, q=3)
    assert eval_scalar(ONE + EPS, q=5, eps=-1) == 0


def test_divide_exact_and_remainder():
    assert divide((Q - ONE) * (Q + ONE), Q - ONE) == Q + ONE
    from htl.scalars import InternalNonDivisible
    with pytest.raises(InternalNonDivisible):
        divide(Q + ONE, Q - ONE)


def test_eps_multiplication():
    assert EPS * EPS == ONE
    s = (ONE + Q * EPS) * (ONE - Q * EPS)
    assert s == ONE - Q * Q


scalars = st.builds(
    lambda pairs: sum((Scalar.monomial(g, Fraction(c, 2 ** d), eps=e)
                       for g, c, d, e in pairs), ZERO),
    st.lists(st.tuples(st.integers(-4, 4), st.integers(-9, 9),
                       st.integers(0, 3), st.booleans()), max_size=4))


@settings(max_examples=60, deadline=None)
@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b * c) == (a * b) * c
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@settings(max_examples=40, deadline=None)
@given(scalars)
def test_eps_free_closure(a):
    plain = a.plain_part()
    assert (plain * plain).eps_free()


@settings(max_examples=40, deadline=None)
@given(scalars)
def test_json_roundtrip(a):
    assert Scalar.from_json(a.to_json()) == a


def test_case_tag_validation():
    with pytest.raises(ValueError):
        CaseTag("A", "sharp")
    with pytest.raises(ValueError):
        CaseTag("X", "flat")
    assert CaseTag("uH").alpha == Fraction(1, 2)
    assert CaseTag("A").gamma == 2
