import pytest

from htl.kostka import (
    NonDivisible, c_type_sum_identity, elementary_paired_expansion,
    kostka_A_column, kostka_BCD, kostka_B_closed, kostka_D_closed, lk_row,
    script_S_enum, segment_weight, w_S_closed, w_S_poly,
)
from htl.scalars import ONE, Q, ZERO, gauss_binom


def test_segments_small():
    got = {(s.segments, segment_weight(s)) for s in script_S_enum(2, 4)}
    assert got == {(((0, 2),), 1), (((2, 4),), 3)}


def test_segments_empty_cases():
    assert list(script_S_enum(0, 8)) == []
    assert list(script_S_enum(3, 8)) == []


def test_w_examples():
    assert w_S_poly(2, 4) == Q ** 3 + Q
    assert w_S_poly(1, 8) == ZERO
    assert w_S_poly(2, 4) == Q * gauss_binom(2, 1, Q * Q)
    assert w_S_poly(0, 6) == ONE


def test_w_all_strategies_to_12():
    for n in range(13):
        for k in range(n + 1):
            w_S_poly(k, n)  # raises on any strategy disagreement


def test_kostka_a_column():
    assert kostka_A_column(2, 1) == Q
    for i in range(1, 6):
        assert kostka_A_column(i, 0) == ONE


@pytest.mark.parametrize("n", range(0, 7))
def test_kostka_bd_closed_forms(n):
    for k in range(n + 1):
        assert kostka_BCD("B", n, k) == kostka_B_closed(n, k)
        assert kostka_BCD("D", n, k) == kostka_D_closed(n, k)


def test_kostka_c_trivial():
    for n in range(1, 5):
        for a in range(n + 1):
            assert kostka_BCD("C", n, (a, a)) == ONE


def test_c_type_sum_identity():
    for n in range(1, 6):
        for i in range(n + 1):
            for d in range(i + 1):
                assert c_type_sum_identity(n, i, d)


def test_positivity_small():
    for n in range(0, 6):
        for k in range(n + 1):
            for kind in ("B", "D"):
                s = kostka_BCD(kind, n, k)
                for _, (a, b) in s.terms.items():
                    assert b == 0 and a == int(a) and a >= 0


def test_paired_expansions():
    for r in (1, 2, 3):
        for k in range(0, 2 * r + 2):
            for mid in (True, False):
                assert elementary_paired_expansion(r, k, mid)


def test_lk_row_examples():
    row = lk_row("A", 4, 2)
    assert row["lhs_weights"][4] == gauss_binom(4, 1, Q * Q)
    assert row["rhs_weights"][2] == 1
    row = lk_row("A", 4, 4)
    assert list(row["lhs_weights"]) == [4]
    assert row["lhs_weights"][4] == ONE and row["rhs_weights"][4] == 1
    row = lk_row("S-even", 5, 1)  # exact division in the weights
    for v in row["lhs_weights"].values():
        for _, (a, b) in v.terms.items():
            assert a.denominator == 1 and b == 0
    for v in row["rhs_weights"].values():
        assert isinstance(v, int)
