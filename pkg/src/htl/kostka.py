"""Kostka-Foulkes polynomials for one-column weights.

Covers: the type-A column formula, the even-segment enumeration that
computes types B and D, the C-type reduction, and the rows identifying the
coarse lattice operators with exterior-power characters (including the
exact expansion of elementary symmetric polynomials in paired variables).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from htl.scalars import (
    Scalar, Z, ZERO, ONE, Q, divide, gauss_binom, q_pow, InternalNonDivisible,
)

__all__ = [
    "EvenSegments", "NonDivisible", "kostka_A_column", "script_S_enum",
    "segment_weight", "w_S_poly", "w_S_enum", "w_S_rec_tail", "w_S_rec_finite",
    "w_S_closed", "kostka_BCD", "kostka_B_closed", "kostka_D_closed",
    "c_type_sum_identity", "lk_row", "elementary_paired_expansion",
]


class NonDivisible(Exception):
    """Exact division required by a closed form failed."""


def _comb0(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


@dataclass(frozen=True)
class EvenSegments:
    """Disjoint increasing segments (a_i, b_i] with even endpoints in [0, M]."""

    segments: tuple
    bound: int

    def __post_init__(self):
        prev = -1
        for a, b in self.segments:
            if a % 2 or b % 2 or not (prev < a < b <= self.bound):
                raise ValueError(f"bad segments {self.segments}")
            prev = b

    @property
    def size(self) -> int:
        return sum(b - a for a, b in self.segments)


def segment_weight(s: EvenSegments) -> int:
    return sum(a + b for a, b in s.segments) // 2


def script_S_enum(k: int, m: int):
    """All even-segment sets of total size k in [0, m] (at least one segment)."""
    if k <= 0 or k % 2:
        return
    evens = list(range(0, m + 1, 2))

    def rec(start_idx, remaining, acc):
        if remaining == 0:
            yield EvenSegments(tuple(acc), m)
            return
        for ai in range(start_idx, len(evens)):
            a = evens[ai]
            for bi in range(ai + 1, len(evens)):
                b = evens[bi]
                if b - a > remaining:
                    break
                acc.append((a, b))
                yield from rec(bi + 1, remaining - (b - a), acc)
                acc.pop()

    yield from rec(0, k, [])


def w_S_enum(k: int, n: int, t: Scalar = Q) -> Scalar:
    """Weight generating sum over the even-segment sets of size k in [0, n].

    k = 0 contributes the empty set with weight 0 (needed so the one-column
    Kostka value at the zero weight is 1).
    """
    if k == 0:
        return ONE
    out = ZERO
    for s in script_S_enum(k, n):
        out = out + t ** segment_weight(s)
    return out


def w_S_rec_tail(k: int, n2: int, t: Scalar = Q) -> Scalar:
    """Recursion obtained by splitting off the last segment (even n2 = 2n)."""
    n2 = 2 * (n2 // 2)
    if k == 0:
        return ONE
    if k < 0 or k % 2 or n2 < 2:
        return ZERO
    out = w_S_rec_tail(k, n2 - 2, t)
    i = 1
    while k - 2 * i >= 0 and n2 - 2 * i >= 0:
        out = out + t ** (n2 - i) * w_S_rec_tail(k - 2 * i, n2 - 2 * i - 2, t)
        i += 1
    return out


def w_S_rec_finite(k: int, n2: int, t: Scalar = Q, _memo=None) -> Scalar:
    """Three-term finite recurrence equivalent to the tail recursion."""
    if _memo is None:
        _memo = {}
    n2 = 2 * (n2 // 2)
    key = (k, n2)
    if key in _memo:
        return _memo[key]
    if k == 0:
        res = ONE
    elif k < 0 or k % 2 or n2 < 2:
        res = ZERO
    else:
        n = n2 // 2
        res = (w_S_rec_finite(k, 2 * (n - 1), t, _memo)
               + t * w_S_rec_finite(k - 2, 2 * (n - 1), t, _memo)
               + t * (t ** (2 * (n - 1)) - ONE)
               * w_S_rec_finite(k - 2, 2 * (n - 2), t, _memo))
    _memo[key] = res
    return res


def w_S_closed(k: int, n: int, t: Scalar = Q) -> Scalar:
    if k % 2:
        return ZERO
    return t ** (k // 2) * gauss_binom(n // 2, k // 2, t * t)


def w_S_poly(k: int, n: int, t: Scalar = Q) -> Scalar:
    """The segment weight polynomial, computed by enumeration and verified
    against both recursions and the closed form."""
    a = w_S_enum(k, n, t)
    b = w_S_rec_tail(k, n, t)
    c = w_S_rec_finite(k, n, t)
    d = w_S_closed(k, n, t)
    if not (a == b == c == d):
        raise AssertionError(f"w_S evaluation strategies disagree at {(k, n)}")
    return a


def kostka_A_column(i: int, m: int, t: Scalar = Q) -> Scalar:
    """One-column Kostka value for the type-A root system."""
    if m < 0:
        return ZERO
    return gauss_binom(i, m, t) - gauss_binom(i, m - 1, t)


def _s_prime_sum(k: int, m: int, t: Scalar) -> Scalar:
    out = w_S_enum(k, m, t)
    if k != m - k:
        out = out + w_S_enum(m - k, m, t)
    return out


def kostka_BCD(kind: str, n: int, param, t: Scalar = Q) -> Scalar:
    """One-column Kostka-Foulkes values.

    kind 'B': param = k, letters {1..2n+1}; kind 'D': param = k, letters
    {1..2n}, with an exact division by t^n + 1; kind 'C': param = (a, b),
    the value for the pair of fundamental weights (omega_{n-a}, omega_{n-b}).
    """
    if kind == "B":
        k = param
        return _s_prime_sum(k, 2 * n + 1, t)
    if kind == "D":
        k = param
        num = _s_prime_sum(k, 2 * n, t)
        try:
            return divide(num, t ** n + ONE)
        except InternalNonDivisible as exc:
            raise NonDivisible(f"t^{n}+1 does not divide D-type sum") from exc
    if kind == "C":
        a, b = param
        if not 0 <= a <= b <= n:
            return ZERO
        if (b - a) % 2:
            return ZERO
        return kostka_A_column(b, (b - a) // 2, t * t)
    raise ValueError(f"unknown kind {kind}")


def kostka_B_closed(n: int, k: int, t: Scalar = Q) -> Scalar:
    if k % 2 == 0:
        return gauss_binom(n, k // 2, t * t) * t ** (k // 2)
    return gauss_binom(n, k // 2, t * t) * t ** (n - k // 2)


def kostka_D_closed(n: int, k: int, t: Scalar = Q) -> Scalar:
    if k % 2:
        return ZERO
    base = gauss_binom(n, k // 2, t * t)
    if k < n:
        num = base * (t ** (n - k // 2) + t ** (k // 2))
    else:
        num = base * t ** (n // 2) if n % 2 == 0 else base * ZERO
    return divide(num, t ** n + ONE)


def c_type_sum_identity(n: int, i: int, delta: int, t: Scalar = Q) -> bool:
    """sum_j K^C(omega_{n-delta-2j}, omega_{n-i}) = binom(i, (i-delta)/2)_{t^2}."""
    if (i - delta) % 2:
        total = ZERO
        for j in range((i - delta) // 2 + 1):
            total = total + kostka_BCD("C", n, (delta + 2 * j, i), t)
        return total == ZERO
    total = ZERO
    for j in range((i - delta) // 2 + 1):
        total = total + kostka_BCD("C", n, (delta + 2 * j, i), t)
    return total == gauss_binom(i, (i - delta) // 2, t * t)


# ---------------------------------------------------------------------------
# rows relating coarse operator sums to exterior characters


def _elem_sym(vals, k: int) -> dict:
    """Elementary symmetric polynomial e_k of Laurent monomial tuples.

    vals: list of exponent tuples (each a vector in Z^r); returns a dict
    mapping total exponent tuple -> integer coefficient.
    """
    if k == 0:
        zero = tuple([0] * (len(vals[0]) if vals else 0))
        return {zero: 1}
    acc: dict = {}
    for combo in combinations(vals, k):
        total = tuple(sum(c[i] for c in combo) for i in range(len(combo[0])))
        acc[total] = acc.get(total, 0) + 1
    return acc


def elementary_paired_expansion(r: int, k: int, middle_one: bool) -> bool:
    """Check e_k over {a_i, a_i^-1} (+ optional 1) against the binomial
    expansion in the folded variables a_i + a_i^-1."""
    unit = [tuple(0 for _ in range(r))]
    vals = []
    for i in range(r):
        plus = tuple(1 if j == i else 0 for j in range(r))
        minus = tuple(-1 if j == i else 0 for j in range(r))
        vals.extend([plus, minus])
    if middle_one:
        vals.append(unit[0])
    lhs = _elem_sym(vals, k)

    def folded_e(m: int) -> dict:
        # e_m of the r folded variables nu_i = a_i + a_i^-1, expanded back
        out: dict = {}
        for combo in combinations(range(r), m):
            from itertools import product as iproduct
            for signs in iproduct((1, -1), repeat=m):
                key = [0] * r
                for idx, s in zip(combo, signs):
                    key[idx] += s
                key = tuple(key)
                out[key] = out.get(key, 0) + 1
        return out

    rhs: dict = {}
    for i in range(0, k + 1):
        if not middle_one and i % 2:
            continue
        coeff = _comb0(r - k + i, i // 2)
        for key, c in folded_e(k - i).items():
            rhs[key] = rhs.get(key, 0) + coeff * c
            if rhs[key] == 0:
                del rhs[key]
    return lhs == rhs


_LK_CASES = ("A", "uH-even", "uH-odd", "S-even", "S-odd")


def lk_row(case: str, n: int, delta: int) -> dict:
    """Coefficient vectors of one exterior-character row.

    lhs_weights[i] multiplies the coarse operator Sat(T_{n-i}); rhs_weights[i]
    multiplies q^(prefactor) s_{n-i}(mu).  Entries are exact scalars; the rhs
    binomials are plain integers.
    """
    if case not in _LK_CASES:
        raise ValueError(f"unknown row {case}")
    if not 0 <= delta <= n:
        raise ValueError("delta out of range")
    lhs = {}
    rhs = {}
    for i in range(delta, n + 1):
        d = i - delta
        if case == "A":
            lhs[i] = gauss_binom(i, d // 2, Q * Q)
            rhs[i] = math.comb(i, d // 2)
        elif case == "uH-even":
            lhs[i] = gauss_binom(2 * i, d, -Z)
            rhs[i] = math.comb(i, d // 2) if d % 2 == 0 else 0
        elif case == "uH-odd":
            lhs[i] = gauss_binom(2 * i + 1, d, -Z)
            rhs[i] = math.comb(i, d // 2)
        elif case == "S-even":
            if d % 2:
                continue
            lhs[i] = divide(gauss_binom(i, d // 2, Q * Q) * (Q ** delta + ONE),
                            Q ** i + ONE)
            rhs[i] = math.comb(i, d // 2)
        elif case == "S-odd":
            if d % 2:
                continue
            lhs[i] = gauss_binom(i, d // 2, Q * Q)
            rhs[i] = math.comb(i, d // 2)
    if case == "A":
        prefactor = Fraction(n * n + n - delta * delta - delta, 2)
    elif case == "uH-even":
        prefactor = Fraction(n * n - delta * delta, 2)
    elif case == "uH-odd":
        prefactor = Fraction(n * n + n - delta * delta - delta, 2)
    elif case == "S-even":
        prefactor = Fraction(n * n - n - delta * delta + delta, 2)
    else:
        prefactor = Fraction(n * n - delta * delta, 2)
    return {"case": case, "n": n, "delta": delta, "lhs_weights": lhs,
            "rhs_weights": rhs, "rhs_prefactor_qexp": prefactor}

