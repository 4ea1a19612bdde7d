"""Translation operators on the type module.

All operators are finite sums of slot-shift translations with exact scalar
coefficients; optional formal markers x, y turn them into generating
polynomials for the recursion identities.  Canonical form is a coefficient
map keyed by (shift vector, x-exponent, y-exponent), so coordinate patterns
acting identically are merged.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from htl.scalars import (
    CaseTag, Scalar, ZERO, ONE, Q, Z, divide, d_case, inv_stat, q_pow,
    tilde_inv_stat, w_poly,
)
from htl.typcalc.types import FormalSum, canon_term

__all__ = ["OperatorExpr", "BadParams", "LengthMismatch", "build_operator",
           "apply_operator", "t2_shift", "t1_shift", "identity_op"]


class BadParams(Exception):
    pass


class LengthMismatch(Exception):
    pass


class OperatorExpr:
    """sum of coeff * x^a y^b * t(shift) with shift in Z^r."""

    __slots__ = ("r", "terms")

    def __init__(self, r: int, terms=None):
        self.r = r
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if c:
                    self.terms[key] = c

    @staticmethod
    def shift_term(shift, coeff: Scalar = ONE, xexp: int = 0, yexp: int = 0):
        shift = tuple(int(s) for s in shift)
        return OperatorExpr(len(shift), {(shift, xexp, yexp): coeff})

    def add_term(self, shift, coeff: Scalar, xexp: int = 0, yexp: int = 0):
        key = (tuple(shift), xexp, yexp)
        cur = self.terms.get(key, ZERO) + coeff
        if cur:
            self.terms[key] = cur
        else:
            self.terms.pop(key, None)

    def __add__(self, other):
        if self.r != other.r:
            raise LengthMismatch()
        out = OperatorExpr(self.r, dict(self.terms))
        for (shift, a, b), c in other.terms.items():
            out.add_term(shift, c, a, b)
        return out

    def __sub__(self, other):
        return self + (other * Scalar.integer(-1))

    def __mul__(self, scalar):
        if isinstance(scalar, OperatorExpr):
            return self.compose(scalar)
        return OperatorExpr(self.r, {k: c * scalar
                                     for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, OperatorExpr) and self.r == other.r
                and self.terms == other.terms)

    def is_zero(self):
        return not self.terms

    def compose(self, other: "OperatorExpr") -> "OperatorExpr":
        if self.r != other.r:
            raise LengthMismatch()
        out = OperatorExpr(self.r)
        for (s1, a1, b1), c1 in self.terms.items():
            for (s2, a2, b2), c2 in other.terms.items():
                shift = tuple(x + y for x, y in zip(s1, s2))
                out.add_term(shift, c1 * c2, a1 + a2, b1 + b2)
        return out

    def star(self, other: "OperatorExpr") -> "OperatorExpr":
        """Concatenate slot blocks (self acts on the leading slots)."""
        out = OperatorExpr(self.r + other.r)
        for (s1, a1, b1), c1 in self.terms.items():
            for (s2, a2, b2), c2 in other.terms.items():
                out.add_term(s1 + s2, c1 * c2, a1 + a2, b1 + b2)
        return out

    def subst_markers(self, px: dict, py: dict) -> "OperatorExpr":
        """Substitute marker polynomials (exponent-pair -> Scalar) for x, y."""
        out = OperatorExpr(self.r)
        cache = {}

        def poly_pow(poly, n):
            key = (id(poly), n)
            if key in cache:
                return cache[key]
            acc = {(0, 0): ONE}
            for _ in range(n):
                nxt = {}
                for (a1, b1), c1 in acc.items():
                    for (a2, b2), c2 in poly.items():
                        k = (a1 + a2, b1 + b2)
                        cur = nxt.get(k, ZERO) + c1 * c2
                        if cur:
                            nxt[k] = cur
                        else:
                            nxt.pop(k, None)
                acc = nxt
            cache[key] = acc
            return acc

        for (shift, a, b), c in self.terms.items():
            for (a1, b1), c1 in poly_pow(px, a).items():
                for (a2, b2), c2 in poly_pow(py, b).items():
                    out.add_term(shift, c * c1 * c2, a1 + a2, b1 + b2)
        return out


def identity_op(r: int) -> OperatorExpr:
    return OperatorExpr.shift_term((0,) * r)


def apply_operator(op: OperatorExpr, sigma: FormalSum) -> FormalSum:
    """Linear extension of slot translation; no straightening, no markers."""
    out = FormalSum()
    for (shift, a, b), coeff in op.terms.items():
        if a or b:
            raise BadParams("cannot apply an operator with live markers")
        for (values, signs), c in sigma.coeffs.items():
            if len(values) != len(shift):
                raise LengthMismatch(f"{len(values)} slots vs {len(shift)}")
            nv = tuple(v + s for v, s in zip(values, shift))
            out.add_term(canon_term(nv, signs), coeff * c)
    return out


# ---------------------------------------------------------------------------
# coordinate-vector to slot-shift conversion


def t2_shift(case: CaseTag, eps) -> tuple:
    if case.family == "A":
        if len(eps) % 2:
            raise LengthMismatch("case A needs an even coordinate vector")
        return tuple(eps[2 * i] + eps[2 * i + 1] for i in range(len(eps) // 2))
    return tuple(2 * e for e in eps)


def t1_shift(case: CaseTag, eps) -> tuple:
    if any(e not in (-1, 1) for e in eps):
        raise BadParams("t1 coordinates must be +-1")
    if case.family == "A":
        pairs = [(eps[2 * i] + eps[2 * i + 1]) for i in range(len(eps) // 2)]
        return tuple(p // 2 for p in pairs)
    return tuple(eps)


# ---------------------------------------------------------------------------
# the operator catalogue


def _neg_q0_pow(n: int) -> Scalar:
    """(-q0)^n in the z-ring (z = q0)."""
    return (-Z) ** n if n >= 0 else ((-Z) ** (-n)).inverse()


def build_operator(kind: str, case: CaseTag, k: int = 0, r: int = 1,
                   **kw) -> OperatorExpr:
    g = case.gamma * r
    if kind == "dle":
        if not 0 <= k <= g:
            raise BadParams(f"k={k} out of range")
        sharp = case.variant == "sharp"
        beta = Fraction(1, 2) if sharp else Fraction(0)
        out = OperatorExpr(r)
        dd = d_case(g - k, case)
        for eps in product((-1, 0, 1), repeat=g):
            l0 = eps.count(0)
            if l0 < g - k:
                continue
            l1 = eps.count(1)
            lm = eps.count(-1)
            w = w_poly(beta, g - k, l0)
            if w.is_zero():
                continue
            coeff = (q_pow(tilde_inv_stat(eps))
                     * divide(d_case(l1, case) * d_case(g - lm, case), dd)
                     * w)
            if sharp:
                coeff = coeff * q_pow(Fraction(k + sum(eps), 2))
            out.add_term(t2_shift(case, eps), coeff)
        return out
    if kind == "natural":
        out = OperatorExpr(r)
        for eps in product((0, 1), repeat=g):
            if eps.count(1) != k:
                continue
            out.add_term(t2_shift(case, eps), q_pow(inv_stat(eps)))
        return out
    if kind == "circbullet":
        if case.variant != "flat":
            raise BadParams("the intertwining operator exists for flat only")
        out = OperatorExpr(r)
        for eps in product((-1, 1), repeat=g):
            e = sum(Fraction(g - (i + 1)) + case.alpha
                    for i in range(g) if eps[i] == 1)
            out.add_term(t1_shift(case, eps), q_pow(e))
        return out
    if kind == "half":
        return _half_operator(case, k, r, kw.get("q0_scalar"))
    if kind == "s_sat":
        if not 0 <= k <= g:
            raise BadParams(f"k={k} out of range")
        sharp = case.variant == "sharp"
        out = OperatorExpr(r)
        for eps in product((-1, 0, 1), repeat=g):
            if eps.count(0) != g - k:
                continue
            l1 = eps.count(1)
            lm = eps.count(-1)
            coeff = (q_pow(tilde_inv_stat(eps))
                     * divide(d_case(l1, case) * d_case(g - lm, case),
                              d_case(g - k, case)))
            if sharp:
                coeff = coeff * q_pow(l1)
            out.add_term(t2_shift(case, eps), coeff)
        return out
    if kind == "t_indiv":
        return _individual_operator(case, k, r)
    raise BadParams(f"unknown operator kind {kind}")


def _half_operator(case: CaseTag, k: int, r: int, q0_scalar=None):
    """The step-one operators underlying the square-root basis layer."""
    if not 0 <= k <= r:
        raise BadParams(f"k={k} out of range")
    fam, var = case.family, case.variant
    out = OperatorExpr(r)
    if fam == "uH":
        q0 = Z if q0_scalar is None else q0_scalar
        extra = 1 if var == "sharp" else 0
        for eps in product((-1, 0, 1), repeat=r):
            if eps.count(0) != r - k:
                continue
            l0, l1 = eps.count(0), eps.count(1)
            e = l1 * (l0 + l1 + extra) + tilde_inv_stat(eps)
            coeff = Scalar.integer((-1) ** l1) * ((-q0) ** e if e >= 0
                                                  else ((-q0) ** (-e)).inverse())
            out.add_term(tuple(eps), coeff)
        return out
    if fam == "A" and var == "flat":
        for eps in product((-1, 0, 1), repeat=r):
            if eps.count(0) != r - k:
                continue
            l0, l1 = eps.count(0), eps.count(1)
            e = 2 * l1 * (l0 + l1) + 2 * tilde_inv_stat(eps) + l1
            out.add_term(tuple(eps), q_pow(e))
        return out
    raise BadParams(f"no square-root operator for {case.label()}")


def _individual_operator(case: CaseTag, j: int, r: int) -> OperatorExpr:
    """Operator for the individual correspondence of codimension j, solved
    from the coarse sums through the inverse of the triangular S-count
    matrix."""
    from htl.incidence import PosetWindow, invert, satake_table
    g = case.gamma * r
    if not 0 <= j <= g:
        raise BadParams(f"j={j} out of range")
    window = PosetWindow(0, g)
    a_elem = satake_table(case, window)["A"]
    a_inv = invert(a_elem)
    k = g - j
    out = OperatorExpr(r)
    for i in range(k, g + 1):
        c = a_inv.get(k, i)
        if c.is_zero():
            continue
        out = out + build_operator("dle", case, k=g - i, r=r) * c
    return out
