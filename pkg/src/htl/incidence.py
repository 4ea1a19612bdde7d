"""Incidence algebras on bounded windows of Z>=0 and (1/2)Z>=0.

Windows are materialized dense triangles; half-integer grids are modeled by
doubled indices.  Provides convolution, triangular inversion, the five
binomial/weight function families and the convolution identities between
them, including the formal implication that transports triangular relations
between two operator bases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from htl.scalars import (
    CaseTag, Scalar, ZERO, ONE, Q, Z, HALF,
    divide, gauss_binom, pochhammer, q_pow, w_poly, d_case,
)

__all__ = [
    "PosetWindow", "IncidenceElem", "WindowMismatch", "NonUnitDiagonal",
    "NonUnitScale", "identity_elem", "convolve", "invert", "scale_auto",
    "family", "verify_family_identities", "aux_half_family",
    "CASE_FAMILY_INDEX", "case_lambda", "satake_table", "triangular_a_entry",
    "triangular_b_entry", "formal_implication_check",
]


class WindowMismatch(Exception):
    pass


class NonUnitDiagonal(Exception):
    pass


class NonUnitScale(Exception):
    pass


@dataclass(frozen=True)
class PosetWindow:
    """Finite interval of Z (denom=1) or (1/2)Z (denom=2).

    Nodes are integers lo..hi in index space; node i represents i/denom.
    """

    lo: int
    hi: int
    denom: int = 1

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty window")
        if self.denom not in (1, 2):
            raise ValueError("denom must be 1 or 2")

    def nodes(self):
        return range(self.lo, self.hi + 1)

    def value(self, i: int) -> Fraction:
        return Fraction(i, self.denom)


class IncidenceElem:
    """Function on pairs x <= y of a window with Scalar values."""

    __slots__ = ("window", "values")

    def __init__(self, window: PosetWindow, values=None):
        self.window = window
        self.values = {}
        if values:
            for (x, y), v in values.items():
                if x > y:
                    raise ValueError("value on x > y")
                if v:
                    self.values[(x, y)] = v

    def get(self, x: int, y: int) -> Scalar:
        return self.values.get((x, y), ZERO)

    def __eq__(self, other):
        if not isinstance(other, IncidenceElem):
            return NotImplemented
        return self.window == other.window and self.values == other.values

    def __sub__(self, other):
        if self.window != other.window:
            raise WindowMismatch()
        out = dict(self.values)
        for k, v in other.values.items():
            nv = out.get(k, ZERO) - v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        elem = IncidenceElem(self.window)
        elem.values = out
        return elem

    def is_zero(self):
        return not self.values

    def to_json(self):
        w = self.window
        return {
            "window": {"lo": w.lo, "hi": w.hi, "denom": w.denom},
            "cells": [
                {"x": x, "y": y, "value": v.to_json()}
                for (x, y), v in sorted(self.values.items())
            ],
        }


def identity_elem(window: PosetWindow) -> IncidenceElem:
    return IncidenceElem(window, {(x, x): ONE for x in window.nodes()})


def from_formula(window: PosetWindow, fn) -> IncidenceElem:
    vals = {}
    for x in window.nodes():
        for y in range(x, window.hi + 1):
            v = fn(window.value(x), window.value(y))
            if v:
                vals[(x, y)] = v
    return IncidenceElem(window, vals)


def convolve(f: IncidenceElem, g: IncidenceElem) -> IncidenceElem:
    if f.window != g.window:
        raise WindowMismatch()
    out = {}
    for (x, z), fv in f.values.items():
        for y in range(z, f.window.hi + 1):
            gv = g.values.get((z, y))
            if gv is None:
                continue
            key = (x, y)
            cur = out.get(key, ZERO) + fv * gv
            if cur:
                out[key] = cur
            else:
                out.pop(key, None)
    return IncidenceElem(f.window, out)


def invert(f: IncidenceElem) -> IncidenceElem:
    """Two-sided inverse; diagonal values must be units."""
    w = f.window
    diag_inv = {}
    for x in w.nodes():
        try:
            diag_inv[x] = f.get(x, x).inverse()
        except Exception as exc:
            raise NonUnitDiagonal(f"diagonal at {x} is not a unit") from exc
    out = {(x, x): diag_inv[x] for x in w.nodes()}
    for span in range(1, w.hi - w.lo + 1):
        for x in range(w.lo, w.hi - span + 1):
            y = x + span
            acc = ZERO
            for z in range(x + 1, y + 1):
                fv = f.values.get((x, z))
                if fv is None:
                    continue
                gv = out.get((z, y))
                if gv is None:
                    continue
                acc = acc + fv * gv
            v = -(diag_inv[x] * acc)
            if v:
                out[(x, y)] = v
    return IncidenceElem(w, out)


def scale_auto(f: IncidenceElem, h) -> IncidenceElem:
    """(h.f)(x,y) = f(x,y) * h(y)/h(x); h maps node index -> unit Scalar."""
    w = f.window
    inv_cache = {}
    for x in w.nodes():
        try:
            inv_cache[x] = h(x).inverse()
        except Exception as exc:
            raise NonUnitScale(f"h({x}) is not a unit") from exc
    out = {}
    for (x, y), v in f.values.items():
        nv = v * h(y) * inv_cache[x]
        if nv:
            out[(x, y)] = nv
    return IncidenceElem(w, out)


# ---------------------------------------------------------------------------
# the five function families


def _even_or_zero(x, y):
    return (y - x) % 2 == 0


def family(i: int, which: str, window: PosetWindow, lam: Scalar = Q) -> IncidenceElem:
    """Row i in {1..5}, column which in 'ABCDE', on an integer window."""
    if window.denom != 1:
        raise ValueError("families live on integer windows")
    if i not in (1, 2, 3, 4, 5):
        raise ValueError("i must be 1..5")
    lam2 = lam * lam

    def entry(x, y):
        x, y = int(x), int(y)
        d = y - x
        if which == "A":
            if i in (1, 5):
                return pochhammer(-lam, lam, d) * gauss_binom(y, x, lam2)
            if i == 2:
                return pochhammer(-lam, lam2, d) * gauss_binom(2 * y, 2 * x, -lam)
            if i == 3:
                return pochhammer(-lam, lam2, d) * gauss_binom(2 * y + 1, 2 * x + 1, -lam)
            if i == 4:
                return divide(pochhammer(-lam, lam, d) * gauss_binom(y, x, lam2)
                              * (lam ** x + ONE), lam ** y + ONE)
        if which == "B":
            if i == 1:
                return w_poly(0, x, y, lam) * _lam_halfpow(lam, Fraction(y * y + y - x * x - x, 2))
            if i == 2:
                return w_poly(0, x, y, lam2) * lam ** (y * y - x * x)
            if i == 3:
                return w_poly(HALF, x, y, lam2) * lam ** (y * y + y - x * x - x)
            if i == 4:
                return w_poly(0, x, y, lam) * _lam_halfpow(lam, Fraction(y * y - y - x * x + x, 2))
            if i == 5:
                return w_poly(HALF, x, y, lam) * _lam_halfpow(lam, Fraction(y * y - x * x, 2))
        if which == "C":
            if i == 1:
                return gauss_binom(y, (d) // 2, lam2)
            if i == 2:
                return gauss_binom(2 * y, d, -lam)
            if i == 3:
                return gauss_binom(2 * y + 1, d, -lam)
            if i == 4:
                if not _even_or_zero(x, y):
                    return ZERO
                return divide(gauss_binom(y, d // 2, lam2) * (lam ** x + ONE),
                              lam ** y + ONE)
            if i == 5:
                if not _even_or_zero(x, y):
                    return ZERO
                return gauss_binom(y, d // 2, lam2)
        if which == "D":
            if i == 1:
                # exponent normalized so the diagonal is 1 (the quoted
                # (y^2+y-x^2+x)/2 fails the stated diagonal normalization)
                return _lam_halfpow(lam, Fraction(y * y + y - x * x - x, 2)) * math.comb(y, d // 2)
            if i == 2:
                if not _even_or_zero(x, y):
                    return ZERO
                return lam ** (y * y - x * x) * math.comb(y, d // 2)
            if i == 3:
                return lam ** (y * y + y - x * x - x) * math.comb(y, d // 2)
            if i == 4:
                if not _even_or_zero(x, y):
                    return ZERO
                return _lam_halfpow(lam, Fraction(y * y - y - x * x + x, 2)) * math.comb(y, d // 2)
            if i == 5:
                if not _even_or_zero(x, y):
                    return ZERO
                return _lam_halfpow(lam, Fraction(y * y - x * x, 2)) * math.comb(y, d // 2)
        if which == "E":
            sign = (-1) ** d
            if i == 1:
                num = lam ** (x + y + 1) - lam ** d
                return sign * divide(gauss_binom(2 * y, d, lam) * num,
                                     lam ** (x + y + 1) - ONE)
            if i == 2:
                num = lam ** (x + y) + lam ** d
                return sign * divide(gauss_binom(2 * y, d, lam2) * num,
                                     lam ** (2 * y) + ONE)
            if i == 3:
                num = lam ** (x + y + 1) - lam ** d
                return sign * divide(gauss_binom(2 * y + 1, d, lam2) * num,
                                     lam ** (2 * y + 1) - ONE)
            if i == 4:
                return sign * divide(gauss_binom(2 * y, d, lam) * (lam ** x + ONE),
                                     lam ** y + ONE)
            if i == 5:
                return sign * gauss_binom(2 * y, d, lam)
        raise ValueError(f"unknown column {which}")

    return from_formula(window, entry)


def _lam_halfpow(lam: Scalar, e: Fraction) -> Scalar:
    """lam^e for monomial lam and (half-)integral e."""
    mono = lam.as_monomial()
    if mono is None or mono[2] != 0 or mono[1] != 1:
        raise ValueError("half powers need a plain monomial")
    g = Fraction(mono[0]) * e
    if g.denominator != 1:
        raise ValueError(f"lam^{e} leaves the ring")
    return Scalar.monomial(int(g))


def aux_half_family(which: str, window: PosetWindow, lam: Scalar = Q) -> IncidenceElem:
    """The auxiliary A/C/E functions on a half-integer window.

    Entries vanish unless y - x is an integer; on the integer sublattice and
    on the shifted sublattice they interleave rows 2 and 3 of the table.
    """
    if window.denom != 2:
        raise ValueError("aux family lives on a half-integer window")
    lam2 = lam * lam

    def entry(xv: Fraction, yv: Fraction):
        if (yv - xv).denominator != 1:
            return ZERO
        d = int(yv - xv)
        two_x, two_y = int(2 * xv), int(2 * yv)
        if which == "A":
            return pochhammer(lam, lam2, d) * gauss_binom(two_y, two_x, lam)
        if which == "C":
            return gauss_binom(two_y, d, lam)
        if which == "E":
            num = _lam_halfpow(lam, xv + yv) + lam ** d
            return divide(gauss_binom(two_y, d, lam2) * num,
                          _lam_halfpow(lam, 2 * yv) + ONE)
        raise ValueError(which)

    return from_formula(window, entry)


def verify_family_identities(i: int, window: PosetWindow, lam: Scalar = Q) -> dict:
    """Check C_i * A_i^{-1} = E_i and E_i * B_i = D_i on the window."""
    a = family(i, "A", window, lam)
    b = family(i, "B", window, lam)
    c = family(i, "C", window, lam)
    d = family(i, "D", window, lam)
    e = family(i, "E", window, lam)
    failures = []
    lhs1 = convolve(c, invert(a))
    for key in set(lhs1.values) | set(e.values):
        if lhs1.get(*key) != e.get(*key):
            failures.append({"identity": "C*Ainv=E", "cell": key})
    lhs2 = convolve(e, b)
    for key in set(lhs2.values) | set(d.values):
        if lhs2.get(*key) != d.get(*key):
            failures.append({"identity": "E*B=D", "cell": key})
    report = {"i": i, "window": (window.lo, window.hi), "failures": failures,
              "ok": not failures}
    if i in (2, 3):
        half = PosetWindow(0, 2 * window.hi + 1, denom=2)
        ah = aux_half_family("A", half, lam)
        ch = aux_half_family("C", half, lam)
        eh = aux_half_family("E", half, lam)
        lhs = convolve(ch, invert(ah))
        aux_fail = [key for key in set(lhs.values) | set(eh.values)
                    if lhs.get(*key) != eh.get(*key)]
        report["aux_half_ok"] = not aux_fail
        report["ok"] = report["ok"] and not aux_fail
    return report


# ---------------------------------------------------------------------------
# case-indexed tables and the Satake reduction

# case label -> (family row index, lambda grade in z)
CASE_FAMILY_INDEX = {
    ("A", "flat"): (1, 2),
    ("uH", "flat"): (2, 1),
    ("uH", "sharp"): (3, 1),
    ("S", "flat"): (4, 2),
    ("S", "sharp"): (5, 2),
}


def case_lambda(case: CaseTag) -> Scalar:
    """The substitution lambda for the case's table row (q0 for uH, q else)."""
    _, grade = CASE_FAMILY_INDEX[(case.family, case.variant)]
    return Scalar.monomial(grade)


def satake_table(case: CaseTag, window: PosetWindow) -> dict:
    i, grade = CASE_FAMILY_INDEX[(case.family, case.variant)]
    lam = Scalar.monomial(grade)
    return {w: family(i, w, window, lam) for w in "ABCDE"}


def triangular_a_entry(case: CaseTag, k: int, i: int) -> Scalar:
    """A(k, i) of the case's table (coefficients of the coarse operator sums)."""
    tab = satake_table(case, PosetWindow(0, max(k, i)))
    return tab["A"].get(k, i)


def triangular_b_entry(case: CaseTag, k: int, i: int) -> Scalar:
    tab = satake_table(case, PosetWindow(0, max(k, i)))
    return tab["B"].get(k, i)


def formal_implication_check(case: CaseTag, r: int) -> dict:
    """Verify C * A^{-1} * B = D on the window 0..gamma*r for the case's row.

    A successful check establishes the transport of the triangular relations
    between the lattice operator basis and the symmetric-polynomial basis; the
    resulting normalization is Sat(S_k) = (d(gamma r)/d(gamma r - k)) s_k(mu),
    with an extra q^(k/2) for the sharp variants.
    """
    window = PosetWindow(0, case.gamma * r)
    tab = satake_table(case, window)
    lhs = convolve(convolve(tab["C"], invert(tab["A"])), tab["B"])
    failures = [key for key in set(lhs.values) | set(tab["D"].values)
                if lhs.get(*key) != tab["D"].get(*key)]
    consequence = {
        k: {
            "normalization": divide(d_case(case.gamma * r, case),
                                    d_case(case.gamma * r - k, case))
            * (q_pow(Fraction(k, 2)) if case.variant == "sharp" else ONE),
            "schur_degree": k,
        }
        for k in range(case.gamma * r + 1)
    }
    return {
        "case": case.label(), "r": r, "ok": not failures, "failures": failures,
        "consequence": {
            k: v["normalization"].to_text() + f" * s_{k}(mu)"
            for k, v in consequence.items()
        },
    }
