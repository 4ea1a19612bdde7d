"""Box annihilators: alternating translation sums whose intertwiner image
is supported on the corners and midpoints of a box."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from htl.scalars import CaseTag, Scalar, ONE, ZERO, q_pow
from htl.typcalc.operators import (
    OperatorExpr, apply_operator, build_operator, t2_shift,
)
from htl.typcalc.types import FormalSum

__all__ = ["box_annihilator", "box_annihilator_report"]


def _axis_data(case: CaseTag, bounds):
    """Per coordinate axis (gamma*r of them): (x_i, y_i) = (a, b-2) of the
    owning box side, and the weight exponent w_i of the intertwiner."""
    r = len(bounds)
    g = case.gamma * r
    data = []
    for i in range(g):
        slot = i // case.gamma
        a, b = bounds[slot]
        w = Fraction(g - (i + 1)) + case.alpha
        data.append((a, b - 2, w))
    return data


def box_annihilator(case: CaseTag, bounds, chi=None) -> FormalSum:
    """Z for the box prod [a_i, b_i]: an alternating sum of translates of
    the interior point (a_i + 1), supported strictly inside the box."""
    if case.variant != "flat":
        raise ValueError("box annihilators live in the flat cases")
    r = len(bounds)
    for a, b in bounds:
        if (b - a) <= 0 or (b - a) % 2:
            raise ValueError("box sides must be positive even integers")
    if chi is None:
        chi = (1,) * r
    axes = _axis_data(case, bounds)
    op = OperatorExpr(r)
    ranges = [range(0, (y - x) // 2 + 1) for x, y, _ in axes]
    for cvec in product(*ranges):
        coeff = ONE
        for c, (_, _, w) in zip(cvec, axes):
            coeff = coeff * Scalar.integer((-1) ** c) * q_pow(w * c)
        op.add_term(t2_shift(case, cvec), coeff)
    base = FormalSum.single(tuple(a + 1 for a, _ in bounds), tuple(chi))
    return apply_operator(op, base)


def box_annihilator_report(case: CaseTag, bounds, chi=None) -> dict:
    """Checks: Z supported strictly inside the box; the intertwiner image
    supported on {a, (a+b)/2, b} per side; every vertex coefficient a single
    signed monomial, equal to +1 at the all-low vertex and with a strictly
    positive z-exponent elsewhere."""
    z = box_annihilator(case, bounds, chi)
    r = len(bounds)
    failures = []
    for (values, _s), coeff in z.coeffs.items():
        for v, (a, b) in zip(values, bounds):
            if not a < v < b:
                failures.append({"claim": "interior", "term": values})
    image = apply_operator(build_operator("circbullet", case, r=r), z)
    allowed = [{a, (a + b) // 2, b} for a, b in bounds]
    vertex_sets = [(a, b) for a, b in bounds]
    seen_vertices = {}
    for (values, _s), coeff in image.coeffs.items():
        for v, al in zip(values, allowed):
            if v not in al:
                failures.append({"claim": "support", "term": values})
        if all(v in vs for v, vs in zip(values, vertex_sets)):
            seen_vertices[values] = coeff
    for vertex, coeff in seen_vertices.items():
        mono = coeff.as_monomial()
        if mono is None or mono[2] != 0 or abs(mono[1]) != 1:
            failures.append({"claim": "vertex monomial", "vertex": vertex,
                             "coeff": coeff.to_text()})
            continue
        grade, lead, _ = mono
        if vertex == tuple(a for a, _ in bounds):
            if grade != 0 or lead != 1:
                failures.append({"claim": "all-low vertex is 1",
                                 "vertex": vertex})
        elif grade < (1 if case.alpha > 0 else 0):
            # the symmetric family's last axis has weight exponent 0, so
            # its lone top vertex can sit at q^0; elsewhere the exponent
            # is strictly positive
            failures.append({"claim": "vertex exponent",
                             "vertex": vertex, "coeff": coeff.to_text()})
    return {"case": case.label(), "bounds": tuple(bounds),
            "ok": not failures, "failures": failures,
            "vertices": {v: c.to_text() for v, c in seen_vertices.items()}}
