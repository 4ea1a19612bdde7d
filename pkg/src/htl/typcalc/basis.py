"""Basis extraction for the type module under the square-root / coarse
operator families.

The adjoint action of an operator D on canonical classes is the transpose
of the matrix of straighten(D(.)): the coefficient of class tau in S(sigma)
is the coefficient of sigma in str(D(tau)).  Rows whose straightening needs
unquoted relations are skipped only when provably irrelevant to the
requested column (the rewrite invariants bound their possible support);
otherwise the computation refuses loudly.

Basis sets and the greedy leading-term reduction follow the total order
(entry sum, then lexicographic); sign classes are handled through block
characters, realized as +-1 tuples constant on runs of equal entries.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from htl.scalars import CaseTag, Scalar, ZERO, ONE, HALF
from htl.typcalc.operators import apply_operator, build_operator
from htl.typcalc.relations import IncompleteRules
from htl.typcalc.straighten import (
    class_could_come_from, straighten_partial, stuck_support_bound,
)
from htl.typcalc.types import FormalSum, TypClass, canon_typ0

__all__ = ["enumerate_basis", "adjoint_column", "adjoint_apply",
           "reduce_to_basis", "leading_term_check", "ROUTES", "route_beta",
           "ClassSum"]

HALF_S = Scalar.monomial(0, HALF)

ROUTES = ("half", "sat")


def route_beta(route: str) -> int:
    return 1 if route == "half" else 2


def route_cases(route: str):
    if route == "half":
        return (CaseTag("uH", "flat"), CaseTag("uH", "sharp"),
                CaseTag("A", "flat"))
    return (CaseTag("uH", "flat"), CaseTag("uH", "sharp"),
            CaseTag("S", "flat"), CaseTag("S", "sharp", 1),
            CaseTag("S", "sharp", -1))


def _route_operator(route: str, case: CaseTag, k: int, r: int):
    if route == "half":
        return build_operator("half", case, k=k, r=r)
    return build_operator("s_sat", case, k=case.gamma * 0 + k, r=r)


def enumerate_basis(case: CaseTag, r: int, route: str = "sat"):
    """Basis labels (values, char-signs): entries differ by at most
    beta - 1 after the sign-change correction, last entry < beta."""
    beta = route_beta(route)
    out = []
    sign_space = ((1, -1) if (case.has_signs and route == "sat") else (1,))
    for s in product(sign_space, repeat=r):
        for e in _basis_values(r, beta, s):
            out.append((e, s))
    return out


def _basis_values(r: int, beta: int, s):
    if r == 0:
        yield ()
        return
    ranges = [range(0, beta)]
    for i in range(r - 1):
        ranges.append(range(0, beta))
    for diffs in product(*ranges):
        vals = [0] * r
        vals[r - 1] = diffs[0]
        ok = True
        for i in range(r - 2, -1, -1):
            step = diffs[r - 1 - i] + (1 if s[i] != s[i + 1] else 0)
            vals[i] = vals[i + 1] + step
        yield tuple(vals)


# ---------------------------------------------------------------------------
# adjoint application


class ClassSum(dict):
    """dict TypClass -> Scalar with arithmetic."""

    def add(self, cls, coeff):
        cur = self.get(cls, ZERO) + coeff
        if cur:
            self[cls] = cur
        else:
            self.pop(cls, None)

    def combine(self, other, scale=ONE):
        for cls, c in other.items():
            self.add(cls, c * scale)

    def max_class(self):
        return max(self, key=lambda c: c.sort_key())


def _str_row(op, case: CaseTag, row: TypClass, cache, op_key):
    key = (op_key, row)
    if key in cache:
        return cache[key]
    image = apply_operator(op, FormalSum.single(row.values_tuple(),
                                                row.signs_tuple()))
    normal, stuck = straighten_partial(image, case)
    result = (normal.classes(), [stuck_support_bound(s.term) for s in stuck])
    cache[key] = result
    return result


def _row_candidates(col: TypClass, r: int, beta: int, case: CaseTag):
    """All classes tau with sum(tau) <= sum(col) + beta*r (the only rows
    whose image can reach the column, since straightening never lowers the
    entry sum and the operator shifts it by at least -beta per slot)."""
    bound = sum(col.values_tuple()) + beta * r
    sign_space = (1, -1) if case.has_signs else (1,)
    for vals in _sorted_nonneg(r, bound):
        for signs in product(sign_space, repeat=r):
            cls = canon_typ0(vals, signs)
            yield cls


def _sorted_nonneg(r: int, total_bound: int):
    def rec(length, hi):
        if length == 0:
            yield ()
            return
        for v in range(min(hi, total_bound), -1, -1):
            for rest in rec(length - 1, v):
                if v + sum(rest) <= total_bound:
                    yield (v,) + rest
    yield from rec(r, total_bound)


def adjoint_column(op, case: CaseTag, col: TypClass, beta: int, cache,
                   op_key=None) -> ClassSum:
    """S(col) = sum over rows tau of [coeff of col in str(D(tau))] tau."""
    if op_key is None:
        op_key = id(op)
    out = ClassSum()
    seen = set()
    for row in _row_candidates(col, col.rank, beta, case):
        if row in seen:
            continue
        seen.add(row)
        normal_classes, stuck_bounds = _str_row(op, case, row, cache, op_key)
        for bd in stuck_bounds:
            if class_could_come_from(col.values_tuple(), bd):
                raise IncompleteRules(
                    (row.values_tuple(), row.signs_tuple()),
                    f"(row {row} stuck; column {col} not separable)")
        c = normal_classes.get(col)
        if c:
            out.add(row, c)
    return out


def adjoint_apply(op, case: CaseTag, sigma: ClassSum, beta: int,
                  cache, op_key=None) -> ClassSum:
    out = ClassSum()
    for col, coeff in sigma.items():
        out.combine(adjoint_column(op, case, col, beta, cache, op_key), coeff)
    return out


# ---------------------------------------------------------------------------
# greedy reduction


def _char_delta(values, s) -> ClassSum:
    """delta_s(e) = sum over sign tuples chi of ch_s(chi) * class(e, chi)."""
    out = ClassSum()
    r = len(values)
    for chi in product((1, -1), repeat=r):
        ch = 1
        for si, ci in zip(s, chi):
            if si == -1:
                ch *= ci
        out.add(canon_typ0(values, chi), Scalar.integer(ch))
    return out


def _plain_delta(values) -> ClassSum:
    out = ClassSum()
    out.add(canon_typ0(values), ONE)
    return out


def _monomial_image(route, case, r, f_values, s, exponents, cache) -> ClassSum:
    """S_1^{a_1} ... S_r^{a_r} applied to the (char-)basis element."""
    beta = route_beta(route)
    if case.has_signs and route == "sat":
        cur = _char_delta(f_values, s)
    else:
        cur = _plain_delta(f_values)
    for k in range(r, 0, -1):
        a = exponents[k - 1]
        if not a:
            continue
        op = _route_operator(route, case, k, r)
        for _ in range(a):
            cur = adjoint_apply(op, case, cur, beta, cache,
                                op_key=(route, case.label(), case.psi, k, r))
    return cur


def _target_monomial(e_values, s, beta: int):
    """(f, a) with lead(S^a delta_s(f)) = e, or None."""
    r = len(e_values)
    a = [0] * r
    t_next = 0
    f = [0] * r
    f[r - 1] = e_values[r - 1] % beta
    a[r - 1] = e_values[r - 1] // beta
    t_next = a[r - 1]
    for i in range(r - 2, -1, -1):
        dv = e_values[i] - e_values[i + 1]
        step = 1 if s[i] != s[i + 1] else 0
        if dv - step < 0:
            return None
        a[i] = (dv - step) // beta
        t_i = t_next + a[i]
        f[i] = e_values[i] - beta * t_i
        t_next = t_i
    return tuple(f), tuple(a)


def reduce_to_basis(target: TypClass, case: CaseTag, route: str) -> dict:
    """Greedy leading-term elimination; returns the certificate and the
    residual (zero on success)."""
    beta = route_beta(route)
    r = target.rank
    cache = {}
    residual = ClassSum()
    residual.add(target, ONE)
    cert = []
    guard = 0
    char_mode = case.has_signs and route == "sat"
    while residual:
        guard += 1
        if guard > 4000:
            raise RuntimeError("reduction did not terminate")
        top = residual.max_class()
        e_values = top.values_tuple()
        level = {cls: c for cls, c in residual.items()
                 if cls.values_tuple() == e_values}
        if not char_mode:
            f_a = _target_monomial(e_values, (1,) * r, beta)
            if f_a is None:
                return {"residual": residual, "certificate": cert,
                        "ok": False}
            f, a = f_a
            img = _monomial_image(route, case, r, f, (1,) * r, a, cache)
            lead = img.get(top)
            if not lead:
                return {"residual": residual, "certificate": cert,
                        "ok": False}
            coeff = _exact_ratio(level[top], lead)
            residual.combine(img, -coeff)
            cert.append({"f": f, "a": a, "coeff": coeff})
            continue
        # character mode: eliminate the whole equal-values level at once.
        # The lead level of S^a delta_s(f_s) is 2^(r - #blocks(f_s)) times
        # the block character ch_s; this is asserted against the computed
        # images, and character orthogonality then solves the level.
        blocks = _runs(e_values)
        nb = len(blocks)
        solved = ClassSum()
        used = []
        images = {}
        for bsign in product((1, -1), repeat=nb):
            s = _expand_block_sign(e_values, bsign)
            f_a = _target_monomial(e_values, s, beta)
            if f_a is None:
                return {"residual": residual, "certificate": cert,
                        "ok": False, "reason": "no monomial target"}
            f, a = f_a
            img = _monomial_image(route, case, r, f, s, a, cache)
            w_s = 2 ** (r - len(_runs(f)))
            for cls in _level_classes(e_values):
                want = Scalar.integer(w_s * _block_char_val(cls, bsign))
                if img.get(cls, ZERO) != want:
                    return {"residual": residual, "certificate": cert,
                            "ok": False, "reason": "lead level shape",
                            "at": (e_values, bsign)}
            images[bsign] = (img, w_s, f, a, s)
        for bsign, (img, w_s, f, a, s) in images.items():
            c_s = ZERO
            for cls, v in level.items():
                c_s = c_s + v * _block_char_val(cls, bsign)
            c_s = c_s * (HALF_S ** nb) * Scalar.monomial(
                0, Fraction(1, w_s))
            if c_s:
                solved.combine(img, c_s)
                used.append({"f": f, "a": a, "s": s, "coeff": c_s})
        for cls, v in level.items():
            got = solved.get(cls, ZERO)
            if got != v:
                return {"residual": residual, "certificate": cert,
                        "ok": False, "reason": "level solve mismatch",
                        "at": str(cls)}
        residual.combine(solved, Scalar.integer(-1))
        cert.extend(used)
    return {"residual": residual, "certificate": cert, "ok": True}


def _exact_ratio(num: Scalar, den: Scalar) -> Scalar:
    from htl.scalars import divide
    return divide(num, den)


def _runs(values):
    runs = []
    i = 0
    while i < len(values):
        j = i
        while j < len(values) and values[j] == values[i]:
            j += 1
        runs.append((i, j))
        i = j
    return runs


def _expand_block_sign(values, bsign):
    out = []
    for (i, j), s in zip(_runs(values), bsign):
        out.extend([s] * (j - i))
    return tuple(out)


def _block_char_val(cls: TypClass, bsign) -> int:
    """Block character of the class's merged signs."""
    ch = 1
    for (v, m, s), bs in zip(cls.blocks, bsign):
        if bs == -1:
            ch *= s
    return ch


def _level_classes(e_values):
    for signs in product((1, -1), repeat=len(_runs(e_values))):
        yield canon_typ0(e_values, _expand_block_sign(e_values, signs))


def leading_term_check(case: CaseTag, route: str, r: int, window: int) -> dict:
    """The maximal class of S_k(delta_s(f)) is delta_s(f + beta(1^k 0..))
    with unit coefficient, across the window."""
    beta = route_beta(route)
    cache = {}
    failures = []
    char_mode = case.has_signs and route == "sat"
    sign_space = (1, -1) if char_mode else (1,)
    for vals in _sorted_nonneg(r, window):
        for s in product(sign_space, repeat=r):
            base = _char_delta(vals, s) if char_mode else _plain_delta(vals)
            for k in range(1, r + 1):
                op = _route_operator(route, case, k, r)
                try:
                    img = adjoint_apply(op, case, base, beta, cache,
                                        op_key=(route, case.label(),
                                                case.psi, k, r))
                except IncompleteRules:
                    continue
                if not img:
                    continue
                expect = tuple(v + (beta if i < k else 0)
                               for i, v in enumerate(vals))
                top = img.max_class()
                if top.values_tuple() != expect:
                    failures.append({"vals": vals, "s": s, "k": k,
                                     "got": str(top)})
    return {"case": case.label(), "route": route, "ok": not failures,
            "failures": failures}
