"""The straightening rewrite engine.

Normal terms are sorted non-increasing (and entrywise >= 0 outside the
natural variant).  The engine rewrites one violating term at a time;
termination follows from the strictly decreasing measure
(total negativity, sum of squares, number of ascents) and uniqueness of the
result from the fact that normal forms represent classes modulo the
relation ideal.
"""

from __future__ import annotations

from htl.scalars import CaseTag, Scalar, ZERO
from htl.typcalc.relations import IncompleteRules, depth_image, swap_pair
from htl.typcalc.types import FormalSum, Term, canon_term, term_sort_key

__all__ = ["straighten", "straighten_partial", "is_normal", "StuckTerm",
           "stuck_support_bound", "IncompleteRules"]


def is_normal(term: Term, case: CaseTag) -> bool:
    values, _ = term
    for i in range(len(values) - 1):
        if values[i] < values[i + 1]:
            return False
    if case.variant != "natural" and values and values[-1] < 0:
        return False
    return True


def _first_violation(term: Term, case: CaseTag, strategy: str):
    """Return ('swap', i) or ('depth',) or None."""
    values, _ = term
    idxs = range(len(values) - 1)
    if strategy == "rightmost":
        idxs = reversed(idxs)
    for i in idxs:
        if values[i] < values[i + 1]:
            return ("swap", i)
    if case.variant != "natural" and values and values[-1] < 0:
        return ("depth",)
    return None


def _rewrite_term(term: Term, case: CaseTag, action):
    values, signs = term
    out = []
    if action[0] == "swap":
        i = action[1]
        gap = values[i + 1] - values[i]
        for pair_vals, pair_signs, coeff in swap_pair(
                case, values[i], gap, signs[i], signs[i + 1]):
            nv = values[:i] + pair_vals + values[i + 2:]
            ns = signs[:i] + pair_signs + signs[i + 2:]
            out.append((canon_term(nv, ns), coeff))
        return out
    for new_val, new_sign, coeff in depth_image(case, values[-1], signs[-1]):
        nv = values[:-1] + (new_val,)
        ns = signs[:-1] + (new_sign,)
        out.append((canon_term(nv, ns), coeff))
    return out


def straighten(sigma: FormalSum, case: CaseTag,
               strategy: str = "leftmost") -> FormalSum:
    """Rewrite until every term is normal; IncompleteRules on gap >= 3 or
    depth <= -3 situations."""
    out, stuck = _run(sigma, case, strategy, collect_stuck=False)
    return out


class StuckTerm:
    __slots__ = ("term", "coeff")

    def __init__(self, term, coeff):
        self.term = term
        self.coeff = coeff


def straighten_partial(sigma: FormalSum, case: CaseTag,
                       strategy: str = "leftmost"):
    """Like straighten but returns (normal_part, stuck_terms) instead of
    raising; stuck terms are those needing unquoted relations."""
    return _run(sigma, case, strategy, collect_stuck=True)


def _run(sigma: FormalSum, case: CaseTag, strategy: str, collect_stuck: bool):
    pending = dict(sigma.coeffs)
    normal = FormalSum()
    stuck = []
    while pending:
        term = max(pending, key=term_sort_key)
        coeff = pending.pop(term)
        if not coeff:
            continue
        action = _first_violation(term, case, strategy)
        if action is None:
            normal.add_term(term, coeff)
            continue
        try:
            pieces = _rewrite_term(term, case, action)
        except IncompleteRules:
            if collect_stuck:
                stuck.append(StuckTerm(term, coeff))
                continue
            raise IncompleteRules(term)
        for nt, c in pieces:
            cur = pending.get(nt, ZERO) + coeff * c
            if cur:
                pending[nt] = cur
            else:
                pending.pop(nt, None)
    return normal, stuck


def stuck_support_bound(term: Term):
    """Invariant bounds on the normal forms a (possibly unstraightenable)
    term could contribute to: the rewrite rules never decrease the entry
    sum, keep values within [min, max(max, 2)], and change the sum by even
    steps."""
    values, _ = term
    return {
        "min_sum": sum(values),
        "sum_parity": sum(values) % 2,
        "lo": min(values),
        "hi": max(max(values), 2),
    }


def class_could_come_from(cls_values, bound) -> bool:
    s = sum(cls_values)
    if s < bound["min_sum"] or s % 2 != bound["sum_parity"]:
        return False
    return all(bound["lo"] <= v <= bound["hi"] for v in cls_values)
