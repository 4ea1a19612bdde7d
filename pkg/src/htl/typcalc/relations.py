"""Straightening relation rules per case, plus the derived block families.

Primitive rules (translation-covariant where marked):
  swap1: adjacent (a, a+1) reorders, signs riding along           [any base]
  swap2: adjacent (a, a+2) three-term exchange                    [any base]
  depth1/depth2: last slot at value -1 / -2 reflects into >= 0    [fixed]
Rules for adjacent gaps >= 3 or depths <= -3 are intentionally absent;
the engine fails loudly on them instead of extrapolating.

The derived block families (a low entry against a run, a run against a
high entry) are consequences of the pairwise rules; they are exposed as
test oracles.  Formal signs eps^k on sign slots are realized through the
idempotents (1 +- eps)/2 in the coefficient ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from htl.scalars import CaseTag, Scalar, EPS, ONE, Q, Z, HALF
from htl.typcalc.types import FormalSum

__all__ = ["RelationRule", "RelationSet", "relation_set", "swap_pair",
           "depth_image", "block_families", "IncompleteRules"]


class IncompleteRules(Exception):
    """A rewrite needed a relation outside the quoted families."""

    def __init__(self, term, message=""):
        self.term = term
        super().__init__(f"no quoted rule applies to {term} {message}")


@dataclass(frozen=True)
class RelationRule:
    kind: str              # swap1 | swap2 | depth1 | depth2 | block
    case: CaseTag
    position: str          # any-adjacent | suffix
    note: str = ""


@dataclass
class RelationSet:
    case: CaseTag
    rules: list = field(default_factory=list)


def relation_set(case: CaseTag) -> RelationSet:
    rules = [
        RelationRule("swap1", case, "any-adjacent",
                     "(a, a+1) reorders with unit coefficient"),
        RelationRule("swap2", case, "any-adjacent",
                     "(a, a+2) three-term exchange"),
    ]
    if case.variant != "natural":
        rules.append(RelationRule("depth1", case, "suffix",
                                  "last slot -1 reflects"))
        rules.append(RelationRule("depth2", case, "suffix",
                                  "last slot -2 reflects"))
    rules.append(RelationRule("block", case, "any-adjacent",
                              "derived low-entry/run and run/high-entry "
                              "families (consequences of the pairwise rules)"))
    return RelationSet(case, rules)


HALF_S = Scalar.monomial(0, HALF)
PROJ_PLUS = (ONE + EPS) * HALF_S
PROJ_MINUS = (ONE - EPS) * HALF_S
HALF_QPLUS = (ONE + Q * EPS) * HALF_S
HALF_QMINUS = (ONE - Q * EPS) * HALF_S


def swap_pair(case: CaseTag, a: int, gap: int, chi1: int, chi2: int):
    """Replacement for the adjacent slot pair (a, chi1), (a+gap, chi2),
    as a list of (pair_values, pair_signs, coeff).  gap in {1, 2} only."""
    fam = case.family
    if gap == 1:
        return [((a + 1, a), (chi2, chi1), ONE)]
    if gap != 2:
        raise IncompleteRules(((a, a + gap), (chi1, chi2)),
                              f"(adjacent gap {gap})")
    if fam == "uH":
        q0 = Z
        return [((a + 1, a + 1), (1, 1), ONE + q0),
                ((a + 2, a), (1, 1), -q0)]
    if fam == "A":
        q2 = Q * Q
        return [((a + 2, a), (1, 1), q2),
                ((a + 1, a + 1), (1, 1), -(q2 - ONE))]
    c = EPS * (chi1 * chi2)
    return [((a + 1, a + 1), (chi1, chi2), ONE + c),
            ((a + 2, a), (chi2, chi1), -(c * HALF_QPLUS)),
            ((a + 2, a), (-chi2, -chi1), -(c * HALF_QMINUS))]


def depth_image(case: CaseTag, value: int, chi: int):
    """Replacement for a trailing slot (value, chi), value in {-1, -2},
    as a list of (new_value, new_sign, coeff)."""
    fam, var = case.family, case.variant
    if var == "natural":
        raise IncompleteRules(((value,), (chi,)), "(no depth rules in natural)")
    if value == -1:
        if fam == "uH":
            return [(1, 1, ONE)]
        if fam == "S":
            return [(1, chi, ONE)]
        return [(0, 1, Q + ONE), (1, 1, -Q)]
    if value == -2:
        if fam == "uH":
            q0 = Z
            if var == "flat":
                return [(2, 1, q0), (0, 1, -(q0 - ONE))]
            return [(0, 1, Q + ONE), (2, 1, -Q)]
        if fam == "S":
            if var == "flat":
                return [(2, chi, ONE)]
            pc = case.psi * chi
            return [(0, chi, ONE + Scalar.integer(pc)),
                    (2, chi, Scalar.integer(-pc))]
        return [(-1, 1, Q + ONE), (1, 1, Q ** 3 * (Q + ONE)),
                (0, 1, -(Q * (Q * Q + ONE))), (2, 1, -(Q ** 4))]
    raise IncompleteRules(((value,), (chi,)), f"(depth {value})")


# ---------------------------------------------------------------------------
# derived block families (used as test oracles)


def _signed_blocks(blocks) -> FormalSum:
    """FormalSum for blocks [(value, mult, sign, eps_exp)], where a slot
    sign is sign * eps^eps_exp; empty blocks fold into the next block and
    formal eps signs split through the (1 +- eps)/2 idempotents."""
    folded = []
    carry = (1, 0)
    for value, mult, sign, epse in blocks:
        sign, epse = sign * carry[0], (epse + carry[1]) % 2
        carry = (1, 0)
        if mult == 0:
            carry = (sign, epse)
            continue
        folded.append((value, mult, sign, epse))
    if carry != (1, 0):
        if not folded:
            raise ValueError("all blocks empty with a leftover sign")
        value, mult, sign, epse = folded[-1]
        folded[-1] = (value, mult, sign * carry[0], (epse + carry[1]) % 2)
    values, plus_signs, minus_signs = [], [], []
    has_eps = False
    for value, mult, sign, epse in folded:
        values.extend([value] * mult)
        pad = [1] * (mult - 1)
        plus_signs.extend([sign] + pad)
        minus_signs.extend([sign * (-1 if epse else 1)] + pad)
        has_eps = has_eps or epse == 1
    values = tuple(values)
    if not has_eps:
        return FormalSum.single(values, tuple(plus_signs))
    return (FormalSum.single(values, tuple(plus_signs)) * PROJ_PLUS
            + FormalSum.single(values, tuple(minus_signs)) * PROJ_MINUS)


def block_families(case: CaseTag, max_len: int = 3):
    """(name, lhs, rhs) pairs; str(lhs) == str(rhs) must hold in every
    variant whose rules can straighten them."""
    fam = case.family
    out = []
    if fam in ("uH", "A"):
        for l in range(1, max_len + 1):
            lhs = FormalSum.single((-1,) + (1,) * l)
            c = (-Z) ** l if fam == "uH" else Q ** (2 * l)
            rhs = (FormalSum.single((1,) * l + (-1,), coeff=c)
                   + FormalSum.single((1,) * (l - 1) + (0, 0), coeff=ONE - c))
            out.append((f"low_run_l{l}", lhs, rhs))
        if fam == "uH":
            for n in range(1, max_len + 1):
                c = (-Z) ** n
                lhs = FormalSum.single((0,) * n + (2,))
                rhs = (FormalSum.single((1, 1) + (0,) * (n - 1), coeff=ONE - c)
                       + FormalSum.single((2,) + (0,) * n, coeff=c))
                out.append((f"run_high_n{n}", lhs, rhs))
                lhs2 = FormalSum.single((-2,) + (0,) * n)
                rhs2 = (FormalSum.single((0,) * (n - 1) + (-1, -1),
                                         coeff=ONE - c)
                        + FormalSum.single((0,) * n + (-2,), coeff=c))
                out.append((f"low2_run_n{n}", lhs2, rhs2))
        return out
    for l in range(1, max_len + 1):
        for chi1 in (1, -1):
            for chi2 in (1, -1):
                lhs = FormalSum.single((-1,) + (1,) * l,
                                       (chi1, chi2) + (1,) * (l - 1))
                c = ((Q * EPS) ** (l // 2) * (chi2 * (-chi1) ** l)
                     * EPS ** (l % 2))
                rhs = _signed_blocks([(1, l - 1, chi1 * chi2, 1),
                                      (0, 2, 1, 1)]) * (ONE - c)
                rhs = rhs + FormalSum.single(
                    (1,) * l + (-1,), (chi2,) + (1,) * (l - 1) + (chi1,)
                ) * (c * HALF_QPLUS)
                rhs = rhs + FormalSum.single(
                    (1,) * l + (-1,),
                    ((-1) ** l * chi2,) + (1,) * (l - 1) + ((-1) ** l * chi1,)
                ) * (c * HALF_QMINUS)
                out.append((f"low_run_l{l}_{chi1}_{chi2}", lhs, rhs))
        for chi1 in (1, -1):
            for chi2 in (1, -1):
                n = l
                lhs = FormalSum.single((0,) * n + (2,),
                                       (chi1,) + (1,) * (n - 1) + (chi2,))
                c = ((Q * EPS) ** (n // 2) * (chi1 * (-chi2) ** n)
                     * EPS ** (n % 2))
                rhs = _signed_blocks([(1, 2, 1, 1),
                                      (0, n - 1, chi1 * chi2, 1)]) * (ONE - c)
                rhs = rhs + FormalSum.single(
                    (2,) + (0,) * n, (chi2, chi1) + (1,) * (n - 1)
                ) * (c * HALF_QPLUS)
                rhs = rhs + FormalSum.single(
                    (2,) + (0,) * n,
                    ((-1) ** n * chi2, (-1) ** n * chi1) + (1,) * (n - 1)
                ) * (c * HALF_QMINUS)
                out.append((f"run_high_n{n}_{chi1}_{chi2}", lhs, rhs))
                lhs2 = FormalSum.single((-2,) + (0,) * n,
                                        (chi1,) + (chi2,) + (1,) * (n - 1))
                c2 = ((Q * EPS) ** (n // 2) * (chi2 * (-chi1) ** n)
                      * EPS ** (n % 2))
                rhs2 = _signed_blocks([(0, n - 1, chi1 * chi2, 1),
                                       (-1, 2, 1, 1)]) * (ONE - c2)
                rhs2 = rhs2 + FormalSum.single(
                    (0,) * n + (-2,), (chi2,) + (1,) * (n - 1) + (chi1,)
                ) * (c2 * HALF_QPLUS)
                rhs2 = rhs2 + FormalSum.single(
                    (0,) * n + (-2,),
                    ((-1) ** n * chi2,) + (1,) * (n - 1) + ((-1) ** n * chi1,)
                ) * (c2 * HALF_QMINUS)
                out.append((f"low2_run_n{n}_{chi1}_{chi2}", lhs2, rhs2))
    return out
