"""Comparisons between the lattice oracle and the operator predictions,
the second-block reduction formula, and enumerated checks of the counting
lemmas feeding it."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

import numpy as np

from htl.scalars import CaseTag, Scalar, d_case, eval_scalar
from htl.typcalc.operators import apply_operator, build_operator
from htl.typcalc.straighten import straighten
from htl.typcalc.types import FormalSum, TypClass, canon_typ0
from htl.latoracle.ambient import Oracle, build_oracle
from htl.latoracle.hecke import (
    CeilingExceeded, hecke_star, lagrangian_coeff_rows, quotient_space_of,
)
from htl.latoracle.lattices import (
    Lattice, intersect_tail_block, lift_subspace, quotient_reps,
)

__all__ = ["delta_distribution", "compare_to_delta", "v2_formula_star",
           "sharp_split_check", "SupportViolation", "oracle_tle_consistency"]


class SupportViolation(Exception):
    pass


def _eval_int(case: CaseTag, s: Scalar, p: int, eps: int) -> int:
    v = eval_scalar(s, z=p, eps=1) if case.family == "uH" \
        else eval_scalar(s, q=p, eps=eps)
    if v.denominator != 1:
        raise AssertionError("non-integral evaluation")
    return int(v)


def delta_distribution(case: CaseTag, kind: str, delta: TypClass, k: int,
                       p: int) -> dict:
    """Exact integer distribution predicted by the straightened operator."""
    r = delta.rank
    if kind == "tle":
        op = build_operator("dle", case, k=k, r=r)
    elif kind == "circ":
        op = build_operator("circbullet", case, r=r)
    elif kind == "tk":
        op = build_operator("t_indiv", case, k=k, r=r)
    else:
        raise ValueError(kind)
    sigma = FormalSum.single(delta.values_tuple(), delta.signs_tuple())
    image = straighten(apply_operator(op, sigma), case)
    eps = 1 if case.family != "S" else (1 if (p - 1) % 4 == 0 else -1)
    out = {}
    for cls, coeff in image.classes().items():
        val = _eval_int(case, coeff, p, eps)
        if val:
            out[cls] = val
    return out


def compare_to_delta(case: CaseTag, kind: str, delta: TypClass, k: int,
                     p: int, oracle: Oracle = None) -> dict:
    if oracle is None:
        oracle = build_oracle(case, p, delta, bullet=(kind == "circ"),
                              psi_unit=case.psi)
    got = hecke_star(oracle, kind, k=k)
    want = delta_distribution(case, kind, delta, k, p)
    return {"case": case.label(), "psi": case.psi, "kind": kind,
            "delta": delta.values_tuple(), "signs": delta.signs_tuple(),
            "k": k, "p": p, "match": got == want,
            "oracle": {c.values_tuple(): v for c, v in got.items()},
            "formula": {c.values_tuple(): v for c, v in want.items()}}


def oracle_tle_consistency(case: CaseTag, delta: TypClass, p: int,
                           oracle: Oracle = None) -> dict:
    """T_<=k equals the isotropic-count-weighted sum of the individual
    correspondences (the defining relation, checked numerically)."""
    from htl.ffcount import closed_form_S
    if oracle is None:
        oracle = build_oracle(case, p, delta, psi_unit=case.psi)
    r = delta.rank
    g = case.gamma * r
    eps = oracle.eps_sign()
    tks = {i: hecke_star(oracle, "tk", k=i) for i in range(g + 1)}
    failures = []
    for k in range(g + 1):
        want = {}
        for i in range(k + 1):
            if case.variant == "sharp":
                typ = (2 * r + 1 - 2 * i, (eps ** ((r - i) % 2)) * case.psi)
            elif case.family == "A":
                typ = (2 * r - i, 1)
            else:
                typ = (2 * r - 2 * i, eps ** ((r - i) % 2))
            w = _eval_int(case, closed_form_S(k - i, typ, case), p, eps)
            for cls, cnt in tks[i].items():
                want[cls] = want.get(cls, 0) + w * cnt
        want = {c: v for c, v in want.items() if v}
        got = hecke_star(oracle, "tle", k=k)
        if got != want:
            failures.append(k)
    return {"case": case.label(), "delta": delta.values_tuple(),
            "ok": not failures, "failures": failures}


# ---------------------------------------------------------------------------
# small enumeration helpers


def _all_subspace_rows(field, n: int, k: int):
    """All k-dim subspaces of F^n as rref rows (plain iteration)."""
    from htl.ffcount import _pattern_batches
    if k == 0:
        yield np.zeros((0, n), dtype=np.int16)
        return
    for batch in _pattern_batches(field, n, k, chunk=8192):
        for rows in batch:
            yield rows


def _sublattices_between(small: Lattice, big: Lattice):
    """All lattices K with small <= K <= big (tiny quotients only).

    Every intermediate lattice is generated over `small` by at most as many
    quotient elements as the quotient has cyclic factors."""
    ring = big.frame.ring
    dvals, basis = big.quotient_divisors(small)
    gens = [(d, b) for d, b in zip(dvals, basis) if 0 < d < ring.m]
    if not gens:
        yield small
        return
    elems = []
    ranges = []
    for d, _ in gens:
        size = ring.p ** d
        ranges.append(range(size * size if ring.ext else size))
    for combo in product(*ranges):
        row = [ring.zero] * big.frame.n
        for (d, b), c in zip(gens, combo):
            pd = ring.p ** d
            ce = ring.of(c % pd, c // pd) if ring.ext else ring.of(c)
            if ring.is_zero(ce):
                continue
            for j in range(big.frame.n):
                row[j] = ring.add(row[j], ring.mul(ce, b[j]))
        elems.append(tuple(row))
    if len(elems) > 100_000:
        raise SupportViolation("quotient too large for subgroup enumeration")
    from itertools import combinations_with_replacement
    seen = set()
    for combo in combinations_with_replacement(elems, len(gens)):
        lat = Lattice(big.frame, list(small.rows) + list(combo),
                      pad_window=False)
        if lat.key() not in seen:
            seen.add(lat.key())
            yield lat


def _colength_one_sublattices(oracle: Oracle, lat: Lattice):
    """K1 of colength 1 in lat (all contain pi * lat)."""
    plat = lat.scale_pi(1)
    reps = quotient_reps(lat, plat)
    field = oracle.gf_field
    t = len(reps)
    for rows in _all_subspace_rows(field, t, t - 1):
        yield lift_subspace(lat.frame, reps, rows, plat)


# ---------------------------------------------------------------------------
# the second-block reduction


def v2_formula_star(case: CaseTag, delta: TypClass, k: int, p: int) -> dict:
    """The triple-sum reduction evaluated inside the second block only;
    delta must be supported on values >= 2."""
    if delta.min_value() < 2:
        raise SupportViolation("type must be supported on values >= 2")
    sharp = case.variant == "sharp"
    flat_case = case.with_variant("flat")
    oracle = build_oracle(flat_case, p, delta)
    r = delta.rank
    g = case.gamma * r
    eps = oracle.eps_sign()

    def d_int(n: int) -> int:
        return _eval_int(case, d_case(n, case), p, eps)

    L = intersect_tail_block(oracle.lam2, oracle.n1, oracle.subframe)
    pL = L.scale_pi(1)
    reps = quotient_reps(L, pL)
    field = oracle.gf_field

    def triples(a: int):
        """(L-, L+, K) with L- <= L+ <= L, length(L+/L-) = g - a,
        K in [pi L+, L-]; L0 = pi^1-inverse of K conceptually."""
        if a < 0:
            return
        n = len(reps)
        for dplus in range(g - a, n + 1):
            dminus = dplus - (g - a)
            for up_rows in _all_subspace_rows(field, n, dplus):
                lplus = lift_subspace(oracle.subframe, reps, up_rows, pL)
                for sel in _all_subspace_rows(field, dplus, dminus):
                    um = field.matmul(sel, up_rows) if dminus else \
                        np.zeros((0, n), dtype=np.int16)
                    lminus = lift_subspace(oracle.subframe, reps, um, pL)
                    for k_lat in _sublattices_between(lplus.scale_pi(1),
                                                      lminus):
                        yield lminus, lplus, k_lat

    def term(a: int) -> dict:
        out = {}
        for lminus, lplus, k_lat in triples(a):
            len_l0_lplus = lplus.scale_pi(1).val_sum() - k_lat.val_sum()
            coeff = (d_int(L.length_over(lminus))
                     * d_int(a - len_l0_lplus)) // d_int(g - a)
            if coeff:
                cls = oracle.typ_class(k_lat).shift(-2)
                out[cls] = out.get(cls, 0) + coeff
        return {c: v for c, v in out.items() if v}

    out = term(k)
    if not sharp:
        return out
    from htl.scalars import q_pow, ONE
    c1 = _eval_int(case, q_pow(Fraction(r - k) + case.alpha)
                   * (q_pow(r - k + 1) - ONE), p, eps)
    for cls, v in term(k - 1).items():
        out[cls] = out.get(cls, 0) + c1 * v
    qv = p * p if case.family == "uH" else p
    for lminus, lplus, k_lat in triples(k - 1):
        len_l0_lplus = lplus.scale_pi(1).val_sum() - k_lat.val_sum()
        coeff = ((d_int(L.length_over(lminus))
                  * d_int(k - len_l0_lplus)) // d_int(g - k)) * (qv - 1)
        if not coeff:
            continue
        plminus = lminus.scale_pi(1)
        plplus = lplus.scale_pi(1)
        for k1 in _colength_one_sublattices(oracle, k_lat):
            if not k1.contains(plminus):
                continue
            if k1.contains(plplus):
                continue
            cls = oracle.typ_class(k1).shift(-2)
            out[cls] = out.get(cls, 0) + coeff
    return {c: v for c, v in out.items() if v}


# ---------------------------------------------------------------------------
# the odd-case three-way split


def _line_type_matches(oracle: Oracle, lam: Lattice, lam_minus: Lattice,
                       want_sign: int) -> bool:
    """Whether the dual line of the colength-1 sublattice is nondegenerate
    in the residue quotient with the requested norm sign (a line of type
    (1, s) there)."""
    ring = oracle.ring
    pdual = lam_minus.dual().scale_pi(1)
    plam = lam.scale_pi(1)
    reps = quotient_reps(pdual, plam)
    if len(reps) != 1:
        return False
    v = reps[0]
    norm = oracle.frame.pair_scaled(v, v)
    val = ring.val(norm) - 2 * oracle.frame.scale
    if val != 0:
        return False
    if oracle.case.family != "S":
        return True
    unit = ring.div_exact(norm, ring.pi_pow(ring.val(norm)))
    p = oracle.p
    sgn = 1 if pow(unit % p, (p - 1) // 2, p) == 1 else -1
    return sgn == want_sign


def sharp_split_check(case: CaseTag, delta: TypClass, p: int,
                      k: int = 1) -> dict:
    """Bucketed comparison of the odd-case coarse correspondence against
    the even-case pieces (split lattices; split neighbours; the corrective
    line enumeration), each matched term by term."""
    assert case.variant == "sharp"
    r = delta.rank
    oracle = build_oracle(case, p, delta, psi_unit=case.psi)
    flat_case = case.with_variant("flat")
    flat_oracle = build_oracle(flat_case, p, delta)
    eps = oracle.eps_sign()
    ring = oracle.ring
    u_row = tuple([ring.pi_pow(oracle.frame.scale)]
                  + [ring.zero] * (oracle.frame.n - 1))

    lam = oracle.lam2
    pl = lam.scale_pi(1)
    w_reps, w_space = quotient_space_of(oracle, lam, pl, 0)
    from htl.ffcount import isotropic_rrefs
    from htl.latoracle.hecke import _perp_rows, _Int2Shortcut
    buckets = {"a": {}, "b": {}, "c": {}}
    for s_rows in isotropic_rrefs(w_space, k):
        u_rows = _perp_rows(w_space, s_rows)
        sub = lift_subspace(oracle.frame, w_reps, u_rows, pl)
        sub_dual = sub.dual()
        reps, space = quotient_space_of(oracle, sub_dual, sub, -1)
        shortcut = _Int2Shortcut(oracle, sub, sub_dual, reps)
        u_in_l = sub.contains_row(u_row)
        for coeffs in lagrangian_coeff_rows(space):
            lam1 = lift_subspace(oracle.frame, reps, coeffs, sub)
            cls = shortcut.typ_of(coeffs)
            if u_in_l:
                b = "a"
            elif lam1.contains_row(u_row):
                b = "b"
            else:
                b = "c"
            buckets[b][cls] = buckets[b].get(cls, 0) + 1
    report = {"case": case.label(), "psi": case.psi,
              "delta": delta.values_tuple(), "p": p, "k": k}
    # bucket a: the even-case coarse correspondence itself
    want_a = hecke_star(flat_oracle, "tle", k=k)
    report["a_match"] = buckets["a"] == want_a
    # bucket b: scaled step-down multiple of the k-1 correspondence
    from htl.scalars import q_pow, ONE
    c1 = _eval_int(case, q_pow(Fraction(r - k) + case.alpha)
                   * (q_pow(r - k + 1) - ONE), p, eps)
    want_b = {c: c1 * v for c, v in hecke_star(flat_oracle, "tle",
                                               k=k - 1).items() if c1 * v}
    report["b_match"] = buckets["b"] == want_b
    # bucket c: the corrective enumeration over flat neighbours
    calpha = _eval_int(case, q_pow(case.alpha)
                       * (q_pow(case.alpha) + ONE), p, eps)
    flam = flat_oracle.lam2
    fpl = flam.scale_pi(1)
    fw_reps, fw_space = quotient_space_of(flat_oracle, flam, fpl, 0)
    want_c = {}
    for s_rows in isotropic_rrefs(fw_space, k - 1):
        u_rows = _perp_rows(fw_space, s_rows)
        sub = lift_subspace(flat_oracle.frame, fw_reps, u_rows, fpl)
        sub_dual = sub.dual()
        p_sub_dual = sub_dual.scale_pi(1)
        reps, space = quotient_space_of(flat_oracle, sub_dual, sub, -1)
        for coeffs in lagrangian_coeff_rows(space):
            lam_c = lift_subspace(flat_oracle.frame, reps, coeffs, sub)
            for lam_minus in _colength_one_sublattices(flat_oracle, lam_c):
                if not lam_minus.contains(p_sub_dual):
                    continue
                if not _line_type_matches(flat_oracle, lam_c, lam_minus,
                                          eps * case.psi):
                    continue
                cls = flat_oracle.typ_class(intersect_tail_block(
                    lam_minus, flat_oracle.n1, flat_oracle.subframe))
                want_c[cls] = want_c.get(cls, 0) + 1
    want_c = {c: calpha * v for c, v in want_c.items() if v}
    report["c_match"] = buckets["c"] == want_c
    report["ok"] = (report["a_match"] and report["b_match"]
                    and report["c_match"])
    if not report["ok"]:
        report["buckets"] = {b: {c.values_tuple(): v for c, v in d.items()}
                             for b, d in buckets.items()}
        report["want_c"] = {c.values_tuple(): v for c, v in want_c.items()}
    return report
