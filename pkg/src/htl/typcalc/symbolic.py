"""Exact operator identities and preservation checks.

Covers: the step-one sharp/flat difference, the intertwiner as a weighted
sum of elementary translations, the sharp-minus-flat straightening defect,
the interleaving-sum lemma, the spherical-transform factor identities, the
generating recursions for the square-root operators, and the triangular
change of basis between coarse sums and the symmetric-polynomial basis.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

from htl.incidence import PosetWindow, satake_table
from htl.scalars import (
    CaseTag, Scalar, EPS, ONE, Q, Z, ZERO, d_case, divide, inv_sets,
    q_pow, w_poly,
)
from htl.ffcount import closed_form_R, closed_form_S
from htl.typcalc.operators import (
    OperatorExpr, apply_operator, build_operator, identity_op,
)
from htl.typcalc.relations import IncompleteRules, depth_image, swap_pair
from htl.typcalc.straighten import straighten, straighten_partial
from htl.typcalc.types import FormalSum, canon_term

__all__ = ["verify_symbolic", "check_preserves", "depth1_generators",
           "swap_generators", "interleaving_sum", "interleaving_closed"]


# ---------------------------------------------------------------------------
# relation-generator instances


def depth1_generators(case: CaseTag, r: int, prefix_lo: int, prefix_hi: int):
    """rho = prefix * ((-1, chi) - image) for sorted prefixes; str(rho) = 0."""
    signs = case.sign_values
    for prefix in _sorted_tuples(r - 1, prefix_lo, prefix_hi):
        for pre_signs in product(signs, repeat=r - 1):
            for chi in signs:
                lhs = FormalSum.single(prefix + (-1,), pre_signs + (chi,))
                rhs = FormalSum()
                for val, sgn, coeff in depth_image(case, -1, chi):
                    rhs.add_term(canon_term(prefix + (val,),
                                            pre_signs + (sgn,)), coeff)
                yield {"kind": "depth1", "prefix": prefix, "chi": chi,
                       "rho": lhs - rhs}


def swap_generators(case: CaseTag, r: int, base_lo: int, base_hi: int,
                    gap: int, context_lo: int, context_hi: int):
    """rho = context-embedded adjacent pair relation instances."""
    signs = case.sign_values
    for pos in range(r - 1):
        for base in range(base_lo, base_hi + 1):
            for ctx in _sorted_tuples(r - 2, context_lo, context_hi):
                pre, post = ctx[:pos], ctx[pos:]
                for chi1 in signs:
                    for chi2 in signs:
                        vals = pre + (base, base + gap) + post
                        sg = ((1,) * len(pre) + (chi1, chi2)
                              + (1,) * len(post))
                        lhs = FormalSum.single(vals, sg)
                        rhs = FormalSum()
                        for pv, ps, coeff in swap_pair(case, base, gap,
                                                       chi1, chi2):
                            rhs.add_term(
                                canon_term(pre + pv + post,
                                           (1,) * len(pre) + ps
                                           + (1,) * len(post)), coeff)
                        yield {"kind": f"swap{gap}", "pos": pos,
                               "base": base, "rho": lhs - rhs}


def _sorted_tuples(length: int, lo: int, hi: int):
    if length == 0:
        yield ()
        return
    for tup in product(range(hi, lo - 1, -1), repeat=length):
        if all(tup[i] >= tup[i + 1] for i in range(length - 1)):
            yield tup


def check_preserves(op: OperatorExpr, case: CaseTag, instances) -> dict:
    """straighten(op(rho)) for each generator instance rho; per-instance
    status is 'zero', 'nonzero' (with witness) or 'incomplete'."""
    report = {"case": case.label(), "zero": 0, "nonzero": [],
              "incomplete": 0, "checked": 0}
    for inst in instances:
        rho = inst["rho"]
        report["checked"] += 1
        image = apply_operator(op, rho)
        try:
            res = straighten(image, case)
        except IncompleteRules:
            report["incomplete"] += 1
            continue
        if res.is_zero():
            report["zero"] += 1
        else:
            report["nonzero"].append({k: v for k, v in inst.items()
                                      if k != "rho"})
    report["ok"] = not report["nonzero"]
    return report


# ---------------------------------------------------------------------------
# the interleaving sum


def interleaving_sum(positions_plus, n: int, k: int) -> Scalar:
    """Direct enumeration of the three-part interleaving sum for the
    ordered set {0..n-1} with the given subset marked as the outer part."""
    iplus = sorted(positions_plus)
    izero = [p for p in range(n) if p not in positions_plus]
    total = ZERO

    def three_splits(universe, esize):
        for emask in combinations(universe, esize):
            rest = [p for p in universe if p not in emask]
            for pick in range(1 << len(rest)):
                e0 = [rest[i] for i in range(len(rest)) if pick >> i & 1]
                e1 = [rest[i] for i in range(len(rest)) if not pick >> i & 1]
                yield list(emask), e0, e1

    for beta in iplus:
        for e, e0, e1 in three_splits(izero, k):
            expo = (inv_sets(e0, e) - inv_sets(e1, e)
                    + sum(1 for j in iplus + e0 if j < beta))
            total = total + q_pow(expo)
    for beta in iplus:
        for e, e0, e1 in three_splits(izero, k + 1):
            expo = (inv_sets(e0, e) - inv_sets(e1, e)
                    + sum(1 for j in iplus + e1 if j < beta))
            inner = sum(1 for x in e if x > beta)
            total = total + q_pow(expo) * (q_pow(inner) - ONE)
    for beta in izero:
        others = [p for p in izero if p != beta]
        for e, e0, e1 in three_splits(others, k + 1):
            expo = (inv_sets(e0, e) - inv_sets(e1, e)
                    + sum(1 for j in iplus + e1 if j < beta))
            inner = sum(1 for x in e if x > beta)
            total = total + q_pow(expo) * (ONE - q_pow(-inner))
    return total


def interleaving_closed(n_zero: int, n_plus: int, k: int) -> Scalar:
    """(q-1) * Y_k expressed through the three-block weight sums."""
    return (q_pow(Fraction(2 * n_plus + n_zero - k, 2))
            * w_poly(Fraction(1, 2), k, n_zero)
            - w_poly(0, k, n_zero)
            - (q_pow(k + 1) - ONE) * w_poly(0, k + 1, n_zero))


# ---------------------------------------------------------------------------
# spherical-transform building blocks

# w below is a formal square root of -q0 (uH) so half powers stay integral
W_MONO = Scalar.monomial(1)


def _uh_w_ring():
    neg_q0 = W_MONO * W_MONO
    q0 = -neg_q0
    return q0, neg_q0


def _a_factor_uh(beta: int, r: int) -> OperatorExpr:
    q0, nq0 = _uh_w_ring()
    e = 2 * r + beta + 1
    out = OperatorExpr(1)
    out.add_term((1,), Scalar.monomial(e), 1, 0)
    out.add_term((0,), ONE, 0, 1)
    out.add_term((-1,), -Scalar.monomial(-e), 1, 0)
    return out


def _b_factor_uh(beta: int, r: int) -> OperatorExpr:
    q0, _ = _uh_w_ring()
    e = 2 * r + beta + 1
    out = OperatorExpr(1)
    out.add_term((2,), -(q0 ** e), 1, 0)
    out.add_term((0,), ONE, 0, 1)
    out.add_term((-2,), -((q0 ** e).inverse()), 1, 0)
    return out


def _a_factor_sp(r: int) -> OperatorExpr:
    e = 2 * (2 * r + 1) + 1  # z-exponent of q^(2r+3/2)
    out = OperatorExpr(1)
    out.add_term((1,), -Scalar.monomial(e), 1, 0)
    out.add_term((0,), ONE, 0, 1)
    out.add_term((-1,), -Scalar.monomial(-e), 1, 0)
    return out


def _b_factor_sp(r: int) -> OperatorExpr:
    out = OperatorExpr(1)
    out.add_term((2,), q_pow(4 * r + 3), 2, 0)
    out.add_term((1,), -(q_pow(2 * r + 1) * (Q + ONE)), 1, 1)
    out.add_term((0,), Scalar.monomial(2) + Scalar.monomial(-2), 2, 0)
    out.add_term((0,), ONE, 0, 2)
    out.add_term((-1,), -(q_pow(-(2 * r + 2)) * (Q + ONE)), 1, 1)
    out.add_term((-2,), q_pow(-(4 * r + 3)), 2, 0)
    return out


def _half_gen_op(case: CaseTag, r: int) -> OperatorExpr:
    """Generating operator sum_k c_k S_k^(1/2),* (-x)^k y^(r-k)."""
    fam, var = case.family, case.variant
    out = OperatorExpr(r)
    if fam == "uH":
        beta = 1 if var == "sharp" else 0
        q0, nq0 = _uh_w_ring()
        for k in range(r + 1):
            op = build_operator("half", case, k=k, r=r, q0_scalar=q0)
            ck = Scalar.monomial(-k * (2 * r + beta - k))  # (-q0)^(-k(2r+b-k)/2)
            sign = Scalar.integer((-1) ** k)
            for (shift, _, _), c in op.terms.items():
                out.add_term(shift, c * ck * sign, k, r - k)
        return out
    for k in range(r + 1):
        op = build_operator("half", case, k=k, r=r)
        ck = Scalar.monomial(-k * (4 * r + 1 - 2 * k))  # q^(-k(4r+1-2k)/2)
        sign = Scalar.integer((-1) ** k)
        for (shift, _, _), c in op.terms.items():
            out.add_term(shift, c * ck * sign, k, r - k)
    return out


# ---------------------------------------------------------------------------
# the named identity suite


def verify_symbolic(name: str, case: CaseTag = None, **params) -> dict:
    if name == "deltadif":
        r = params["r"]
        lhs = (build_operator("dle", case.with_variant("sharp"), k=1, r=r)
               - build_operator("dle", case.with_variant("flat"), k=1, r=r))
        alpha = case.alpha
        rhs = (identity_op(r) * (q_pow(Fraction(r - 1) + alpha)
                                 * (q_pow(r) - ONE))
               + build_operator("natural", case, k=1, r=r)
               * ((Q - ONE) * q_pow(Fraction(r - 1) + 2 * alpha)))
        return _op_report(name, case, params, lhs, rhs)
    if name == "delta_alternative":
        r = params["r"]
        lhs = build_operator("circbullet", case, r=r)
        rhs = OperatorExpr(r)
        g = case.gamma * r
        down = OperatorExpr.shift_term((-1,) * r)
        for k in range(g + 1):
            rhs = rhs + build_operator("natural", case, k=k, r=r) * d_case(k, case)
        rhs = rhs.compose(down)
        return _op_report(name, case, params, lhs, rhs)
    if name == "strred":
        return _strred_report(case, **params)
    if name == "yk":
        n0, npl, k = params["n_zero"], params["n_plus"], params["k"]
        ok = True
        witness = None
        n = n0 + npl
        for shape in combinations(range(n), npl):
            lhs = (Q - ONE) * interleaving_sum(list(shape), n, k)
            rhs = interleaving_closed(n0, npl, k)
            if lhs != rhs:
                ok = False
                witness = shape
                break
        return {"name": name, "params": params, "ok": ok, "witness": witness}
    if name == "sph_uH":
        beta, r = params["beta"], params["r"]
        a1 = _a_factor_uh(beta, r)
        a2 = OperatorExpr(1, {(s, xe, ye): c * Scalar.integer((-1) ** xe)
                              for (s, xe, ye), c in a1.terms.items()})
        lhs = a1.compose(a2)
        sign = Scalar.integer((-1) ** (beta + 1))
        rhs = _b_factor_uh(beta, r).subst_markers(
            {(2, 0): sign}, {(0, 2): ONE, (2, 0): Scalar.integer(2)})
        return _op_report(name, case, params, lhs, rhs)
    if name == "sph_A":
        r = params["r"]
        a = _a_factor_sp(r)
        sq = Scalar.monomial(1)       # z = sqrt(q)
        lhs = a.subst_markers({(1, 1): ONE},
                              {(2, 0): sq, (0, 2): sq.inverse()}).compose(
            a.subst_markers({(1, 1): ONE},
                            {(2, 0): sq.inverse(), (0, 2): sq}))
        rhs = _b_factor_sp(r).subst_markers({(1, 1): ONE},
                                            {(2, 0): ONE, (0, 2): ONE})
        return _op_report(name, case, params, lhs, rhs)
    if name == "half_rec":
        r = params["r"]
        lhs = _half_gen_op(case, r + 1)
        if case.family == "uH":
            beta = 1 if case.variant == "sharp" else 0
            rhs = _a_factor_uh(beta, r).star(_half_gen_op(case, r))
        else:
            rhs = _a_factor_sp(r).star(_half_gen_op(case, r))
        return _op_report(name, case, params, lhs, rhs)
    if name == "triangular_b":
        r = params["r"]
        g = case.gamma * r
        tab = satake_table(case, PosetWindow(0, g))
        bad = []
        for kp in range(g + 1):
            lhs = build_operator("dle", case, k=g - kp, r=r)
            rhs = OperatorExpr(r)
            for i in range(kp, g + 1):
                rhs = rhs + build_operator("s_sat", case, k=g - i, r=r) \
                    * tab["B"].get(kp, i)
            if lhs != rhs:
                bad.append(kp)
        return {"name": name, "case": case.label(), "params": params,
                "ok": not bad, "witness": bad or None}
    if name == "triangular_a":
        r = params["r"]
        g = case.gamma * r
        tab = satake_table(case, PosetWindow(0, g))
        bad = []
        for k in range(g + 1):
            for i in range(k, g + 1):
                if case.variant == "sharp":
                    typ = (2 * i + 1, _sgn_eps(i) * case.psi)
                elif case.family == "A":
                    typ = (i, ONE)
                else:
                    typ = (2 * i, _sgn_eps(i))
                want = closed_form_S(i - k, typ, case)
                got = tab["A"].get(k, i)
                if got != want:
                    bad.append((k, i))
        return {"name": name, "case": case.label(), "params": params,
                "ok": not bad, "witness": bad or None}
    raise ValueError(f"unknown identity {name}")


def _sgn_eps(k: int):
    return ONE if k % 2 == 0 else EPS


def _op_report(name, case, params, lhs, rhs) -> dict:
    diff = lhs - rhs
    witness = None
    if not diff.is_zero():
        key = next(iter(diff.terms))
        witness = {"term": key, "coeff": diff.terms[key].to_text()}
    return {"name": name, "case": case.label() if case else None,
            "params": params, "ok": diff.is_zero(), "witness": witness}


def _strred_report(case: CaseTag, r: int, lam: int, chi: int,
                   delta_prime=None, prime_signs=None) -> dict:
    """str_sharp(D(delta)) - str_flat(D(delta)) for D the coarse step-one
    flat operator and delta = delta' * (0^lam, chi)."""
    if delta_prime is None:
        delta_prime = ()
    if prime_signs is None:
        prime_signs = (1,) * len(delta_prime)
    if len(delta_prime) + lam != r:
        raise ValueError("length mismatch")
    values = tuple(delta_prime) + (0,) * lam
    signs = tuple(prime_signs) + (chi,) + (1,) * (lam - 1)
    delta = FormalSum.single(values, signs)
    op = build_operator("dle", case.with_variant("flat"), k=1, r=r)
    image = apply_operator(op, delta)
    lhs = (straighten(image, case.with_variant("sharp"))
           - straighten(image, case.with_variant("flat")))
    if case.family == "uH":
        rfac = closed_form_R(1, 1, (lam, 1), case)
    else:
        rfac = closed_form_R(1, case.psi, (lam, chi), case)
    coeff = (q_pow(Fraction(r - lam) + case.alpha)
             * (q_pow(case.alpha) + ONE) * rfac)
    prime = FormalSum.single(tuple(delta_prime), tuple(prime_signs))
    tail = FormalSum.single((0,) * lam, (chi,) + (1,) * (lam - 1))
    swapped = FormalSum.single(
        (0,) * (lam - 1) + (2,),
        (case.psi * chi,) + (1,) * (lam - 2) + (case.psi,)
    ) if lam >= 2 else FormalSum.single((2,), (case.psi * chi * case.psi,))
    nat = straighten(swapped, CaseTag(case.family, "natural"))
    rhs_raw = prime.star(tail - nat) * coeff
    rhs = straighten(rhs_raw, CaseTag(case.family, "natural"))
    lhs_n = straighten(FormalSum(lhs.coeffs), CaseTag(case.family, "natural"))
    diff = lhs_n - rhs
    return {"name": "strred", "case": case.label(),
            "params": {"r": r, "lam": lam, "chi": chi,
                       "delta_prime": delta_prime,
                       "prime_signs": prime_signs, "psi": case.psi},
            "ok": diff.is_zero(),
            "witness": None if diff.is_zero() else repr(diff)}
