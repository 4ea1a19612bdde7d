"""Brute-force enumeration over finite formed spaces and the matching
closed-form counts: isotropic subspaces, nondegenerate subspaces by type,
and Lagrangians disjoint from a fixed subspace.

Families: Hermitian over GF(q0^2)/GF(q0), symmetric (q odd), alternating.
Enumeration is vectorized per reduced-echelon pivot pattern; the closed
forms are exact scalars (with the sign of -1 carried formally) evaluated at
the instance parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations

import numpy as np

from htl.gf import GF, gf
from htl.scalars import (
    CaseTag, Scalar, EPS, ONE, ZERO, Z, Q, divide, eval_scalar, falling,
    gauss_binom, pochhammer, q_pow, d_case,
)

__all__ = [
    "FormedSpaceFq", "DegenerateSpace", "NoLagrangian",
    "hermitian_space", "symmetric_space", "alternating_space",
    "classify_typ", "count_isotropic", "count_nondeg",
    "count_disjoint_lagrangians", "lagrangian_rrefs", "isotropic_rrefs",
    "closed_form_S", "closed_form_R", "closed_form_L", "total_lagrangians",
    "e_factor", "eval_closed", "space_with_flagged_subspace",
]


class DegenerateSpace(Exception):
    pass


class NoLagrangian(Exception):
    pass


@dataclass
class FormedSpaceFq:
    """A formed space over a finite field.

    family 'uH' uses field GF(q0^2) with the q0-power conjugation on the
    second slot of the pairing; 'S' needs odd characteristic; 'A' requires
    an alternating Gram matrix.
    """

    family: str
    field: GF
    gram: np.ndarray

    def __post_init__(self):
        self.gram = np.asarray(self.gram, dtype=np.int16)
        n = self.gram.shape[0]
        if self.gram.shape != (n, n):
            raise ValueError("gram must be square")
        if self.family == "uH" and self.field.d != 2:
            raise ValueError("uH needs a quadratic extension field")
        if self.family == "S" and self.field.p == 2:
            raise ValueError("family S needs odd characteristic")

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @property
    def hermitian(self) -> bool:
        return self.family == "uH"

    @property
    def gamma(self) -> int:
        return 2 if self.family == "A" else 1

    def form_values(self, rows):
        return self.field.gram_values(rows, self.gram,
                                      conj_second=self.hermitian)

    def eps_sign(self) -> int:
        """sign(-1) in the relevant residue field."""
        if self.family != "S":
            return 1
        return self.field.sign(self.field.neg(1))

    def q_param(self) -> int:
        """The evaluation point for z (q0 for uH, else q is z^2)."""
        return self.field.p ** (self.field.d // 2) if self.hermitian else None


def hermitian_space(q0: int, dim: int) -> FormedSpaceFq:
    f = gf(q0, 2)
    return FormedSpaceFq("uH", f, np.eye(dim, dtype=np.int16))


def _gf_any(q: int) -> GF:
    for p in (2, 3, 5, 7):
        if q == p:
            return gf(p, 1)
        if q == p * p:
            return gf(p, 2)
    raise ValueError(f"unsupported field size {q}")


def symmetric_space(q: int, dim: int, chi: int = 1) -> FormedSpaceFq:
    f = gf(q, 1)
    g = np.eye(dim, dtype=np.int16)
    if chi == -1:
        u = next(x for x in range(2, q) if f.sign(x) == -1)
        g[dim - 1, dim - 1] = u
    return FormedSpaceFq("S", f, g)


def alternating_space(q: int, dim: int) -> FormedSpaceFq:
    if dim % 2:
        raise ValueError("alternating spaces have even dimension")
    f = _gf_any(q)
    g = np.zeros((dim, dim), dtype=np.int16)
    for i in range(0, dim, 2):
        g[i, i + 1] = 1
        g[i + 1, i] = f.neg(1)
    return FormedSpaceFq("A", f, g)


def classify_typ(space: FormedSpaceFq, gram=None):
    """(dim/gamma, sign det) of a nondegenerate (sub)space."""
    g = space.gram if gram is None else np.asarray(gram, dtype=np.int16)
    k = g.shape[0]
    if k == 0:
        return (0, 1)
    det = int(space.field.det_batch(g[None])[0])
    if det == 0:
        raise DegenerateSpace("zero determinant")
    if space.family == "S":
        return (k, space.field.sign(det))
    return (k // space.gamma, 1)


# ---------------------------------------------------------------------------
# subspace enumeration


def _pattern_batches(field: GF, n: int, b: int, chunk: int = 200_000):
    """Yield numpy batches (B, b, n) of all rref matrices of rank b."""
    q = field.q
    for piv in combinations(range(n), b):
        free = [(i, j) for i in range(b) for j in range(piv[i] + 1, n)
                if j not in piv]
        f = len(free)
        total = q ** f
        base = np.zeros((b, n), dtype=np.int16)
        for i, c in enumerate(piv):
            base[i, c] = 1
        start = 0
        while start < total:
            stop = min(start + chunk, total)
            count = stop - start
            batch = np.repeat(base[None], count, axis=0)
            idx = np.arange(start, stop)
            for k, (i, j) in enumerate(free):
                batch[:, i, j] = (idx // (q ** k)) % q
            yield batch
            start = stop


def count_isotropic(space: FormedSpaceFq, b: int) -> int:
    """Number of b-dimensional totally isotropic subspaces, by enumeration."""
    if b == 0:
        return 1
    if b > space.dim:
        return 0
    total = 0
    for batch in _pattern_batches(space.field, space.dim, b):
        vals = space.form_values(batch)
        total += int(np.count_nonzero((vals == 0).all(axis=(1, 2))))
    return total


def count_nondeg(space: FormedSpaceFq, a: int, eta: int = 1) -> int:
    """Number of nondegenerate a-dim subspaces with type sign eta."""
    if a == 0:
        return 1 if eta == 1 else 0
    if a > space.dim:
        return 0
    if space.family == "A" and a % 2:
        return 0
    total = 0
    for batch in _pattern_batches(space.field, space.dim, a):
        vals = space.form_values(batch)
        dets = space.field.det_batch(vals)
        if space.family == "S":
            keep = space.field.sign_table[dets] == eta
        else:
            keep = dets != 0
        total += int(np.count_nonzero(keep))
    return total


def isotropic_rrefs(space: FormedSpaceFq, k: int, gram=None, n=None):
    """Yield rref bases of all totally isotropic k-subspaces, each once.

    Rows are generated bottom-up per pivot pattern, filtering candidates in
    batch against the already fixed lower rows.
    """
    g = space.gram if gram is None else np.asarray(gram, dtype=np.int16)
    n = g.shape[0] if n is None else n
    if k == 0:
        yield np.zeros((0, n), dtype=np.int16)
        return
    field = space.field
    herm = space.hermitian
    alternating = space.family == "A"

    for piv in combinations(range(n), k):
        def fill(row_idx, fixed):
            # fixed: list of rows already chosen for indices > row_idx
            if row_idx < 0:
                yield np.array(fixed[::-1], dtype=np.int16)
                return
            c = piv[row_idx]
            free = [j for j in range(c + 1, n) if j not in piv]
            q = field.q
            total = q ** len(free)
            base = np.zeros(n, dtype=np.int16)
            base[c] = 1
            cands = np.repeat(base[None], total, axis=0)
            idx = np.arange(total)
            for t, j in enumerate(free):
                cands[:, j] = (idx // (q ** t)) % q
            keep = np.ones(total, dtype=bool)
            if not alternating:
                vals = field.gram_values(cands[:, None, :], g,
                                         conj_second=herm)[:, 0, 0]
                keep &= vals == 0
            for w in fixed:
                inter = field.matmul(cands, g)
                wv = field.conj_table[w] if herm else w
                pair = None
                for j in range(n):
                    term = field.mul_table[inter[:, j], wv[j]]
                    pair = term if pair is None else field.add_table[pair, term]
                keep &= pair == 0
            for row in cands[keep]:
                yield from fill(row_idx - 1, fixed + [row])

        yield from fill(k - 1, [])


def lagrangian_rrefs(space: FormedSpaceFq):
    if space.dim % 2:
        raise NoLagrangian("odd dimension")
    yield from isotropic_rrefs(space, space.dim // 2)


def count_disjoint_lagrangians(space: FormedSpaceFq, sub_rows) -> int:
    """Lagrangians meeting the row span of sub_rows trivially."""
    sub_rows = np.asarray(sub_rows, dtype=np.int16)
    dl = sub_rows.shape[0]
    s = space.dim // 2
    total = 0
    for lag in lagrangian_rrefs(space):
        stacked = np.vstack([sub_rows, lag])
        if space.field.rank(stacked) == dl + s:
            total += 1
    return total


# ---------------------------------------------------------------------------
# closed forms (exact scalars; z = q0 for uH, z^2 = q otherwise)


def e_factor(n: int, sign=1) -> Scalar:
    """Normalization for the symmetric family: e(2m, s) = q^m + eps^m s,
    e(odd, s) = 1.  The sign slot accepts +-1 or a formal +-eps scalar, so
    e(0, s) = 1 + s is 2 for trivial sign and 0 for -1, making the enclosing
    counts vanish exactly when no Lagrangian exists."""
    if n < 0:
        raise ValueError("negative argument")
    sgn = sign if isinstance(sign, Scalar) else Scalar.integer(sign)
    if n % 2:
        return ONE
    m = n // 2
    return Q ** m + (EPS ** (m % 2)) * sgn


def closed_form_S(b: int, typ, case: CaseTag) -> Scalar:
    """Isotropic subspace count; typ = (r, chi) of the ambient space."""
    r, chi = typ
    if b < 0:
        return ZERO
    if case.family == "uH":
        return pochhammer(-Z, Z * Z, b) * gauss_binom(r, 2 * b, -Z)
    if case.family == "S":
        if 2 * b > r:
            return ZERO
        return divide(pochhammer(-Q, Q, b) * gauss_binom(r // 2, b, Q * Q)
                      * e_factor(r - 2 * b, chi * _eps_pow(b)),
                      e_factor(r, chi))
    return pochhammer(-Q, Q, b) * gauss_binom(r, b, Q * Q)


def _eps_pow(k: int) -> Scalar:
    return ONE if k % 2 == 0 else EPS


def closed_form_R(a: int, eta: int, typ, case: CaseTag) -> Scalar:
    """Nondegenerate subspace count by type; typ = (r, chi) of the ambient."""
    r, chi = typ
    if a < 0 or a > r:
        return ZERO
    if case.family == "uH":
        return (-Z) ** (a * (r - a)) * gauss_binom(r, a, -Z)
    if case.family == "S":
        num = (q_pow((a * (r - a)) // 2)
               * falling(Q * Q, r // 2)
               * e_factor(a, eta) * e_factor(r - a, chi * eta))
        den = (Scalar.integer(2) * falling(Q * Q, a // 2)
               * falling(Q * Q, (r - a) // 2) * e_factor(r, chi))
        return divide(num, den)
    return Q ** (2 * a * (r - a)) * gauss_binom(r, a, Q * Q)


def total_lagrangians(r: int, case: CaseTag) -> Scalar:
    if case.family == "uH":
        return pochhammer(-Z, Z * Z, r)
    if case.family == "S":
        return pochhammer(-ONE, Q, r)
    return pochhammer(-Q, Q, r)


def closed_form_L(a: int, b: int, chi: int, r: int, case: CaseTag) -> Scalar:
    """Lagrangians disjoint from a subspace with radical dim a and
    nondegenerate quotient of type (b, chi), in a 2r-dim split space."""
    if a < 0 or b < 0 or a + case.gamma * b > r:
        raise ValueError("L-count needs 0 <= a, b with a + gamma*b <= r")
    base = _closed_form_L0(b, chi, r - a, case)
    return base * divide(d_case(r, case), d_case(r - a, case))


def _closed_form_L0(b: int, chi: int, r: int, case: CaseTag) -> Scalar:
    if case.family == "uH":
        return ((-1) ** r * (-Z) ** ((b * (b - 1)) // 2)
                * divide(falling(-Z, 2 * r - b), falling(Z * Z, r - b)))
    if case.family == "S":
        num = (Scalar.integer(2) * Q ** ((b // 2) * ((b - 1) // 2))
               * falling(Q * Q, r - (b + 1) // 2))
        den = falling(Q, r - b) * e_factor(2 * r - b, chi * _eps_pow(r))
        return divide(num, den)
    return Q ** (b * b) * divide(falling(Q * Q, r - b), falling(Q, r - 2 * b))


def eval_closed(s: Scalar, space: FormedSpaceFq) -> int:
    """Evaluate a closed form at the space's parameters; must be integral."""
    if space.hermitian:
        val = eval_scalar(s, z=space.q_param(), eps=1)
    else:
        val = eval_scalar(s, q=space.field.q, eps=space.eps_sign())
    if val.denominator != 1:
        raise AssertionError(f"closed form not integral: {val}")
    return int(val)


# ---------------------------------------------------------------------------
# fixtures with a flagged subspace (radical + nondegenerate quotient)


def _hyperbolic_block(space_family: str, field: GF):
    if space_family == "A":
        return np.array([[0, 1], [field.neg(1), 0]], dtype=np.int16)
    return np.array([[0, 1], [1, 0]], dtype=np.int16)


def space_with_flagged_subspace(case: CaseTag, qf: int, r: int, a: int,
                                b: int, chi: int = 1):
    """Build (space, sub_rows) with dim V = 2r, typ(V) split, and a subspace
    whose radical has dim a and whose quotient is nondegenerate of type
    (b, chi).  Returns None when the combination does not fit."""
    fam = case.family
    gb = b * case.gamma
    rest = 2 * r - 2 * a - gb
    if rest < 0:
        return None
    if fam == "A":
        if rest % 2:
            return None
        f = _gf_any(qf)
        blocks = [_hyperbolic_block("A", f)] * a + \
            [_hyperbolic_block("A", f)] * b + \
            [_hyperbolic_block("A", f)] * (rest // 2)
        g = _block_diag(blocks)
        space = FormedSpaceFq("A", f, g)
        rows = []
        for i in range(a):
            rows.append(_unit_row(2 * r, 2 * i))
        for i in range(b):
            rows.extend([_unit_row(2 * r, 2 * a + 2 * i),
                         _unit_row(2 * r, 2 * a + 2 * i + 1)])
        sub = (np.array(rows, dtype=np.int16) if rows
               else np.zeros((0, 2 * r), np.int16))
        return space, sub
    if fam == "uH":
        f = gf(qf, 2)
        blocks = [_hyperbolic_block("uH", f)] * a
        blocks.append(np.eye(gb, dtype=np.int16))
        if rest:
            blocks.append(np.eye(rest, dtype=np.int16))
        g = _block_diag(blocks)
        space = FormedSpaceFq("uH", f, g)
        rows = [_unit_row(2 * r, 2 * i) for i in range(a)]
        rows += [_unit_row(2 * r, 2 * a + i) for i in range(gb)]
        return space, np.array(rows, dtype=np.int16) if rows else np.zeros((0, 2 * r), np.int16)
    # symmetric: adjust a unit so the whole space is split and the quotient
    # block has sign chi
    f = gf(qf, 1)
    eps = f.sign(f.neg(1))
    nonres = next(x for x in range(2, qf) if f.sign(x) == -1)
    blocks = [_hyperbolic_block("S", f)] * a
    wblock = np.eye(b, dtype=np.int16)
    if b:
        if chi == -1:
            wblock[b - 1, b - 1] = nonres
    elif chi == -1:
        return None
    blocks.append(wblock)
    if rest == 0:
        g = _block_diag(blocks)
        space = FormedSpaceFq("S", f, g)
        if classify_typ(space) != (2 * r, _int_eps_pow(eps, r)):
            return None
    else:
        restblock = np.eye(rest, dtype=np.int16)
        g = _block_diag(blocks + [restblock])
        space = FormedSpaceFq("S", f, g)
        want = _int_eps_pow(eps, r)
        if classify_typ(space)[1] != want:
            restblock[rest - 1, rest - 1] = nonres
            g = _block_diag(blocks + [restblock])
            space = FormedSpaceFq("S", f, g)
            if classify_typ(space)[1] != want:
                return None
    rows = [_unit_row(2 * r, 2 * i) for i in range(a)]
    rows += [_unit_row(2 * r, 2 * a + i) for i in range(b)]
    sub = (np.array(rows, dtype=np.int16) if rows
           else np.zeros((0, 2 * r), np.int16))
    return space, sub


def _int_eps_pow(eps: int, k: int) -> int:
    return 1 if k % 2 == 0 else eps


def _block_diag(blocks):
    n = sum(b.shape[0] for b in blocks)
    g = np.zeros((n, n), dtype=np.int16)
    at = 0
    for b in blocks:
        k = b.shape[0]
        g[at:at + k, at:at + k] = b
        at += k
    return g


def _unit_row(n: int, i: int):
    row = np.zeros(n, dtype=np.int16)
    row[i] = 1
    return row
