"""Lattices in a fixed ambient frame over a truncated local ring.

Every lattice L in play satisfies pi^a * frame <= L <= pi^(-a) * frame; it
is stored as the canonical staircase matrix of pi^a L mod pi^m.  The frame
records the ambient Gram matrix, whose stored pairing values carry a fixed
valuation offset of 2a.
"""

from __future__ import annotations

from dataclasses import dataclass

from htl.latoracle.localring import (
    LocalRing, PrecisionExhausted, howell, left_kernel_mod, smith_basis,
)

__all__ = ["Frame", "Lattice", "typ_natural", "intersect_tail_block",
           "quotient_reps", "lift_subspace"]


@dataclass
class Frame:
    ring: LocalRing
    n: int
    gram: tuple          # n x n ring elements (tuple of row tuples)
    scale: int           # the window radius a
    hermitian: bool = False
    alternating: bool = False

    def __post_init__(self):
        if 2 * self.scale + 2 > self.ring.m:
            raise PrecisionExhausted("window exceeds precision")

    def pair_scaled(self, row1, row2):
        """Stored-row pairing; equals pi^(2a) times the true pairing."""
        ring = self.ring
        acc = ring.zero
        for i, xi in enumerate(row1):
            if ring.is_zero(xi):
                continue
            for j, yj in enumerate(row2):
                if ring.is_zero(yj):
                    continue
                g = self.gram[i][j]
                if ring.is_zero(g):
                    continue
                acc = ring.add(acc, ring.mul(ring.mul(xi, g),
                                             ring.conj(yj)
                                             if self.hermitian else yj))
        return acc

    def frame_rows(self, power: int):
        ring = self.ring
        f = ring.pi_pow(power)
        out = []
        for i in range(self.n):
            row = [ring.zero] * self.n
            row[i] = f
            out.append(tuple(row))
        return out


class Lattice:
    """Canonical full-rank staircase matrix of pi^scale * L mod pi^m."""

    __slots__ = ("frame", "rows", "piv_cols", "piv_vals")

    def __init__(self, frame: Frame, raw_rows, pad_window: bool = True):
        ring = frame.ring
        rows = list(raw_rows)
        if pad_window:
            rows += frame.frame_rows(2 * frame.scale)
        mat, cols, vals = howell(ring, rows, frame.n)
        if len(cols) != frame.n:
            raise ValueError("lattice matrix is not full rank")
        if any(v > 2 * frame.scale for v in vals):
            raise PrecisionExhausted("lattice escapes the window")
        self.frame = frame
        self.rows = mat
        self.piv_cols = cols
        self.piv_vals = vals

    def key(self):
        return self.rows

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def val_sum(self) -> int:
        return sum(self.piv_vals)

    def length_over(self, other: "Lattice") -> int:
        """length(self / other) for other <= self (per residue-field unit)."""
        return other.val_sum() - self.val_sum()

    def contains(self, other: "Lattice") -> bool:
        mat, cols, vals = howell(self.frame.ring,
                                 list(self.rows) + list(other.rows),
                                 self.frame.n)
        return mat == self.rows

    def contains_row(self, scaled_row) -> bool:
        mat, _, _ = howell(self.frame.ring,
                           list(self.rows) + [tuple(scaled_row)],
                           self.frame.n)
        return mat == self.rows

    def sum(self, other: "Lattice") -> "Lattice":
        return Lattice(self.frame, list(self.rows) + list(other.rows),
                       pad_window=False)

    def scale_pi(self, t: int) -> "Lattice":
        ring = self.frame.ring
        f = ring.pi_pow(t)
        return Lattice(self.frame,
                       [tuple(ring.mul(f, x) for x in row)
                        for row in self.rows])

    def intersect(self, other: "Lattice") -> "Lattice":
        a1 = _dot_annihilator_rows(self.frame.ring, list(self.rows),
                                   self.frame.n)
        a2 = _dot_annihilator_rows(other.frame.ring, list(other.rows),
                                   other.frame.n)
        ring = self.frame.ring
        mat, _, _ = howell(ring, a1 + a2, self.frame.n)
        back = _dot_annihilator_rows(ring, list(mat), self.frame.n)
        return Lattice(self.frame, back)

    def dual(self) -> "Lattice":
        """Form dual within the window."""
        frame = self.frame
        ring = frame.ring
        k = 2 * frame.scale
        mat = []
        for i in range(frame.n):
            col = []
            for row in self.rows:
                acc = ring.zero
                for j in range(frame.n):
                    yj = ring.conj(row[j]) if frame.hermitian else row[j]
                    acc = ring.add(acc, ring.mul(frame.gram[i][j], yj))
                col.append(acc)
            mat.append(tuple(col))
        gens = left_kernel_mod(ring, mat, k)
        return Lattice(frame, gens)

    def quotient_divisors(self, sub: "Lattice"):
        coeffs = _express_in(self, sub)
        return smith_basis(self.frame.ring, coeffs, list(self.rows))


def _dot_annihilator_rows(ring, rows, n):
    mat = [tuple(rows[r][i] for r in range(len(rows))) for i in range(n)]
    gens = left_kernel_mod(ring, mat, ring.m)
    return [tuple(g) for g in gens]


def _express_in(big: Lattice, small: Lattice):
    ring = big.frame.ring
    out = []
    for row in small.rows:
        rem = list(row)
        coeff = [ring.zero] * len(big.rows)
        for idx in range(len(big.rows)):
            col = big.piv_cols[idx]
            if ring.is_zero(rem[col]):
                continue
            c = ring.div_exact(rem[col], big.rows[idx][col])
            coeff[idx] = c
            rem = [ring.sub(x, ring.mul(c, y))
                   for x, y in zip(rem, big.rows[idx])]
        if any(not ring.is_zero(x) for x in rem):
            raise ValueError("not contained")
        out.append(coeff)
    return out


def intersect_tail_block(lat: Lattice, first: int, subframe: Frame) -> Lattice:
    """Intersection with the coordinate block dropping the first `first`
    coordinates, as a lattice in the given subframe."""
    ring = lat.frame.ring
    if first == 0:
        gens = [tuple(row) for row in lat.rows]
    else:
        kern = left_kernel_mod(ring, [tuple(row[:first])
                                      for row in lat.rows], ring.m)
        gens = []
        for g in kern:
            row = [ring.zero] * lat.frame.n
            for t, c in enumerate(g):
                if ring.is_zero(c):
                    continue
                for j in range(lat.frame.n):
                    row[j] = ring.add(row[j], ring.mul(c, lat.rows[t][j]))
            gens.append(tuple(row))
    proj = [tuple(row[first:]) for row in gens]
    return Lattice(subframe, proj)


def quotient_reps(big: Lattice, small: Lattice):
    """Scaled representative rows of an F_q-basis of big/small; the
    quotient must be killed by pi."""
    dvals, basis = big.quotient_divisors(small)
    reps = []
    for d, b in zip(dvals, basis):
        if d == 0:
            continue
        if d != 1:
            raise ValueError("quotient not killed by pi")
        reps.append(b)
    return reps


def lift_subspace(frame: Frame, reps, coeff_rows, base: Lattice) -> Lattice:
    """base + span of sum_j c_ij reps_j for GF-encoded coefficient rows."""
    ring = frame.ring
    rows = list(base.rows)
    for crow in coeff_rows:
        row = [ring.zero] * frame.n
        for c, rep in zip(crow, reps):
            ce = ring.from_residue(int(c))
            if ring.is_zero(ce):
                continue
            for j in range(frame.n):
                row[j] = ring.add(row[j], ring.mul(ce, rep[j]))
        rows.append(tuple(row))
    return Lattice(frame, rows, pad_window=False)


def typ_natural(lat: Lattice, sign_fn=None) -> dict:
    """Jordan-splitting type: dict value -> (mult, sign).  For alternating
    frames blocks are hyperbolic planes counted once; for the others the
    sign function (if any) accumulates the residue signs of the diagonal
    units per valuation."""
    frame = lat.frame
    ring = frame.ring
    basis = [list(r) for r in lat.rows]
    out = {}

    def pair(u, v):
        return frame.pair_scaled(u, v)

    while basis:
        k = len(basis)
        gl = [[pair(basis[i], basis[j]) for j in range(k)] for i in range(k)]
        best, bestv = None, ring.m
        for i in range(k):
            for j in range(k):
                v = ring.val(gl[i][j])
                if v < bestv:
                    best, bestv = (i, j), v
        if best is None or bestv >= ring.m - 1:
            raise PrecisionExhausted("splitting below precision")
        bi, bj = best
        if frame.alternating:
            if bi == bj:
                raise PrecisionExhausted("alternating diagonal surfaced")
            u, w = basis[bi], basis[bj]
            uw = gl[bi][bj]
            wu = gl[bj][bi]
            new_basis = []
            for t in range(k):
                if t in (bi, bj):
                    continue
                x = basis[t]
                cu = ring.div_exact(pair(x, w), uw)
                cw = ring.div_exact(pair(x, u), wu)
                x2 = [ring.sub(x[s], ring.mul(cu, u[s])) for s in range(len(x))]
                x2 = [ring.sub(x2[s], ring.mul(cw, w[s])) for s in range(len(x))]
                new_basis.append(x2)
            val = bestv - 2 * frame.scale
            out.setdefault(val, [0, 1])[0] += 1
            basis = new_basis
            continue
        if bi != bj:
            diag_ok = None
            for t in range(k):
                if ring.val(gl[t][t]) == bestv:
                    diag_ok = t
                    break
            if diag_ok is None:
                found = None
                for mult in _unit_candidates(ring):
                    cand = [ring.add(basis[bi][s],
                                     ring.mul(mult, basis[bj][s]))
                            for s in range(len(basis[bi]))]
                    if ring.val(pair(cand, cand)) == bestv:
                        found = cand
                        break
                if found is None:
                    raise PrecisionExhausted("no unit combination achieves "
                                             "the minimal valuation")
                basis[bi] = found
                diag_ok = bi
            bi = diag_ok
        u = basis[bi]
        uu = pair(u, u)
        new_basis = []
        for t in range(k):
            if t == bi:
                continue
            x = basis[t]
            c = ring.div_exact(pair(x, u), uu)
            new_basis.append([ring.sub(x[s], ring.mul(c, u[s]))
                              for s in range(len(x))])
        val = ring.val(uu) - 2 * frame.scale
        ent = out.setdefault(val, [0, 1])
        ent[0] += 1
        if sign_fn is not None:
            unit = ring.div_exact(uu, ring.pi_pow(ring.val(uu)))
            ent[1] *= sign_fn(unit)
        basis = new_basis
    return {v: (m, s) for v, (m, s) in out.items()}


def _unit_candidates(ring: LocalRing):
    if ring.ext:
        yield ring.one
        yield (0, 1)
        yield (1, 1)
    else:
        yield ring.one
        yield ring.of(2)
