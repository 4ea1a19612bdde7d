"""Brute-force Hecke correspondences on the lattice model.

All enumerations reduce to residue-field subspace iteration: sublattices of
colength k with integral scaled dual correspond to coisotropic subspaces of
the reduction, and the self-dual neighbours of such a sublattice correspond
to Lagrangians of its dual quotient.  Orbit types are computed through the
tail-block intersection, with a global cache keyed by the much smaller
second-block lattice that determines them.
"""

from __future__ import annotations

import numpy as np

from htl.ffcount import FormedSpaceFq, isotropic_rrefs
from htl.latoracle.ambient import Oracle
from htl.latoracle.lattices import (
    Lattice, intersect_tail_block, lift_subspace, quotient_reps,
)

__all__ = ["CeilingExceeded", "hecke_star", "quotient_space_of",
           "lagrangian_coeff_rows", "PAIR_CEILING"]

PAIR_CEILING = 25_000_000


class CeilingExceeded(Exception):
    pass


def quotient_space_of(oracle: Oracle, big: Lattice, small: Lattice,
                      floor_val: int):
    """(reps, FormedSpaceFq) for a pi-killed quotient with pairing floor."""
    reps = quotient_reps(big, small)
    gram = np.array(oracle.residue_pairing_gram(reps, floor_val),
                    dtype=np.int16).reshape(len(reps), len(reps))
    space = FormedSpaceFq(oracle.case.family, oracle.gf_field, gram)
    return reps, space


def lagrangian_coeff_rows(space: FormedSpaceFq):
    d = space.dim
    if d == 0:
        yield np.zeros((0, 0), dtype=np.int16)
        return
    if d % 2:
        raise ValueError("odd quotient has no Lagrangian")
    yield from isotropic_rrefs(space, d // 2)


class _Int2Shortcut:
    """typ of the tail-block of (base + lift(U)) given the coefficients of
    U: equals tail(base) + the span of U's intersection with the image of
    the tail-block of the dual."""

    def __init__(self, oracle: Oracle, base: Lattice, base_dual: Lattice,
                 reps):
        self.oracle = oracle
        self.base = base
        ring = oracle.ring
        self.i2base = intersect_tail_block(base, oracle.n1, oracle.subframe)
        i2dual = intersect_tail_block(base_dual, oracle.n1, oracle.subframe)
        # coordinates of the dual tail-block inside the quotient
        from htl.latoracle.localring import solve_in_span
        gens = list(reps) + list(base.rows)
        coord_rows = []
        lift_rows = []
        for row in i2dual.rows:
            emb = [ring.zero] * oracle.n1 + list(row)
            sol = solve_in_span(ring, gens, tuple(emb))
            if sol is None:
                raise AssertionError("dual tail-block escapes the quotient")
            coords = [oracle.ring.residue(x) for x in sol[:len(reps)]]
            if any(coords):
                coord_rows.append(coords)
                lift_rows.append(row)
        field = oracle.gf_field
        if coord_rows:
            mat = np.array(coord_rows, dtype=np.int16)
            red, piv = field.rref(mat)
            # keep lifts aligned with the original rows; use raw rows
            self.w2_coords = mat
            self.w2_lifts = lift_rows
        else:
            self.w2_coords = np.zeros((0, len(reps)), dtype=np.int16)
            self.w2_lifts = []
        self.typ_cache = {}

    def typ_of(self, coeff_rows: np.ndarray):
        """Orbit type of base + lift(U) from U's GF coefficient rows."""
        oracle = self.oracle
        field = oracle.gf_field
        t = len(self.w2_lifts)
        if t == 0 or coeff_rows.shape[0] == 0:
            inter_coeffs = np.zeros((0, t), dtype=np.int16)
        else:
            stacked = np.vstack([coeff_rows, self.w2_coords])
            kern = field.right_kernel(stacked.T)
            rows = []
            for vec in kern:
                b = vec[coeff_rows.shape[0]:]
                if b.any():
                    rows.append(b)
            if rows:
                inter_coeffs, _ = field.rref(np.array(rows, dtype=np.int16))
            else:
                inter_coeffs = np.zeros((0, t), dtype=np.int16)
        key = inter_coeffs.tobytes() + bytes(8)
        cached = self.typ_cache.get(key)
        if cached is not None:
            return cached
        lat = lift_subspace(oracle.subframe, self.w2_lifts, inter_coeffs,
                            self.i2base)
        cls = oracle.typ_class(lat)
        self.typ_cache[key] = cls
        return cls


def hecke_star(oracle: Oracle, kind: str, k: int = 0,
               check_samples: int = 2) -> dict:
    """Distribution of orbit types over the correspondence.

    kind 'tle': sublattices of colength k with integral scaled dual, and
    every self-dual lattice above each (pairs counted);
    kind 'tk': self-dual lattices in exact relative position k;
    kind 'circ': self-dual lattices between the scaled vertex and itself.
    """
    case = oracle.case
    if kind == "circ":
        if not oracle.bullet:
            raise ValueError("intertwining enumeration needs a bullet oracle")
        lam = oracle.lam2
        pl = lam.scale_pi(1)
        reps, space = quotient_space_of(oracle, lam, pl, -1)
        counts = {}
        shortcut = _Int2Shortcut(oracle, pl, lam, reps)
        checked = 0
        for coeffs in lagrangian_coeff_rows(space):
            lam1 = lift_subspace(oracle.frame, reps, coeffs, pl)
            cls = shortcut.typ_of(coeffs)
            if checked < check_samples:
                assert lam1.dual() == lam1, "lift is not self-dual"
                assert oracle.orbit_typ(lam1) == cls, "shortcut mismatch"
                checked += 1
            counts[cls] = counts.get(cls, 0) + 1
        return counts
    if kind not in ("tle", "tk"):
        raise ValueError(f"unknown correspondence {kind}")
    lam = oracle.lam2
    pl = lam.scale_pi(1)
    w_reps, w_space = quotient_space_of(oracle, lam, pl, 0)
    counts = {}
    field = oracle.gf_field
    n_w = w_space.dim
    pairs_estimate = _subspace_count(field.q, n_w, k) * _lagr_bound(
        field.q, 2 * k)
    if pairs_estimate > PAIR_CEILING:
        raise CeilingExceeded(f"~{pairs_estimate:.2g} pairs")
    checked = 0
    for s_rows in isotropic_rrefs(w_space, k):
        u_rows = _perp_rows(w_space, s_rows)
        sub = lift_subspace(oracle.frame, w_reps, u_rows, pl)
        sub_dual = sub.dual()
        reps, space = quotient_space_of(oracle, sub_dual, sub, -1)
        shortcut = _Int2Shortcut(oracle, sub, sub_dual, reps)
        base_len = sub.val_sum()
        for coeffs in lagrangian_coeff_rows(space):
            lam1 = lift_subspace(oracle.frame, reps, coeffs, sub)
            if kind == "tk":
                inter = lam1.intersect(lam)
                if inter.val_sum() != base_len:
                    continue
            cls = shortcut.typ_of(coeffs)
            if checked < check_samples:
                assert lam1.dual() == lam1, "lift is not self-dual"
                assert oracle.orbit_typ(lam1) == cls, "shortcut mismatch"
                checked += 1
            counts[cls] = counts.get(cls, 0) + 1
    return counts


def _perp_rows(space: FormedSpaceFq, s_rows: np.ndarray) -> np.ndarray:
    field = space.field
    if s_rows.shape[0] == 0:
        return np.eye(space.dim, dtype=np.int16)
    rhs = s_rows
    if space.hermitian:
        rhs = field.conj_table[rhs]
    m = field.matmul(np.asarray(space.gram, dtype=np.int16), rhs.T)
    return field.right_kernel(m.T)


def _subspace_count(q: int, n: int, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= (q ** (n - i) - 1) / (q ** (i + 1) - 1)
    return out


def _lagr_bound(q: int, dim: int) -> float:
    out = 1.0
    for i in range(1, dim // 2 + 1):
        out *= (q ** i + 1)
    return out
