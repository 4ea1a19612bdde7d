"""Ambient formed spaces over the truncated ring and glued self-dual
lattices realizing a prescribed orbit type.

The ambient is always V = (-V2) + V2 (plus a unit line for the odd
variants), with V2 built from diagonal pi-power blocks matching the target
type; the glue is the identity anti-isometry, so every type is realizable
and the result is verified by recomputing the invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from htl.gf import gf
from htl.scalars import CaseTag
from htl.typcalc.types import TypClass, canon_typ0
from htl.latoracle.localring import LocalRing, PrecisionExhausted
from htl.latoracle.lattices import (
    Frame, Lattice, intersect_tail_block, typ_natural,
)

__all__ = ["Oracle", "build_oracle", "typ_to_class", "Unrealizable"]


class Unrealizable(Exception):
    pass


@dataclass
class Oracle:
    case: CaseTag
    p: int
    ring: LocalRing
    frame: Frame            # the full ambient
    subframe: Frame         # the V2 block
    n1: int                 # dim of the leading block (V1, + unit line)
    lam2: Lattice           # the reference self-dual (or scaled-dual) lattice
    l2: Lattice             # its V2 intersection
    delta: TypClass
    bullet: bool = False
    stats: dict = dc_field(default_factory=dict)

    @property
    def gf_field(self):
        return gf(self.p, 2 if self.ring.ext else 1)

    def sign_fn(self):
        if self.case.family != "S":
            return None
        p = self.p

        def fn(unit) -> int:
            return 1 if pow(unit % p, (p - 1) // 2, p) == 1 else -1

        return fn

    def eps_sign(self) -> int:
        if self.case.family != "S":
            return 1
        return 1 if (self.p - 1) % 4 == 0 else -1

    def typ_class(self, lat_v2: Lattice) -> TypClass:
        data = typ_natural(lat_v2, self.sign_fn())
        values, signs = [], []
        for v, (m, s) in sorted(data.items(), reverse=True):
            values.extend([v] * m)
            signs.append(s)
            signs.extend([1] * (m - 1))
        return canon_typ0(values, signs)

    def orbit_typ(self, lam: Lattice) -> TypClass:
        return self.typ_class(intersect_tail_block(lam, self.n1,
                                                   self.subframe))

    def residue_pairing_gram(self, reps, floor_val: int):
        """GF-encoded Gram of quotient representatives whose true pairings
        have valuation >= floor_val."""
        ring = self.ring
        shift = 2 * self.frame.scale + floor_val
        out = []
        for r1 in reps:
            row = []
            for r2 in reps:
                v = self.frame.pair_scaled(r1, r2)
                if not ring.is_zero(v) and ring.val(v) < shift:
                    raise PrecisionExhausted("pairing below expected floor")
                row.append(ring.residue(ring.div_exact(v,
                                                       ring.pi_pow(shift))))
            out.append(row)
        return out


def _v2_gram_blocks(case: CaseTag, ring: LocalRing, values, signs,
                    extra_pow: int):
    """Diagonal pi-power blocks for V2 with the requested type data."""
    g = []
    p = ring.p
    nonres = None
    if case.family == "S":
        nonres = next(c for c in range(2, p)
                      if pow(c, (p - 1) // 2, p) == p - 1)
    dim = len(values) * case.gamma
    zero_rows = [[ring.zero] * dim for _ in range(dim)]
    at = 0
    for v, s in zip(values, signs):
        power = v + extra_pow
        if power < 0:
            raise Unrealizable("negative block power; enlarge extra_pow")
        if case.family == "A":
            zero_rows[at][at + 1] = ring.pi_pow(power)
            zero_rows[at + 1][at] = ring.neg(ring.pi_pow(power))
            at += 2
        else:
            unit = 1
            if case.family == "S" and s == -1:
                unit = nonres
            zero_rows[at][at] = ring.mul(ring.pi_pow(power), ring.of(unit))
            at += 1
    return tuple(tuple(r) for r in zero_rows)


def build_oracle(case: CaseTag, p: int, delta: TypClass,
                 bullet: bool = False, psi_unit: int = None) -> Oracle:
    """Ambient with a reference lattice whose orbit type is delta.

    flat: Lambda self-dual; bullet: Lambda with dual = pi * Lambda (the
    second vertex), whose scaled type is delta; sharp: an extra unit line
    of discriminant sign psi."""
    r = delta.rank
    values = list(delta.values_tuple())
    gamma = case.gamma
    sharp = case.variant == "sharp"
    if sharp and bullet:
        raise ValueError("no scaled vertex in the odd cases")
    maxv = max([abs(v) for v in values] + [1])
    a = maxv + 3
    m = 2 * a + maxv + 8
    ring = LocalRing(p, m, ext=(case.family == "uH"))
    vt = delta.values_tuple()
    st = delta.signs_tuple()
    dim2 = gamma * r
    n1 = dim2 + (1 if sharp else 0)
    n = n1 + dim2
    extra = 1 if bullet else 0
    g2 = _v2_gram_blocks(case, ring, vt, st, extra)
    gneg = tuple(tuple(ring.neg(x) for x in row) for row in g2)
    gram = [[ring.zero] * n for _ in range(n)]
    if sharp:
        unit = 1
        if case.family == "S" and psi_unit == -1:
            unit = next(c for c in range(2, p)
                        if pow(c, (p - 1) // 2, p) == p - 1)
        gram[0][0] = ring.of(unit)
    off = 1 if sharp else 0
    for i in range(dim2):
        for j in range(dim2):
            gram[off + i][off + j] = gneg[i][j]
            gram[n1 + i][n1 + j] = g2[i][j]
    frame = Frame(ring, n, tuple(tuple(rw) for rw in gram), a,
                  hermitian=(case.family == "uH"),
                  alternating=(case.family == "A"))
    subframe = Frame(ring, dim2, g2, a,
                     hermitian=frame.hermitian,
                     alternating=frame.alternating)
    # reference V2 lattice: standard for flat/sharp, pi^-1 standard for
    # bullet (so the scaled-vertex type comes out right)
    f = ring.pi_pow(a - extra)
    l2_rows = []
    for i in range(dim2):
        row = [ring.zero] * dim2
        row[i] = f
        l2_rows.append(tuple(row))
    l2 = Lattice(subframe, l2_rows)
    l2dual = l2.dual()
    if bullet:
        l2dual = _divide_pi(l2dual)
    lam_rows = []
    if sharp:
        row = [ring.zero] * n
        row[0] = ring.pi_pow(a)
        lam_rows.append(tuple(row))
    for drow in l2dual.rows:
        row = [ring.zero] * n
        for j in range(dim2):
            row[off + j] = drow[j]
            row[n1 + j] = drow[j]
        lam_rows.append(tuple(row))
    for lrow in l2.rows:
        row = [ring.zero] * n
        for j in range(dim2):
            row[off + j] = lrow[j]
        lam_rows.append(tuple(row))
    lam2 = Lattice(frame, lam_rows)
    oracle = Oracle(case, p, ring, frame, subframe, n1, lam2, l2, delta,
                    bullet)
    # verify the construction: self-duality (scaled for bullet) and type
    dual = lam2.dual()
    if bullet:
        if dual != lam2.scale_pi(1):
            raise Unrealizable("scaled-vertex gluing failed")
        got = oracle.typ_class(intersect_tail_block(lam2, n1, subframe))
        want = canon_typ0([v - 1 for v in vt], st)
        if got != want:
            raise Unrealizable(f"bullet type {got} != {want}")
    else:
        if dual != lam2:
            raise Unrealizable("glued lattice is not self-dual")
        if oracle.orbit_typ(lam2) != delta:
            raise Unrealizable(f"orbit type mismatch: "
                               f"{oracle.orbit_typ(lam2)} vs {delta}")
    return oracle


def _divide_pi(lat: Lattice) -> Lattice:
    """pi^(-1) * lat: intersect with pi * frame-window and divide."""
    ring = lat.frame.ring
    p = ring.p
    rows = []
    pframe = Lattice(lat.frame, lat.frame.frame_rows(1), pad_window=False)
    inter = lat.intersect(pframe)
    for row in inter.rows:
        if ring.ext:
            rows.append(tuple((x[0] // p, x[1] // p) for x in row))
        else:
            rows.append(tuple(x // p for x in row))
    return Lattice(lat.frame, rows, pad_window=False)


def typ_to_class(data: dict) -> TypClass:
    values, signs = [], []
    for v, (m, s) in sorted(data.items(), reverse=True):
        values.extend([v] * m)
        signs.append(s)
        signs.extend([1] * (m - 1))
    return canon_typ0(values, signs)
