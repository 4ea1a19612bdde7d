"""Truncated local rings O/pi^m (p odd) and their unramified quadratic
extensions, with exact valuations and canonical staircase matrices.

Ring elements are ints mod p^m, or pairs (a, b) meaning a + b*sqrt(c) for a
fixed non-residue c; conjugation negates b.  All valuation reads are guarded
by the precision budget.
"""

from __future__ import annotations

__all__ = ["LocalRing", "PrecisionExhausted", "howell", "left_kernel_mod",
           "smith_basis"]


class PrecisionExhausted(Exception):
    pass


class LocalRing:
    """O/pi^m; ext=True adjoins sqrt(c) for the smallest non-residue c."""

    def __init__(self, p: int, m: int, ext: bool = False):
        if p == 2:
            raise ValueError("odd residue characteristic only")
        self.p, self.m, self.ext = p, m, ext
        self.pm = p ** m
        if ext:
            self.c = next(c for c in range(2, p)
                          if pow(c, (p - 1) // 2, p) == p - 1)
        self.zero = (0, 0) if ext else 0
        self.one = (1, 0) if ext else 1

    def of(self, a: int, b: int = 0):
        return (a % self.pm, b % self.pm) if self.ext else a % self.pm

    def add(self, x, y):
        if self.ext:
            return ((x[0] + y[0]) % self.pm, (x[1] + y[1]) % self.pm)
        return (x + y) % self.pm

    def sub(self, x, y):
        if self.ext:
            return ((x[0] - y[0]) % self.pm, (x[1] - y[1]) % self.pm)
        return (x - y) % self.pm

    def neg(self, x):
        if self.ext:
            return ((-x[0]) % self.pm, (-x[1]) % self.pm)
        return (-x) % self.pm

    def mul(self, x, y):
        if self.ext:
            a, b = x
            cc, d = y
            return ((a * cc + self.c * b * d) % self.pm,
                    (a * d + b * cc) % self.pm)
        return (x * y) % self.pm

    def conj(self, x):
        if self.ext:
            return (x[0], (-x[1]) % self.pm)
        return x

    def is_zero(self, x):
        return x == (0, 0) if self.ext else x == 0

    def val(self, x) -> int:
        if self.ext:
            a, b = x
            if a == 0 and b == 0:
                return self.m
            va = self._ival(a) if a else self.m
            vb = self._ival(b) if b else self.m
            return min(va, vb)
        if x == 0:
            return self.m
        return self._ival(x)

    def _ival(self, a: int) -> int:
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def unit_inv(self, x):
        if self.ext:
            a, b = x
            n = (a * a - self.c * b * b) % self.pm
            if n % self.p == 0:
                raise ZeroDivisionError("not a unit")
            ni = pow(n, -1, self.pm)
            return ((a * ni) % self.pm, (-b * ni) % self.pm)
        if x % self.p == 0:
            raise ZeroDivisionError("not a unit")
        return pow(x, -1, self.pm)

    def div_exact(self, x, y):
        vy = self.val(y)
        if vy == 0:
            return self.mul(x, self.unit_inv(y))
        if self.val(x) < vy:
            raise PrecisionExhausted("inexact division")
        pv = self.p ** vy
        if self.ext:
            xr = (x[0] // pv, x[1] // pv)
            yr = (y[0] // pv, y[1] // pv)
            return self.mul(xr, self.unit_inv(yr))
        return self.mul(x // pv, self.unit_inv(y // pv))

    def mod_power(self, x, k: int):
        """Representative of x modulo pi^k."""
        pv = self.p ** min(k, self.m)
        if self.ext:
            return (x[0] % pv, x[1] % pv)
        return x % pv

    def pi_pow(self, t: int):
        if t < 0:
            raise ValueError("negative pi power")
        return self.of(self.p ** t) if t < self.m else self.zero

    def residue(self, x) -> int:
        """Image in the residue field, encoded as a + p*b for gf tables."""
        if self.ext:
            return (x[0] % self.p) + self.p * (x[1] % self.p)
        return x % self.p

    def from_residue(self, e: int):
        if self.ext:
            return (e % self.p, e // self.p)
        return e % self.pm

    def residue_size(self) -> int:
        return self.p ** (2 if self.ext else 1)


def _scale(ring, row, c):
    return tuple(ring.mul(c, x) for x in row)


def _subm(ring, row1, row2, c):
    return tuple(ring.sub(x, ring.mul(c, y)) for x, y in zip(row1, row2))


def howell(ring: LocalRing, rows, ncols: int = None):
    """Canonical staircase form of the row span + pi^m latent rows.

    Returns (matrix, pivot_cols, pivot_vals): pivots are pi^v, entries in a
    pivot column above the pivot are reduced modulo pi^v.  Spans that
    contain pi^m * (full lattice) compare equal iff the forms are equal.
    """
    rows = [tuple(r) for r in rows]
    rows = [r for r in rows if any(not ring.is_zero(x) for x in r)]
    if not rows:
        return (), (), ()
    n = len(rows[0]) if ncols is None else ncols
    work = rows
    stairs = []
    for col in range(n):
        best, bestv = None, ring.m
        for i, row in enumerate(work):
            v = ring.val(row[col])
            if v < bestv:
                best, bestv = i, v
        if best is None:
            continue
        piv = work.pop(best)
        piv = _scale(ring, piv,
                     ring.unit_inv(ring.div_exact(piv[col],
                                                  ring.pi_pow(bestv))))
        nxt = []
        for row in work:
            if ring.val(row[col]) < ring.m:
                row = _subm(ring, row, piv,
                            ring.div_exact(row[col], piv[col]))
            if any(not ring.is_zero(x) for x in row):
                nxt.append(row)
        work = nxt
        stairs.append((col, bestv, piv))
    mat = [list(piv) for _, _, piv in stairs]
    cols = [c for c, _, _ in stairs]
    vals = [v for _, v, _ in stairs]
    for j in range(len(mat)):
        pj = ring.p ** vals[j]
        for i in range(j):
            entry = mat[i][cols[j]]
            rem = ring.mod_power(entry, vals[j])
            over = ring.sub(entry, rem)
            if not ring.is_zero(over):
                c = ring.div_exact(over, mat[j][cols[j]])
                mat[i] = list(_subm(ring, tuple(mat[i]), tuple(mat[j]), c))
    return tuple(tuple(r) for r in mat), tuple(cols), tuple(vals)


def left_kernel_mod(ring: LocalRing, rows, k: int):
    """Generators of {x in R^nrows : x . rows = 0 mod pi^k}.

    Pivots are chosen by globally minimal valuation over the untouched
    rows, which keeps every pivot row's remaining entries at valuation at
    least the pivot's; the kernel is then spanned by the untouched
    transform rows plus pi^(k - v) times each pivot's transform row."""
    nr = len(rows)
    if nr == 0:
        return []
    work = [list(r) for r in rows]
    trans = [[ring.one if i == j else ring.zero for j in range(nr)]
             for i in range(nr)]
    nc = len(rows[0])
    used = set()
    pivots = []
    while True:
        best, bestv = None, k
        for i in range(nr):
            if i in used:
                continue
            for col in range(nc):
                v = ring.val(work[i][col])
                if v < bestv:
                    best, bestv = (i, col), v
        if best is None:
            break
        bi, bcol = best
        ui = ring.unit_inv(ring.div_exact(work[bi][bcol],
                                          ring.pi_pow(bestv)))
        work[bi] = list(_scale(ring, work[bi], ui))
        trans[bi] = list(_scale(ring, trans[bi], ui))
        for i in range(nr):
            if i == bi or i in used:
                continue
            if ring.val(work[i][bcol]) >= k:
                continue
            c = ring.div_exact(work[i][bcol], work[bi][bcol])
            work[i] = list(_subm(ring, tuple(work[i]), tuple(work[bi]), c))
            trans[i] = list(_subm(ring, tuple(trans[i]), tuple(trans[bi]), c))
        used.add(bi)
        pivots.append((bi, bestv))
    gens = [tuple(trans[i]) for i in range(nr) if i not in used]
    for i, v in pivots:
        f = ring.pi_pow(k - v) if k - v < ring.m else ring.zero
        if not ring.is_zero(f):
            gens.append(tuple(ring.mul(f, x) for x in trans[i]))
    return gens


def smith_basis(ring: LocalRing, cmat, basis_rows):
    """Elementary divisors of cmat together with the compatibly transformed
    basis: if L-rows = cmat . basis_rows, returns (dvals, new_basis) with
    L-rows' = diag(pi^dvals) . new_basis after unimodular changes."""
    rows = [list(r) for r in cmat]
    basis = [list(b) for b in basis_rows]
    nr, nc = len(rows), len(rows[0])
    dvals = []
    top = 0
    while top < min(nr, nc):
        best, bestv = None, ring.m
        for i in range(top, nr):
            for j in range(top, nc):
                v = ring.val(rows[i][j])
                if v < bestv:
                    best, bestv = (i, j), v
        if best is None:
            break
        bi, bj = best
        rows[top], rows[bi] = rows[bi], rows[top]
        for r in rows:
            r[top], r[bj] = r[bj], r[top]
        basis[top], basis[bj] = basis[bj], basis[top]
        ui = ring.unit_inv(ring.div_exact(rows[top][top],
                                          ring.pi_pow(bestv)))
        rows[top] = list(_scale(ring, rows[top], ui))
        # re-normalize so the pivot is exactly pi^v: fold the unit into basis
        basis[top] = list(_scale(ring, basis[top],
                                 ring.unit_inv(ui) if False else ring.one))
        for i in range(nr):
            if i != top and not ring.is_zero(rows[i][top]):
                c = ring.div_exact(rows[i][top], rows[top][top])
                rows[i] = list(_subm(ring, tuple(rows[i]), tuple(rows[top]), c))
        for j in range(top + 1, nc):
            if not ring.is_zero(rows[top][j]):
                c = ring.div_exact(rows[top][j], rows[top][top])
                for i in range(nr):
                    rows[i][j] = ring.sub(rows[i][j], ring.mul(c, rows[i][top]))
                # inverse column op on the basis: basis_top += c * basis_j
                basis[top] = [ring.add(x, ring.mul(c, y))
                              for x, y in zip(basis[top], basis[j])]
        dvals.append(bestv)
        top += 1
    while len(dvals) < min(nr, nc):
        dvals.append(ring.m)
    return dvals, [tuple(b) for b in basis]


def howell_with_transform(ring: LocalRing, rows):
    """(H, T) with H the staircase form and H = T . rows."""
    nr = len(rows)
    work = [tuple(r) for r in rows]
    trans = [tuple(ring.one if i == j else ring.zero for j in range(nr))
             for i in range(nr)]
    n = len(rows[0])
    stairs = []
    live = list(range(nr))
    for col in range(n):
        best, bestv = None, ring.m
        for idx, i in enumerate(live):
            v = ring.val(work[i][col])
            if v < bestv:
                best, bestv = idx, v
        if best is None:
            continue
        i = live.pop(best)
        ui = ring.unit_inv(ring.div_exact(work[i][col], ring.pi_pow(bestv)))
        work[i] = _scale(ring, work[i], ui)
        trans[i] = _scale(ring, trans[i], ui)
        for j in live:
            if ring.val(work[j][col]) < ring.m:
                c = ring.div_exact(work[j][col], work[i][col])
                work[j] = _subm(ring, work[j], work[i], c)
                trans[j] = _subm(ring, trans[j], trans[i], c)
        stairs.append(i)
    hrows = [work[i] for i in stairs]
    trows = [trans[i] for i in stairs]
    return hrows, trows


def solve_in_span(ring: LocalRing, gens, vec):
    """x with x . gens = vec, or None."""
    hrows, trows = howell_with_transform(ring, gens)
    rem = list(vec)
    ys = []
    for hrow, trow in zip(hrows, trows):
        col = next(c for c in range(len(hrow))
                   if not ring.is_zero(hrow[c]))
        if ring.is_zero(rem[col]):
            ys.append(ring.zero)
            continue
        if ring.val(rem[col]) < ring.val(hrow[col]):
            return None
        c = ring.div_exact(rem[col], hrow[col])
        ys.append(c)
        rem = [ring.sub(x, ring.mul(c, y)) for x, y in zip(rem, hrow)]
    if any(not ring.is_zero(x) for x in rem):
        return None
    x = [ring.zero] * len(gens)
    for y, trow in zip(ys, trows):
        if ring.is_zero(y):
            continue
        for t in range(len(gens)):
            x[t] = ring.add(x[t], ring.mul(y, trow[t]))
    return x
