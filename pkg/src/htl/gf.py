"""Small finite fields with table-driven vectorized arithmetic.

Elements of GF(p^d) (d <= 2) are encoded as integers 0..q-1 via a0 + p*a1
for the basis {1, w}; all arithmetic goes through precomputed numpy tables,
so scalar and batched (fancy-indexed) operations share one code path.
For d = 2 the generator satisfies w^2 = c with c a non-residue (p odd) or
w^2 = w + 1 (p = 2), and conjugation is the p-power Frobenius.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["GF", "gf"]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for f in range(2, int(n ** 0.5) + 1):
        if n % f == 0:
            return False
    return True


class GF:
    def __init__(self, p: int, d: int):
        if not _is_prime(p) or d not in (1, 2):
            raise ValueError(f"unsupported field GF({p}^{d})")
        self.p, self.d, self.q = p, d, p ** d
        q = self.q
        if d == 2:
            if p == 2:
                self.c = None  # w^2 = w + 1
            else:
                self.c = next(c for c in range(2, p)
                              if pow(c, (p - 1) // 2, p) == p - 1)

        def mul_elems(x, y):
            if d == 1:
                return (x * y) % p
            a0, a1 = x % p, x // p
            b0, b1 = y % p, y // p
            if p == 2 and d == 2:
                lo = (a0 * b0 + a1 * b1) % 2
                hi = (a0 * b1 + a1 * b0 + a1 * b1) % 2
            else:
                lo = (a0 * b0 + self.c * a1 * b1) % p
                hi = (a0 * b1 + a1 * b0) % p
            return lo + p * hi

        add = np.zeros((q, q), dtype=np.int16)
        mul = np.zeros((q, q), dtype=np.int16)
        for x in range(q):
            for y in range(q):
                if d == 1:
                    add[x, y] = (x + y) % p
                else:
                    add[x, y] = (x + y) % p + p * ((x // p + y // p) % p)
                mul[x, y] = mul_elems(x, y)
        self.add_table = add
        self.mul_table = mul
        self.neg_table = np.array(
            [next(y for y in range(q) if add[x, y] == 0) for x in range(q)],
            dtype=np.int16)
        inv = np.zeros(q, dtype=np.int16)
        for x in range(1, q):
            inv[x] = next(y for y in range(1, q) if mul[x, y] == 1)
        self.inv_table = inv
        # p-power Frobenius (identity for d = 1)
        frob = np.arange(q, dtype=np.int16)
        if d == 2:
            for x in range(q):
                y = x
                acc = 1
                e = p
                # x^p by repeated multiplication
                r = 1
                for _ in range(p):
                    r = mul[r, x]
                frob[x] = r
        self.conj_table = frob
        if d == 1 and p > 2:
            sign = np.zeros(q, dtype=np.int16)
            for x in range(1, q):
                sign[x] = 1 if pow(x, (p - 1) // 2, p) == 1 else -1
            self.sign_table = sign
        else:
            self.sign_table = None

    # -- scalar/vector helpers -------------------------------------------

    def add(self, a, b):
        return self.add_table[a, b]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def inv(self, a):
        return self.inv_table[a]

    def conj(self, a):
        return self.conj_table[a]

    def sign(self, a) -> int:
        if self.sign_table is None:
            return 1
        return int(self.sign_table[a])

    def elements(self):
        return range(self.q)

    def matmul(self, a, b, conj_b: bool = False):
        """Matrix product over the field; a: (..., m, k), b: (..., k, n)."""
        a = np.asarray(a, dtype=np.int16)
        b = np.asarray(b, dtype=np.int16)
        if conj_b:
            b = self.conj_table[b]
        k = a.shape[-1]
        out = None
        for i in range(k):
            term = self.mul_table[a[..., :, i, None], b[..., None, i, :]]
            out = term if out is None else self.add_table[out, term]
        return out

    def gram_values(self, rows, gram, conj_second: bool = False):
        """Pairwise form values rows G rows^T (with optional conjugation)."""
        rows = np.asarray(rows, dtype=np.int16)
        inter = self.matmul(rows, np.asarray(gram, dtype=np.int16))
        rt = np.swapaxes(rows, -1, -2)
        return self.matmul(inter, rt, conj_b=conj_second)

    def det_batch(self, mats):
        """Determinants of (..., k, k) matrices via column-subset expansion."""
        mats = np.asarray(mats, dtype=np.int16)
        k = mats.shape[-1]
        if k == 0:
            return np.ones(mats.shape[:-2], dtype=np.int16)
        dets = {frozenset(): np.ones(mats.shape[:-2], dtype=np.int16)}
        from itertools import combinations
        for size in range(1, k + 1):
            row = size - 1
            for cols in combinations(range(k), size):
                acc = np.zeros(mats.shape[:-2], dtype=np.int16)
                for pos, c in enumerate(cols):
                    sub = dets[frozenset(cols) - {c}]
                    term = self.mul_table[mats[..., row, c], sub]
                    if (row + pos) % 2 == 1:
                        term = self.neg_table[term]
                    acc = self.add_table[acc, term]
                dets[frozenset(cols)] = acc
        return dets[frozenset(range(k))]

    def rref(self, mat):
        """Reduced row echelon form; returns (rref_rows, pivot_cols)."""
        m = [list(map(int, row)) for row in np.asarray(mat, dtype=np.int16)]
        rows = len(m)
        if rows == 0:
            return np.zeros((0, 0), dtype=np.int16), ()
        cols = len(m[0])
        add, mul, neg, inv = (self.add_table, self.mul_table,
                              self.neg_table, self.inv_table)
        piv = []
        r = 0
        for c in range(cols):
            sel = None
            for i in range(r, rows):
                if m[i][c]:
                    sel = i
                    break
            if sel is None:
                continue
            m[r], m[sel] = m[sel], m[r]
            s = int(inv[m[r][c]])
            m[r] = [int(mul[v, s]) for v in m[r]]
            for i in range(rows):
                if i != r and m[i][c]:
                    f = int(neg[m[i][c]])
                    m[i] = [int(add[m[i][j], mul[f, m[r][j]]])
                            for j in range(cols)]
            piv.append(c)
            r += 1
            if r == rows:
                break
        out = np.array(m[:r], dtype=np.int16) if r else np.zeros((0, cols), np.int16)
        return out, tuple(piv)

    def rank(self, mat) -> int:
        return self.rref(mat)[0].shape[0]

    def right_kernel(self, mat):
        """Basis (rref rows) of {x : mat @ x^T = 0}."""
        mat = np.asarray(mat, dtype=np.int16)
        rows, cols = mat.shape
        red, piv = self.rref(mat)
        free = [c for c in range(cols) if c not in piv]
        basis = []
        for fc in free:
            vec = [0] * cols
            vec[fc] = 1
            for ri, pc in enumerate(piv):
                vec[pc] = int(self.neg_table[red[ri, fc]])
            basis.append(vec)
        if not basis:
            return np.zeros((0, cols), dtype=np.int16)
        return self.rref(np.array(basis, dtype=np.int16))[0]


@lru_cache(maxsize=None)
def gf(p: int, d: int = 1) -> GF:
    return GF(p, d)
