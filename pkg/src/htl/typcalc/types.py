"""Type tuples, canonical multiplicity classes and formal sums.

A working term is an ordered tuple of (value, sign) slots; adjacent equal
values carry only their product sign (canonical keying puts the product on
the first slot of each run).  The canonical class of a sorted term merges
equal values into multiplicity data, the form used for straightened output
and oracle results.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby

from htl.scalars import Scalar, ZERO, ONE

__all__ = ["Term", "canon_term", "TypClass", "canon_typ0", "FormalSum",
           "term_sort_key", "format_typ", "parse_typ"]


Term = tuple  # (values: tuple[int, ...], signs: tuple[int, ...])


def canon_term(values, signs) -> Term:
    """Canonical key: within each maximal run of equal adjacent values the
    product sign sits on the first slot and the rest are +1."""
    values = tuple(int(v) for v in values)
    signs = tuple(int(s) for s in signs)
    if len(values) != len(signs):
        raise ValueError("length mismatch")
    out = []
    i = 0
    n = len(values)
    while i < n:
        j = i
        prod = 1
        while j < n and values[j] == values[i]:
            prod *= signs[j]
            j += 1
        out.append(prod)
        out.extend([1] * (j - i - 1))
        i = j
    return (values, tuple(out))


@dataclass(frozen=True, order=True)
class TypClass:
    """Canonical multiplicity data: ((value, mult, sign), ...) sorted by
    descending value, with no zero multiplicities and sign 1 forced on
    absent values."""

    blocks: tuple

    def __post_init__(self):
        prev = None
        for v, m, s in self.blocks:
            if m <= 0 or s not in (1, -1):
                raise ValueError(f"bad block {(v, m, s)}")
            if prev is not None and v >= prev:
                raise ValueError("blocks must strictly decrease")
            prev = v

    @property
    def rank(self) -> int:
        return sum(m for _, m, _ in self.blocks)

    def mult(self, value: int) -> int:
        for v, m, _ in self.blocks:
            if v == value:
                return m
        return 0

    def sign(self, value: int) -> int:
        for v, m, s in self.blocks:
            if v == value:
                return s
        return 1

    def values_tuple(self):
        out = []
        for v, m, _ in self.blocks:
            out.extend([v] * m)
        return tuple(out)

    def signs_tuple(self):
        out = []
        for v, m, s in self.blocks:
            out.append(s)
            out.extend([1] * (m - 1))
        return tuple(out)

    def min_value(self) -> int:
        return self.blocks[-1][0] if self.blocks else 0

    def shift(self, t: int) -> "TypClass":
        return TypClass(tuple((v + t, m, s) for v, m, s in self.blocks))

    def sort_key(self):
        vals = self.values_tuple()
        return (sum(vals), vals, self.signs_tuple())


def canon_typ0(values, signs=None) -> TypClass:
    """Merge a tuple (any order) into canonical multiplicity data."""
    values = tuple(int(v) for v in values)
    if signs is None:
        signs = (1,) * len(values)
    signs = tuple(int(s) for s in signs)
    pairs = sorted(zip(values, signs), key=lambda p: -p[0])
    blocks = []
    for v, group in groupby(pairs, key=lambda p: p[0]):
        group = list(group)
        prod = 1
        for _, s in group:
            prod *= s
        blocks.append((v, len(group), prod))
    return TypClass(tuple(blocks))


def term_sort_key(term: Term):
    values, signs = term
    return (sum(values), values, signs)


class FormalSum:
    """Finitely supported Scalar-weighted sum of terms."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for term, c in coeffs.items():
                if c:
                    self.coeffs[term] = c

    @staticmethod
    def single(values, signs=None, coeff: Scalar = ONE) -> "FormalSum":
        if signs is None:
            signs = (1,) * len(values)
        return FormalSum({canon_term(values, signs): coeff})

    def add_term(self, term: Term, coeff: Scalar):
        if not coeff:
            return
        cur = self.coeffs.get(term)
        new = coeff if cur is None else cur + coeff
        if new:
            self.coeffs[term] = new
        else:
            del self.coeffs[term]

    def __add__(self, other):
        out = FormalSum(dict(self.coeffs))
        for t, c in other.coeffs.items():
            out.add_term(t, c)
        return out

    def __sub__(self, other):
        out = FormalSum(dict(self.coeffs))
        for t, c in other.coeffs.items():
            out.add_term(t, -c)
        return out

    def __mul__(self, scalar):
        return FormalSum({t: c * scalar for t, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return FormalSum({t: -c for t, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.coeffs == other.coeffs

    def star(self, other: "FormalSum") -> "FormalSum":
        """Concatenation of slot tuples (left block then right block)."""
        out = FormalSum()
        for (v1, s1), c1 in self.coeffs.items():
            for (v2, s2), c2 in other.coeffs.items():
                out.add_term(canon_term(v1 + v2, s1 + s2), c1 * c2)
        return out

    def classes(self):
        """Collapse sorted terms to canonical classes: dict TypClass->Scalar."""
        out = {}
        for (values, signs), c in self.coeffs.items():
            cls = canon_typ0(values, signs)
            cur = out.get(cls, ZERO) + c
            if cur:
                out[cls] = cur
            else:
                out.pop(cls, None)
        return out

    def __repr__(self):
        bits = [f"({v},{s}): {c.to_text()}" for (v, s), c in self.coeffs.items()]
        return "FormalSum{" + ", ".join(bits) + "}"


def format_typ(cls_or_term, with_signs: bool) -> str:
    """`e1,e2,...:s1s2...` text form (signs omitted for trivial Sign)."""
    if isinstance(cls_or_term, TypClass):
        values = cls_or_term.values_tuple()
        signs = cls_or_term.signs_tuple()
    else:
        values, signs = cls_or_term
    body = ",".join(str(v) for v in values)
    if with_signs:
        body += ":" + "".join("+" if s == 1 else "-" for s in signs)
    return body


def parse_typ(text: str):
    """Parse the text form; returns (values, signs)."""
    text = text.strip()
    if ":" in text:
        vpart, spart = text.split(":", 1)
        signs = tuple(1 if ch == "+" else -1 for ch in spart.strip())
    else:
        vpart, signs = text, None
    values = tuple(int(x) for x in vpart.split(",") if x.strip() != "")
    if signs is None:
        signs = (1,) * len(values)
    if len(signs) != len(values):
        raise ValueError(f"sign count mismatch in {text!r}")
    return values, signs
