"""Exact scalars: Laurent polynomials in z = q^(1/2) with a formal sign eps.

The coefficient ring everywhere in this package is Z[1/2][eps]/(eps^2 - 1),
Laurent in a single variable z.  Grades are stored doubled (grade g means
z^g = q^(g/2)), so all exponent arithmetic is integral.  Coefficients are
dyadic rationals; any other denominator signals a bug and raises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

__all__ = [
    "Scalar", "CaseTag", "NonDyadicCoefficient", "InternalNonDivisible",
    "OddGradeAtIrrationalPoint", "NonUnitScalar",
    "ZERO", "ONE", "EPS", "Q", "Z", "HALF",
    "q_pow", "z_pow", "from_fraction", "pochhammer", "falling",
    "gauss_binom", "gauss_multinom", "d_case", "w_poly", "w_poly_rec_last",
    "w_poly_rec_first", "eval_scalar", "inv_stat", "tilde_inv_stat",
    "lambda_stat", "sigma_stat", "inv_sets",
]


class NonDyadicCoefficient(Exception):
    """A coefficient acquired a denominator that is not a power of two."""


class InternalNonDivisible(Exception):
    """An exact division left a remainder; indicates an arithmetic bug."""


class OddGradeAtIrrationalPoint(Exception):
    """Evaluation at an irrational square root hit an odd grade."""


class NonUnitScalar(Exception):
    """Inversion was requested for a scalar that is not a unit."""


def _is_dyadic(fr: Fraction) -> bool:
    d = fr.denominator
    return d & (d - 1) == 0


_FR0 = Fraction(0)
_FR1 = Fraction(1)


class Scalar:
    """Element a(z) + b(z)*eps with dyadic-rational Laurent coefficients.

    terms maps grade -> (plain, eps) coefficient pair; zero pairs are never
    stored.  eps^2 = 1 is built into multiplication.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for g, (a, b) in terms.items():
                if a or b:
                    if not (_is_dyadic(a) and _is_dyadic(b)):
                        raise NonDyadicCoefficient(
                            f"non-dyadic coefficient at grade {g}: {a}, {b}")
                    clean[int(g)] = (a, b)
        self.terms = clean
        self._hash = None

    # -- constructors ---------------------------------------------------

    @staticmethod
    def monomial(grade: int, coeff=_FR1, eps: bool = False) -> "Scalar":
        c = Fraction(coeff)
        pair = (_FR0, c) if eps else (c, _FR0)
        return Scalar({grade: pair})

    @staticmethod
    def integer(n) -> "Scalar":
        return Scalar({0: (Fraction(n), _FR0)})

    # -- structure ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def eps_free(self) -> bool:
        return all(b == 0 for (_, b) in self.terms.values())

    def eps_conj(self) -> "Scalar":
        return Scalar({g: (a, -b) for g, (a, b) in self.terms.items()})

    def plain_part(self) -> "Scalar":
        return Scalar({g: (a, _FR0) for g, (a, _) in self.terms.items()})

    def eps_part_coeffs(self) -> "Scalar":
        """The b(z) of a + b*eps, as an eps-free scalar."""
        return Scalar({g: (b, _FR0) for g, (_, b) in self.terms.items()})

    def min_grade(self) -> int:
        return min(self.terms)

    def max_grade(self) -> int:
        return max(self.terms)

    def as_monomial(self):
        """Return (grade, plain, eps) if a single term, else None."""
        if len(self.terms) != 1:
            return None
        ((g, (a, b)),) = self.terms.items()
        return (g, a, b)

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for g, (a, b) in other.terms.items():
            if g in out:
                oa, ob = out[g]
                out[g] = (oa + a, ob + b)
            else:
                out[g] = (a, b)
        return Scalar(out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar({g: (-a, -b) for g, (a, b) in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        out: dict = {}
        for g1, (a1, b1) in self.terms.items():
            for g2, (a2, b2) in other.terms.items():
                g = g1 + g2
                pa = a1 * a2 + b1 * b2
                pb = a1 * b2 + b1 * a2
                if g in out:
                    oa, ob = out[g]
                    out[g] = (oa + pa, ob + pb)
                else:
                    out[g] = (pa, pb)
        return Scalar(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                other = _coerce(other)
            else:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def shift(self, grade: int) -> "Scalar":
        return Scalar({g + grade: ab for g, ab in self.terms.items()})

    def inverse(self) -> "Scalar":
        """Exact inverse; defined only for units +-2^k * z^g * (unit in eps)."""
        conj = self.eps_conj()
        norm = self * conj
        mono = norm.as_monomial()
        if mono is None or mono[2] != 0 or mono[1] == 0:
            raise NonUnitScalar(f"not a unit: {self}")
        g, a, _ = mono
        inv_norm = Scalar.monomial(-g, 1 / a)
        return conj * inv_norm

    # -- rendering --------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for g in sorted(self.terms, reverse=True):
            a, b = self.terms[g]
            for coeff, is_eps in ((a, False), (b, True)):
                if not coeff:
                    continue
                parts = []
                if coeff == 1 and (is_eps or g != 0):
                    pass
                elif coeff == -1 and (is_eps or g != 0):
                    parts.append("-")
                else:
                    parts.append(str(coeff))
                if is_eps:
                    parts.append("eps")
                if g != 0:
                    parts.append("q" if g == 2 else f"q^({Fraction(g,2)})")
                body = "*".join(p for p in parts if p not in ("", "-"))
                if parts and parts[0] == "-":
                    body = "-" + body
                pieces.append(body if body else str(coeff))
        out = pieces[0]
        for p in pieces[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out

    def to_json(self):
        out = []
        for g in sorted(self.terms, reverse=True):
            a, b = self.terms[g]
            if a:
                out.append([a.numerator, a.denominator.bit_length() - 1, g, False])
            if b:
                out.append([b.numerator, b.denominator.bit_length() - 1, g, True])
        return out

    @staticmethod
    def from_json(data) -> "Scalar":
        s = ZERO
        for num, denpow, grade, is_eps in data:
            s = s + Scalar.monomial(grade, Fraction(num, 2 ** denpow), eps=is_eps)
        return s

    def __repr__(self):
        return f"Scalar({self.to_text()})"


def _coerce(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar({0: (Fraction(x), _FR0)}) if x else ZERO
    raise TypeError(f"cannot coerce {type(x)} to Scalar")


ZERO = Scalar()
ONE = Scalar.integer(1)
EPS = Scalar.monomial(0, eps=True)
Z = Scalar.monomial(1)       # z = q^(1/2)
Q = Scalar.monomial(2)       # q = z^2
HALF = Fraction(1, 2)


def z_pow(g: int) -> Scalar:
    return Scalar.monomial(g)


def q_pow(e) -> Scalar:
    """q^e for e in (1/2)Z; the grade 2e must be integral."""
    g = Fraction(e) * 2
    if g.denominator != 1:
        raise ValueError(f"q^{e} is not in the z-Laurent ring")
    return Scalar.monomial(int(g))


def from_fraction(fr) -> Scalar:
    return Scalar({0: (Fraction(fr), _FR0)})


def divide(num: Scalar, den: Scalar) -> Scalar:
    """Exact division in the ring; raises InternalNonDivisible on remainder."""
    if den.is_zero():
        raise ZeroDivisionError("division by zero scalar")
    if num.is_zero():
        return ZERO
    if not den.eps_free():
        conj = den.eps_conj()
        return divide(num * conj, den * conj)
    # eps-free denominator: divide plain and eps coefficient series separately
    den_c = {g: a for g, (a, _) in den.terms.items()}
    out: dict = {}
    for pick, slot in ((0, 0), (1, 1)):
        numer = {g: ab[pick] for g, ab in num.terms.items() if ab[pick]}
        if not numer:
            continue
        quot = _poly_divide(numer, den_c)
        for g, c in quot.items():
            a, b = out.get(g, (_FR0, _FR0))
            out[g] = (a + c, b) if slot == 0 else (a, b + c)
    try:
        return Scalar(out)
    except NonDyadicCoefficient as exc:
        raise InternalNonDivisible(str(exc)) from exc


def _poly_divide(num: dict, den: dict) -> dict:
    """Long division of Laurent polynomials given as grade->Fraction maps."""
    num = dict(num)
    dmax = max(den)
    dlead = den[dmax]
    quot: dict = {}
    while num:
        nmax = max(num)
        g = nmax - dmax
        c = num[nmax] / dlead
        quot[g] = quot.get(g, _FR0) + c
        for dg, dc in den.items():
            tg = dg + g
            nv = num.get(tg, _FR0) - dc * c
            if nv:
                num[tg] = nv
            else:
                num.pop(tg, None)
        if num and max(num) >= nmax:
            raise InternalNonDivisible("division does not terminate")
    return quot


# ---------------------------------------------------------------------------
# case tags


_CASE_TABLE = {
    "uH": (HALF, 1),
    "S": (Fraction(0), 1),
    "A": (Fraction(1), 2),
}


@dataclass(frozen=True)
class CaseTag:
    """One of the three form families, with a variant decoration.

    family: 'uH' | 'S' | 'A'; variant: 'natural' | 'flat' | 'sharp';
    psi: discriminant sign, only meaningful for sharp variants of uH/S.
    """

    family: str
    variant: str = "flat"
    psi: int = 1

    def __post_init__(self):
        if self.family not in _CASE_TABLE:
            raise ValueError(f"unknown family {self.family}")
        if self.variant not in ("natural", "flat", "sharp"):
            raise ValueError(f"unknown variant {self.variant}")
        if self.variant == "sharp" and self.family == "A":
            raise ValueError("family A has no sharp variant")
        if self.psi not in (1, -1):
            raise ValueError("psi must be +-1")

    @property
    def alpha(self) -> Fraction:
        return _CASE_TABLE[self.family][0]

    @property
    def gamma(self) -> int:
        return _CASE_TABLE[self.family][1]

    @property
    def has_signs(self) -> bool:
        return self.family == "S"

    @property
    def sign_values(self):
        return (1, -1) if self.has_signs else (1,)

    def with_variant(self, variant: str) -> "CaseTag":
        return CaseTag(self.family, variant, self.psi)

    def label(self) -> str:
        suffix = {"natural": "natural", "flat": "flat", "sharp": "sharp"}[self.variant]
        return f"{self.family}-{suffix}"


def d_case(r: int, case: CaseTag) -> Scalar:
    """The scaling monomial q^(C(r,2) + alpha*r)."""
    e = Fraction(math.comb(r, 2)) + case.alpha * r
    return q_pow(e)


# ---------------------------------------------------------------------------
# q-combinatorics


def pochhammer(x: Scalar, y: Scalar, n: int) -> Scalar:
    """(x;y)_n = prod_{i=1..n} (1 - x*y^(i-1))."""
    out = ONE
    ypow = ONE
    for _ in range(n):
        out = out * (ONE - x * ypow)
        ypow = ypow * y
    return out


def falling(x: Scalar, n: int) -> Scalar:
    """(x)_n = prod_{i=1..n} (x^i - 1)."""
    out = ONE
    xpow = ONE
    for _ in range(n):
        xpow = xpow * x
        out = out * (xpow - ONE)
    return out


def gauss_binom(n: int, m: int, lam: Scalar) -> Scalar:
    """Gaussian binomial with the zero convention off the range 0<=m<=n."""
    if m < 0 or n < 0 or m > n:
        return ZERO
    return divide(falling(lam, n), falling(lam, m) * falling(lam, n - m))


def gauss_multinom(n: int, parts, lam: Scalar) -> Scalar:
    parts = list(parts)
    if any(p < 0 for p in parts) or n < 0 or sum(parts) != n:
        return ZERO
    den = ONE
    for p in parts:
        den = den * falling(lam, p)
    return divide(falling(lam, n), den)


# ---------------------------------------------------------------------------
# sequence statistics


def inv_stat(seq) -> int:
    seq = list(seq)
    return sum(1 for i, j in combinations(range(len(seq)), 2) if seq[i] > seq[j])


def tilde_inv_stat(seq) -> int:
    seq = list(seq)
    return sum(max(0, seq[i] - seq[j])
               for i, j in combinations(range(len(seq)), 2))


def lambda_stat(seq, m: int) -> int:
    return sum(1 for e in seq if e == m)


def sigma_stat(seq) -> int:
    return sum(seq)


def inv_sets(j1, j2) -> int:
    """#{(a,b) in J1 x J2 : a < b} for position sets in an ordered universe."""
    return sum(1 for a in j1 for b in j2 if a < b)


# ---------------------------------------------------------------------------
# the three-block weight function W


def _mono_pow(lam: Scalar, e: Fraction) -> Scalar:
    """lam^e for a positive monomial lam = z^g and half-integral e."""
    mono = lam.as_monomial()
    if mono is None or mono[2] != 0 or mono[1] != 1:
        raise ValueError("W weights require lam to be a plain monomial z^g")
    g = Fraction(mono[0]) * e
    if g.denominator != 1:
        raise ValueError(f"lam^{e} leaves the z-Laurent ring")
    return Scalar.monomial(int(g))


def w_poly(beta, a: int, n: int, lam: Scalar = Q) -> Scalar:
    """Weight sum over ordered splittings {1..n} = E0 | E | E1 with |E| = a.

    Each splitting contributes lam^(inv(E0,E) - inv(E1,E) + beta(|E0|-|E1|)).
    """
    beta = Fraction(beta)
    if a < 0 or a > n:
        return ZERO
    out = ZERO
    for assign in product((0, 1, 2), repeat=n):
        if sum(1 for t in assign if t == 1) != a:
            continue
        e0 = [i for i, t in enumerate(assign) if t == 0]
        e = [i for i, t in enumerate(assign) if t == 1]
        e1 = [i for i, t in enumerate(assign) if t == 2]
        expo = (inv_sets(e0, e) - inv_sets(e1, e)
                + beta * (len(e0) - len(e1)))
        out = out + _mono_pow(lam, Fraction(expo))
    return out


def w_poly_rec_last(beta, a: int, n: int, lam: Scalar = Q) -> Scalar:
    """Same value via the recursion that splits off the last element."""
    beta = Fraction(beta)
    if a < 0 or a > n:
        return ZERO
    if n == 0:
        return ONE if a == 0 else ZERO
    lb = _mono_pow(lam, beta) + _mono_pow(lam, -beta)
    return (lb * w_poly_rec_last(beta, a, n - 1, lam)
            + w_poly_rec_last(beta + 1, a - 1, n - 1, lam))


def w_poly_rec_first(beta, a: int, n: int, lam: Scalar = Q) -> Scalar:
    """Same value via the recursion that splits off the first element."""
    beta = Fraction(beta)
    if a < 0 or a > n:
        return ZERO
    if n == 0:
        return ONE if a == 0 else ZERO
    lb = _mono_pow(lam, a + beta) + _mono_pow(lam, -(a + beta))
    return (lb * w_poly_rec_first(beta, a, n - 1, lam)
            + w_poly_rec_first(beta, a - 1, n - 1, lam))


# ---------------------------------------------------------------------------
# evaluation


def eval_scalar(s: Scalar, *, z=None, q=None, eps: int = 1) -> Fraction:
    """Exact rational value of s at z (or at q, requiring even grades)."""
    if eps not in (1, -1):
        raise ValueError("eps must be +-1")
    if (z is None) == (q is None):
        raise ValueError("provide exactly one of z, q")
    total = Fraction(0)
    if z is not None:
        zv = Fraction(z)
        for g, (a, b) in s.terms.items():
            total += (a + eps * b) * zv ** g
        return total
    qv = Fraction(q)
    for g, (a, b) in s.terms.items():
        if g % 2:
            raise OddGradeAtIrrationalPoint(
                f"grade {g} term present; value not integral in q")
        total += (a + eps * b) * qv ** (g // 2)
    return total
