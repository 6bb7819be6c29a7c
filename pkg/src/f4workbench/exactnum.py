"""Exact arithmetic over Q(sqrt2) and exact linear algebra.

Everything downstream computes with elements of the real quadratic field
Q(sqrt2): the rational structure constants of the Chevalley basis stay
rational, and sqrt2 enters once, through the Cayley transform.  A scalar
is stored as a single reduced triple (p, q, r) of integers representing
(p + q*sqrt2)/r, which keeps the hot arithmetic paths down to integer
multiplies and one gcd per operation.

Matrices are dense with Scalar entries.  Rank and determinant use
fraction-free (Bareiss) elimination to bound coefficient growth; kernels
and solving use ordinary Gauss-Jordan over the field, which is exact.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from math import gcd

# Exact rationals: arbitrary precision, always reduced, positive
# denominator.  fractions.Fraction guarantees all three.
Rational = Fraction


def _gcd3(a: int, b: int, c: int) -> int:
    return gcd(gcd(abs(a), abs(b)), abs(c))


class Scalar:
    """An element a + b*sqrt2 of Q(sqrt2), stored as (p + q*sqrt2)/r."""

    __slots__ = ("p", "q", "r")

    def __init__(self, p: int = 0, q: int = 0, r: int = 1):
        if r == 0:
            raise ZeroDivisionError("scalar with zero denominator")
        if r < 0:
            p, q, r = -p, -q, -r
        if p == 0 and q == 0:
            r = 1
        else:
            g = _gcd3(p, q, r)
            if g > 1:
                p //= g
                q //= g
                r //= g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(x) -> "Scalar":
        f = Fraction(x)
        return Scalar(f.numerator, 0, f.denominator)

    @staticmethod
    def from_pair(a, b) -> "Scalar":
        """Scalar a + b*sqrt2 from two rationals."""
        fa, fb = Fraction(a), Fraction(b)
        r = fa.denominator * fb.denominator // gcd(fa.denominator, fb.denominator)
        return Scalar(fa.numerator * (r // fa.denominator),
                      fb.numerator * (r // fb.denominator), r)

    # -- component access ---------------------------------------------

    @property
    def a(self) -> Fraction:
        """Rational part."""
        return Fraction(self.p, self.r)

    @property
    def b(self) -> Fraction:
        """Coefficient of sqrt2."""
        return Fraction(self.q, self.r)

    def is_rational(self) -> bool:
        return self.q == 0

    def rational_value(self) -> Fraction:
        if self.q != 0:
            raise ValueError("scalar %s is not rational" % self)
        return Fraction(self.p, self.r)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return Scalar(self.p * other.r + other.p * self.r,
                      self.q * other.r + other.q * self.r,
                      self.r * other.r)

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return Scalar(self.p * other.r - other.p * self.r,
                      self.q * other.r - other.q * self.r,
                      self.r * other.r)

    def __neg__(self):
        return Scalar(-self.p, -self.q, self.r)

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return Scalar(self.p * other.p + 2 * self.q * other.q,
                      self.p * other.q + self.q * other.p,
                      self.r * other.r)

    def inverse(self) -> "Scalar":
        # 1/((p+q*sqrt2)/r) = r(p - q*sqrt2)/(p^2 - 2 q^2)
        n = self.p * self.p - 2 * self.q * self.q
        if n == 0:
            raise ZeroDivisionError("division by zero scalar")
        return Scalar(self.r * self.p, -self.r * self.q, n)

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparisons ----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.p == other.p and self.q == other.q and self.r == other.r

    def __hash__(self):
        if self.q == 0:  # agree with Fraction hashing is not needed; stay internal
            return hash((self.p, self.r))
        return hash((self.p, self.q, self.r))

    def __bool__(self):
        return self.p != 0 or self.q != 0

    def sign(self) -> int:
        """Sign under the real embedding sqrt2 > 0."""
        if self.p == 0 and self.q == 0:
            return 0
        if self.q == 0:
            return 1 if self.p > 0 else -1
        if self.p == 0:
            return 1 if self.q > 0 else -1
        if self.p > 0 and self.q > 0:
            return 1
        if self.p < 0 and self.q < 0:
            return -1
        # mixed signs: compare p^2 with 2 q^2
        big_p = self.p * self.p > 2 * self.q * self.q
        if big_p:
            return 1 if self.p > 0 else -1
        return 1 if self.q > 0 else -1

    # -- serialization ---------------------------------------------------

    def to_string(self) -> str:
        """Canonical form "a/b + c/d*sqrt2" with both fractions reduced."""
        return "%d/%d + %d/%d*sqrt2" % (self.a.numerator, self.a.denominator,
                                        self.b.numerator, self.b.denominator)

    _PARSE = re.compile(
        r"^\s*(-?\d+)\s*/\s*(\d+)\s*\+\s*(-?\d+)\s*/\s*(\d+)\s*\*\s*sqrt2\s*$")

    @staticmethod
    def parse(s: str) -> "Scalar":
        m = Scalar._PARSE.match(s)
        if not m:
            raise ValueError("bad scalar string: %r" % s)
        return Scalar.from_pair(Fraction(int(m.group(1)), int(m.group(2))),
                                Fraction(int(m.group(3)), int(m.group(4))))

    def __repr__(self):
        if self.q == 0:
            return "%d/%d" % (self.p, self.r) if self.r != 1 else str(self.p)
        return self.to_string()


ZERO = Scalar(0)
ONE = Scalar(1)
TWO = Scalar(2)
HALF = Scalar(1, 0, 2)
SQRT2 = Scalar(0, 1)


def sca(x) -> Scalar:
    """Coerce an int/Fraction/Scalar to Scalar."""
    if isinstance(x, Scalar):
        return x
    return Scalar.from_rational(x)


def scalar_arith(x: Scalar, y: Scalar, op: str) -> Scalar:
    """Field arithmetic dispatch; division by zero raises ZeroDivisionError."""
    if op == "+":
        return x + y
    if op == "-":
        return x - y
    if op == "*":
        return x * y
    if op == "/":
        return x / y
    raise ValueError("unknown op %r" % op)


def sqrt_in_field(x: Scalar) -> Scalar:
    """Exact square root of a rational scalar inside Q(sqrt2), if it exists.

    Accepts x = s^2 or x = 2 s^2 with s rational; raises otherwise.
    """
    if not x.is_rational():
        raise ValueError("only rational radicands supported")
    v = x.rational_value()
    if v < 0:
        raise ValueError("no real square root of %s" % v)
    if v == 0:
        return ZERO

    def _isqrt_frac(f: Fraction):
        n, d = f.numerator, f.denominator
        rn, rd = _isqrt(n), _isqrt(d)
        if rn * rn == n and rd * rd == d:
            return Fraction(rn, rd)
        return None

    s = _isqrt_frac(v)
    if s is not None:
        return Scalar.from_rational(s)
    s = _isqrt_frac(v / 2)
    if s is not None:
        return Scalar.from_pair(0, s)
    raise ValueError("%s has no square root in Q(sqrt2)" % v)


def _isqrt(n: int) -> int:
    import math
    return math.isqrt(n)


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


class Matrix:
    """Dense matrix over Q(sqrt2) with exact elimination."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    @staticmethod
    def zero(rows: int, cols: int) -> "Matrix":
        return Matrix([[ZERO] * cols for _ in range(rows)])

    @staticmethod
    def identity(n: int) -> "Matrix":
        m = Matrix.zero(n, n)
        for i in range(n):
            m.entries[i][i] = ONE
        return m

    @staticmethod
    def from_columns(cols) -> "Matrix":
        cols = [list(c) for c in cols]
        if not cols:
            return Matrix.zero(0, 0)
        return Matrix([[cols[j][i] for j in range(len(cols))]
                       for i in range(len(cols[0]))])

    def column(self, j: int):
        return [self.entries[i][j] for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix([[self.entries[i][j] for i in range(self.rows)]
                       for j in range(self.cols)])

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            out = Matrix.zero(self.rows, other.cols)
            for i in range(self.rows):
                rowi = self.entries[i]
                for k in range(self.cols):
                    aik = rowi[k]
                    if not aik:
                        continue
                    rowk = other.entries[k]
                    orow = out.entries[i]
                    for j in range(other.cols):
                        if rowk[j]:
                            orow[j] = orow[j] + aik * rowk[j]
            return out
        return NotImplemented

    def apply(self, vec):
        """Matrix times column vector (list of Scalar)."""
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.rows):
            acc = ZERO
            row = self.entries[i]
            for j, v in enumerate(vec):
                if v and row[j]:
                    acc = acc + row[j] * v
            out.append(acc)
        return out

    def add(self, other: "Matrix") -> "Matrix":
        return Matrix([[self.entries[i][j] + other.entries[i][j]
                        for j in range(self.cols)] for i in range(self.rows)])

    def scale(self, c: Scalar) -> "Matrix":
        return Matrix([[c * e for e in row] for row in self.entries])

    # -- eliminations ------------------------------------------------------

    def bareiss(self):
        """Fraction-free elimination.  Returns (rank, det_if_square).

        Classic two-step Bareiss division keeps intermediate entries as
        products of minors, bounding growth on integral input.
        """
        m = [row[:] for row in self.entries]
        rows, cols = self.rows, self.cols
        prev = ONE
        rank = 0
        sign = 1
        r = 0
        for c in range(cols):
            if r >= rows:
                break
            piv = None
            for i in range(r, rows):
                if m[i][c]:
                    piv = i
                    break
            if piv is None:
                continue
            if piv != r:
                m[r], m[piv] = m[piv], m[r]
                sign = -sign
            pivot = m[r][c]
            for i in range(r + 1, rows):
                for j in range(c + 1, cols):
                    m[i][j] = (pivot * m[i][j] - m[i][c] * m[r][j]) / prev
                m[i][c] = ZERO
            prev = pivot
            r += 1
            rank += 1
        det = None
        if rows == cols:
            if rank < rows:
                det = ZERO
            else:
                det = prev if sign == 1 else -prev
        return rank, det

    def rank(self) -> int:
        return self.bareiss()[0]

    def det(self) -> Scalar:
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        return self.bareiss()[1]

    def rref(self):
        """Reduced row echelon form; returns (matrix rows, pivot columns)."""
        m = [row[:] for row in self.entries]
        pivots = []
        r = 0
        for c in range(self.cols):
            if r >= self.rows:
                break
            piv = None
            for i in range(r, self.rows):
                if m[i][c]:
                    piv = i
                    break
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = m[r][c].inverse()
            m[r] = [inv * e for e in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [m[i][j] - f * m[r][j] for j in range(self.cols)]
            pivots.append(c)
            r += 1
        return m, pivots

    def nullspace(self):
        """Basis of the right kernel, as a list of column vectors."""
        m, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for fc in free:
            v = [ZERO] * self.cols
            v[fc] = ONE
            for r, pc in enumerate(pivots):
                v[pc] = -m[r][fc]
            basis.append(v)
        return basis

    def solve(self, rhs):
        """One solution of self * x = rhs, or None if inconsistent."""
        aug = Matrix([self.entries[i] + [rhs[i]] for i in range(self.rows)])
        m, pivots = aug.rref()
        for r in range(len(pivots), self.rows):
            if m[r][self.cols]:
                return None
        if pivots and pivots[-1] == self.cols:
            return None
        x = [ZERO] * self.cols
        for r, pc in enumerate(pivots):
            x[pc] = m[r][self.cols]
        return x

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps([[e.to_string() for e in row] for row in self.entries])

    @staticmethod
    def from_json(s: str) -> "Matrix":
        data = json.loads(s)
        return Matrix([[Scalar.parse(e) for e in row] for row in data])

    def __repr__(self):
        return "Matrix(%dx%d)" % (self.rows, self.cols)


def exact_rank(m: Matrix) -> int:
    """Rank over Q(sqrt2), fraction-free."""
    return m.rank()


# ---------------------------------------------------------------------------
# Polynomials in one indeterminate over Q(sqrt2)
# ---------------------------------------------------------------------------


class PolyScalar:
    """Polynomial in one indeterminate s with Scalar coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [sca(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = cs

    @staticmethod
    def constant(c) -> "PolyScalar":
        return PolyScalar([sca(c)])

    @staticmethod
    def variable() -> "PolyScalar":
        return PolyScalar([ZERO, ONE])

    def degree(self) -> int:
        """Degree, with deg 0 = -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __eq__(self, other):
        return isinstance(other, PolyScalar) and self.coeffs == other.coeffs

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [ZERO] * (n - len(self.coeffs))
        b = other.coeffs + [ZERO] * (n - len(other.coeffs))
        return PolyScalar([a[i] + b[i] for i in range(n)])

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return PolyScalar([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return PolyScalar([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return PolyScalar([])
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return PolyScalar(out)

    def evaluate(self, x: Scalar) -> Scalar:
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def exact_div(self, other: "PolyScalar") -> "PolyScalar":
        """Exact polynomial quotient; raises if the division has remainder."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = self.coeffs[:]
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            if not self.coeffs:
                return PolyScalar([])
            raise ValueError("inexact polynomial division")
        out = [ZERO] * (dq + 1)
        lead = other.coeffs[-1]
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] / lead
            out[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        if any(rem):
            raise ValueError("inexact polynomial division")
        return PolyScalar(out)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append("(%r)*s^%d" % (c, i))
        return " + ".join(parts)


def poly_det(entries) -> PolyScalar:
    """Exact determinant of a square array of PolyScalar (Bareiss)."""
    n = len(entries)
    for row in entries:
        if len(row) != n:
            raise ValueError("non-square polynomial matrix")
    if n == 0:
        return PolyScalar.constant(1)
    m = [[e for e in row] for row in entries]
    prev = PolyScalar.constant(1)
    sign = 1
    for r in range(n - 1):
        piv = None
        for i in range(r, n):
            if not m[i][r].is_zero():
                piv = i
                break
        if piv is None:
            return PolyScalar([])
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        for i in range(r + 1, n):
            for j in range(r + 1, n):
                m[i][j] = (m[r][r] * m[i][j] - m[i][r] * m[r][j]).exact_div(prev)
            m[i][r] = PolyScalar([])
        prev = m[r][r]
    d = m[n - 1][n - 1]
    return d if sign == 1 else -d


def poly_det_cofactor(entries) -> PolyScalar:
    """Independent oracle: determinant by recursive cofactor expansion."""
    n = len(entries)
    if n == 0:
        return PolyScalar.constant(1)
    if n == 1:
        return entries[0][0]
    acc = PolyScalar([])
    for j in range(n):
        if entries[0][j].is_zero():
            continue
        minor = [[entries[i][k] for k in range(n) if k != j]
                 for i in range(1, n)]
        term = entries[0][j] * poly_det_cofactor(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


# ---------------------------------------------------------------------------
# Rational root extraction (for determinant factorization checks)
# ---------------------------------------------------------------------------


def _divisors(n: int):
    n = abs(n)
    if n == 0:
        return [1]
    small = []
    large = []
    f = 1
    while f * f <= n:
        if n % f == 0:
            small.append(f)
            if f != n // f:
                large.append(n // f)
        f += 1
    return small + large[::-1]


def rational_roots(poly: PolyScalar):
    """All rational roots with multiplicity, plus the non-split remainder.

    Requires rational coefficients.  Returns (roots, remainder) where
    roots is a list of Fractions (with repetition) and remainder is the
    PolyScalar left after dividing out every rational linear factor.
    """
    if poly.is_zero():
        raise ValueError("zero polynomial has every root")
    for c in poly.coeffs:
        if not c.is_rational():
            raise ValueError("rational_roots needs rational coefficients")
    roots = []
    cur = poly
    # strip roots at zero
    while cur.coeffs and not cur.coeffs[0]:
        roots.append(Fraction(0))
        cur = PolyScalar(cur.coeffs[1:])
    while cur.degree() >= 1:
        fracs = [c.rational_value() for c in cur.coeffs]
        lcm = 1
        for f in fracs:
            lcm = lcm * f.denominator // gcd(lcm, f.denominator)
        ints = [int(f * lcm) for f in fracs]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        ints = [v // g for v in ints]
        found = None
        for qd in _divisors(ints[-1]):
            for pd in _divisors(ints[0]):
                for p in (pd, -pd):
                    if gcd(abs(p), qd) != 1:
                        continue
                    cand = Fraction(p, qd)
                    acc = Fraction(0)
                    for c in reversed(ints):
                        acc = acc * cand + c
                    if acc == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        cur = cur.exact_div(PolyScalar([-sca(found), ONE]))
    return roots, cur
