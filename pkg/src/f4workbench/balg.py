"""The noncommutative polynomial calculus on U(k)[x] and the defining
congruences of the algebra of polynomial-part images.

Elements of U(k) (x) U(a) are read as polynomials in one central
indeterminate x with left coefficients in U(k): b(arg) always means
sum_j b_j * arg^j with the argument powers multiplying on the right.
Arguments are "central" combinations s - T of a rational constant and a
torus element, which commute with x but not with the coefficients.

The membership test implements, for the unique simple restricted root,
the congruence

    E^n b(n - Y - 1) = b(-n - Y - 1) E^n   modulo the left ideal
                                           generated by the centralizer
                                           nilradical,

together with its triangularized equivalent and the mixed-difference
combinations used by the induction machinery downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Tuple

from .exactnum import ONE, Scalar, ZERO, sca
from .liealg import LieElement, el_scale
from .uea import (IwasawaElement, Mono, ONE_MONO, PBWEngine, UEA,
                  ModelEngine, reduce_mod)


# ---------------------------------------------------------------------------
# scalar polynomials phi_n
# ---------------------------------------------------------------------------


def phi_coeffs(n: int) -> List[Fraction]:
    """Monomial coefficients of phi_n: phi_0 = 1 and for n >= 1
    phi_n(x) = x (x + n/2 - 1)(x + n/2 - 2) ... (x - n/2 + 1) / n!."""
    if n == 0:
        return [Fraction(1)]
    coeffs = [Fraction(0), Fraction(1)]   # x
    for k in range(1, n):
        shift = Fraction(n, 2) - k
        # multiply by (x + shift)
        new = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i + 1] += c
            new[i] += c * shift
        coeffs = new
    inv = Fraction(1, factorial(n))
    return [c * inv for c in coeffs]


def phi_value_at(n: int, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(phi_coeffs(n)):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# PolyUEA
# ---------------------------------------------------------------------------


@dataclass
class PolyUEA:
    """Polynomial with U(k) coefficients, in the monomial or phi basis."""

    coeffs: List[UEA]
    basis: str = "x"

    def __post_init__(self):
        if self.basis not in ("x", "phi"):
            raise ValueError("basis must be 'x' or 'phi'")

    def trim(self) -> "PolyUEA":
        c = list(self.coeffs)
        while c and not c[-1]:
            c.pop()
        return PolyUEA(c, self.basis)

    @property
    def degree(self) -> int:
        t = self.trim()
        return len(t.coeffs) - 1

    def coeff(self, j: int) -> UEA:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else {}

    def is_zero(self) -> bool:
        return all(not c for c in self.coeffs)

    def add(self, other: "PolyUEA") -> "PolyUEA":
        if self.basis != other.basis:
            raise ValueError("mixed bases")
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyUEA([PBWEngine.add(self.coeff(j), other.coeff(j))
                        for j in range(n)], self.basis).trim()

    def scale(self, c: Scalar) -> "PolyUEA":
        return PolyUEA([PBWEngine.scale(c, u) for u in self.coeffs],
                       self.basis).trim()

    def map_coeffs(self, f) -> "PolyUEA":
        return PolyUEA([f(u) for u in self.coeffs], self.basis)

    def to_x(self) -> "PolyUEA":
        if self.basis == "x":
            return self
        out: List[UEA] = [dict() for _ in range(max(len(self.coeffs), 1))]
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            for i, s in enumerate(phi_coeffs(j)):
                if s:
                    out[i] = PBWEngine.add(out[i], PBWEngine.scale(sca(s), c))
        return PolyUEA(out, "x").trim()

    def to_phi(self) -> "PolyUEA":
        if self.basis == "phi":
            return self
        rem = [dict(c) for c in self.coeffs]
        out: List[UEA] = [dict() for _ in range(len(rem))]
        for j in range(len(rem) - 1, -1, -1):
            top = rem[j]
            if top:
                cj = PBWEngine.scale(sca(factorial(j)), top)
                out[j] = cj
                for i, s in enumerate(phi_coeffs(j)):
                    if s:
                        rem[i] = PBWEngine.sub(rem[i], PBWEngine.scale(sca(s), cj))
        if any(rem):
            raise AssertionError("phi-basis conversion left a remainder")
        return PolyUEA(out, "phi").trim()


def iwasawa_to_poly(b: IwasawaElement) -> PolyUEA:
    return PolyUEA([dict(c) for c in b.coeffs], "x").trim()


def poly_to_iwasawa(p: PolyUEA) -> IwasawaElement:
    return IwasawaElement([dict(c) for c in p.to_x().coeffs]).trim()


# ---------------------------------------------------------------------------
# discrete derivative and substitutions
# ---------------------------------------------------------------------------


def shift_by_scalar(p: PolyUEA, c: Fraction) -> PolyUEA:
    """p(x + c) in the monomial basis."""
    p = p.to_x()
    n = len(p.coeffs)
    out: List[UEA] = [dict() for _ in range(n)]
    for j, pj in enumerate(p.coeffs):
        if not pj:
            continue
        for i in range(j + 1):
            s = comb(j, i) * c ** (j - i)
            if s:
                out[i] = PBWEngine.add(out[i], PBWEngine.scale(sca(s), pj))
    return PolyUEA(out, "x").trim()


def discrete_derivative(p: PolyUEA, n: int) -> PolyUEA:
    """The n-th central difference sum_j (-1)^j C(n,j) p(x + n/2 - j)."""
    if n == 0:
        return p.to_x()
    p = p.to_x()
    out = PolyUEA([], "x")
    for j in range(n + 1):
        term = shift_by_scalar(p, Fraction(n, 2) - j)
        out = out.add(term.scale(sca((-1) ** j * comb(n, j))))
    return out


def phi_poly(n: int) -> PolyUEA:
    """phi_n as a PolyUEA with scalar coefficients."""
    return PolyUEA([{ONE_MONO: sca(c)} if c else {} for c in phi_coeffs(n)],
                   "x").trim()


class CentralArg:
    """An argument s + T: rational constant plus a torus element of U(k)."""

    def __init__(self, me: ModelEngine, scalar: Fraction,
                 element: Optional[LieElement] = None):
        self.me = me
        self.scalar = Fraction(scalar)
        base: UEA = {}
        if scalar:
            base[ONE_MONO] = sca(scalar)
        if element:
            base = PBWEngine.add(base, me.g.from_lie(me.lie_in_mixed(element)))
        self.value = base
        self._powers = [me.g.one()]

    def power(self, i: int) -> UEA:
        while len(self._powers) <= i:
            self._powers.append(self.me.g.mul(self._powers[-1], self.value))
        return self._powers[i]


def evaluate_poly(me: ModelEngine, p: PolyUEA, arg: CentralArg,
                  right: Optional[UEA] = None) -> UEA:
    """sum_j p_j arg^j (right), coefficients on the left."""
    p = p.to_x()
    acc: UEA = {}
    for j, pj in enumerate(p.coeffs):
        if not pj:
            continue
        term = me.g.mul(pj, arg.power(j))
        acc = PBWEngine.add(acc, term)
    if right is not None:
        acc = me.g.mul(acc, right)
    return acc


def t_matrix_entry(me: ModelEngine, i: int, j: int) -> UEA:
    """t_ij = sum_k (-1)^k C(i,k) (H + i/2 - 1 - k)^j, an H-polynomial."""
    h = me.model.distinguished["H"]
    acc: UEA = {}
    for k in range(i + 1):
        arg = CentralArg(me, Fraction(i, 2) - 1 - k, h)
        term = PBWEngine.scale(sca((-1) ** k * comb(i, k)), arg.power(j))
        acc = PBWEngine.add(acc, term)
    return acc


def shift_substitute(me: ModelEngine, b: PolyUEA) -> PolyUEA:
    """c(x) = b(x + H - 1), returned in the phi basis.

    Uses the triangular matrix c_i = sum_{j >= i} b_j t_ij with the
    torus-polynomial entries t_ij multiplying on the right.
    """
    b = b.to_x()
    m = b.degree
    if m < 0:
        return PolyUEA([], "phi")
    out: List[UEA] = []
    for i in range(m + 1):
        acc: UEA = {}
        for j in range(i, m + 1):
            bj = b.coeff(j)
            if not bj:
                continue
            acc = PBWEngine.add(acc, me.g.mul(bj, t_matrix_entry(me, i, j)))
        out.append(acc)
    return PolyUEA(out, "phi").trim()


def shift_substitute_direct(me: ModelEngine, b: PolyUEA) -> PolyUEA:
    """Independent route: expand b(x + (H - 1)) binomially, x basis."""
    b = b.to_x()
    m = b.degree
    if m < 0:
        return PolyUEA([], "x")
    h = me.model.distinguished["H"]
    arg = CentralArg(me, Fraction(-1), h)
    out: List[UEA] = [dict() for _ in range(m + 1)]
    for j in range(m + 1):
        bj = b.coeff(j)
        if not bj:
            continue
        for i in range(j + 1):
            term = me.g.mul(PBWEngine.scale(sca(comb(j, i)), bj),
                            arg.power(j - i))
            out[i] = PBWEngine.add(out[i], term)
    return PolyUEA(out, "x").trim()


# ---------------------------------------------------------------------------
# membership reports
# ---------------------------------------------------------------------------


@dataclass
class EquationRecord:
    eq_id: str
    passed: bool
    residual_monomials: int

    def as_dict(self) -> dict:
        return {"equation": self.eq_id, "passed": self.passed,
                "residual_monomials": self.residual_monomials}


@dataclass
class BEquationReport:
    records: List[EquationRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, eq_id: str, residual: UEA):
        self.records.append(EquationRecord(eq_id, not residual, len(residual)))

    def as_dict(self) -> dict:
        return {"passed": self.passed,
                "equations": [r.as_dict() for r in self.records]}


def default_nmax(degree: int) -> int:
    return 2 * degree + 2


def coefficients_m_invariant(me: ModelEngine, b: IwasawaElement) -> bool:
    """Whether every polynomial coefficient is killed by the centralizer."""
    mbasis = [me.lie_in_mixed(v) for v in me.model.subspaces["m"].basis()]
    for c in b.coeffs:
        if not c:
            continue
        for x in mbasis:
            if me.g.ad(x, c):
                return False
    return True


def check_congruences(me: ModelEngine, b: IwasawaElement,
                      nmax: Optional[int] = None) -> BEquationReport:
    """The raw congruences for n = 1..nmax, reduced exactly.

    Raises when a coefficient leaves U(k).  nmax defaults to twice the
    degree plus two; the triangular form shows higher equations are
    redundant, and the buffer catches assembly errors.
    """
    b = b.trim()
    for c in b.coeffs:
        if c and not me.k_only(c):
            raise ValueError("coefficients must lie in U(k)")
    if nmax is None:
        nmax = default_nmax(max(b.degree, 0))
    y = me.model.distinguished["Y"]
    neg_y = el_scale(-ONE, y)
    report = BEquationReport()
    for n in range(1, nmax + 1):
        left_arg = CentralArg(me, Fraction(n - 1), neg_y)
        right_arg = CentralArg(me, Fraction(-n - 1), neg_y)
        en = me.g.gen("E", n)
        lhs = me.g.mul(en, evaluate_poly(me, iwasawa_to_poly(b), left_arg))
        rhs = evaluate_poly(me, iwasawa_to_poly(b), right_arg, right=en)
        residual = me.reduce_mod_mplus(PBWEngine.sub(lhs, rhs))
        report.add("n=%d" % n, residual)
    return report


def check_b_membership(me: ModelEngine, b: IwasawaElement,
                       nmax: Optional[int] = None) -> BEquationReport:
    """Membership in the congruence algebra: invariance plus equations.

    The algebra is defined inside the centralizer invariants, so the
    report carries one record for the invariance of the coefficients
    followed by one record per congruence, all reduced exactly.
    """
    report = BEquationReport()
    inv_ok = coefficients_m_invariant(me, b)
    report.records.append(EquationRecord("m-invariance", inv_ok,
                                         0 if inv_ok else 1))
    report.records.extend(check_congruences(me, b, nmax).records)
    return report


def check_triangular(me: ModelEngine, c: PolyUEA) -> BEquationReport:
    """The triangularized system, one equation per degree level.

    Equation n reads: apply the raising derivation n+1 times to the n-th
    difference, evaluate at n/2 + 1 - Ytilde, add the n-times-derived
    (n+1)-st difference evaluated at n/2 - 1/2 - Ytilde times E, and
    reduce; equation n only involves the coefficients from n upward.
    """
    cx = c.to_x()
    m = cx.degree
    yt = me.model.distinguished["Ytilde"]
    neg_yt = el_scale(-ONE, yt)
    e = me.g.gen("E")
    report = BEquationReport()
    e_elt = me.lie_in_mixed(me.model.distinguished["E"])
    for n in range(0, max(m, 0) + 1):
        dn = discrete_derivative(cx, n)
        dn1 = discrete_derivative(cx, n + 1)
        dn_e = dn.map_coeffs(lambda u: me.g.ad_power(e_elt, u, n + 1))
        dn1_e = dn1.map_coeffs(lambda u: me.g.ad_power(e_elt, u, n))
        arg1 = CentralArg(me, Fraction(n, 2) + 1, neg_yt)
        arg2 = CentralArg(me, Fraction(n, 2) - Fraction(1, 2), neg_yt)
        total = PBWEngine.add(
            evaluate_poly(me, dn_e, arg1),
            evaluate_poly(me, dn1_e, arg2, right=e))
        report.add("n=%d" % n, me.reduce_mod_mplus(total))
    return report


def epsilon_ln(me: ModelEngine, c: PolyUEA, l: int, n: int) -> UEA:
    """The mixed-difference combination for a pair (l, n), exactly.

    For members of the congruence algebra it reduces to zero modulo the
    nilradical left ideal; the (n, l) assembly is its negative.
    """
    cphi = c.to_phi()
    m = cphi.degree
    yt = me.model.distinguished["Ytilde"]
    neg_yt = el_scale(-ONE, yt)
    e_elt = me.lie_in_mixed(me.model.distinguished["E"])
    acc: UEA = {}
    for i in range(n, m + 1):
        ci = cphi.coeff(i)
        if not ci:
            continue
        der = me.g.ad_power(e_elt, ci, l)
        if not der:
            continue
        arg = CentralArg(me, -Fraction(n, 2) + l, neg_yt)
        phi_at = evaluate_poly(me, phi_poly(i - n), arg)
        term = me.g.mul_many(der, phi_at, me.g.gen("E", n) if n else me.g.one())
        acc = PBWEngine.add(acc, PBWEngine.scale(sca((-1) ** n), term))
    for i in range(l, m + 1):
        ci = cphi.coeff(i)
        if not ci:
            continue
        der = me.g.ad_power(e_elt, ci, n)
        if not der:
            continue
        arg = CentralArg(me, -Fraction(l, 2) + n, neg_yt)
        phi_at = evaluate_poly(me, phi_poly(i - l), arg)
        term = me.g.mul_many(der, phi_at, me.g.gen("E", l) if l else me.g.one())
        acc = PBWEngine.sub(acc, PBWEngine.scale(sca((-1) ** l), term))
    return acc


@dataclass
class LeadingData:
    degree: int
    leading: UEA
    parity_even: bool
    zero: bool = False


def leading_data(b: IwasawaElement) -> LeadingData:
    """Degree, leading coefficient, and the evenness surrogate for the
    invariance of the leading term under the restricted Weyl group."""
    t = b.trim()
    if not t.coeffs:
        return LeadingData(degree=-1, leading={}, parity_even=True, zero=True)
    m = len(t.coeffs) - 1
    return LeadingData(degree=m, leading=t.coeffs[m], parity_even=(m % 2 == 0))
