"""Skew-diagonal bookkeeping, coefficient systems, and the assembled
congruence sums driving the decreasing induction.

Everything here is parameterized by the degree profile d_r =
floor((3m - 2r + 2)/2): the index sets select which dominant unknowns
survive at a skew-diagonal level (T, n), the coefficient matrices carry
the double binomial sums, and the assembled sums apply the raising
derivations to the coefficients of a polynomial-part element and reduce
the combination modulo the nilradical left ideal.  Binomials with
out-of-range arguments vanish, which is what delimits every sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .exactnum import Matrix, ONE, PolyScalar, Scalar, ZERO, sca
from .liealg import LieElement, el_add, el_scale
from .repth import DegreeMachine, degree_machine
from .rootdata import Coord, gamma_basis, vadd, vscale
from .uea import IwasawaElement, ModelEngine, PBWEngine, UEA


def degree_profile(m: int) -> Tuple[int, ...]:
    """The sequence d_0..d_m with d_r = floor((3m - 2r + 2)/2)."""
    return tuple((3 * m - 2 * r + 2) // 2 for r in range(m + 1))


@dataclass(frozen=True)
class IndexSets:
    T: int
    n: int
    m: int
    L: Tuple[int, ...]
    R: Tuple[int, ...]
    R_reduced: Tuple[int, ...]


def index_sets(m: int, T: int, n: int) -> IndexSets:
    """The row and column index sets at skew-diagonal level (T, n)."""
    d0 = degree_profile(m)[0]
    if not (m <= T <= 2 * d0):
        raise ValueError("T=%d out of range [%d, %d]" % (T, m, 2 * d0))
    if not (0 <= n <= min(T, 2 * d0 - T)):
        raise ValueError("n=%d out of range [0, %d]" % (n, min(T, 2 * d0 - T)))
    lset = tuple(L for L in range(0, min(2 * m, T) - n + 1)
                 if L % 2 != n % 2)
    rset = tuple(r for r in range(0, min(m, min(T, 2 * d0 - T) - n) + 1)
                 if r % 2 == (T - n) % 2)
    if (T - n) % 2 == 0:
        r_red = tuple(r for r in rset if 2 * r < T + n)
    else:
        r_red = rset
    return IndexSets(T=T, n=n, m=m, L=lset, R=rset, R_reduced=r_red)


def _binom(a: int, b: int) -> int:
    """Binomial with vanishing out-of-range values."""
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


def coefficient_a(i: int, r: int, T: int, n: int, l: int) -> Scalar:
    """(-1/2)^(r-i) (-1)^(i-n) r! C(T-n-l, i-n) C(l, r-i), or zero."""
    if r < i or i < n:
        return ZERO
    c1 = _binom(T - n - l, i - n)
    c2 = _binom(l, r - i)
    if not c1 or not c2:
        return ZERO
    val = Fraction((-1) ** (r - i), 2 ** (r - i)) * (-1) ** (i - n) \
        * factorial(r) * c1 * c2
    return sca(val)


def coefficient_b(r: int, k: int, T: int, n: int, L: int) -> Scalar:
    """r! (-1)^T 2^(T-r-2k) C(L, T-r-2k) C(T-L-n, r-n), or zero."""
    c1 = _binom(L, T - r - 2 * k)
    c2 = _binom(T - L - n, r - n)
    if not c1 or not c2:
        return ZERO
    val = factorial(r) * (-1) ** T * Fraction(2) ** (T - r - 2 * k) * c1 * c2
    return sca(val)


def system_matrix(T: int, n: int, m: int, reduced: bool = False) -> Matrix:
    """Rows over L(T,n), columns over R (or the reduced set)."""
    sets = index_sets(m, T, n)
    cols = sets.R_reduced if reduced else sets.R
    entries = []
    for L in sets.L:
        row = []
        for r in cols:
            acc = 0
            for l in range(0, L + 1):
                acc += (-2) ** l * _binom(L, l) * _binom(T - n - l, r - l)
            row.append(sca(acc))
        entries.append(row)
    if not entries:
        return Matrix.zero(0, len(cols))
    return Matrix(entries)


def generalized_a_matrix(lseq: Sequence[int], delta: int) -> List[List[PolyScalar]]:
    """The square polynomial matrix with entries
    A_ij(s) = sum_l (-2)^l C(L_i, l) C(s - l, 2j + delta - l)."""
    if delta not in (0, 1):
        raise ValueError("delta must be 0 or 1")
    if list(lseq) != sorted(set(lseq)) or any(x < 0 for x in lseq):
        raise ValueError("index sequence must be strictly increasing, >= 0")
    size = len(lseq)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            t_top = 2 * j + delta
            acc = PolyScalar([])
            for l in range(0, min(lseq[i], t_top) + 1):
                c = (-2) ** l * _binom(lseq[i], l)
                if not c:
                    continue
                acc = acc + _binom_poly(-l, t_top - l) * sca(c)
            row.append(acc)
        out.append(row)
    return out


def _binom_poly(shift: int, t: int) -> PolyScalar:
    """C(s + shift, t) as a polynomial in s."""
    acc = PolyScalar.constant(Fraction(1, factorial(t)))
    for u in range(t):
        acc = acc * PolyScalar([sca(shift - u), ONE])
    return acc


def system_matches_generalized(m: int, T: int, n: int) -> bool:
    """Cross-evaluation: the numeric matrix equals the polynomial one
    at s = T - n over the same index sets."""
    sets = index_sets(m, T, n)
    sm = system_matrix(T, n, m)
    if not sets.L or not sets.R:
        return True
    # the polynomial matrix needs column labels 2j + delta matching R
    delta = sets.R[0] % 2
    if any(r % 2 != delta for r in sets.R):
        return False
    ga = generalized_a_matrix(sets.L, delta)
    s_val = sca(T - n)
    for a, L in enumerate(sets.L):
        for b, r in enumerate(sets.R):
            j = (r - delta) // 2
            if j >= len(sets.L):
                # compare against a directly-built entry polynomial
                acc = PolyScalar([])
                for l in range(0, min(L, r) + 1):
                    c = (-2) ** l * _binom(L, l)
                    if c:
                        acc = acc + _binom_poly(-l, r - l) * sca(c)
                if acc.evaluate(s_val) != sm.entries[a][b]:
                    return False
                continue
            if ga[a][j].evaluate(s_val) != sm.entries[a][b]:
                return False
    return True


@dataclass
class DetFactorization:
    lseq: Tuple[int, ...]
    delta: int
    roots: Tuple[Fraction, ...]
    leading: Scalar
    splits: bool


def determinant_factorization(lseq: Sequence[int], delta: int) -> DetFactorization:
    """Exact determinant of the polynomial matrix with its rational
    roots; splits records whether it factors into linear terms."""
    from .exactnum import poly_det, rational_roots
    entries = generalized_a_matrix(lseq, delta)
    det = poly_det(entries)
    if det.is_zero():
        return DetFactorization(tuple(lseq), delta, (), ZERO, False)
    roots, rem = rational_roots(det)
    return DetFactorization(tuple(lseq), delta, tuple(sorted(roots)),
                            det.leading(), rem.degree() <= 0)


# ---------------------------------------------------------------------------
# operators on invariant coefficients
# ---------------------------------------------------------------------------


def dk_operator(me: ModelEngine, b: UEA, k: int,
                checked_type: Optional[Tuple[int, int]] = None) -> UEA:
    """The k-th twisted raising combination of a pure-type invariant.

    For an invariant of type (2i, j) and 0 <= k <= 2i:
    sum_l (-2)^l C(k,l) C(j+l,l)^(-1) Xdelta^(2i-l) E^(j+l) (b) E^(k-l) X4^l.
    """
    dm = degree_machine(me)
    if checked_type is None:
        comps = dm.components(b)
        if len(comps) != 1:
            raise ValueError("element is not of pure type: %s" % sorted(comps))
        (two_i, j), = comps.keys()
    else:
        two_i, j = checked_type
    if two_i % 2 != 0:
        raise ValueError("first type label must be even")
    if not (0 <= k <= two_i):
        raise ValueError("k=%d out of range [0, %d]" % (k, two_i))
    xd = me.lie_in_mixed(me.model.distinguished["Xdelta"])
    e = me.lie_in_mixed(me.model.distinguished["E"])
    x4 = me.uea_of(me.model.distinguished["X4"])
    acc: UEA = {}
    for l in range(0, k + 1):
        c = Fraction((-2) ** l * comb(k, l), comb(j + l, l))
        der = me.g.ad_power(xd, me.g.ad_power(e, b, j + l), two_i - l)
        if not der:
            continue
        tail = me.g.mul(me.g.gen("E", k - l) if k > l else me.g.one(),
                        me.g.power(x4, l))
        acc = PBWEngine.add(acc, PBWEngine.scale(sca(c), me.g.mul(der, tail)))
    return acc


def weight_of(me: ModelEngine, u: UEA) -> Optional[Coord]:
    """The compact-Cartan weight of u, or None if u is not a weight vector."""
    if not u:
        return None
    out = []
    for ci in (1, 2, 3, 4):
        h = me.lie_in_mixed(me.model.distinguished["Ht%d" % ci])
        img = me.g.ad(h, u)
        if not img:
            out.append(Fraction(0))
            continue
        ratio = None
        for m, c in u.items():
            if m in img:
                ratio = img[m] / c
                break
        if ratio is None or not ratio.is_rational():
            return None
        if PBWEngine.sub(img, PBWEngine.scale(ratio, u)):
            return None
        out.append(ratio.rational_value())
    return tuple(out)


def u_element(me: ModelEngine) -> Tuple[UEA, Scalar, Scalar]:
    """The dominant quadratic element of weight gamma4 + delta.

    Returns (U, a, b) with U = Xdelta X4 + a T23 S23 + b T24 S24 solved
    exactly so that every simple raising kills U; the mixed terms lie in
    the abelian-ideal left ideal, so U is congruent to Xdelta X4 there.
    """
    xd_x4 = me.g.mul(me.g.gen("Xdelta"), me.uea_of(me.model.distinguished["X4"]))
    t1 = me.g.mul(me.g.gen("T23"), me.g.gen("S23"))
    t2 = me.g.mul(me.g.gen("T24"), me.g.gen("S24"))
    k_idx = me.model.k_algebra.index
    raisers = [
        me.model.k_element_in_g({k_idx["D4"]: ONE, k_idx["Xdelta2"]: ONE}),
        me.model.k_element_in_g({k_idx["T34"]: ONE}),
        me.model.k_element_in_g({k_idx["Xdelta2"]: ONE}),
        me.model.k_element_in_g({k_idx["X1"]: ONE}),
    ]
    rows = []
    rhs = []
    for x in raisers:
        xm = me.lie_in_mixed(x)
        im0 = me.g.ad(xm, xd_x4)
        im1 = me.g.ad(xm, t1)
        im2 = me.g.ad(xm, t2)
        monos = sorted(set(im0) | set(im1) | set(im2))
        for mo in monos:
            rows.append([im1.get(mo, ZERO), im2.get(mo, ZERO)])
            rhs.append(-im0.get(mo, ZERO))
    sol = Matrix(rows).solve(rhs)
    if sol is None:
        raise ValueError("no dominant combination exists")
    a, b = sol
    u = PBWEngine.add(xd_x4, PBWEngine.add(PBWEngine.scale(a, t1),
                                           PBWEngine.scale(b, t2)))
    return u, a, b


# ---------------------------------------------------------------------------
# assembled congruence sums
# ---------------------------------------------------------------------------


@dataclass
class CoefficientData:
    """Type decomposition of every polynomial coefficient of b."""

    m: int
    profile: Tuple[int, ...]
    components: List[Dict[Tuple[int, int], UEA]]
    degrees: List[int]

    def skew_types(self, r: int, t: int) -> Dict[Tuple[int, int], UEA]:
        """Components of b_r on the skew diagonal labeled t."""
        return {kl: u for kl, u in self.components[r].items()
                if kl[0] + kl[1] == t}

    def p_holds(self, T: int) -> Tuple[bool, str]:
        for r in range(self.m + 1):
            bound = min(T - r, 2 * self.profile[r])
            for (p, q) in self.components[r]:
                if p + q > bound:
                    return False, ("coefficient %d has type (%d,%d) beyond "
                                   "diagonal %d" % (r, p, q, bound))
        return True, ""


def coefficient_data(me: ModelEngine, b: IwasawaElement) -> CoefficientData:
    """Exact per-coefficient type decompositions, with the degree bounds
    d(b_r) <= 2 d_r verified; raises naming any violated hypothesis."""
    dm = degree_machine(me)
    b = b.trim()
    m = max(b.degree, 0)
    profile = degree_profile(m)
    comps = []
    degrees = []
    for r in range(m + 1):
        c = b.coeff(r)
        parts = dm.components(c) if c else {}
        comps.append(parts)
        d = max((k + 2 * l for (k, l) in parts), default=0)
        degrees.append(d)
        if d > 2 * profile[r]:
            raise ValueError("degree bound violated: d(b_%d) = %d > %d"
                             % (r, d, 2 * profile[r]))
    return CoefficientData(m=m, profile=profile, components=comps,
                           degrees=degrees)


@dataclass
class AssemblyReport:
    T: int
    n_l_pairs: List[Tuple[int, int]]
    direct_residuals: Dict[Tuple[int, int], int] = field(default_factory=dict)
    typed_residuals: Dict[Tuple[int, int], int] = field(default_factory=dict)
    weight_ok: Dict[Tuple[int, int], bool] = field(default_factory=dict)
    script_e_residuals: Dict[Tuple[int, int], int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (all(v == 0 for v in self.direct_residuals.values())
                and all(v == 0 for v in self.typed_residuals.values())
                and all(self.weight_ok.values())
                and all(v == 0 for v in self.script_e_residuals.values()))


def _sigma_direct(me: ModelEngine, b: IwasawaElement, m: int, T: int,
                  l: int, n: int) -> UEA:
    """First assembled sum with raw coefficients: over the index pairs
    with n <= i <= min(m, T-l), i <= r <= min(m, i+l)."""
    xd = me.lie_in_mixed(me.model.distinguished["Xdelta"])
    e = me.lie_in_mixed(me.model.distinguished["E"])
    acc: UEA = {}
    for i in range(n, min(m, T - l) + 1):
        for r in range(i, min(m, i + l) + 1):
            c = coefficient_a(i, r, T, n, l)
            if not c:
                continue
            br = b.coeff(r)
            if not br:
                continue
            der = me.g.ad_power(xd, me.g.ad_power(e, br, l + i - r), T - l - i)
            if not der:
                continue
            tail_e = me.g.gen("E", r - i) if r > i else me.g.one()
            tail_d = me.g.gen("Xdelta", i - n) if i > n else me.g.one()
            term = me.g.mul_many(der, tail_e, tail_d)
            acc = PBWEngine.add(acc, PBWEngine.scale(c, term))
    return acc


def _sigma_typed(me: ModelEngine, data: CoefficientData, T: int,
                 l: int, n: int) -> UEA:
    """First assembled sum over the skew-diagonal type components, with
    the longer weight-aligning tails."""
    m = data.m
    xd = me.lie_in_mixed(me.model.distinguished["Xdelta"])
    e = me.lie_in_mixed(me.model.distinguished["E"])
    x4 = me.uea_of(me.model.distinguished["X4"])
    acc: UEA = {}
    for i in range(n, min(m, T - l) + 1):
        for r in range(i, min(m, i + l) + 1):
            c = coefficient_a(i, r, T, n, l)
            if not c:
                continue
            for k in range(max(0, T - r - data.profile[r]),
                           (T - r) // 2 + 1):
                comp = data.components[r].get((2 * k, T - r - 2 * k))
                if not comp:
                    continue
                der = me.g.ad_power(xd, me.g.ad_power(e, comp, l + i - r),
                                    T - l - i)
                if not der:
                    continue
                term = me.g.mul_many(
                    der,
                    me.g.gen("E", r - i) if r > i else me.g.one(),
                    me.g.gen("Xdelta", T - k) if T > k else me.g.one(),
                    me.g.power(x4, k + i - n))
                acc = PBWEngine.add(acc, PBWEngine.scale(c, term))
    return acc


def assemble_system(me: ModelEngine, b: IwasawaElement, T: int,
                    ln_pairs: Sequence[Tuple[int, int]],
                    data: Optional[CoefficientData] = None) -> AssemblyReport:
    """Assemble the congruence sums for the pairs (l, n) and reduce.

    Checks the degree bounds and the diagonal hypothesis first (raises
    naming the violated hypothesis); then, for each pair, reduces the
    raw-coefficient and type-component assemblies modulo the nilradical
    left ideal, verifies the weight of the typed assembly, and reduces
    the binomially-combined family over admissible L.
    """
    if data is None:
        data = coefficient_data(me, b)
    m = data.m
    d0 = data.profile[0]
    ok, why = data.p_holds(T)
    if not ok:
        raise ValueError("diagonal hypothesis fails at T=%d: %s" % (T, why))
    if not (m <= T <= 2 * d0):
        raise ValueError("T=%d out of range [%d, %d]" % (T, m, 2 * d0))
    g = gamma_basis()
    report = AssemblyReport(T=T, n_l_pairs=list(ln_pairs))
    for (l, n) in ln_pairs:
        s1 = _sigma_direct(me, b, m, T, l, n)
        s2 = _sigma_direct(me, b, m, T, n, l)
        lhs = PBWEngine.sub(
            PBWEngine.scale(sca((-1) ** n),
                            me.g.mul(s1, me.g.gen("E", n) if n else me.g.one())),
            PBWEngine.scale(sca((-1) ** l),
                            me.g.mul(s2, me.g.gen("E", l) if l else me.g.one())))
        report.direct_residuals[(l, n)] = len(me.reduce_mod_mplus(lhs))

        t1 = _sigma_typed(me, data, T, l, n)
        t2 = _sigma_typed(me, data, T, n, l)
        lhs_t = PBWEngine.sub(
            PBWEngine.scale(sca((-1) ** n),
                            me.g.mul(t1, me.g.gen("E", n) if n else me.g.one())),
            PBWEngine.scale(sca((-1) ** l),
                            me.g.mul(t2, me.g.gen("E", l) if l else me.g.one())))
        report.typed_residuals[(l, n)] = len(me.reduce_mod_mplus(lhs_t))
        expect = vadd(vscale(2 * T - l - n, g["gamma1"]),
                      vscale(T, vadd(g["gamma2"], g["delta"])))
        w = weight_of(me, lhs_t)
        report.weight_ok[(l, n)] = (not lhs_t) or w == expect
    # the binomially combined family over admissible L
    x4 = me.uea_of(me.model.distinguished["X4"])
    seen_n = sorted({n for (_, n) in ln_pairs})
    for n in seen_n:
        if n > min(2 * data.profile[m], T):
            continue
        for L in range(0, min(2 * m, T) - n + 1):
            acc: UEA = {}
            for l in range(0, L + 1):
                t1 = _sigma_typed(me, data, T, l, n)
                t2 = _sigma_typed(me, data, T, n, l)
                eps = PBWEngine.sub(
                    PBWEngine.scale(sca((-1) ** n),
                                    me.g.mul(t1, me.g.gen("E", n)
                                             if n else me.g.one())),
                    PBWEngine.scale(sca((-1) ** l),
                                    me.g.mul(t2, me.g.gen("E", l)
                                             if l else me.g.one())))
                if not eps:
                    continue
                tail = me.g.mul(me.g.gen("E", L - l) if L > l else me.g.one(),
                                me.g.power(x4, l + n))
                acc = PBWEngine.add(
                    acc, PBWEngine.scale(sca((-2) ** l * comb(L, l)),
                                         me.g.mul(eps, tail)))
            report.script_e_residuals[(n, L)] = len(me.reduce_mod_mplus(acc))
    return report


# ---------------------------------------------------------------------------
# degree-property bookkeeping
# ---------------------------------------------------------------------------


def has_degree_property(me: ModelEngine, b: IwasawaElement,
                        data: Optional[CoefficientData] = None) -> bool:
    """d(b_{m-j}) <= m + 2j for every coefficient."""
    dm = degree_machine(me)
    b = b.trim()
    m = b.degree
    if m < 0:
        return True
    for j in range(m + 1):
        c = b.coeff(m - j)
        if not c:
            continue
        if dm.degree(c) > m + 2 * j:
            return False
    return True


def power_needed_for_degree_property(me: ModelEngine, b: IwasawaElement) -> int:
    """Smallest n with d(b_{m-j}) <= m + 2n + 2j for all j."""
    dm = degree_machine(me)
    b = b.trim()
    m = b.degree
    need = 0
    for j in range(m + 1):
        c = b.coeff(m - j)
        if not c:
            continue
        gap = dm.degree(c) - m - 2 * j
        if gap > 0:
            need = max(need, (gap + 1) // 2)
    return need


def in_reduced_subspace(me: ModelEngine, b: IwasawaElement) -> bool:
    """Whether every even coefficient has all its skew types of degree
    beyond the coefficient index: types (2i, j) with i + j <= k vanish
    in the coefficient of index 2k."""
    data = coefficient_data(me, b)
    for r in range(0, data.m + 1, 2):
        k = r // 2
        for (p, q) in data.components[r]:
            if p // 2 + q <= k:
                return False
    return True
