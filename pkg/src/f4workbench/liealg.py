"""Structure-constant Lie algebras and the exact F4 model.

The generic half of the module constructs a Chevalley basis for any
finite-type Cartan matrix: integer structure constants with signs fixed
by a deterministic extraspecial-pair convention, plus the Killing form
and Jacobi validation.  Elements are sparse dicts {basis index: Scalar}.

The F4 half instantiates the split 52-dimensional algebra in epsilon
coordinates, builds the involution fixing the centralizer of the split
torus pointwise, normalizes the distinguished vectors, applies the
rotation exp(pi/4 ad(W)) moving the split Cartan into the compact one
(computed exactly by Lagrange interpolation over Q(sqrt2)), and exposes
the named subspaces and transversality maps used everywhere downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .exactnum import Matrix, ONE, Scalar, ZERO, sca, sqrt_in_field
from .reporting import Battery
from .rootdata import (
    Coord, F4_SIMPLE, RootSystem, build_root_system, cartan_matrix_of,
    cartan_type, dot, f4_root_system, f4_satake_data, gamma_basis,
    simple_system, theta_coord, vadd, vneg, vsub, vec,
)

# A Lie algebra element: sparse mapping basis index -> nonzero Scalar.
LieElement = Dict[int, Scalar]


def el(*pairs) -> LieElement:
    return {i: c for i, c in pairs if c}


def el_add(x: LieElement, y: LieElement) -> LieElement:
    out = dict(x)
    for i, c in y.items():
        s = out.get(i, ZERO) + c
        if s:
            out[i] = s
        else:
            out.pop(i, None)
    return out


def el_sub(x: LieElement, y: LieElement) -> LieElement:
    return el_add(x, {i: -c for i, c in y.items()})


def el_scale(c: Scalar, x: LieElement) -> LieElement:
    if not c:
        return {}
    return {i: c * v for i, v in x.items()}


def el_eq(x: LieElement, y: LieElement) -> bool:
    return el_sub(x, y) == {}


class LieAlgebra:
    """Finite-dimensional Lie algebra with an exact bracket table."""

    def __init__(self, labels: Sequence[str], table: Dict[Tuple[int, int], LieElement]):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        # store only i < j; antisymmetry supplies the rest
        self.table = {k: dict(v) for k, v in table.items() if v}

    def bracket_basis(self, i: int, j: int) -> LieElement:
        if i == j:
            return {}
        if i < j:
            return self.table.get((i, j), {})
        return {k: -c for k, c in self.table.get((j, i), {}).items()}

    def bracket(self, x: LieElement, y: LieElement) -> LieElement:
        out: LieElement = {}
        for i, ci in x.items():
            for j, cj in y.items():
                t = self.bracket_basis(i, j)
                if not t:
                    continue
                c = ci * cj
                for k, ck in t.items():
                    s = out.get(k, ZERO) + c * ck
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
        return out

    def ad_matrix(self, x: LieElement) -> Matrix:
        cols = []
        for j in range(self.dim):
            img = self.bracket(x, {j: ONE})
            cols.append([img.get(i, ZERO) for i in range(self.dim)])
        return Matrix.from_columns(cols)

    def jacobi_failures(self, limit: int = 10) -> List[Tuple[int, int, int]]:
        """All basis triples violating the Jacobi identity (up to limit)."""
        bad = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                bij = self.bracket_basis(i, j)
                for k in range(j + 1, self.dim):
                    acc = self.bracket(bij, {k: ONE})
                    acc = el_add(acc, self.bracket(self.bracket_basis(j, k), {i: ONE}))
                    acc = el_add(acc, self.bracket(self.bracket_basis(k, i), {j: ONE}))
                    if acc:
                        bad.append((i, j, k))
                        if len(bad) >= limit:
                            return bad
        return bad

    def killing_form(self) -> Matrix:
        """kappa(x, y) = trace(ad x ad y), exactly."""
        n = self.dim
        # rows of ad: ad_j[k] = bracket_basis(j, k)
        ad = [[self.bracket_basis(j, k) for k in range(n)] for j in range(n)]
        out = Matrix.zero(n, n)
        for i in range(n):
            for j in range(i, n):
                acc = ZERO
                for k in range(n):
                    t = ad[j][k]
                    if not t:
                        continue
                    for l, c in t.items():
                        c2 = ad[i][l].get(k)
                        if c2:
                            acc = acc + c * c2
                out.entries[i][j] = acc
                out.entries[j][i] = acc
        return out


def killing_form(algebra: LieAlgebra) -> Matrix:
    return algebra.killing_form()


# ---------------------------------------------------------------------------
# Chevalley basis from a root system
# ---------------------------------------------------------------------------


def _coroot_coeffs(rs: RootSystem, beta: Coord) -> List[Fraction]:
    """Coefficients of beta-coroot over the simple coroots (integers)."""
    ks = rs.simple_coefficients(beta)
    bb = rs.ip(beta, beta)
    out = []
    for i, k in enumerate(ks):
        c = k * rs.ip(rs.simple[i], rs.simple[i]) / bb
        if c.denominator != 1:
            raise ValueError("non-integral coroot expansion")
        out.append(c)
    return out


class ChevalleyData:
    """Positive-pair structure constants with extraspecial-pair signs."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.roots = rs.roots
        height = {}
        for r in rs.positives:
            height[r] = sum(rs.simple_coefficients(r))
        self.pos_order = sorted(rs.positives, key=lambda r: (height[r], r))
        self.pos_rank = {r: n for n, r in enumerate(self.pos_order)}
        self.height = height
        self.extraspecial: Dict[Coord, Tuple[Coord, Coord]] = {}
        self.N: Dict[Tuple[Coord, Coord], Fraction] = {}
        self._build()

    def _down_string(self, alpha: Coord, beta: Coord) -> int:
        p = 0
        cur = vsub(beta, alpha)
        while cur in self.roots:
            p += 1
            cur = vsub(cur, alpha)
        return p

    def _build(self):
        ip = self.rs.ip
        posset = set(self.pos_order)
        for gamma in self.pos_order:
            if self.height[gamma] == 1:
                continue
            pairs = []
            for a in self.pos_order:
                if self.pos_rank[a] > self.pos_rank[gamma]:
                    break
                b = vsub(gamma, a)
                if b in posset and self.pos_rank[a] <= self.pos_rank[b]:
                    pairs.append((a, b))
            a1, b1 = min(pairs, key=lambda p: self.pos_rank[p[0]])
            self.extraspecial[gamma] = (a1, b1)
            self.N[(a1, b1)] = Fraction(self._down_string(a1, b1) + 1)
            n11 = self.N[(a1, b1)]
            for (a, b) in pairs:
                if (a, b) == (a1, b1):
                    continue
                t1 = Fraction(0)
                if vsub(a, a1) in self.roots:
                    t1 = self.n_any(vneg(a1), a) * self.n_any(vsub(a, a1), b)
                t3 = Fraction(0)
                if vsub(b, a1) in self.roots:
                    t3 = self.n_any(b, vneg(a1)) * self.n_any(vsub(b, a1), a)
                val = (t1 + t3) * ip(gamma, gamma) / (ip(b1, b1) * n11)
                expected = self._down_string(a, b) + 1
                if abs(val) != expected:
                    raise AssertionError(
                        "structure constant magnitude %s != string bound %s"
                        % (val, expected))
                self.N[(a, b)] = val

    def n_any(self, x: Coord, y: Coord) -> Fraction:
        """N(x, y) for arbitrary roots with x + y a nonzero root."""
        xpos = x in self.pos_rank
        ypos = y in self.pos_rank
        if xpos and ypos:
            if (x, y) in self.N:
                return self.N[(x, y)]
            return -self.N[(y, x)]
        if not xpos and not ypos:
            return -self.n_any(vneg(x), vneg(y))
        if not xpos:
            return -self.n_any(y, x)
        # x positive, y = -nu negative
        ip = self.rs.ip
        nu = vneg(y)
        gamma = vadd(x, y)
        if gamma in self.pos_rank:
            return -ip(gamma, gamma) / ip(x, x) * self.n_any(nu, gamma)
        mu = vneg(gamma)
        return ip(mu, mu) / ip(nu, nu) * self.n_any(mu, x)


def root_label(r: Coord) -> str:
    return "x[%s]" % ",".join(str(c) for c in r)


def chevalley_algebra(rs: RootSystem) -> LieAlgebra:
    """Chevalley basis {h_i} + {x_r}: integer constants, Jacobi-true."""
    data = ChevalleyData(rs)
    rank = rs.rank
    labels = ["h%d" % (i + 1) for i in range(rank)]
    allroots = list(data.pos_order) + [vneg(r) for r in data.pos_order]
    for r in allroots:
        labels.append(root_label(r))
    idx = {lab: i for i, lab in enumerate(labels)}
    ridx = {r: idx[root_label(r)] for r in allroots}

    table: Dict[Tuple[int, int], LieElement] = {}

    def put(i: int, j: int, val: LieElement):
        if i == j or not val:
            return
        if i < j:
            table[(i, j)] = val
        else:
            table[(j, i)] = {k: -c for k, c in val.items()}

    for i in range(rank):
        for r in allroots:
            pairing = rs.coroot_pairing(r, rs.simple[i])
            if pairing:
                put(i, ridx[r], {ridx[r]: sca(pairing)})
    done = set()
    for r in allroots:
        for s in allroots:
            if (s, r) in done or r == s:
                continue
            done.add((r, s))
            tot = vadd(r, s)
            if all(x == 0 for x in tot):
                coeffs = _coroot_coeffs(rs, r)
                put(ridx[r], ridx[s], {i: sca(c) for i, c in enumerate(coeffs) if c})
            elif tot in rs.roots:
                put(ridx[r], ridx[s], {ridx[tot]: sca(data.n_any(r, s))})
    alg = LieAlgebra(labels, table)
    alg.root_index = dict(ridx)
    alg.rank = rank
    alg.rs = rs
    alg.chevalley = data
    return alg


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------


class Subspace:
    """Span of elements of a fixed algebra, with an echelonized basis."""

    def __init__(self, dim_ambient: int, generators: Sequence[LieElement]):
        self.dim_ambient = dim_ambient
        self.generators = [dict(g) for g in generators]
        self._rows: List[List[Scalar]] = []   # reduced echelon rows
        self._pivots: List[int] = []
        for g in generators:
            self._insert(g)

    def _insert(self, element: LieElement) -> bool:
        v = [element.get(i, ZERO) for i in range(self.dim_ambient)]
        v = self._reduce(v)
        piv = next((i for i, c in enumerate(v) if c), None)
        if piv is None:
            return False
        inv = v[piv].inverse()
        v = [inv * c for c in v]
        for r, row in enumerate(self._rows):
            if row[piv]:
                f = row[piv]
                self._rows[r] = [row[j] - f * v[j] for j in range(self.dim_ambient)]
        self._rows.append(v)
        self._pivots.append(piv)
        order = sorted(range(len(self._pivots)), key=lambda r: self._pivots[r])
        self._rows = [self._rows[r] for r in order]
        self._pivots = [self._pivots[r] for r in order]
        return True

    def _reduce(self, v: List[Scalar]) -> List[Scalar]:
        for row, piv in zip(self._rows, self._pivots):
            if v[piv]:
                f = v[piv]
                v = [v[j] - f * row[j] for j in range(self.dim_ambient)]
        return v

    @property
    def dim(self) -> int:
        return len(self._rows)

    def basis(self) -> List[LieElement]:
        return [{i: c for i, c in enumerate(row) if c} for row in self._rows]

    def contains(self, element: LieElement) -> bool:
        v = [element.get(i, ZERO) for i in range(self.dim_ambient)]
        return not any(self._reduce(v))

    def coordinates(self, element: LieElement) -> Optional[List[Scalar]]:
        """Coordinates over basis() rows, or None if not a member."""
        v = [element.get(i, ZERO) for i in range(self.dim_ambient)]
        coords = []
        for row, piv in zip(self._rows, self._pivots):
            c = v[piv]
            coords.append(c)
            if c:
                v = [v[j] - c * row[j] for j in range(self.dim_ambient)]
        if any(v):
            return None
        return coords


# ---------------------------------------------------------------------------
# The F4 model
# ---------------------------------------------------------------------------


def _element_to_vec(x: LieElement, n: int) -> List[Scalar]:
    return [x.get(i, ZERO) for i in range(n)]


def _vec_to_element(v: Sequence[Scalar]) -> LieElement:
    return {i: c for i, c in enumerate(v) if c}


def _matrix_apply(m: Matrix, x: LieElement) -> LieElement:
    out: Dict[int, Scalar] = {}
    for j, c in x.items():
        for i in range(m.rows):
            e = m.entries[i][j]
            if e:
                s = out.get(i, ZERO) + e * c
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
    return out


# Lagrange interpolation of exp(pi/4 * t) on the spectrum {0, +-i, +-2i};
# the resulting degree-4 polynomial has coefficients in Q(sqrt2).
_CAYLEY_COEFFS = (
    Scalar.from_pair(1, 0),
    Scalar.from_pair(Fraction(-1, 6), Fraction(2, 3)),
    Scalar.from_pair(Fraction(15, 12), Fraction(-2, 3)),
    Scalar.from_pair(Fraction(-1, 6), Fraction(1, 6)),
    Scalar.from_pair(Fraction(1, 4), Fraction(-1, 6)),
)


def cayley_transform(algebra: LieAlgebra, xmu: LieElement,
                     theta_xmu: LieElement) -> Matrix:
    """exp(pi/4 ad(theta_xmu - xmu)) as an exact matrix.

    The generator acts semisimply with spectrum in {0, +-i, +-2i}; the
    exponential is the interpolation polynomial evaluated on ad(W).
    Raises if the spectrum condition (the minimal-polynomial identity
    A(A^2+1)(A^2+4) = 0) fails, which signals a wrong normalization.
    """
    w = el_sub(theta_xmu, xmu)
    a = algebra.ad_matrix(w)
    n = algebra.dim
    powers = [Matrix.identity(n), a]
    for _ in range(3):
        powers.append(powers[-1] * a)
    a5 = powers[4] * a
    five_a3 = powers[3].scale(sca(5))
    four_a = powers[1].scale(sca(4))
    if a5.add(five_a3).add(four_a) != Matrix.zero(n, n):
        raise ValueError("generator spectrum is not {0,+-i,+-2i}; "
                         "check the s-triple normalization")
    out = Matrix.zero(n, n)
    for c, p in zip(_CAYLEY_COEFFS, powers):
        out = out.add(p.scale(c))
    return out


K_LABELS = (
    "Xm1", "Xm2", "Xm3", "Xm4", "Xmdelta", "Xmphi1", "Xmdelta1", "Xmphi2",
    "Xmdelta2", "Xmpsi1", "Xmpsi2", "T32", "T42", "T43", "Sm23", "Sm24",
    "X1", "Xpsi1", "Xpsi2", "Xdelta1", "Xdelta2",
    "Ht1", "Ht2", "Ht3", "Ht4",
    "Xdelta", "E",
    "D2", "D3", "D4", "T23", "T24", "T34",
    "X2", "S23", "S24",
)

MPLUS_LABELS = ("D2", "D3", "D4", "T23", "T24", "T34", "X2", "S23", "S24")
Y_LABELS = ("X2", "S23", "S24")


@dataclass
class F4Model:
    """The exact split F4 model with its named vectors and subspaces."""

    algebra: LieAlgebra                    # Chevalley basis of g
    theta: Matrix                          # Cartan-type involution
    killing: Matrix                        # trace form on the Chevalley basis
    bform: Matrix                          # killing / 18: epsilon-orthonormal
    chi: Matrix                            # the rotation into the compact Cartan
    distinguished: Dict[str, LieElement]   # named vectors, Chevalley coords
    subspaces: Dict[str, Subspace]
    k_basis: List[LieElement]              # 36 vectors, order K_LABELS
    k_algebra: LieAlgebra                  # bracket table over K_LABELS
    g_basis: List[LieElement]              # k basis + Z + 15 n-vectors
    g_algebra: LieAlgebra                  # bracket table over the mixed basis
    k_weights: Dict[int, Optional[Coord]]  # moved-Cartan weight per k label
    k_t_weights: Dict[int, Coord]          # torus weight per k label
    c_value: Fraction                      # alpha1(Y)

    def b(self, x: LieElement, y: LieElement) -> Scalar:
        """The invariant form normalized so the epsilon basis is orthonormal."""
        acc = ZERO
        for i, ci in x.items():
            row = self.bform.entries[i]
            for j, cj in y.items():
                if row[j]:
                    acc = acc + ci * cj * row[j]
        return acc

    def theta_apply(self, x: LieElement) -> LieElement:
        return _matrix_apply(self.theta, x)

    def chi_apply(self, x: LieElement) -> LieElement:
        return _matrix_apply(self.chi, x)

    def k_index(self, label: str) -> int:
        return self.k_algebra.index[label]

    def k_element_in_g(self, x: LieElement) -> LieElement:
        """Convert a k-coordinate element to Chevalley coordinates."""
        out: LieElement = {}
        for i, c in x.items():
            out = el_add(out, el_scale(c, self.k_basis[i]))
        return out

    def g_element_in_k(self, x: LieElement) -> LieElement:
        coords = self.subspaces["k"].coordinates(x)
        if coords is None:
            raise ValueError("element does not lie in the fixed subalgebra")
        # subspace basis is echelonized from k_basis generators; resolve via matrix
        return self._k_solver(x)

    def _k_solver(self, x: LieElement) -> LieElement:
        sol = self._k_matrix.solve(_element_to_vec(x, self.algebra.dim))
        if sol is None:
            raise ValueError("element does not lie in the fixed subalgebra")
        return _vec_to_element(sol)


def _build_theta(alg: LieAlgebra, rs: RootSystem, c1: Scalar) -> Matrix:
    data: ChevalleyData = alg.chevalley
    rank = rs.rank
    images: Dict[int, LieElement] = {}
    # Cartan part: h_alpha -> h_(theta alpha)
    for i in range(rank):
        co = _coroot_coeffs(rs, theta_coord(rs.simple[i]))
        images[i] = {j: sca(c) for j, c in enumerate(co) if c}
    ridx = alg.root_index
    for i, alpha in enumerate(rs.simple):
        ta = theta_coord(alpha)
        if ta == alpha:
            images[ridx[alpha]] = {ridx[alpha]: ONE}
            images[ridx[vneg(alpha)]] = {ridx[vneg(alpha)]: ONE}
        else:
            images[ridx[alpha]] = {ridx[ta]: c1}
            images[ridx[vneg(alpha)]] = {ridx[vneg(ta)]: c1.inverse()}
    for gamma in data.pos_order:
        if data.height[gamma] == 1:
            continue
        a1, b1 = data.extraspecial[gamma]
        n = sca(data.N[(a1, b1)])
        ninv = n.inverse()
        img = alg.bracket(images[ridx[a1]], images[ridx[b1]])
        images[ridx[gamma]] = el_scale(ninv, img)
        imgn = alg.bracket(images[ridx[vneg(a1)]], images[ridx[vneg(b1)]])
        images[ridx[vneg(gamma)]] = el_scale(-ninv, imgn)
    cols = [_element_to_vec(images[j], alg.dim) for j in range(alg.dim)]
    return Matrix.from_columns(cols)


def _is_automorphism(alg: LieAlgebra, m: Matrix) -> Optional[str]:
    for i in range(alg.dim):
        xi = _matrix_apply(m, {i: ONE})
        for j in range(i + 1, alg.dim):
            lhs = _matrix_apply(m, alg.bracket_basis(i, j))
            rhs = alg.bracket(xi, _matrix_apply(m, {j: ONE}))
            if not el_eq(lhs, rhs):
                return "bracket image mismatch at basis pair (%s, %s)" % (
                    alg.labels[i], alg.labels[j])
    return None


def _ratio(x: LieElement, y: LieElement) -> Scalar:
    """The scalar c with x = c*y; raises if not proportional."""
    if not y:
        raise ValueError("ratio against zero")
    j = next(iter(y))
    c = x.get(j, ZERO) / y[j]
    if not el_eq(x, el_scale(c, y)):
        raise ValueError("elements are not proportional")
    return c


def _rebase_table(parent: LieAlgebra, basis: List[LieElement],
                  labels: Sequence[str]) -> LieAlgebra:
    """Bracket table of a list of closed vectors, over those vectors."""
    n = len(basis)
    bmat = Matrix.from_columns([_element_to_vec(b, parent.dim) for b in basis])
    rref_rows, pivots = bmat.transpose().rref()
    # build solver: x -> coordinates over basis, via rref of augmented system
    aug = Matrix([[bmat.entries[i][j] for j in range(n)] +
                  [ONE if k == i else ZERO for k in range(parent.dim)]
                  for i in range(parent.dim)])
    red, piv = aug.rref()
    if piv[:n] != list(range(n)):
        raise ValueError("basis vectors are dependent")

    def coords(x: LieElement) -> LieElement:
        out = {}
        for r in range(n):
            acc = ZERO
            row = red[r]
            for i, c in x.items():
                e = row[n + i]
                if e:
                    acc = acc + e * c
            if acc:
                out[r] = acc
        return out

    # consistency: rows beyond the basis must annihilate members
    def check_member(x: LieElement, what: str):
        for r in range(n, len(red)):
            acc = ZERO
            row = red[r]
            for i, c in x.items():
                e = row[n + i]
                if e:
                    acc = acc + e * c
            if acc:
                raise ValueError("%s does not lie in the span" % what)

    table: Dict[Tuple[int, int], LieElement] = {}
    for i in range(n):
        for j in range(i + 1, n):
            br = parent.bracket(basis[i], basis[j])
            if not br:
                continue
            check_member(br, "bracket of %s, %s" % (labels[i], labels[j]))
            table[(i, j)] = coords(br)
    out = LieAlgebra(labels, table)
    out.coords_in_parent = coords
    return out


def _closure(parent: LieAlgebra, generators: List[LieElement]) -> Subspace:
    span = Subspace(parent.dim, generators)
    frontier = list(span.basis())
    while frontier:
        new = []
        basis_now = span.basis()
        for x in frontier:
            for y in basis_now:
                br = parent.bracket(x, y)
                if br and not span.contains(br):
                    span._insert(br)
                    new.append(br)
        frontier = new
    return span


@lru_cache(maxsize=1)
def build_f4_model() -> F4Model:
    """Construct and normalize the whole model; raises on any failed identity."""
    rs = f4_root_system()
    alg = chevalley_algebra(rs)
    ridx = alg.root_index
    n = alg.dim

    kappa = alg.killing_form()

    # epsilon-dual torus elements: T_i in h with eps_j(T_i) = delta_ij
    # h coordinates: eps_j(h_alpha_i) = coroot pairing of eps_j with alpha_i
    pair = [[rs.coroot_pairing(_eps(j), rs.simple[i]) for i in range(4)]
            for j in range(4)]
    pm = Matrix([[sca(x) for x in row] for row in pair])
    t_elements = []
    for i in range(4):
        rhs = [ONE if j == i else ZERO for j in range(4)]
        sol = pm.solve(rhs)
        t_elements.append(_vec_to_element(sol))

    # the invariant form with orthonormal epsilon basis
    k_t1 = _form_value(kappa, t_elements[0], t_elements[0])
    if not k_t1.is_rational() or k_t1.rational_value() <= 0:
        raise ValueError("unexpected Killing normalization")
    bform = kappa.scale(k_t1.inverse())
    for i in range(4):
        for j in range(4):
            expect = ONE if i == j else ZERO
            if _form_value(bform, t_elements[i], t_elements[j]) != expect:
                raise ValueError("epsilon basis is not orthonormal under the form")

    def b_val(x, y):
        return _form_value(bform, x, y)

    # involution: try both generator signs
    theta = None
    for c1 in (ONE, -ONE):
        cand = _build_theta(alg, rs, c1)
        if cand * cand == Matrix.identity(n):
            theta = cand
            break
    if theta is None:
        raise ValueError("no involutive extension of the coordinate flip")
    err = _is_automorphism(alg, theta)
    if err:
        raise ValueError("involution is not an automorphism: " + err)

    def th(x: LieElement) -> LieElement:
        return _matrix_apply(theta, x)

    # fixed and anti-fixed subspaces
    k_span = Subspace(n, [])
    p_span = Subspace(n, [])
    idmat = Matrix.identity(n)
    sym = theta.add(idmat)
    anti = theta.add(idmat.scale(-ONE))
    for j in range(n):
        kvec = _vec_to_element([sym.entries[i][j] for i in range(n)])
        pvec = _vec_to_element([anti.entries[i][j] for i in range(n)])
        if kvec:
            k_span._insert(kvec)
        if pvec:
            p_span._insert(pvec)
    if (k_span.dim, p_span.dim) != (36, 16):
        raise ValueError("fixed-space dimensions (%d, %d) are wrong"
                         % (k_span.dim, p_span.dim))

    # X_mu normalization: <X_mu, theta X_mu> = 2 under bform
    eps1 = _eps(1 - 1)
    x_e1 = {ridx[eps1]: ONE}
    beta = b_val(x_e1, th(x_e1))
    lam = sqrt_in_field(sca(2) / beta)
    xmu = el_scale(lam, x_e1)
    alpha1 = F4_SIMPLE[0]
    x_a1 = {ridx[alpha1]: ONE}
    x_ma1 = {ridx[vneg(alpha1)]: ONE}
    t_val = _ratio(alg.bracket(xmu, th(x_a1)), x_a1)
    if t_val * t_val != ONE:
        raise ValueError("normalization scalar t with t^2 = 1 not found")
    if t_val == ONE:
        xmu = el_scale(-ONE, xmu)
    if not el_eq(alg.bracket(xmu, x_ma1), th(x_ma1)):
        raise ValueError("second normalization identity failed")
    h_mu = alg.bracket(xmu, th(xmu))
    if not el_eq(h_mu, el_scale(sca(2), t_elements[0])):
        raise ValueError("s-triple bracket is not the coroot of the split root")

    chi = cayley_transform(alg, xmu, th(xmu))

    def ch(x: LieElement) -> LieElement:
        return _matrix_apply(chi, x)

    # named vectors, normalized by their defining relations
    e_elt = el_add(x_ma1, th(x_ma1))
    g = gamma_basis()
    a_g1 = g["gamma1"]           # pre-image root of gamma1 has equal coords
    x1 = ch({ridx[a_g1]: ONE})
    xm1 = ch({ridx[vneg(a_g1)]: ONE})
    h1 = alg.bracket(x1, xm1)
    g2 = g["gamma2"]
    x2_raw = {ridx[g2]: ONE}     # chi-fixed
    sigma = _ratio(alg.bracket(x1, x2_raw), e_elt)
    x2 = el_scale(sigma.inverse(), x2_raw)
    xm2 = el_scale(sigma, {ridx[vneg(g2)]: ONE})
    h2 = alg.bracket(x2, xm2)
    x4 = alg.bracket(x1, e_elt)
    g4pre = g["gamma4"]
    rho = _ratio(x4, ch({ridx[g4pre]: ONE}))
    xdelta = el_scale(rho, ch(th({ridx[g4pre]: ONE})))
    phi_pairs = {}
    for nm, prename in (("phi1", vec(1, 0, 1, 0)), ("phi2", vec(1, 0, 0, 1))):
        plus = ch({ridx[prename]: ONE})
        minus = ch(th({ridx[prename]: ONE}))
        phi_pairs[nm] = (plus, minus)
    xphi1, xdelta1 = phi_pairs["phi1"]
    xphi2, xdelta2 = phi_pairs["phi2"]

    def dual_normalized(x_pos: LieElement, neg_root_pre: Coord) -> LieElement:
        v = ch({ridx[neg_root_pre]: ONE})
        c = b_val(x_pos, v)
        return el_scale(c.inverse(), v)

    xm4 = dual_normalized(x4, vneg(g4pre))
    xmdelta = dual_normalized(xdelta, vec(1, -1, 0, 0))
    xmphi1 = dual_normalized(xphi1, vec(-1, 0, -1, 0))
    xmdelta1 = dual_normalized(xdelta1, vec(1, 0, -1, 0))
    xmphi2 = dual_normalized(xphi2, vec(-1, 0, 0, -1))
    xmdelta2 = dual_normalized(xdelta2, vec(1, 0, 0, -1))

    g3pre = vec(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    xm3 = ch({ridx[vneg(g3pre)]: ONE})
    xpsi1 = ch({ridx[g["psi1"]]: ONE})
    xpsi2 = ch({ridx[g["psi2"]]: ONE})
    xmpsi1 = ch({ridx[vneg(g["psi1"])]: ONE})
    xmpsi2 = ch({ridx[vneg(g["psi2"])]: ONE})

    def chev_root(*coords) -> LieElement:
        return {ridx[vec(*coords)]: ONE}

    t23 = chev_root(0, 1, -1, 0)
    t24 = chev_root(0, 1, 0, -1)
    t34 = chev_root(0, 0, 1, -1)
    t32 = chev_root(0, -1, 1, 0)
    t42 = chev_root(0, -1, 0, 1)
    t43 = chev_root(0, 0, -1, 1)
    s23 = chev_root(0, 1, 1, 0)
    s24 = chev_root(0, 1, 0, 1)
    sm23 = chev_root(0, -1, -1, 0)
    sm24 = chev_root(0, -1, 0, -1)

    d2 = el_sub(x4, xdelta)
    d3 = el_sub(xphi1, xdelta1)
    d4 = el_sub(xphi2, xdelta2)

    ht1 = ch(t_elements[0])
    named = {
        "Xm1": xm1, "Xm2": xm2, "Xm3": xm3, "Xm4": xm4, "Xmdelta": xmdelta,
        "Xmphi1": xmphi1, "Xmdelta1": xmdelta1, "Xmphi2": xmphi2,
        "Xmdelta2": xmdelta2, "Xmpsi1": xmpsi1, "Xmpsi2": xmpsi2,
        "T32": t32, "T42": t42, "T43": t43, "Sm23": sm23, "Sm24": sm24,
        "X1": x1, "Xpsi1": xpsi1, "Xpsi2": xpsi2,
        "Xdelta1": xdelta1, "Xdelta2": xdelta2,
        "Ht1": ht1, "Ht2": t_elements[1], "Ht3": t_elements[2],
        "Ht4": t_elements[3],
        "Xdelta": xdelta, "E": e_elt,
        "D2": d2, "D3": d3, "D4": d4, "T23": t23, "T24": t24, "T34": t34,
        "X2": x2, "S23": s23, "S24": s24,
    }
    k_basis = [named[lab] for lab in K_LABELS]
    for lab, v in named.items():
        if not el_eq(th(v), v):
            raise ValueError("basis vector %s is not fixed by the involution" % lab)

    k_alg = _rebase_table(alg, k_basis, K_LABELS)

    # Iwasawa complement: Z spans a, n spans the positive restricted part
    _, split = f4_satake_data()
    z_elt = t_elements[0]
    n_basis = [ {ridx[a]: ONE} for a in split.p_plus ]
    g_labels = list(K_LABELS) + ["Z"] + ["n%d" % i for i in range(len(n_basis))]
    g_basis = k_basis + [z_elt] + n_basis
    g_alg = _rebase_table(alg, g_basis, g_labels)

    # named non-basis vectors
    h_a1 = {i: sca(c) for i, c in enumerate(_coroot_coeffs(rs, alpha1)) if c}
    y_elt = el_sub(h_a1, z_elt)   # torus part of the alpha1 coroot
    h_elt = el_scale(sca(Fraction(1, 2)), h2)
    ytilde = el_add(y_elt, h_elt)
    c_value = Fraction(3, 2)
    got_c = _ratio(alg.bracket(e_elt, y_elt), e_elt)
    if got_c != sca(c_value):
        raise ValueError("the scalar alpha1(Y) is %r, expected 3/2" % got_c)

    hr1 = _coroot_element(rs, ridx, vec(0, 0, 1, -1))
    hr2 = ch(_coroot_element(rs, ridx, vec(-1, 0, 0, 1)))
    h43 = ch(_coroot_element(rs, ridx, vec(0, 0, -1, 1)))
    zo = el_add(el_add(el_add(xm4, xmdelta), el_add(xmphi2, xmdelta2)),
                el_add(xm3, h43))

    distinguished = dict(named)
    distinguished.update({
        "X4": x4, "Xphi1": xphi1, "Xphi2": xphi2, "X3": e_elt,
        "Xmu": xmu, "Hmu": h_mu, "H1": h1, "H2": h2,
        "Y": y_elt, "Z": z_elt, "H": h_elt, "Ytilde": ytilde,
        "Zo": zo, "Halpha1": h_a1,
        "Hr1": hr1, "Hr2": hr2, "H43": h43,
    })

    # subspaces
    msp = Subspace(n, [ {ridx[a]: ONE} for a in split.p_minus ])
    mplus_named = Subspace(n, [named[l] for l in MPLUS_LABELS])
    if msp.dim != 9 or mplus_named.dim != 9 or not all(
            msp.contains(v) for v in mplus_named.basis()):
        raise ValueError("nilpotent part of the centralizer mismatch")
    m_all = Subspace(n, [ {ridx[a]: ONE} for a in split.p_minus ] +
                        [ {ridx[vneg(a)]: ONE} for a in split.p_minus ] +
                        t_elements[1:])
    y_sub = Subspace(n, [named[l] for l in Y_LABELS])
    kplus_names = ("X1", "X2", "E", "Xdelta", "Xdelta1", "Xdelta2", "Xpsi1",
                   "Xpsi2", "S23", "S24", "T23", "T24", "T34")
    kplus = Subspace(n, [named[nm] for nm in kplus_names] + [x4, xphi1, xphi2])
    qplus = Subspace(n, [named[nm] for nm in kplus_names if nm != "X1"]
                     + [x4, xphi1, xphi2])
    hr = Subspace(n, [hr1, hr2])
    q = Subspace(n, qplus.basis() + [hr1, hr2, t43])
    qtilde = Subspace(n, kplus.basis() + [hr1, hr2, t43, xmdelta2, xmdelta1])
    kminus_names = ("Xm1", "Xm2", "Xm3", "Xm4", "Xmdelta", "Xmphi1",
                    "Xmdelta1", "Xmphi2", "Xmdelta2", "Xmpsi1", "Xmpsi2",
                    "T32", "T42", "T43", "Sm23", "Sm24")
    hk = Subspace(n, [ht1] + t_elements[1:])
    s_sub = Subspace(n, [named[nm] for nm in kminus_names] + hk.basis()
                     + [xphi1, xphi2, t34, x1])
    a_sub = Subspace(n, [z_elt])
    n_sub = Subspace(n, n_basis)
    gt = _closure(alg, [chev_root(0, 1, 0, 0), chev_root(0, -1, 0, 0),
                        {ridx[alpha1]: ONE}, {ridx[vneg(alpha1)]: ONE},
                        chev_root(0, 0, 1, 1), chev_root(0, 0, -1, -1)])

    subspaces = {
        "k": k_span, "p": p_span, "m": m_all, "mplus": mplus_named,
        "a": a_sub, "n": n_sub, "y": y_sub, "q": q, "qplus": qplus,
        "qminus": Subspace(n, [t43]), "hr": hr, "qtilde": qtilde,
        "s": s_sub, "gtilde": gt, "hk": hk,
        "t": Subspace(n, t_elements[1:]),
    }

    model = F4Model(
        algebra=alg, theta=theta, killing=kappa, bform=bform, chi=chi,
        distinguished=distinguished, subspaces=subspaces,
        k_basis=k_basis, k_algebra=k_alg, g_basis=g_basis, g_algebra=g_alg,
        k_weights=_k_weights(), k_t_weights=_k_t_weights(), c_value=c_value,
    )
    model._k_matrix = Matrix.from_columns(
        [_element_to_vec(b, n) for b in k_basis])
    model.subspaces["mplus_perp"] = orthocomplement(model, subspaces["mplus"],
                                                    subspaces["k"])
    model.subspaces["y_perp"] = orthocomplement(model, subspaces["y"],
                                                subspaces["k"])
    return model


def _eps(i: int) -> Coord:
    return tuple(Fraction(1 if j == i else 0) for j in range(4))


def _form_value(form: Matrix, x: LieElement, y: LieElement) -> Scalar:
    acc = ZERO
    for i, ci in x.items():
        row = form.entries[i]
        for j, cj in y.items():
            if row[j]:
                acc = acc + ci * cj * row[j]
    return acc


def _coroot_element(rs: RootSystem, ridx, root: Coord) -> LieElement:
    from .rootdata import f4_root_system
    co = _coroot_coeffs(rs, root)
    return {i: sca(c) for i, c in enumerate(co) if c}


def _k_weights() -> Dict[int, Optional[Coord]]:
    g = gamma_basis()
    w = {
        "Xm1": vneg(g["gamma1"]), "Xm2": vneg(g["gamma2"]),
        "Xm3": vneg(g["gamma3"]), "Xm4": vneg(g["gamma4"]),
        "Xmdelta": vneg(g["delta"]), "Xmphi1": vneg(g["phi1"]),
        "Xmdelta1": vneg(g["delta1"]), "Xmphi2": vneg(g["phi2"]),
        "Xmdelta2": vneg(g["delta2"]), "Xmpsi1": vneg(g["psi1"]),
        "Xmpsi2": vneg(g["psi2"]),
        "T32": vec(0, -1, 1, 0), "T42": vec(0, -1, 0, 1),
        "T43": vec(0, 0, -1, 1), "Sm23": vec(0, -1, -1, 0),
        "Sm24": vec(0, -1, 0, -1),
        "X1": g["gamma1"], "Xpsi1": g["psi1"], "Xpsi2": g["psi2"],
        "Xdelta1": g["delta1"], "Xdelta2": g["delta2"],
        "Ht1": vec(0, 0, 0, 0), "Ht2": vec(0, 0, 0, 0),
        "Ht3": vec(0, 0, 0, 0), "Ht4": vec(0, 0, 0, 0),
        "Xdelta": g["delta"], "E": g["gamma3"],
        "D2": None, "D3": None, "D4": None,
        "T23": vec(0, 1, -1, 0), "T24": vec(0, 1, 0, -1),
        "T34": vec(0, 0, 1, -1),
        "X2": g["gamma2"], "S23": vec(0, 1, 1, 0), "S24": vec(0, 1, 0, 1),
    }
    return {i: w[lab] for i, lab in enumerate(K_LABELS)}


def _k_t_weights() -> Dict[int, Coord]:
    full = _k_weights()
    out = {}
    for i, lab in enumerate(K_LABELS):
        w = full[i]
        if w is None:
            w = {"D2": vec(0, 1, 0, 0), "D3": vec(0, 0, 1, 0),
                 "D4": vec(0, 0, 0, 1)}[lab]
        out[i] = (Fraction(0),) + tuple(w[1:])
    return out


def orthocomplement(model: F4Model, sub: Subspace, within: Subspace) -> Subspace:
    """Exact orthocomplement of sub inside within, for the invariant form."""
    wb = within.basis()
    gram = Matrix([[model.b(x, y) for y in wb] for x in wb])
    if gram.rank() != len(wb):
        raise ValueError("form degenerates on the ambient subspace")
    sb = sub.basis()
    rows = Matrix([[model.b(s, w) for w in wb] for s in sb])
    out = []
    for coords in rows.nullspace():
        elt: LieElement = {}
        for c, w in zip(coords, wb):
            if c:
                elt = el_add(elt, el_scale(c, w))
        out.append(elt)
    result = Subspace(model.algebra.dim, out)
    if sub.dim + result.dim != within.dim:
        raise ValueError("orthocomplement dimension mismatch")
    return result


def transversality_rank(model: F4Model, which: str) -> Tuple[int, int]:
    """Exact rank and target dimension of the transversality map.

    which = "T": domain q x (mplus)perp, target the orthocomplement of
    the abelian ideal; which = "Ttilde": domain qtilde x (mplus)perp,
    target all of the fixed subalgebra.
    """
    zo = model.distinguished["Zo"]
    if which == "T":
        dom = model.subspaces["q"]
        target = model.subspaces["y_perp"]
    elif which == "Ttilde":
        dom = model.subspaces["qtilde"]
        target = model.subspaces["k"]
    else:
        raise ValueError("unknown transversality map %r" % which)
    return _transversality_rank_at(model, dom, zo), target.dim


def _transversality_rank_at(model: F4Model, dom: Subspace,
                            z: LieElement) -> int:
    cols = []
    ndim = model.algebra.dim
    for x in dom.basis():
        cols.append(_element_to_vec(model.algebra.bracket(x, z), ndim))
    for y in model.subspaces["mplus_perp"].basis():
        cols.append(_element_to_vec(y, ndim))
    return Matrix.from_columns(cols).rank()


def transversality_rank_zero_map(model: F4Model) -> int:
    """Replacing the anchor by zero degenerates to the inclusion."""
    return _transversality_rank_at(model, model.subspaces["q"], {})


# ---------------------------------------------------------------------------
# model verification battery
# ---------------------------------------------------------------------------


def verify_model(model: F4Model = None) -> Battery:
    """Run every structural invariant of the model; exact, no tolerances."""
    if model is None:
        model = build_f4_model()
    bat = Battery("model")
    alg = model.algebra
    d = model.distinguished
    sub = model.subspaces

    bat.equal("dim g = 52", alg.dim, 52)
    bat.equal("dim k = 36", sub["k"].dim, 36)
    bat.equal("dim p = 16", sub["p"].dim, 16)
    bat.equal("dim m = 21", sub["m"].dim, 21)
    bat.equal("dim n = 15", sub["n"].dim, 15)
    bat.equal("dim a = 1", sub["a"].dim, 1)
    bat.equal("dim gtilde = 21", sub["gtilde"].dim, 21)

    bat.check("involution squares to identity",
              model.theta * model.theta == Matrix.identity(alg.dim))
    bat.check("involution is an automorphism",
              _is_automorphism(alg, model.theta) is None)
    bat.check("rotation is an automorphism",
              _is_automorphism(alg, model.chi) is None)
    bat.check("Jacobi identity on all basis triples",
              not alg.jacobi_failures(limit=1))
    bat.check("Jacobi identity on the 36-dim table",
              not model.k_algebra.jacobi_failures(limit=1))

    br = alg.bracket
    bat.check("[X1, X2] = E", el_eq(br(d["X1"], d["X2"]), d["E"]))
    bat.check("[X1, E] = X4", el_eq(br(d["X1"], d["E"]), d["X4"]))
    bat.check("[Xm1, E] = 2 X2",
              el_eq(br(d["Xm1"], d["E"]), el_scale(sca(2), d["X2"])))
    bat.check("[Xm1, X4] = 2 E",
              el_eq(br(d["Xm1"], d["X4"]), el_scale(sca(2), d["E"])))
    bat.check("[H, E] = E/2",
              el_eq(br(d["H"], d["E"]), el_scale(sca(Fraction(1, 2)), d["E"])))
    bat.check("[Xdelta, H] = 0", br(d["Xdelta"], d["H"]) == {})
    bat.check("[E, Ytilde] = E", el_eq(br(d["E"], d["Ytilde"]), d["E"]))
    bat.check("[Xdelta, Ytilde] = Xdelta",
              el_eq(br(d["Xdelta"], d["Ytilde"]), d["Xdelta"]))
    bat.check("[E, Y] = (3/2) E",
              el_eq(br(d["E"], d["Y"]), el_scale(sca(Fraction(3, 2)), d["E"])))
    bat.equal("alpha1(Y) = 3/2", model.c_value, Fraction(3, 2))

    bat.check("rotation fixes the small torus",
              all(el_eq(model.chi_apply(t), t)
                  for t in sub["t"].basis()))
    bat.check("rotation moves the split coroot onto the compact one",
              el_eq(model.chi_apply(d["Hmu"]),
                    el_add(d["Xmu"], model.theta_apply(d["Xmu"]))))
    half_sqrt2 = Scalar.from_pair(0, Fraction(1, 2))
    xma1 = {alg.root_index[vneg(F4_SIMPLE[0])]: ONE}
    bat.check("rotation scales the lowering vector onto E by sqrt2/2",
              el_eq(model.chi_apply(model.theta_apply(xma1)),
                    el_scale(half_sqrt2, d["E"])))

    bat.check("E is dominant for the centralizer nilradical",
              all(br(x, d["E"]) == {} for x in sub["mplus"].basis()))

    # difference vectors land in the nilradical of the centralizer
    bat.check("X4 - Xdelta in mplus", sub["mplus"].contains(d["D2"]))
    bat.check("Xphi1 - Xdelta1 in mplus", sub["mplus"].contains(d["D3"]))
    bat.check("Xphi2 - Xdelta2 in mplus", sub["mplus"].contains(d["D4"]))
    bat.check("pairing of X4 - Xdelta with Xm4 + Xmdelta vanishes",
              model.b(d["D2"], el_add(d["Xm4"], d["Xmdelta"])) == ZERO)
    bat.check("Xm4 + Xmdelta orthogonal to mplus",
              all(model.b(el_add(d["Xm4"], d["Xmdelta"]), v) == ZERO
                  for v in sub["mplus"].basis()))

    bat.equal("dim mplus_perp = 27", sub["mplus_perp"].dim, 27)
    bat.equal("dim y_perp = 33", sub["y_perp"].dim, 33)
    bat.check("anchor vector lies in mplus_perp",
              sub["mplus_perp"].contains(d["Zo"]))
    for nm in ("Xmdelta", "Xmdelta1", "Xmdelta2", "T32", "T42", "T43"):
        bat.check("y_perp contains %s" % nm, sub["y_perp"].contains(d[nm]))
    bat.check("y_perp contains mplus_perp",
              all(sub["y_perp"].contains(v) for v in sub["mplus_perp"].basis()))

    bat.check("[q, y] inside y",
              all(sub["y"].contains(br(x, y)) or not br(x, y)
                  for x in sub["q"].basis() for y in sub["y"].basis()))
    bat.check("y is abelian",
              all(not br(x, y) for x in sub["y"].basis()
                  for y in sub["y"].basis()))
    bat.check("gtilde stable under the involution",
              all(sub["gtilde"].contains(model.theta_apply(v))
                  for v in sub["gtilde"].basis()))

    # Cartan types
    _, split = f4_satake_data()
    bat.equal("centralizer root type is B3",
              cartan_type(simple_system(split.p_minus)), "B3")
    from .rootdata import compact_split, DEFAULT_REGULAR
    cs = compact_split(DEFAULT_REGULAR)
    bat.equal("fixed-subalgebra root type is B4", cartan_type(cs.simple_k), "B4")
    bat.equal("gtilde root type is C3", _gtilde_type(model), "C3")

    r1, t1 = transversality_rank(model, "T")
    bat.equal("transversality rank onto y_perp", (r1, t1), (33, 33))
    r2, t2 = transversality_rank(model, "Ttilde")
    bat.equal("extended transversality rank onto k", (r2, t2), (36, 36))
    bat.equal("zero anchor degenerates to the inclusion",
              transversality_rank_zero_map(model), 27)

    # invariance of the form (sampled) and automorphism property of chi
    basis_elts = [{i: ONE} for i in range(0, alg.dim, 7)]
    ok = True
    for x in basis_elts:
        for y in basis_elts:
            for z in basis_elts:
                lhs = model.b(br(x, y), z) + model.b(y, br(x, z))
                if lhs != ZERO:
                    ok = False
    bat.check("invariant form: associativity on sampled triples", ok)
    bat.check("F4 Killing determinant nonzero", bool(model.killing.det()))
    return bat


def _gtilde_type(model: F4Model) -> str:
    alg = model.algebra
    gt = model.subspaces["gtilde"]
    rs = alg.rs
    member_roots = [r for r in rs.roots
                    if gt.contains({alg.root_index[r]: ONE})]
    pos = [r for r in member_roots if r in set(rs.positives)]
    return cartan_type(simple_system(pos))
