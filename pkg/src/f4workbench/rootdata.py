"""Root systems from Cartan data and the F4 restricted-root bookkeeping.

Roots and weights are plain tuples of Fractions.  A system built from a
bare Cartan matrix lives in the coordinate space spanned by its simple
roots, with the inner product read off a symmetrization of the matrix;
the F4 system is realized concretely in the orthonormal epsilon basis
with simple roots

    a1 = (e1 - e2 - e3 - e4)/2,  a2 = e4,  a3 = e3 - e4,  a4 = e2 - e3.

The involution acts on coordinates by e1 -> -e1; the restricted-root
split P+ / P- is read off the first coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

Coord = Tuple[Fraction, ...]


def vec(*xs) -> Coord:
    return tuple(Fraction(x) for x in xs)


def vadd(a: Coord, b: Coord) -> Coord:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Coord, b: Coord) -> Coord:
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Coord) -> Coord:
    return tuple(-x for x in a)


def vscale(c, a: Coord) -> Coord:
    c = Fraction(c)
    return tuple(c * x for x in a)


def dot(a: Coord, b: Coord) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


@dataclass(frozen=True)
class RootSystem:
    """A finite root system realized in a rational coordinate space."""

    simple: Tuple[Coord, ...]
    roots: frozenset
    positives: Tuple[Coord, ...]
    cartan: Tuple[Tuple[int, ...], ...]
    ip: Callable[[Coord, Coord], Fraction]

    @property
    def rank(self) -> int:
        return len(self.simple)

    def is_root(self, a: Coord) -> bool:
        return a in self.roots

    def coroot_pairing(self, phi: Coord, alpha: Coord) -> Fraction:
        """2<phi, alpha>/<alpha, alpha>."""
        return 2 * self.ip(phi, alpha) / self.ip(alpha, alpha)

    def reflect(self, beta: Coord, alpha: Coord) -> Coord:
        return vsub(beta, vscale(self.coroot_pairing(beta, alpha), alpha))

    def height(self, beta: Coord) -> Fraction:
        """Sum of simple-root coefficients (positive for positive roots)."""
        return sum(self.simple_coefficients(beta))

    def simple_coefficients(self, beta: Coord) -> Tuple[Fraction, ...]:
        # solve beta = sum c_i alpha_i via the Gram matrix of the simples
        n = self.rank
        gram = [[self.ip(self.simple[i], self.simple[j]) for j in range(n)]
                for i in range(n)]
        rhs = [self.ip(beta, self.simple[i]) for i in range(n)]
        return tuple(_solve_rational(gram, rhs))


def _solve_rational(m: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    n = len(m)
    a = [row[:] + [rhs[i]] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [inv * x for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [a[i][j] - f * a[c][j] for j in range(n + 1)]
    return [a[i][n] for i in range(n)]


def validate_cartan(cartan: Sequence[Sequence[int]]) -> None:
    n = len(cartan)
    for i in range(n):
        if len(cartan[i]) != n:
            raise ValueError("Cartan matrix must be square")
        if cartan[i][i] != 2:
            raise ValueError("Cartan diagonal must be 2")
        for j in range(n):
            if i != j:
                if cartan[i][j] > 0:
                    raise ValueError("off-diagonal Cartan entries must be <= 0")
                if (cartan[i][j] == 0) != (cartan[j][i] == 0):
                    raise ValueError("Cartan zero pattern must be symmetric")
    # finite type iff the symmetrization is positive definite
    d = _symmetrizer(cartan)
    sym = [[Fraction(cartan[i][j]) * d[j] for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        if _minor_det(sym, k) <= 0:
            raise ValueError("Cartan matrix is not of finite type")


def _minor_det(m: List[List[Fraction]], k: int) -> Fraction:
    a = [row[:k] for row in m[:k]]
    det = Fraction(1)
    for c in range(k):
        piv = None
        for i in range(c, k):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, k):
            f = a[i][c] / a[c][c]
            a[i] = [a[i][j] - f * a[c][j] for j in range(k)]
    return det


def _symmetrizer(cartan) -> List[Fraction]:
    """d_i with d_i * a_ij = d_j * a_ji, representing <a_i,a_i>/2."""
    n = len(cartan)
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if cartan[i][j] != 0 and i != j and d[j] is None:
                    d[j] = d[i] * Fraction(cartan[j][i], cartan[i][j])
                    stack.append(j)
    return d


def build_root_system(cartan: Sequence[Sequence[int]],
                      simple_coords: Sequence[Coord] | None = None,
                      ip: Callable[[Coord, Coord], Fraction] | None = None
                      ) -> RootSystem:
    """Generate the full root system of a finite-type Cartan matrix.

    Positive roots are built by height induction on root strings; only
    the Cartan integers are used.  If simple_coords/ip are given the
    roots are realized there, otherwise in the simple-root basis with
    the symmetrized Cartan form.
    """
    cartan = [list(map(int, row)) for row in cartan]
    validate_cartan(cartan)
    n = len(cartan)
    if simple_coords is None:
        simple_coords = [tuple(Fraction(1 if j == i else 0) for j in range(n))
                         for i in range(n)]
        d = _symmetrizer(cartan)
        gram = [[Fraction(cartan[i][j]) * d[j] for j in range(n)]
                for i in range(n)]

        def ip_local(x: Coord, y: Coord) -> Fraction:
            return sum(gram[i][j] * x[i] * y[j]
                       for i in range(n) for j in range(n)
                       if x[i] != 0 and y[j] != 0)

        ip = ip_local
    else:
        simple_coords = [tuple(Fraction(x) for x in c) for c in simple_coords]
        if ip is None:
            ip = dot
        for i in range(n):
            for j in range(n):
                expect = Fraction(cartan[i][j])
                got = 2 * ip(simple_coords[i], simple_coords[j]) / ip(
                    simple_coords[j], simple_coords[j])
                if got != expect:
                    raise ValueError("simple coordinates do not match Cartan matrix")

    # positive roots with their simple-basis coefficient vectors
    coeff_of: Dict[Coord, Tuple[int, ...]] = {}
    by_height: Dict[int, List[Coord]] = {1: []}
    for i, a in enumerate(simple_coords):
        coeff_of[a] = tuple(1 if j == i else 0 for j in range(n))
        by_height[1].append(a)
    h = 1
    while by_height.get(h):
        nxt: List[Coord] = []
        for beta in by_height[h]:
            cb = coeff_of[beta]
            for i, alpha in enumerate(simple_coords):
                # p = length of the alpha-string below beta
                p = 0
                cur = vsub(beta, alpha)
                while cur in coeff_of:
                    p += 1
                    cur = vsub(cur, alpha)
                pairing = sum(cb[j] * cartan[j][i] for j in range(n))
                q = p - pairing
                if q > 0:
                    new = vadd(beta, alpha)
                    if new not in coeff_of:
                        coeff_of[new] = tuple(
                            cb[j] + (1 if j == i else 0) for j in range(n))
                        nxt.append(new)
        h += 1
        by_height[h] = nxt
    positives = tuple(sorted(coeff_of, key=lambda r: (sum(coeff_of[r]), r)))
    roots = frozenset(positives) | frozenset(vneg(r) for r in positives)
    return RootSystem(simple=tuple(simple_coords), roots=roots,
                      positives=positives,
                      cartan=tuple(tuple(row) for row in cartan), ip=ip)


def simple_system(positives: Sequence[Coord]) -> Tuple[Coord, ...]:
    """The roots in a positive set not expressible as sums of two of them."""
    pset = set(positives)
    out = []
    for a in positives:
        if not any(vsub(a, b) in pset for b in positives if b != a):
            out.append(a)
    return tuple(out)


def cartan_matrix_of(simple: Sequence[Coord],
                     ip: Callable[[Coord, Coord], Fraction] = dot):
    n = len(simple)
    m = []
    for i in range(n):
        row = []
        for j in range(n):
            v = 2 * ip(simple[i], simple[j]) / ip(simple[j], simple[j])
            if v.denominator != 1:
                raise ValueError("non-integral Cartan pairing")
            row.append(int(v))
        m.append(tuple(row))
    return tuple(m)


def cartan_type(simple: Sequence[Coord],
                ip: Callable[[Coord, Coord], Fraction] = dot) -> str:
    """Classify the Dynkin type of a simple system, e.g. "B4" or "A1xA1"."""
    n = len(simple)
    a = cartan_matrix_of(simple, ip)
    adj = {i: [j for j in range(n) if j != i and a[i][j] != 0] for i in range(n)}
    seen = [False] * n
    labels = []
    for start in range(n):
        if seen[start]:
            continue
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in adj[i]:
                if not seen[j]:
                    seen[j] = True
                    stack.append(j)
        labels.append(_classify_component(comp, a, adj, simple, ip))
    return "x".join(sorted(labels))


def _classify_component(comp, a, adj, simple, ip) -> str:
    r = len(comp)
    if r == 1:
        return "A1"
    mult = {}
    for i in comp:
        for j in adj[i]:
            mult[(i, j)] = a[i][j] * a[j][i]
    mmax = max(mult.values())
    degrees = {i: len([j for j in adj[i] if j in comp]) for i in comp}
    if mmax == 3:
        return "G2"
    if mmax == 2:
        doubles = [(i, j) for (i, j), m in mult.items() if m == 2 and i < j]
        (i, j) = doubles[0]
        if degrees[i] == 2 and degrees[j] == 2 and r == 4:
            return "F4"
        # double bond at the end of a chain: B (end node short) or C (end node long)
        end = i if degrees[i] == 1 else j
        other = j if end == i else i
        li = ip(simple[end], simple[end])
        lo = ip(simple[other], simple[other])
        if r == 2:
            return "B2"
        return ("B%d" % r) if li < lo else ("C%d" % r)
    forks = [i for i in comp if degrees[i] >= 3]
    if not forks:
        return "A%d" % r
    fork = forks[0]
    arm_lengths = sorted(_arm_length(fork, j, adj) for j in adj[fork])
    if arm_lengths[0] == 1 and arm_lengths[1] == 1:
        return "D%d" % r
    if arm_lengths[:2] == [1, 2]:
        return "E%d" % r
    raise ValueError("unrecognized diagram")


def _arm_length(fork, start, adj) -> int:
    length = 1
    prev, cur = fork, start
    while True:
        nxt = [j for j in adj[cur] if j != prev]
        if not nxt:
            return length
        if len(nxt) > 1:
            return length
        prev, cur = cur, nxt[0]
        length += 1


# ---------------------------------------------------------------------------
# F4 specifics
# ---------------------------------------------------------------------------

F4_SIMPLE = (
    vec(Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 2), Fraction(-1, 2)),  # a1
    vec(0, 0, 0, 1),                                                          # a2
    vec(0, 0, 1, -1),                                                         # a3
    vec(0, 1, -1, 0),                                                         # a4
)


@dataclass(frozen=True)
class SatakeSplit:
    theta_signs: Tuple[int, ...]          # action on epsilon coordinates
    p_plus: Tuple[Coord, ...]             # positives with nonzero restriction
    p_minus: Tuple[Coord, ...]            # positive roots of the centralizer


@dataclass(frozen=True)
class CompactSplit:
    delta_k: Tuple[Coord, ...]
    delta_p: Tuple[Coord, ...]
    positives_k: Tuple[Coord, ...]
    simple_k: Tuple[Coord, ...]
    regular: Coord


def theta_coord(a: Coord) -> Coord:
    return (-a[0],) + tuple(a[1:])


def f4_root_system() -> RootSystem:
    cartan = cartan_matrix_of(F4_SIMPLE)
    return build_root_system(cartan, simple_coords=F4_SIMPLE)


def f4_satake_data() -> Tuple[RootSystem, SatakeSplit]:
    rs = f4_root_system()
    p_plus = tuple(a for a in rs.positives if a[0] != 0)
    p_minus = tuple(a for a in rs.positives if a[0] == 0)
    return rs, SatakeSplit(theta_signs=(-1, 1, 1, 1),
                           p_plus=p_plus, p_minus=p_minus)


def is_compact_root(a: Coord) -> bool:
    """Compactness of a root in the moved-Cartan coordinates.

    Integral roots +-e_i +- e_j are compact and +-e_i are not; among the
    half-integral roots the compact ones carry an even number of minus
    signs.
    """
    nz = [x for x in a if x != 0]
    if all(abs(x) == 1 for x in nz):
        return len(nz) == 2
    minus = sum(1 for x in a if x < 0)
    return minus % 2 == 0


def compact_split(regular: Coord) -> CompactSplit:
    """Split the moved-Cartan roots by compactness and pick positives.

    The regular vector must vanish in the first coordinate, make every
    positive root of the centralizer positive, and avoid the kernel of
    every compact root.
    """
    regular = tuple(Fraction(x) for x in regular)
    if regular[0] != 0:
        raise ValueError("regular vector must lie in the small Cartan (first coord 0)")
    rs, split = f4_satake_data()
    for a in split.p_minus:
        if dot(a, regular) <= 0:
            raise ValueError("regular vector must be dominant for the centralizer")
    delta_k = tuple(a for a in rs.roots if is_compact_root(a))
    delta_p = tuple(a for a in rs.roots if not is_compact_root(a))
    for a in delta_k:
        if dot(a, regular) == 0:
            raise ValueError("vector %r is not regular: orthogonal to %r"
                             % (regular, a))
    positives_k = tuple(a for a in delta_k if dot(a, regular) > 0)
    simple_k = simple_system(positives_k)
    return CompactSplit(delta_k=delta_k, delta_p=delta_p,
                        positives_k=positives_k, simple_k=simple_k,
                        regular=regular)


DEFAULT_REGULAR = vec(0, 4, 2, 1)


def restricted_negative_set(regular: Coord) -> Tuple[Coord, ...]:
    """Roots restricting to the simple restricted root but negative on
    the regular vector."""
    rs, split = f4_satake_data()
    lam0 = Fraction(1, 2)  # first coordinate of the simple root in P+
    return tuple(a for a in split.p_plus
                 if a[0] == lam0 and dot(a, regular) < 0)


def is_compatible(regular: Coord) -> bool:
    """Every root in the negative set, other than the simple one itself,
    stays a root after subtracting the simple root of P+."""
    rs, _ = f4_satake_data()
    a1 = F4_SIMPLE[0]
    for a in restricted_negative_set(regular):
        if a == a1:
            continue
        if vsub(a, a1) not in rs.roots:
            return False
    return True


def gamma_basis() -> Dict[str, Coord]:
    """The distinguished weights in the moved-Cartan coordinates."""
    g1 = vec(Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 2))
    g2 = vec(0, 0, 1, 1)
    out = {
        "gamma1": g1,
        "gamma2": g2,
        "gamma3": vadd(g1, g2),
        "gamma4": vadd(vadd(g1, g1), g2),
        "delta": vec(-1, 1, 0, 0),
        "phi1": vec(1, 0, 1, 0),
        "delta1": vec(-1, 0, 1, 0),
        "phi2": vec(1, 0, 0, 1),
        "delta2": vec(-1, 0, 0, 1),
        "psi1": vec(Fraction(-1, 2), Fraction(1, 2), Fraction(-1, 2), Fraction(1, 2)),
        "psi2": vec(Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2)),
    }
    return out


def dump_f4() -> dict:
    """JSON-friendly dump of the F4 root data."""
    rs, split = f4_satake_data()
    cs = compact_split(DEFAULT_REGULAR)

    def ser(roots):
        return [[str(x) for x in r] for r in roots]

    return {
        "simple": ser(rs.simple),
        "positives": ser(rs.positives),
        "cartan": [list(r) for r in rs.cartan],
        "p_plus": ser(split.p_plus),
        "p_minus": ser(split.p_minus),
        "delta_k": ser(sorted(cs.delta_k)),
        "delta_p": ser(sorted(cs.delta_p)),
        "positives_k": ser(cs.positives_k),
        "simple_k": ser(cs.simple_k),
        "simple_k_type": cartan_type(cs.simple_k),
        "p_minus_type": cartan_type(simple_system(split.p_minus)),
    }
