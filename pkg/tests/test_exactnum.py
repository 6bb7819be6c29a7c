from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from f4workbench.exactnum import (
    HALF, ONE, SQRT2, TWO, ZERO, Matrix, PolyScalar, Scalar, exact_rank,
    poly_det, poly_det_cofactor, rational_roots, sca, scalar_arith,
    sqrt_in_field,
)


def S(a, b=0):
    return Scalar.from_pair(Fraction(a), Fraction(b))


scalars = st.builds(
    S,
    st.fractions(min_value=-50, max_value=50, max_denominator=12),
    st.fractions(min_value=-50, max_value=50, max_denominator=12),
)


class TestScalar:
    def test_norm_form(self):
        assert (ONE + SQRT2) * (ONE - SQRT2) == S(-1)

    def test_sqrt2_squares_to_two(self):
        assert SQRT2 * SQRT2 == TWO

    def test_division_by_conjugate(self):
        # 1/(1+sqrt2) = -1+sqrt2; oracle: multiply back
        inv = ONE / (ONE + SQRT2)
        assert inv == S(-1, 1)
        assert inv * (ONE + SQRT2) == ONE

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            scalar_arith(ONE, ZERO, "/")

    def test_components_reduced(self):
        x = Scalar(2, 4, 6)
        assert (x.p, x.q, x.r) == (1, 2, 3)
        assert x.a == Fraction(1, 3) and x.b == Fraction(2, 3)

    def test_serialization_roundtrip(self):
        for x in [ZERO, ONE, HALF, S(-3, 2), S(Fraction(5, 6), Fraction(-7, 4))]:
            assert Scalar.parse(x.to_string()) == x

    def test_sign(self):
        assert S(1, -1).sign() == -1   # 1 - sqrt2 < 0
        assert S(-1, 1).sign() == 1
        assert S(3, -2).sign() == 1    # 3 - 2 sqrt2 > 0
        assert ZERO.sign() == 0

    def test_pow(self):
        assert (ONE + SQRT2) ** 3 == S(7, 5)
        assert (ONE + SQRT2) ** -1 == S(-1, 1)

    def test_sqrt_in_field(self):
        assert sqrt_in_field(S(Fraction(9, 4))) == S(Fraction(3, 2))
        assert sqrt_in_field(TWO) == SQRT2
        assert sqrt_in_field(S(8)) == S(0, 2)
        with pytest.raises(ValueError):
            sqrt_in_field(S(3))

    @given(scalars, scalars, scalars)
    @settings(max_examples=60, deadline=None)
    def test_field_laws(self, x, y, z):
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + y == y + x and x * y == y * x
        if y:
            assert (x / y) * y == x

    @given(scalars)
    @settings(max_examples=40, deadline=None)
    def test_inverse_law(self, x):
        if x:
            assert x * x.inverse() == ONE


class TestMatrix:
    def test_identity_rank(self):
        assert exact_rank(Matrix.identity(3)) == 3

    def test_zero_rank(self):
        assert exact_rank(Matrix.zero(2, 5)) == 0

    def test_proportional_rows(self):
        m = Matrix([[ONE, SQRT2], [TWO, TWO * SQRT2]])
        assert exact_rank(m) == 1

    def test_rank_nullity(self):
        rows = [
            [S(1), S(2), S(0, 1), S(1)],
            [S(0), S(1), S(1), S(0, -1)],
            [S(1), S(3), S(1, 1), S(1, -1)],  # row0 + row1
        ]
        m = Matrix(rows)
        ker = m.nullspace()
        assert m.rank() + len(ker) == m.cols
        for v in ker:
            assert all(not e for e in m.apply(v))

    def test_det_vs_cofactor_small(self):
        import random
        rng = random.Random(7)
        for n in range(1, 5):
            ent = [[S(rng.randint(-4, 4), rng.randint(-1, 1)) for _ in range(n)]
                   for _ in range(n)]
            m = Matrix(ent)
            poly_entries = [[PolyScalar([e]) for e in row] for row in ent]
            oracle = poly_det_cofactor(poly_entries)
            expected = oracle.coeffs[0] if oracle.coeffs else ZERO
            assert m.det() == expected

    def test_solve(self):
        m = Matrix([[ONE, SQRT2], [SQRT2, ONE]])
        rhs = [S(1), S(0)]
        x = m.solve(rhs)
        assert m.apply(x) == rhs

    def test_json_roundtrip(self):
        m = Matrix([[ONE, HALF], [SQRT2, S(-2, 3)]])
        assert Matrix.from_json(m.to_json()) == m


class TestPolyScalar:
    def test_det_diag(self):
        s = PolyScalar.variable()
        z = PolyScalar([])
        assert poly_det([[s, z], [z, s]]) == s * s

    def test_det_1x1(self):
        assert poly_det([[PolyScalar.constant(1)]]) == PolyScalar.constant(1)

    def test_det_matches_cofactor(self):
        import random
        rng = random.Random(3)
        for n in range(1, 5):
            ent = [[PolyScalar([S(rng.randint(-3, 3)) for _ in range(3)])
                    for _ in range(n)] for _ in range(n)]
            assert poly_det(ent) == poly_det_cofactor(ent)

    def test_exact_div(self):
        s = PolyScalar.variable()
        p = (s + PolyScalar.constant(2)) * (s - PolyScalar.constant(3))
        assert p.exact_div(s + PolyScalar.constant(2)) == s - PolyScalar.constant(3)
        with pytest.raises(ValueError):
            (s * s + PolyScalar.constant(1)).exact_div(s + PolyScalar.constant(1))

    def test_rational_roots(self):
        s = PolyScalar.variable()
        p = (s - PolyScalar.constant(Fraction(1, 2))) * (s + PolyScalar.constant(4)) * s
        roots, rem = rational_roots(p)
        assert sorted(roots) == [Fraction(-4), Fraction(0), Fraction(1, 2)]
        assert rem.degree() == 0

    def test_rational_roots_nonsplit(self):
        s = PolyScalar.variable()
        p = s * s + PolyScalar.constant(1)
        roots, rem = rational_roots(p)
        assert roots == [] and rem.degree() == 2

    def test_evaluate(self):
        p = PolyScalar([S(1), S(0), S(2)])  # 1 + 2 s^2
        assert p.evaluate(SQRT2) == S(5)
