from fractions import Fraction

import pytest

from f4workbench.exactnum import Matrix, ONE, SQRT2, Scalar, ZERO, sca
from f4workbench.liealg import (
    build_f4_model, cayley_transform, chevalley_algebra, el_add, el_eq,
    el_scale, el_sub, killing_form, orthocomplement, transversality_rank,
    transversality_rank_zero_map, verify_model,
)
from f4workbench.rootdata import build_root_system, f4_root_system, vec


@pytest.fixture(scope="session")
def model():
    return build_f4_model()


class TestChevalley:
    def test_sl2_relations(self):
        rs = build_root_system([[2]])
        a = chevalley_algebra(rs)
        h, e, f = a.index["h1"], 1, 2
        assert a.bracket_basis(h, e) == {e: sca(2)}
        assert a.bracket_basis(h, f) == {f: sca(-2)}
        assert a.bracket_basis(e, f) == {h: ONE}

    def test_f4_dim(self):
        # 48 roots + rank 4
        assert chevalley_algebra(f4_root_system()).dim == 52

    def test_b4_dim(self):
        b4 = [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -2], [0, 0, -1, 2]]
        assert chevalley_algebra(build_root_system(b4)).dim == 36

    def test_jacobi_b4(self):
        b4 = [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -2], [0, 0, -1, 2]]
        assert chevalley_algebra(build_root_system(b4)).jacobi_failures(1) == []

    def test_killing_sl2(self):
        rs = build_root_system([[2]])
        a = chevalley_algebra(rs)
        kf = killing_form(a)
        # oracle: trace of (ad h)^2 over the 3-dim adjoint is 4 + 4 = 8
        assert kf.entries[0][0] == sca(8)
        e = a.index["x[1]"]
        assert kf.entries[e][e] == ZERO  # ad-nilpotency

    def test_killing_f4_nondegenerate(self, model):
        assert model.killing.det() != ZERO


class TestModelInvariants:
    def test_battery_all_pass(self, model):
        bat = verify_model(model)
        failures = bat.failures()
        assert not failures, [f.check_id for f in failures]

    def test_dimensions(self, model):
        s = model.subspaces
        assert (s["k"].dim, s["p"].dim, s["m"].dim, s["n"].dim, s["a"].dim) \
            == (36, 16, 21, 15, 1)
        assert s["gtilde"].dim == 21

    def test_q_dimensions(self, model):
        s = model.subspaces
        assert s["qplus"].dim == 15
        assert s["q"].dim == 18
        assert s["qtilde"].dim == 21
        assert s["hr"].dim == 2

    def test_normalizations(self, model):
        d = model.distinguished
        br = model.algebra.bracket
        assert el_eq(br(d["X1"], d["X2"]), d["E"])
        assert el_eq(br(d["X1"], d["E"]), d["X4"])
        assert el_eq(br(d["Xm1"], d["E"]), el_scale(sca(2), d["X2"]))
        assert el_eq(br(d["Xm1"], d["X4"]), el_scale(sca(2), d["E"]))
        assert el_eq(br(d["H"], d["E"]),
                     el_scale(sca(Fraction(1, 2)), d["E"]))
        assert br(d["Xdelta"], d["H"]) == {}

    def test_s_triples(self, model):
        d = model.distinguished
        br = model.algebra.bracket
        assert el_eq(br(d["X1"], d["Xm1"]), d["H1"])
        assert el_eq(br(d["H1"], d["X1"]), el_scale(sca(2), d["X1"]))
        assert el_eq(br(d["X2"], d["Xm2"]), d["H2"])
        # gamma1(H2) = -1, so [H2, X1] = -X1
        assert el_eq(br(d["H2"], d["X1"]), el_scale(sca(-1), d["X1"]))

    def test_cayley_identities(self, model):
        d = model.distinguished
        assert el_eq(model.chi_apply(d["Hmu"]),
                     el_add(d["Xmu"], model.theta_apply(d["Xmu"])))
        for t in model.subspaces["t"].basis():
            assert el_eq(model.chi_apply(t), t)

    def test_cayley_wrong_normalization_rejected(self, model):
        d = model.distinguished
        bad = el_scale(sca(3), d["Xmu"])
        with pytest.raises(ValueError):
            cayley_transform(model.algebra, bad, model.theta_apply(bad))

    def test_theta_eigenspace_matches_root_classification(self, model):
        # derived cross-check of the compact/noncompact displays
        from f4workbench.rootdata import compact_split, DEFAULT_REGULAR
        cs = compact_split(DEFAULT_REGULAR)
        alg = model.algebra
        ksp = model.subspaces["k"]
        for r in cs.delta_k:
            v = model.chi_apply({alg.root_index[r]: ONE})
            assert ksp.contains(v)
        for r in cs.delta_p:
            v = model.chi_apply({alg.root_index[r]: ONE})
            assert model.subspaces["p"].contains(v)

    def test_c_value(self, model):
        assert model.c_value == Fraction(3, 2)

    def test_kappa_orthogonality_display(self, model):
        d = model.distinguished
        assert model.b(el_sub(d["X4"], d["Xdelta"]),
                       el_add(d["Xm4"], d["Xmdelta"])) == ZERO
        assert model.b(el_sub(d["Xphi1"], d["Xdelta1"]),
                       el_add(d["Xmphi1"], d["Xmdelta1"])) == ZERO
        assert model.b(el_sub(d["Xphi2"], d["Xdelta2"]),
                       el_add(d["Xmphi2"], d["Xmdelta2"])) == ZERO

    def test_pairing_normalizations(self, model):
        d = model.distinguished
        for pos, neg in (("X4", "Xm4"), ("Xdelta", "Xmdelta"),
                         ("Xphi1", "Xmphi1"), ("Xdelta1", "Xmdelta1"),
                         ("Xphi2", "Xmphi2"), ("Xdelta2", "Xmdelta2")):
            assert model.b(d[pos], d[neg]) == ONE

    def test_difference_vectors_proportional_to_split_root_vectors(self, model):
        # the bracket [Xmu, theta X_{e_i + e_1}] recovers the m-plus vector
        d = model.distinguished
        alg = model.algebra
        for pre, dname in ((vec(1, 1, 0, 0), "D2"), (vec(1, 0, 1, 0), "D3"),
                           (vec(1, 0, 0, 1), "D4")):
            x = {alg.root_index[pre]: ONE}
            br = alg.bracket(d["Xmu"], model.theta_apply(x))
            # proportional to the difference vector
            j = next(iter(br))
            c = d[dname].get(j, ZERO) / br[j]
            assert el_eq(d[dname], el_scale(c, br))


class TestTransversality:
    def test_ranks(self, model):
        assert transversality_rank(model, "T") == (33, 33)
        assert transversality_rank(model, "Ttilde") == (36, 36)

    def test_zero_anchor(self, model):
        assert transversality_rank_zero_map(model) == 27

    def test_image_lands_in_y_perp(self, model):
        zo = model.distinguished["Zo"]
        yp = model.subspaces["y_perp"]
        for x in model.subspaces["q"].basis():
            img = model.algebra.bracket(x, zo)
            assert yp.contains(img)


class TestOrthocomplement:
    def test_dims(self, model):
        s = model.subspaces
        assert s["mplus_perp"].dim == 27
        assert s["y_perp"].dim == 33

    def test_full_space_complement_trivial(self, model):
        k = model.subspaces["k"]
        out = orthocomplement(model, k, k)
        assert out.dim == 0

    def test_degenerate_restriction_rejected(self, model):
        # the form is degenerate on the span of a single nilpotent vector
        from f4workbench.liealg import Subspace
        nil = Subspace(model.algebra.dim, [model.distinguished["E"]])
        with pytest.raises(ValueError):
            orthocomplement(model, nil, nil)

    def test_y_perp_named_members(self, model):
        d = model.distinguished
        yp = model.subspaces["y_perp"]
        for nm in ("Xmdelta", "Xmdelta1", "Xmdelta2", "T32", "T42", "T43"):
            assert yp.contains(d[nm])


class TestKAlgebra:
    def test_k_table_closed_and_jacobi(self, model):
        assert model.k_algebra.dim == 36
        assert model.k_algebra.jacobi_failures(1) == []

    def test_k_brackets_match_parent(self, model):
        # sampled pairs: bracket in the 36-dim table agrees with g
        import random
        rng = random.Random(11)
        ka = model.k_algebra
        for _ in range(25):
            i = rng.randrange(36)
            j = rng.randrange(36)
            got = ka.bracket_basis(i, j)
            lhs = model.k_element_in_g(got)
            rhs = model.algebra.bracket(model.k_basis[i], model.k_basis[j])
            assert el_eq(lhs, rhs)

    def test_g_mixed_basis_rank(self, model):
        assert model.g_algebra.dim == 52
        cols = [[b.get(i, ZERO) for i in range(52)] for b in model.g_basis]
        assert Matrix.from_columns(cols).rank() == 52

    def test_theta_fixes_k_basis(self, model):
        for v in model.k_basis:
            assert el_eq(model.theta_apply(v), v)

    def test_k_weights_consistency(self, model):
        # native labels carry the weight their bracket action shows
        ka = model.k_algebra
        d = model.distinguished
        cart = [model.distinguished[nm] for nm in ("Ht1", "Ht2", "Ht3", "Ht4")]
        for idx, w in model.k_weights.items():
            if w is None:
                continue
            v = model.k_basis[idx]
            for ci, h in enumerate(cart):
                got = model.algebra.bracket(h, v)
                want = el_scale(sca(w[ci]), v)
                assert el_eq(got, want)
