import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concavesep.exceptions import ConvergenceError, PropertyViolation
from concavesep.graphs import Graph, PartialClique, enumerate_partial_cliques, is_biclique
from concavesep.points import ZPoint
from concavesep.polytope import scaled_indicator
from concavesep.psd import (
    PMOneMatrix,
    bad_triple_witness,
    biclique_gram,
    cube_edge_in_P,
    cube_edge_membership,
    eig_min,
    in_P_batch,
    is_in_P,
    is_psd_pm1,
    jacobi_eigenvalues,
    partial_clique_psd_threshold,
    sos_witness,
)
from concavesep.relaxation import cut_embedding

from conftest import gram_point

ALL_NEG3 = PMOneMatrix(2 * np.eye(3, dtype=int) - 1)


def sym(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    return (a + a.T) / 2


class TestJacobi:
    def test_identity(self):
        assert eig_min(np.eye(3)) == pytest.approx(1.0)

    def test_two_k3(self):
        assert eig_min(1.0 - scaled_indicator(PartialClique(3, ()), 2.0).z) == pytest.approx(-1.0, abs=1e-12)

    def test_all_ones(self):
        assert eig_min(np.ones((3, 3))) == pytest.approx(0.0, abs=1e-12)

    @settings(max_examples=100)
    @given(st.integers(1, 8), st.integers(0, 10**6))
    def test_matches_lapack(self, n, seed):
        a = sym(n, seed)
        scale = 1 + np.abs(a).max()
        assert np.allclose(jacobi_eigenvalues(a), np.linalg.eigvalsh(a), atol=1e-10 * scale * n)

    def test_batched(self):
        stack = np.stack([sym(5, s) for s in range(20)])
        assert np.allclose(jacobi_eigenvalues(stack), np.linalg.eigvalsh(stack), atol=1e-10)

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            eig_min(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_sweep_budget(self):
        with pytest.raises(ConvergenceError):
            jacobi_eigenvalues(sym(6, 0), max_sweeps=1)


class TestPM1:
    def test_all_ones(self):
        a = PMOneMatrix(np.ones((3, 3), dtype=int))
        assert is_psd_pm1(a)
        assert sos_witness(a).tolist() == [1, 1, 1]

    def test_2x2(self):
        a = PMOneMatrix([[1, -1], [-1, 1]])
        assert is_psd_pm1(a)
        assert sos_witness(a).tolist() == [1, -1]

    def test_all_negative(self):
        assert not is_psd_pm1(ALL_NEG3)
        assert eig_min(ALL_NEG3.a.astype(float)) == pytest.approx(-1.0)
        w = bad_triple_witness(ALL_NEG3)
        assert w.indices == (0, 1, 2) and w.x.tolist() == [1, 1, 1] and w.value == -3

    def test_mixed_triple(self):
        a = PMOneMatrix([[1, 1, -1], [1, 1, 1], [-1, 1, 1]])
        w = bad_triple_witness(a)
        assert w.indices == (0, 1, 2) and w.x.tolist() == [1, -1, 1] and w.value == -3

    def test_four_cycle(self):
        a = PMOneMatrix.from_graph(Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]))
        assert sos_witness(a).tolist() == [1, -1, 1, -1]
        assert bad_triple_witness(a) is None

    def test_negative_diagonal(self):
        a = PMOneMatrix([[-1, 1], [1, 1]])
        assert not is_psd_pm1(a)
        w = bad_triple_witness(a)
        assert w.indices == (0,) and w.value == -1

    @pytest.mark.parametrize("bad", [[[1, 0], [0, 1]], [[1, 1], [-1, 1]], [[1, 2], [2, 1]]])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            PMOneMatrix(bad)

    @given(st.integers(1, 7).flatmap(
        lambda n: st.lists(st.sampled_from([1, -1]), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2)
        .map(lambda v: (n, v))))
    def test_characterization(self, data):
        n, v = data
        a = np.ones((n, n), dtype=int)
        iu = np.triu_indices(n, 1)
        a[iu] = v
        a.T[iu] = v
        m = PMOneMatrix(a)
        assert is_psd_pm1(m) == (eig_min(a.astype(float)) >= -1e-8)
        b, w = sos_witness(m), bad_triple_witness(m)
        assert (b is None) != (w is None)
        if b is not None:
            assert np.array_equal(np.outer(b, b), a)
        else:
            assert m.quadratic_form(w.x) == -3


class TestP:
    def test_examples(self):
        assert is_in_P(cut_embedding([0, 2], 4))
        assert not is_in_P(scaled_indicator(PartialClique(3, ()), 2.0))
        assert is_in_P(ZPoint.zeros(3))

    @given(st.integers(2, 6), st.integers(1, 6), st.integers(0, 10**6))
    def test_gram_points(self, n, dim, seed):
        assert is_in_P(ZPoint(gram_point(n, dim, seed)))

    def test_batch(self):
        stack = np.stack([cut_embedding([0], 3).z, scaled_indicator(PartialClique(3, ()), 2.0).z])
        assert in_P_batch(stack).tolist() == [True, False]


class TestBicliqueGram:
    def test_lambda_zero(self):
        u = biclique_gram(Graph(2, [(0, 1)]), 0.0)
        assert np.allclose(u[0], u[1])

    def test_lambda_two(self):
        u = biclique_gram(Graph(2, [(0, 1)]), 2.0)
        assert np.allclose(u[0], -u[1])

    def test_orthogonal(self):
        u = biclique_gram(Graph(2, [(0, 1)]), 1.0)
        assert abs(u[0] @ u[1]) < 1e-15

    def test_not_bipartite(self):
        with pytest.raises(ValueError):
            biclique_gram(Graph.complete(3), 1.0)

    @given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))),
           st.floats(0, 2))
    def test_reproduces_indicator(self, nk, lam):
        n, k = nk
        b = PartialClique.cut(n, range(k))
        u = biclique_gram(b, lam)
        assert np.allclose(u @ u.T, 1.0 - scaled_indicator(b, lam).z, atol=1e-12)
        assert len(np.unique(np.round(u, 12), axis=0)) <= 2


class TestThreshold:
    def test_biclique(self):
        assert partial_clique_psd_threshold(PartialClique(3, ((0, 2),))) == pytest.approx(2.0, abs=1e-6)

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_complete(self, n):
        assert partial_clique_psd_threshold(PartialClique(n, ())) == pytest.approx(n / (n - 1), abs=1e-6)

    def test_three_blocks(self):
        # K4 minus one edge is tripartite, so its threshold sits strictly below 2
        b = PartialClique(4, ((0, 1),))
        lam = partial_clique_psd_threshold(b)
        assert eig_min(1.0 - lam * b.graph().adjacency()) == pytest.approx(0.0, abs=1e-7)
        assert not is_biclique(b) and lam < 2

    def test_bicliques_up_to_5(self):
        for n in range(2, 6):
            for b in enumerate_partial_cliques(n):
                if b.num_edges and is_biclique(b):
                    assert partial_clique_psd_threshold(b) == 2.0


class TestCubeEdge:
    def test_n2_edge(self):
        assert cube_edge_in_P(ZPoint.zeros(2), (0, 1))

    def test_claim_fails_with_fixed_twos(self):
        z = ZPoint.from_vector(3, [2, 2, 0])
        assert cube_edge_membership(z, (1, 2)) == (True, False, False)
        with pytest.raises(PropertyViolation) as exc:
            cube_edge_in_P(z, (1, 2))
        assert exc.value.evidence == (True, False, False)

    def test_claim_fails_from_zero(self):
        # z_01 = 1 with z_02 = z_12 = 0 breaks the square-root triangle inequality, hence P
        assert cube_edge_membership(ZPoint.zeros(3), (0, 1)) == (True, False, False)
        with pytest.raises(PropertyViolation):
            cube_edge_in_P(ZPoint.zeros(3), (0, 1))

    def test_requires_cube_endpoint(self):
        with pytest.raises(ValueError):
            cube_edge_in_P(ZPoint.from_vector(3, [1, 2, 0]), (1, 2))
