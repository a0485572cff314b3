from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concavesep.exceptions import InfeasibleError, PropertyViolation
from concavesep.graphs import PartialClique, enumerate_partial_cliques
from concavesep.points import ZPoint
from concavesep.polytope import (
    ConstraintSystem,
    basis_vertices,
    blend,
    is_edge_of_R,
    linear_constraints,
    membership,
    polytope_face_rank,
    rank_full_pivot,
    satisfies_balance,
    satisfies_triangle,
    scaled_indicator,
    triangle_slack,
    vertices_of_R,
    weight_classes,
)
from concavesep.relaxation import cut_embedding

from conftest import gram_point, set_partitions

P3 = PartialClique(3, ((0, 2),))  # edges 01, 12
K3 = PartialClique(3, ())


def zp3(z01, z02, z12):
    return ZPoint.from_vector(3, [z01, z02, z12])


class TestZPoint:
    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            ZPoint([[0, 1], [0.5, 0]])

    def test_rejects_diagonal(self):
        with pytest.raises(ValueError):
            ZPoint([[1e-6, 0], [0, 0]])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            ZPoint.from_vector(2, [2.1])

    def test_clips_rounding_noise(self):
        assert ZPoint.from_vector(2, [2 + 1e-12])[0, 1] == 2.0

    def test_vector_order(self):
        z = ZPoint.from_pairs(3, {(0, 1): 1.0, (1, 2): 0.5})
        assert z.vector.tolist() == [1.0, 0.0, 0.5]
        assert z.as_pairs() == {(0, 1): 1.0, (0, 2): 0.0, (1, 2): 0.5}

    def test_immutable(self):
        z = ZPoint.zeros(3)
        with pytest.raises(ValueError):
            z.z[0, 1] = 1.0


class TestTriangle:
    def test_cut_embedding(self):
        assert satisfies_triangle(cut_embedding([0, 2], 4), p=1)

    def test_violation(self):
        assert not satisfies_triangle(zp3(2, 0, 0), p=1)

    def test_all_twos(self):
        assert satisfies_triangle(zp3(2, 2, 2), p=1)

    def test_negative_tol_rejected(self):
        with pytest.raises(ValueError):
            satisfies_triangle(zp3(0, 0, 0), tol=-1)

    @given(st.lists(st.floats(0, 2), min_size=3, max_size=3), st.sampled_from([0.5, 1.0, 2.0]))
    def test_slack_matches_loop(self, v, p):
        z = zp3(*v)
        w = z.z ** (p / 2)
        want = min(w[i, j] + w[j, k] - w[i, k] for i, j, k in product(range(3), repeat=3))
        assert triangle_slack(z.z, p) == pytest.approx(want, abs=1e-12)


class TestBalance:
    def test_examples(self):
        assert satisfies_balance(cut_embedding(range(5), 10), 0.3)
        assert not satisfies_balance(ZPoint.zeros(10), 0.3)
        assert satisfies_balance(ZPoint(2.0 * (1 - np.eye(4))), 0.25)

    def test_strict_bound(self):
        assert ConstraintSystem(10, 0.3).balance_bound == pytest.approx(21.0)
        assert ConstraintSystem(10, 0.3, strict_balance=True).balance_bound == pytest.approx(42.0)

    @pytest.mark.parametrize("c,p", [(0.0, 1), (0.6, 1), (0.3, 0), (0.3, 2.5)])
    def test_invalid_system(self, c, p):
        with pytest.raises(ValueError):
            ConstraintSystem(4, c, p)


class TestMembership:
    def test_balanced_cut(self):
        m = membership(cut_embedding([0, 1], 4), ConstraintSystem(4, 0.3))
        assert m.in_T and m.in_H and m.in_P and m.in_F

    def test_zero_point(self):
        m = membership(ZPoint.zeros(4), ConstraintSystem(4, 0.3))
        assert m.in_T and not m.in_H and not m.in_F

    def test_two_k3(self):
        m = membership(scaled_indicator(K3, 2.0), ConstraintSystem(3, 0.3))
        assert m.in_T and not m.in_P

    @settings(max_examples=200)
    @given(st.integers(2, 7), st.integers(1, 7), st.integers(0, 10**6))
    def test_P_inside_T(self, n, dim, seed):
        # membership asserts the inclusion internally; a violation raises
        z = ZPoint(gram_point(n, dim, seed))
        m = membership(z, ConstraintSystem(n, 0.3))
        assert m.in_P and m.in_T


class TestIndicatorAndBlend:
    def test_scaled_indicator(self):
        assert scaled_indicator(P3, 0.0) == ZPoint.zeros(3)
        assert scaled_indicator(PartialClique(2, ()), 2.0)[0, 1] == 2.0
        assert scaled_indicator(P3, 1.5).vector.tolist() == [1.5, 0.0, 1.5]

    def test_blend_endpoints(self):
        u, v = P3, PartialClique(3, ((1, 2),))
        assert blend(u, v, 0.0) == scaled_indicator(v, 2.0)
        assert blend(u, v, 1.0) == scaled_indicator(u, 2.0)

    def test_blend_example(self):
        u = PartialClique(3, ((0, 2),))  # 01, 12
        v = PartialClique(3, ((1, 2),))  # 01, 02
        z = blend(u, v, 0.25)
        assert (z[0, 1], z[1, 2], z[0, 2]) == (2.0, 0.5, 1.5)

    @given(set_partitions(max_n=5), set_partitions(max_n=5), st.floats(0, 1))
    def test_blend_affine(self, a, b, lam):
        n = min(a[0], b[0])
        u = PartialClique.from_blocks(n, [[x for x in blk if x < n] for blk in a[1]])
        v = PartialClique.from_blocks(n, [[x for x in blk if x < n] for blk in b[1]])
        want = lam * blend(u, v, 1.0).z + (1 - lam) * blend(u, v, 0.0).z
        assert np.allclose(blend(u, v, lam).z, want, atol=1e-15)

    @given(set_partitions(), st.floats(0, 2))
    def test_scaled_indicator_in_R(self, part, lam):
        n, blocks = part
        z = scaled_indicator(PartialClique.from_blocks(n, blocks), lam)
        a, b = linear_constraints(n)
        assert np.all(a @ z.vector <= b + 1e-12)


class TestEdgeTest:
    def test_zero_to_p3(self):
        assert is_edge_of_R(PartialClique(3, ((0, 1, 2),)), P3)

    def test_zero_to_k3(self):
        assert not is_edge_of_R(PartialClique(3, ((0, 1, 2),)), K3)

    def test_k3_to_p3(self):
        assert is_edge_of_R(K3, P3)

    def test_weight_classes(self):
        only_u, only_v = weight_classes(K3, P3)
        assert only_u.edges == ((0, 2),) and only_v.edges == ()

    def test_same_endpoint_rejected(self):
        with pytest.raises(ValueError):
            is_edge_of_R(K3, K3)

    def test_n3_agrees_with_rank_oracle(self):
        for u, v in combinations(enumerate_partial_cliques(3), 2):
            assert is_edge_of_R(u, v) == (polytope_face_rank(blend(u, v, 0.5)) == 2)

    def test_n4_counterexample(self):
        # both weight classes are single edges, yet the midpoint lies on a 2-face
        u, v = PartialClique(4, ((0, 1),)), PartialClique(4, ((2, 3),))
        assert is_edge_of_R(u, v)
        assert polytope_face_rank(blend(u, v, 0.5)) == 4

    def test_segments_from_zero_agree_n4(self):
        zero = PartialClique(4, ((0, 1, 2, 3),))
        for v in enumerate_partial_cliques(4):
            if v != zero:
                assert is_edge_of_R(zero, v) == (polytope_face_rank(blend(zero, v, 0.5)) == 5)


class TestRankOracle:
    def test_examples(self):
        assert polytope_face_rank(scaled_indicator(K3, 2.0)) == 3
        assert polytope_face_rank(ZPoint.zeros(3)) == 3
        assert polytope_face_rank(zp3(2, 2, 1)) == 2

    def test_infeasible(self):
        with pytest.raises(InfeasibleError):
            polytope_face_rank(zp3(2, 0, 0))

    @given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 10**6))
    def test_rank_matches_numpy(self, r, c, seed):
        rng = np.random.default_rng(seed)
        k = rng.integers(0, min(r, c) + 1)
        m = rng.standard_normal((r, k)) @ rng.standard_normal((k, c))
        assert rank_full_pivot(m) == np.linalg.matrix_rank(m)

    def test_constraint_count(self):
        a, b = linear_constraints(4)
        assert a.shape == (3 * 4 + 2 * 6, 6) and b.shape == (24,)


class TestVertices:
    @pytest.mark.parametrize("n,count", [(2, 2), (3, 5), (4, 15)])
    def test_vertices_of_R(self, n, count):
        assert len(vertices_of_R(n)) == count

    @pytest.mark.parametrize("n", [2, 3])
    def test_basis_enumeration_matches(self, n):
        assert {tuple(z.vector) for z in basis_vertices(n)} == {tuple(z.vector) for z in vertices_of_R(n)}

    def test_n4_has_fractional_vertices(self):
        found = {tuple(z.vector) for z in basis_vertices(4)}
        integral = {tuple(z.vector) for z in vertices_of_R(4)}
        assert integral <= found
        extra = found - integral
        assert len(extra) == 4
        assert (1.0, 1.0, 1.0, 2.0, 2.0, 2.0) in extra
        for v in extra:
            assert polytope_face_rank(ZPoint.from_vector(4, v)) == 6

    def test_zero_one_points_of_R_are_indicators(self):
        # every 0/2 point satisfying the linear inequalities is a partial-clique indicator
        a, b = linear_constraints(4)
        pts = {v for v in product((0.0, 2.0), repeat=6) if np.all(a @ np.array(v) <= b)}
        assert pts == {tuple(z.vector) for z in vertices_of_R(4)}
