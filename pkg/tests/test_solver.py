import json
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone

from concavesep.exceptions import EnumerationLimitError, InfeasibleError
from concavesep.graphs import Graph, PartialClique, is_biclique
from concavesep.points import ZPoint
from concavesep.polytope import satisfies_triangle
from concavesep.psd import in_P_batch
from concavesep.relaxation import ProgramInstance
from concavesep.solver import (
    VertexSearchSolver,
    exact_balance_bound,
    gamma_points,
    optimize_over_vertices,
    type1_vertices,
    type2_vertices,
)

from conftest import graphs


def half(g):
    with pytest.warns(UserWarning):
        return ProgramInstance(g, c=0.5)


def by_source(cands):
    return {c.source: c for c in cands}


class TestGamma:
    def test_four_cycle_and_k4(self, k4):
        pts = by_source(gamma_points(half(k4)))
        assert pts[PartialClique(4, ((0, 2), (1, 3)))].lam == pytest.approx(1.0)
        assert pts[PartialClique(4, ())].lam == pytest.approx(2 / 3)

    def test_cap(self, k4):
        # single-edge partial-cliques would need lam* = 4 > 2
        assert all(c.source.num_edges >= 2 for c in gamma_points(half(k4)))

    def test_on_hyperplane(self, k4):
        inst = ProgramInstance(k4, 0.3)
        bound = float(exact_balance_bound(inst))
        for c in gamma_points(inst):
            assert c.point.pair_sum() == pytest.approx(bound, abs=1e-9)


class TestTypes:
    def test_type1_includes_k22_excludes_k4(self, k4):
        pts = by_source(type1_vertices(half(k4)))
        assert pts[PartialClique(4, ((0, 1), (2, 3)))].lam == pytest.approx(1.0)
        assert PartialClique(4, ()) not in pts

    def test_type2_examples(self, k4):
        sides = {c.side for c in type2_vertices(half(k4))}
        assert (0, 1) in sides and (0,) in sides and (0, 1, 2) in sides

    @pytest.mark.parametrize("n,c", [(4, 0.3), (5, 0.25), (6, 0.4), (6, 0.3)])
    def test_type1_is_biclique_filter_of_gamma(self, n, c):
        inst = ProgramInstance(Graph.complete(n), c)
        t1 = {(c.source, c.point) for c in type1_vertices(inst)}
        gam = {(c.source, c.point) for c in gamma_points(inst) if is_biclique(c.source)}
        assert t1 == gam
        assert all(in_P_batch(np.stack([p.z for _, p in t1])))

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_type2_matches_hypercube_filter(self, n):
        inst = ProgramInstance(Graph.complete(n), 0.3)
        d = n * (n - 1) // 2
        cube = np.array(list(product((0.0, 2.0), repeat=d)))
        cube = cube[cube.sum(axis=1) >= inst.system.balance_bound]
        mats = np.stack([ZPoint.from_vector(n, v).z for v in cube])
        want = {tuple(v) for v, ok in zip(cube, in_P_batch(mats)) if ok}
        got = {tuple(c.point.vector) for c in type2_vertices(inst)}
        assert got == want

    def test_type2_lambda_and_values(self, k4):
        for c in type2_vertices(ProgramInstance(k4, 0.3)):
            assert c.lam == 2.0 and set(c.point.vector) <= {0.0, 2.0}
            assert c.value == k4.cut_size(c.side)


class TestOptimize:
    def test_k4_frozen(self, k4):
        res = optimize_over_vertices(ProgramInstance(k4, 0.3))
        # star K_{1,3} at lam = 3.36/3 and K_{2,2} at lam = 3.36/4
        assert res.value == pytest.approx(3 * np.sqrt(1.12 / 2))
        assert res.window_value == pytest.approx(4 * np.sqrt(0.84 / 2))
        assert res.best.kind == "type1" and res.window_best.side == (0, 1)
        assert res.counts == {"type1": 7, "type2": 7}
        assert res.completion_checked

    def test_k4_half(self, k4):
        assert optimize_over_vertices(half(k4)).value <= 4

    def test_empty_graph(self):
        res = optimize_over_vertices(ProgramInstance(Graph.empty(5), 0.3))
        assert res.value == 0.0 and not res.completion_checked

    def test_infeasible(self):
        with pytest.warns(UserWarning):
            inst = ProgramInstance(Graph.complete(3), 0.5, strict_balance=True)
        with pytest.raises(InfeasibleError):
            optimize_over_vertices(inst)

    def test_limit(self):
        with pytest.raises(EnumerationLimitError):
            optimize_over_vertices(ProgramInstance(Graph.complete(10), 0.3))
        assert optimize_over_vertices(ProgramInstance(Graph.complete(10), 0.3), limit=10).value > 0

    @settings(max_examples=40)
    @given(graphs(min_n=3, max_n=7), st.sampled_from([0.25, 0.3]), st.sampled_from([0.5, 1.0, 2.0]))
    def test_invariants(self, g, c, p):
        inst = ProgramInstance(g, c, p)
        res = optimize_over_vertices(inst)
        vals = [x.value for x in res.candidates]
        assert vals == sorted(vals) and res.value == vals[0]
        assert res.value <= min(x.value for x in res.candidates if x.kind == "type2")
        for x in res.candidates:
            assert satisfies_triangle(x.point, p)
        gam = {x.point for x in gamma_points(inst)}
        assert {x.point for x in res.candidates if x.kind == "type1"} <= gam

    def test_deterministic(self):
        g = Graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (1, 4)])
        a = optimize_over_vertices(ProgramInstance(g, 0.3)).to_dict()
        b = optimize_over_vertices(ProgramInstance(g, 0.3)).to_dict()
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


class TestEstimator:
    def test_params_and_clone(self):
        est = VertexSearchSolver(c=0.25, limit=7)
        assert est.get_params() == {"c": 0.25, "p": 1.0, "limit": 7, "strict_balance": False}
        assert clone(est).get_params() == est.get_params()

    def test_fit_inputs(self, k4):
        a = VertexSearchSolver().fit(k4)
        b = VertexSearchSolver().fit(k4.adjacency())
        c = VertexSearchSolver().fit((4, k4.edges))
        assert a.value_ == b.value_ == c.value_
        assert a.labels_.tolist() == [1, 1, 1, 0]
        assert a.n_vertices_ == 4

    def test_fit_predict(self, k4):
        assert VertexSearchSolver().fit_predict(k4).shape == (4,)

    def test_bad_params(self, k4):
        with pytest.raises(ValueError):
            VertexSearchSolver(c=0.7).fit(k4)
        with pytest.raises(ValueError):
            VertexSearchSolver().fit(np.ones((3, 3)))
