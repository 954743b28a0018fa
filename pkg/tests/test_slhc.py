import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slhc_estimate.edges import EdgeVector, edge_index, is_metric, is_ultrametric, num_edges
from slhc_estimate.slhc import (
    SamplingBudgetError,
    fiber_box,
    in_fiber,
    is_mst,
    minimax_path_bruteforce,
    mst_energy,
    sample_fiber,
    single_linkage,
)
from slhc_estimate.trees import (
    CapacityError,
    SpanningTree,
    all_msts,
    all_spanning_trees,
    mst,
    restrict,
    tree_metric,
    ultrametric_from_tree,
)

from conftest import random_metric, random_ultrametric, random_weights


class TestSingleLinkage:
    def test_three_point_example(self):
        u = single_linkage(EdgeVector(3, [1.0, 2.0, 3.0]))
        assert u.values.tolist() == [1.0, 2.0, 2.0]

    def test_fixpoint_on_ultrametrics(self, rng):
        for _ in range(20):
            u = random_ultrametric(5, rng)
            assert np.array_equal(single_linkage(u).values, u.values)

    def test_output_is_ultrametric_at_zero_tol(self, rng):
        for _ in range(50):
            n = int(rng.integers(3, 8))
            assert is_ultrametric(single_linkage(random_weights(n, rng)), tol=0.0)

    def test_matches_oracle_on_random_weights(self, rng):
        for _ in range(100):
            n = int(rng.integers(3, 8))
            w = random_weights(n, rng, hi=100.0)
            assert np.array_equal(single_linkage(w).values,
                                  minimax_path_bruteforce(w).values)

    def test_independent_of_mst_choice(self, rng):
        # force ties so several MSTs exist, then compare path-max closures
        for _ in range(20):
            n = int(rng.integers(3, 7))
            vals = rng.choice([1.0, 2.0, 3.0], size=num_edges(n))
            w = EdgeVector(n, vals)
            closures = {tuple(ultrametric_from_tree(restrict(w, t)).values)
                        for t in all_msts(w)}
            assert len(closures) == 1
            assert closures.pop() == tuple(single_linkage(w).values)


class TestMinimaxOracle:
    def test_two_points(self):
        assert minimax_path_bruteforce(EdgeVector(2, [5.0])).values.tolist() == [5.0]

    def test_three_points_by_hand(self):
        # pair (0,1): direct 1 vs path through 2 max(2,3)=3 -> 1
        # pair (0,2): direct 2 vs max(1,3)=3 -> 2
        # pair (1,2): direct 3 vs max(1,2)=2 -> 2
        u = minimax_path_bruteforce(EdgeVector(3, [1.0, 2.0, 3.0]))
        assert u.values.tolist() == [1.0, 2.0, 2.0]

    def test_capacity_error(self):
        with pytest.raises(CapacityError):
            minimax_path_bruteforce(EdgeVector(9, np.ones(num_edges(9))))


class TestOperatorAxioms:
    def test_idempotent_contractive_monotone(self, rng):
        for _ in range(200):
            d = random_metric(5, rng)
            u = single_linkage(d)
            assert np.array_equal(single_linkage(u).values, u.values)
            assert np.all(u.values <= d.values)
            bumped = EdgeVector(5, d.values + rng.uniform(0, 5, size=10))
            assert np.all(single_linkage(bumped).values >= u.values)

    def test_dominates_every_smaller_ultrametric(self, rng):
        # the output is the largest ultrametric below the input
        for _ in range(50):
            n = int(rng.integers(3, 7))
            d = random_weights(n, rng, hi=10.0)
            minorant = EdgeVector(n, d.values * rng.uniform(0.2, 1.0, size=len(d.values)))
            u = single_linkage(minorant)
            assert np.all(u.values <= d.values)
            assert np.all(single_linkage(d).values >= u.values)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(0.0, 1e6, allow_nan=False), min_size=10,
                    max_size=10))
    def test_axioms_property(self, values):
        d = EdgeVector(5, values)
        u = single_linkage(d)
        assert np.array_equal(single_linkage(u).values, u.values)
        assert np.all(u.values <= d.values)


class TestIsMst:
    def test_true_for_kruskal_output(self, rng):
        for _ in range(20):
            w = random_weights(5, rng)
            assert is_mst(mst(w).tree, w)

    def test_three_point_counterexample(self):
        w = EdgeVector(3, [1.0, 2.0, 3.0])
        bad = SpanningTree(3, (edge_index(0, 2, 3), edge_index(1, 2, 3)))
        assert not is_mst(bad, w)

    def test_equivalent_to_enumeration(self, rng):
        for _ in range(5):
            w = random_weights(5, rng)
            minimal = all_msts(w)
            for t in all_spanning_trees(5):
                assert is_mst(t, w) == (t in minimal)

    def test_mst_of_weight_is_mst_of_its_closure(self, rng):
        for _ in range(20):
            w = random_weights(5, rng)
            u = single_linkage(w)
            for t in all_msts(w):
                assert t in all_msts(u)

    def test_characterizes_single_linkage_value(self, rng):
        # a tree is minimal exactly when its path-max closure equals the
        # single-linkage output
        for _ in range(5):
            w = random_weights(4, rng)
            u = single_linkage(w)
            for t in all_spanning_trees(4):
                closure = ultrametric_from_tree(restrict(w, t))
                assert (t in all_msts(w)) == np.array_equal(closure.values, u.values)

    def test_generic_weight_in_exactly_one_cone(self, rng):
        # distinct edge values force a unique minimal tree, so membership
        # over the enumerated trees partitions the generic weights
        for n in (3, 4, 5):
            for _ in range(10):
                w = random_weights(n, rng)
                hits = sum(is_mst(t, w) for t in all_spanning_trees(n))
                assert hits == 1

    def test_dimension_error(self):
        with pytest.raises(ValueError):
            is_mst(SpanningTree(3, (0, 1)), EdgeVector(4, np.ones(6)))


class TestFiber:
    def test_ultrametric_in_own_fiber(self, rng):
        u = random_ultrametric(5, rng)
        assert in_fiber(u, u)

    def test_upper_corner_in_fiber(self, rng):
        for _ in range(10):
            u = random_ultrametric(5, rng)
            for t in all_msts(u):
                corner = tree_metric(restrict(u, t))
                assert in_fiber(corner, u)

    def test_bumped_tree_edge_leaves_fiber(self, rng):
        # the strictly smallest value sits on a single tree edge shared by
        # every MST, so raising it changes the single-linkage output
        for _ in range(10):
            u = random_ultrametric(5, rng)
            vals = u.values.copy()
            vals[np.argmin(vals)] += 0.5
            assert not in_fiber(EdgeVector(5, vals), u)

    def test_box_characterization(self, rng):
        # membership agrees with: some MST of u carries u's values on its
        # edges and the vector sits between u and the tree metric
        for _ in range(10):
            u = random_ultrametric(4, rng)
            trees = all_msts(u)
            candidates = [sample_fiber(u, t, rng) for t in trees]
            candidates += [random_metric(4, rng) for _ in range(5)]
            for d in candidates:
                explicit = any(
                    np.array_equal(d.values[list(t.edges)], u.values[list(t.edges)])
                    and np.all(u.values <= d.values)
                    and np.all(d.values <= tree_metric(restrict(u, t)).values + 1e-9)
                    for t in trees)
                assert in_fiber(d, u) == explicit

    def test_fiber_box_requires_mst(self, rng):
        u = random_ultrametric(4, rng)
        extraneous = [t for t in all_spanning_trees(4) if t not in all_msts(u)]
        if extraneous:
            with pytest.raises(ValueError):
                fiber_box(u, extraneous[0])


class TestSampleFiber:
    def test_samples_map_back(self, rng):
        u = random_ultrametric(5, rng)
        t = mst(u).tree
        for _ in range(100):
            d = sample_fiber(u, t, rng)
            assert is_metric(d)
            assert in_fiber(d, u)

    def test_corner_cases_valid(self, rng):
        u = random_ultrametric(5, rng)
        for t in all_msts(u):
            lower, upper = fiber_box(u, t)
            assert in_fiber(MetricVectorLike(u.n, lower), u)
            assert in_fiber(MetricVectorLike(u.n, upper), u)

    def test_budget_error(self, rng):
        u = random_ultrametric(5, rng)
        with pytest.raises(SamplingBudgetError):
            sample_fiber(u, mst(u).tree, rng, max_attempts=0)

    def test_every_mst_piece_covers_u(self, rng):
        for _ in range(5):
            u = random_ultrametric(5, rng)
            for t in all_msts(u):
                d = sample_fiber(u, t, rng)
                assert np.array_equal(single_linkage(d).values, u.values)


def MetricVectorLike(n, values):
    # corner points are metrics; route through the validating type
    from slhc_estimate.edges import MetricVector
    return MetricVector(n, values)


class TestEnergy:
    def test_identity_gives_total_weight(self, rng):
        w = random_weights(5, rng)
        assert mst_energy(w, lambda v: v) == pytest.approx(
            mst(w).total_weight(), abs=1e-12)

    def test_three_point_example(self):
        assert mst_energy(EdgeVector(3, [1.0, 2.0, 3.0]), lambda v: v) == 3.0

    def test_same_value_for_every_mst(self, rng):
        for _ in range(10):
            vals = rng.choice([1.0, 2.0, 4.0], size=10)
            w = EdgeVector(5, vals)
            g = lambda v: v ** 2 + 1.0
            energies = {round(sum(g(float(w.values[e])) for e in t.edges), 9)
                        for t in all_msts(w)}
            assert len(energies) == 1
            assert mst_energy(w, g) == pytest.approx(energies.pop(), abs=1e-9)

    def test_constant_on_fibers(self, rng):
        # any two points of the same fiber have equal energy
        for _ in range(10):
            u = random_ultrametric(5, rng)
            g = lambda v: np.exp(v / 100.0)
            trees = sorted(all_msts(u), key=lambda t: t.edges)
            values = [mst_energy(sample_fiber(u, t, rng), g)
                      for t in trees for _ in range(2)]
            assert np.allclose(values, values[0], atol=1e-12)
