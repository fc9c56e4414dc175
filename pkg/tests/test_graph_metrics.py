"""Snapshot-graph metrics against hand values and naive BFS oracles."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knowgrow.graph_metrics import (
    SnapshotGraph,
    avg_shortest_path,
    clustering_coefficient,
    degree_entropy,
    density,
    effective_diameter,
    entropy_reference_curve,
    lognormal_fit,
    mean_degree,
    normalized_structural_entropy,
    powerlaw_fit,
)

from conftest import random_digraph
from _oracles import all_pairs_stats, sample_discrete_powerlaw


def graph(edges, n=None):
    return SnapshotGraph.from_edges(edges, n=n)


K3 = graph([(i, j) for i in range(3) for j in range(3) if i != j])
CYCLE3 = graph([(0, 1), (1, 2), (2, 0)])
PATH5 = graph([(0, 1), (1, 2), (2, 3), (3, 4)])
STAR = graph([(0, i) for i in range(1, 11)], n=11)


class TestConstruction:
    def test_dedup_and_self_loops(self):
        g = graph([(0, 1), (0, 1), (1, 1), (1, 2)], n=3)
        assert g.arc_count == 2
        assert g.duplicate_count == 1
        assert g.self_loop_count == 1

    def test_endpoint_validation(self):
        with pytest.raises(ValueError, match="endpoint"):
            graph([(0, 5)], n=3)

    def test_empty_graph(self):
        g = graph([], n=4)
        assert g.arc_count == 0
        assert effective_diameter(g, sources=4) == 0
        assert avg_shortest_path(g, sources=4) == 0.0


class TestDensityAndDegree:
    def test_complete_digraph(self):
        assert density(K3) == pytest.approx(1.0)

    def test_directed_cycle(self):
        assert density(CYCLE3) == pytest.approx(0.5)
        assert mean_degree(CYCLE3) == pytest.approx(1.0)

    def test_star_mean_degree(self):
        assert mean_degree(STAR) == pytest.approx(10.0 / 11.0)

    def test_ba_graph_density_scale(self, ba_large):
        # symmetric arcs double the directed density relative to m/n
        from knowgrow import ba

        params = ba.BAParams(n=1000, m=3, seed=5)
        g = ba.generate(params)
        undirected_density = (g.arc_count / 2) / (g.n * (g.n - 1))
        assert undirected_density == pytest.approx(params.m / params.n, rel=0.1)
        assert density(g) == pytest.approx(2 * undirected_density, rel=1e-12)

    def test_identity_mean_degree_vs_density(self, rng):
        for _ in range(5):
            edges = random_digraph(rng, 40, 200)
            g = graph(edges, n=40)
            assert mean_degree(g) == pytest.approx(density(g) * (g.n - 1), rel=1e-12)

    def test_density_needs_two_nodes(self):
        with pytest.raises(ValueError):
            density(graph([], n=1))


class TestEntropy:
    def test_regular_graph_zero(self):
        assert degree_entropy(CYCLE3) == pytest.approx(0.0)
        assert normalized_structural_entropy(CYCLE3) == pytest.approx(0.0)

    def test_two_level_histogram(self):
        g = graph([(0, 1), (1, 2), (2, 3)], n=4)  # total degrees 1,2,2,1
        assert degree_entropy(g) == pytest.approx(math.log(2))

    def test_all_distinct_out_degrees_normalize_to_one(self):
        n = 6
        g = graph([(i, j) for i in range(n) for j in range(i)], n=n)
        assert normalized_structural_entropy(g, "out") == pytest.approx(1.0)

    def test_entropy_nonnegative_and_normalized_in_unit_interval(self, rng):
        for _ in range(10):
            g = graph(random_digraph(rng, 30, 120), n=30)
            for direction in ("in", "out", "total"):
                h = degree_entropy(g, direction)
                assert h >= 0.0
                assert 0.0 <= normalized_structural_entropy(g, direction) <= 1.0

    def test_ba_entropy_band_and_stability(self):
        from knowgrow import ba

        values = {}
        for n in (1000, 10_000, 100_000):
            g = ba.generate(ba.BAParams(n=n, m=3, seed=42))
            values[n] = degree_entropy(g, "total")
        assert 1.5 <= values[10_000] <= 3.5
        center = values[10_000]
        assert all(abs(v - center) / center <= 0.15 for v in values.values())

    def test_reference_curve_hand_values(self):
        # at N = e^2 the bracket collapses to (4 - 4 + 2) = 2
        assert entropy_reference_curve(math.e**2, 2.0, 2.0, 3.0) == pytest.approx(
            (2.0 / 4.0) * 3.0 * 2.0
        )
        assert entropy_reference_curve(math.e, 1.0, 1.0, 1.0) == pytest.approx(1.0)
        ns = [10, 100, 1000, 10000]
        vals = [entropy_reference_curve(n, 1.0, 1.0, 1.0) for n in ns]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_reference_curve_validation(self):
        with pytest.raises(ValueError):
            entropy_reference_curve(1, 1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            entropy_reference_curve(10, 1.0, 0.0, 1.0)

    def test_direction_validation(self):
        with pytest.raises(ValueError, match="direction"):
            degree_entropy(CYCLE3, "sideways")


class TestDistances:
    def test_directed_path_effective_diameter(self):
        # 10 reachable pairs with distances 1,1,1,1,2,2,2,3,3,4
        assert effective_diameter(PATH5, 0.9, sources=5) == 3
        assert effective_diameter(PATH5, 1.0, sources=5) == 4

    def test_complete_digraph(self):
        assert effective_diameter(K3, sources=3) == 1

    def test_two_node_round_trip(self):
        g = graph([(0, 1), (1, 0)])
        assert avg_shortest_path(g, sources=2) == pytest.approx(1.0)

    def test_directed_path_of_three(self):
        g = graph([(0, 1), (1, 2)], n=3)
        assert avg_shortest_path(g, sources=3) == pytest.approx((1 + 1 + 2) / 3)

    def test_quantile_validation(self):
        with pytest.raises(ValueError):
            effective_diameter(PATH5, 0.0)
        with pytest.raises(ValueError):
            effective_diameter(PATH5, 1.1)
        with pytest.raises(ValueError):
            effective_diameter(PATH5, 0.9, sources=0)

    def test_exhaustive_matches_all_pairs_oracle(self, rng):
        for trial in range(20):
            n = int(rng.integers(20, 200))
            edges = random_digraph(rng, n, int(rng.integers(n, 6 * n)))
            g = graph(edges, n=n)
            oracle_diam, oracle_avg, _ = all_pairs_stats(n, [tuple(e) for e in edges])
            assert effective_diameter(g, 1.0, sources=n) == oracle_diam
            assert avg_shortest_path(g, sources=n) == pytest.approx(oracle_avg)

    def test_sampling_is_deterministic_and_subset_consistent(self, rng):
        g = graph(random_digraph(rng, 150, 900), n=150)
        a = avg_shortest_path(g, sources=20, seed=7)
        b = avg_shortest_path(g, sources=20, seed=7)
        assert a == b
        full = avg_shortest_path(g, sources=150)
        assert full == avg_shortest_path(g, sources=10_000)  # sources >= n: exhaustive


class TestClustering:
    def test_triangle(self):
        assert clustering_coefficient(CYCLE3) == pytest.approx(1.0)

    def test_star(self):
        assert clustering_coefficient(STAR) == pytest.approx(0.0)

    def test_needs_three_nodes(self):
        with pytest.raises(ValueError):
            clustering_coefficient(graph([(0, 1)], n=2))

    def test_ba_graph_near_reference(self):
        from knowgrow import ba

        g = ba.generate(ba.BAParams(n=10_000, m=3, seed=11))
        ref = math.log(10_000) ** 2 / 10_000
        c = clustering_coefficient(g)
        assert ref / 5 <= c <= ref * 5


class TestRelabelingInvariance:
    @given(st.integers(min_value=0, max_value=1_000_000))
    @settings(max_examples=20, deadline=None)
    def test_metrics_invariant_under_permutation(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(10, 60))
        edges = random_digraph(rng, n, int(rng.integers(n, 5 * n)))
        perm = rng.permutation(n)
        g1 = graph(edges, n=n)
        g2 = graph(np.column_stack([perm[edges[:, 0]], perm[edges[:, 1]]]), n=n)
        assert density(g1) == pytest.approx(density(g2))
        assert mean_degree(g1) == pytest.approx(mean_degree(g2))
        for direction in ("in", "out", "total"):
            assert degree_entropy(g1, direction) == pytest.approx(degree_entropy(g2, direction))
        assert effective_diameter(g1, 1.0, sources=n) == effective_diameter(g2, 1.0, sources=n)
        assert avg_shortest_path(g1, sources=n) == pytest.approx(avg_shortest_path(g2, sources=n))
        if n >= 3:
            assert clustering_coefficient(g1) == pytest.approx(clustering_coefficient(g2))


class TestPowerlawFit:
    def test_recovers_cubic_law_exponent(self):
        samples = sample_discrete_powerlaw(3.0, kmin=5, size=100_000, seed=31)
        res = powerlaw_fit(samples, kmin=5)
        assert res.exponent == pytest.approx(3.0, abs=0.1)

    def test_auto_kmin_on_shifted_tail(self):
        # clean k^-3 tail above 5, contaminated below: auto kmin should move up
        tail = sample_discrete_powerlaw(3.0, kmin=5, size=50_000, seed=32)
        head = np.full(20_000, 2)
        res = powerlaw_fit(np.concatenate([head, tail]))
        assert res.kmin >= 3
        assert res.exponent == pytest.approx(3.0, abs=0.15)

    def test_degenerate_tail_rejected(self):
        with pytest.raises(ValueError):
            powerlaw_fit(np.full(1000, 7), kmin=None)
        with pytest.raises(ValueError):
            powerlaw_fit(np.full(1000, 7), kmin=7)

    def test_insufficient_tail_rejected(self):
        with pytest.raises(ValueError, match="fewer than"):
            powerlaw_fit(np.arange(1, 40), kmin=1)


class TestLognormalFit:
    def test_constant_samples(self):
        res = lognormal_fit(np.array([math.e, math.e, math.e]))
        assert res.mu == pytest.approx(1.0)
        assert res.sigma == pytest.approx(0.0)

    def test_recovers_seven_one(self):
        rng = np.random.default_rng(8)
        samples = rng.lognormal(mean=7.0, sigma=1.0, size=100_000)
        res = lognormal_fit(samples)
        assert res.mu == pytest.approx(7.0, rel=0.02)
        assert res.sigma == pytest.approx(1.0, rel=0.05)

    def test_uniform_scores_worse_than_true_lognormal(self):
        rng = np.random.default_rng(9)
        n = 20_000
        ln_ks = lognormal_fit(rng.lognormal(3.0, 0.8, size=n)).ks_distance
        uni_ks = lognormal_fit(rng.uniform(1.0, 100.0, size=n)).ks_distance
        assert uni_ks > ln_ks

    def test_validation(self):
        with pytest.raises(ValueError, match="positive"):
            lognormal_fit(np.array([1.0, -2.0, 3.0]))
        with pytest.raises(ValueError):
            lognormal_fit(np.array([1.0, 2.0]))
