"""Epidemic simulation: single runs, Monte Carlo, typed-offspring
estimation."""
import numpy as np
import pytest

from clustered_sir import (
    DegreeDistribution,
    DomainError,
    EpidemicConfig,
    InsufficientDataError,
    bernoulli_endpoints,
    build_graph,
    estimate_forward_means,
    forward_mean_matrix,
    monte_carlo,
    perron_root,
    point_mass,
    sample_degrees,
    simulate_once,
)


def make_graph(dist, n, seed):
    seq = sample_degrees(dist, n, seed)
    g, _ = build_graph(seq, seed)
    return g


class TestConfig:
    def test_rejects_bad_coverage(self):
        with pytest.raises(DomainError):
            EpidemicConfig(f_v=1.0)
        with pytest.raises(DomainError):
            EpidemicConfig(f_v=-0.1)

    def test_rejects_bad_threshold(self):
        with pytest.raises(DomainError):
            EpidemicConfig(outbreak_threshold_fraction=0.0)


class TestSimulateOnce:
    def test_deterministic(self, dist_triangles_only):
        g = make_graph(dist_triangles_only, 2000, 1)
        cfg = EpidemicConfig()
        a = simulate_once(g, point_mass(0.5), cfg, 7)
        b = simulate_once(g, point_mass(0.5), cfg, 7)
        assert a.final_size == b.final_size
        assert np.array_equal(a.infected, b.infected)
        assert a.generations == b.generations

    def test_record_consistency(self, dist_triangles_only):
        g = make_graph(dist_triangles_only, 2000, 2)
        res = simulate_once(g, point_mass(0.8), EpidemicConfig(), 3)
        # records exclude the initial case
        assert res.final_size == len(res.infected) + 1
        assert sum(res.generations) == res.final_size
        assert res.node_rank[res.initial_case] == 0
        # each recorded infection carries rank = parent rank + 1
        assert np.all(res.node_rank[res.infected] == res.ranks)
        assert np.all(res.node_rank[res.parents] == res.ranks - 1)
        # infected set is exactly the nodes with nonnegative rank
        assert int(np.sum(res.node_rank >= 0)) == res.final_size

    def test_zero_transmission(self, dist_triangles_only):
        g = make_graph(dist_triangles_only, 1000, 4)
        res = simulate_once(g, point_mass(0.0), EpidemicConfig(), 5)
        assert res.final_size == 1
        assert not res.is_major

    def test_full_transmission_reaches_component(self, dist_triangles_only):
        g = make_graph(dist_triangles_only, 1000, 4)
        res = simulate_once(g, point_mass(1.0), EpidemicConfig(), 5)
        # supercritical graph: the giant component is almost everything
        assert res.is_major
        assert res.final_size > 0.5 * g.n

    def test_vaccination_blocks_spread(self, dist_triangles_only):
        g = make_graph(dist_triangles_only, 5000, 6)
        majors = 0
        for s in range(20):
            res = simulate_once(
                g, point_mass(0.5), EpidemicConfig(f_v=0.6), s
            )
            majors += res.is_major
        assert majors == 0  # coverage far above critical: no major outbreak


class TestMonteCarlo:
    def test_summary_shapes_and_se(self, dist_triangles_only):
        summary = monte_carlo(
            dist_triangles_only, point_mass(0.5), 2000, 30, EpidemicConfig(), 0
        )
        assert summary.final_sizes.shape == (30,)
        freq = float(summary.is_major.mean())
        assert summary.outbreak_frequency == pytest.approx(freq)
        assert summary.se_outbreak_frequency == pytest.approx(
            np.sqrt(freq * (1 - freq) / 30)
        )
        fr = summary.final_sizes[summary.is_major] / 2000
        assert summary.mean_final_fraction_major == pytest.approx(float(fr.mean()))

    def test_seed_reproducibility(self, dist_triangles_only):
        kw = (dist_triangles_only, point_mass(0.5), 1500, 10, EpidemicConfig(), 42)
        a, b = monte_carlo(*kw), monte_carlo(*kw)
        assert np.array_equal(a.final_sizes, b.final_sizes)

    def test_rejects_small_population(self, dist_triangles_only):
        with pytest.raises(DomainError):
            monte_carlo(
                dist_triangles_only, point_mass(0.5), 100, 5, EpidemicConfig(), 0
            )


class TestTypedOffspring:
    def test_matches_analytic_matrix(self, dist_triangles_only):
        est = estimate_forward_means(
            dist_triangles_only, point_mass(0.5), 30000, 250, 11
        )
        expected = forward_mean_matrix(dist_triangles_only, point_mass(0.5))
        assert est.shape == (3, 3)
        assert np.max(np.abs(est - expected)) < 0.08
        assert perron_root(est) == pytest.approx(
            perron_root(expected), abs=0.08
        )

    def test_single_only_reduces_to_one_type(self):
        dist = DegreeDistribution({(3, 0): 1.0})
        est = estimate_forward_means(dist, point_mass(0.6), 20000, 120, 5)
        assert est.shape == (1, 1)
        assert est[0, 0] == pytest.approx(1.2, abs=0.08)

    def test_insufficient_data_raises(self, dist_triangles_only):
        with pytest.raises(InsufficientDataError):
            estimate_forward_means(
                dist_triangles_only, bernoulli_endpoints(0.5), 2000, 2, 0
            )
