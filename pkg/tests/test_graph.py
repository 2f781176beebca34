"""Graph generation: matching, repairs, clustering."""
import numpy as np
import pytest

from clustered_sir import (
    DegreeDistribution,
    DegreeSequence,
    build_graph,
    clustering_asymptotic,
    clustering_empirical,
    sample_degrees,
    write_edge_list,
)
from clustered_sir.graph import KIND_SINGLE, KIND_TRIANGLE


def small_graph(dist, n=2000, seed=42):
    seq = sample_degrees(dist, n, seed)
    return build_graph(seq, seed)


class TestDegreeSampling:
    def test_marginals(self, dist_mostly_single):
        seq = sample_degrees(dist_mostly_single, 50000, 0)
        frac = float(np.mean((seq.k_s == 4) & (seq.k_delta == 0)))
        assert frac == pytest.approx(0.95, abs=0.01)

    def test_deterministic(self, dist_triangles_only):
        a = sample_degrees(dist_triangles_only, 1000, 5)
        b = sample_degrees(dist_triangles_only, 1000, 5)
        assert np.array_equal(a.k_s, b.k_s) and np.array_equal(a.k_delta, b.k_delta)


class TestConstruction:
    def test_simple_graph_invariants(self, dist_mostly_triangle):
        g, _ = small_graph(dist_mostly_triangle)
        u, v = g.edges[:, 0], g.edges[:, 1]
        assert np.all(u < v)  # no self-loops, canonical orientation
        keys = u * g.n + v
        assert len(np.unique(keys)) == len(keys)  # no multi-edges
        # CSR is symmetric: each undirected edge appears twice
        assert g.indptr[-1] == 2 * len(g.edges)
        counts = np.bincount(np.concatenate([u, v]), minlength=g.n)
        assert np.array_equal(counts, g.indptr[1:] - g.indptr[:-1])

    def test_parity_repair(self):
        # odd total of single half-edges and non-multiple-of-3 triangle pairs
        seq = DegreeSequence(
            k_s=np.array([1, 1, 1], dtype=np.int64),
            k_delta=np.array([1, 1, 2], dtype=np.int64),
        )
        g, rep = build_graph(seq, 0)
        assert rep.erased_single_halfedges == 1
        assert rep.erased_triangle_pairs == 1
        assert g.indptr[-1] == 2 * len(g.edges)

    def test_degrees_preserved_up_to_repairs(self, dist_triangles_only):
        g, rep = small_graph(dist_triangles_only, n=3000, seed=7)
        seq = sample_degrees(dist_triangles_only, 3000, 7)
        intended = int(np.sum(seq.k_s + 2 * seq.k_delta))
        realized = 2 * len(g.edges)
        lost = intended - realized
        # bounded loss: parity erasure plus loops/merges, each small
        assert 0 <= lost <= 2 * (
            rep.erased_single_halfedges
            + 2 * rep.erased_triangle_pairs
            + 2 * rep.self_loops_removed
            + 2 * rep.multi_edges_merged
        ) + 4

    def test_edge_kinds_partition(self, dist_triangles_only):
        g, _ = small_graph(dist_triangles_only)
        assert set(np.unique(g.edge_kinds)) <= {KIND_SINGLE, KIND_TRIANGLE}
        n_tri = int(np.sum(g.edge_kinds == KIND_TRIANGLE))
        # each node has one triangle pair: about n triangle edges total
        assert n_tri == pytest.approx(g.n, rel=0.05)

    def test_deterministic_build(self, dist_mostly_single):
        g1, _ = small_graph(dist_mostly_single, seed=9)
        g2, _ = small_graph(dist_mostly_single, seed=9)
        assert np.array_equal(g1.edges, g2.edges)
        assert np.array_equal(g1.edge_kinds, g2.edge_kinds)

    def test_triangle_thirds(self, dist_triangles_only):
        g, _ = small_graph(dist_triangles_only, n=500, seed=3)
        t = g.built_triangles
        thirds = g.triangle_thirds(t[:, 0], t[:, 1])
        assert np.array_equal(thirds, t[:, 2])
        # a single-kind edge that is in no triple maps to -1
        single_edges = g.edges[g.edge_kinds == KIND_SINGLE]
        kinds = g.triangle_thirds(single_edges[:, 0], single_edges[:, 1])
        assert np.all((kinds == -1) | (kinds >= 0))


class TestClustering:
    def test_asymptotic_reference_values(
        self, dist_triangles_only, dist_mostly_single, dist_mostly_triangle
    ):
        assert clustering_asymptotic(dist_triangles_only) == pytest.approx(1 / 6)
        assert clustering_asymptotic(dist_mostly_single) == pytest.approx(1 / 120)
        assert clustering_asymptotic(dist_mostly_triangle) == pytest.approx(0.325)

    def test_empirical_tracks_asymptotic(self, dist_triangles_only):
        g, _ = small_graph(dist_triangles_only, n=20000, seed=1)
        stats = clustering_empirical(g)
        assert stats.coefficient == pytest.approx(1 / 6, abs=0.02)
        assert stats.ordered_triangles % 6 == 0

    def test_empirical_counts_consistent(self, dist_mostly_triangle):
        g, _ = small_graph(dist_mostly_triangle, n=5000, seed=2)
        stats = clustering_empirical(g)
        deg = g.indptr[1:] - g.indptr[:-1]
        assert stats.ordered_wedges == int(np.sum(deg * (deg - 1)))
        assert stats.coefficient == pytest.approx(
            stats.ordered_triangles / stats.ordered_wedges
        )


class TestEdgeList:
    def test_write_edge_list(self, tmp_path, dist_triangles_only):
        g, _ = small_graph(dist_triangles_only, n=200, seed=0)
        path = tmp_path / "edges.tsv"
        write_edge_list(g, path)
        lines = path.read_text().splitlines()
        assert len(lines) == len(g.edges)
        u, v, kind = lines[0].split()
        assert int(u) < int(v) and kind in {"single", "triangle"}
