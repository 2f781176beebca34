"""Configuration-model graphs with clustering.

Nodes carry single half-edges and triangle half-edge pairs.  Singles are
matched in uniformly random pairs, triangle pairs in uniformly random
triples (each triple closing a triangle).  The multigraph is then erased
to a simple graph: parity half-edges, self-loops and duplicate edges are
removed, with a report of everything discarded.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .degrees import DegreeDistribution
from .errors import DomainError

KIND_SINGLE = 0
KIND_TRIANGLE = 1


@dataclass(frozen=True)
class DegreeSequence:
    """Sampled per-node degrees: k_s[i] single half-edges and k_delta[i]
    triangle half-edge pairs at node i."""

    k_s: np.ndarray
    k_delta: np.ndarray

    def __len__(self) -> int:
        return len(self.k_s)


@dataclass(frozen=True)
class GenerationReport:
    erased_single_halfedges: int
    erased_triangle_pairs: int
    self_loops_removed: int
    multi_edges_merged: int


@dataclass(frozen=True)
class ClusteringStats:
    ordered_wedges: int
    ordered_triangles: int
    coefficient: float | None


@dataclass(frozen=True)
class CmcGraph:
    """Simple undirected graph in CSR form.

    ``neighbors[indptr[i]:indptr[i+1]]`` lists the (sorted) neighbors of
    node i; ``kinds`` labels each adjacency entry single/triangle.
    ``edges``/``edge_kinds`` hold each undirected edge once with u < v.
    ``built_triangles`` records the matched triples before erasure.
    """

    n: int
    indptr: np.ndarray
    neighbors: np.ndarray
    kinds: np.ndarray
    edges: np.ndarray
    edge_kinds: np.ndarray
    built_triangles: np.ndarray

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def triangle_thirds(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Third node of a matched triple containing each edge (u[i], v[i]),
        or -1 when no triple contains that pair."""
        t = self.built_triangles
        if len(t) == 0 or len(u) == 0:
            return np.full(len(u), -1, dtype=np.int64)
        pair_lo = np.concatenate(
            [np.minimum(t[:, 0], t[:, 1]), np.minimum(t[:, 1], t[:, 2]), np.minimum(t[:, 0], t[:, 2])]
        )
        pair_hi = np.concatenate(
            [np.maximum(t[:, 0], t[:, 1]), np.maximum(t[:, 1], t[:, 2]), np.maximum(t[:, 0], t[:, 2])]
        )
        thirds = np.concatenate([t[:, 2], t[:, 0], t[:, 1]])
        keys = pair_lo * self.n + pair_hi
        order = np.argsort(keys)
        keys, thirds = keys[order], thirds[order]
        q = np.minimum(u, v) * self.n + np.maximum(u, v)
        pos = np.searchsorted(keys, q)
        pos = np.minimum(pos, len(keys) - 1)
        out = np.where(keys[pos] == q, thirds[pos], -1)
        return out.astype(np.int64)


def sample_degrees(dist: DegreeDistribution, n: int, seed: int) -> DegreeSequence:
    """Draw n i.i.d. joint degrees from the prescribed law."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(dist.probs), size=n, p=dist.probs)
    return DegreeSequence(k_s=dist.k_s[idx], k_delta=dist.k_delta[idx])


def build_graph(seq: DegreeSequence, seed: int) -> tuple[CmcGraph, GenerationReport]:
    rng = np.random.default_rng(seed)
    n = len(seq)
    single_list = np.repeat(np.arange(n, dtype=np.int64), seq.k_s)
    triangle_list = np.repeat(np.arange(n, dtype=np.int64), seq.k_delta)

    # parity erasure before matching: uniform choices, one single half-edge
    # and/or one or two triangle half-edge pairs
    erased_single = len(single_list) % 2
    if erased_single:
        drop = rng.integers(len(single_list))
        single_list = np.delete(single_list, drop)
    erased_pairs = len(triangle_list) % 3
    if erased_pairs:
        drop = rng.choice(len(triangle_list), size=erased_pairs, replace=False)
        triangle_list = np.delete(triangle_list, drop)

    rng.shuffle(single_list)
    rng.shuffle(triangle_list)

    single_edges = single_list.reshape(-1, 2)
    triples = triangle_list.reshape(-1, 3)
    tri_edges = np.concatenate(
        [triples[:, [0, 1]], triples[:, [1, 2]], triples[:, [0, 2]]], axis=0
    )

    raw = np.concatenate([single_edges, tri_edges], axis=0)
    raw_kinds = np.concatenate(
        [
            np.zeros(len(single_edges), dtype=np.uint8),
            np.ones(len(tri_edges), dtype=np.uint8),
        ]
    )

    loops = raw[:, 0] == raw[:, 1]
    self_loops_removed = int(loops.sum())
    raw = raw[~loops]
    raw_kinds = raw_kinds[~loops]

    u = np.minimum(raw[:, 0], raw[:, 1])
    v = np.maximum(raw[:, 0], raw[:, 1])
    key = u * n + v
    # merge duplicates; a coinciding single and triangle edge stays triangle
    order = np.lexsort((raw_kinds, key))
    key_sorted = key[order]
    uniq_mask = np.empty(len(key_sorted), dtype=bool)
    if len(key_sorted):
        uniq_mask[:-1] = key_sorted[1:] != key_sorted[:-1]
        uniq_mask[-1] = True
    keep = order[uniq_mask]
    multi_edges_merged = len(key) - len(keep)
    edges = np.stack([u[keep], v[keep]], axis=1)
    edge_kinds = raw_kinds[keep]

    indptr, neighbors, kinds = _to_csr(n, edges, edge_kinds)
    graph = CmcGraph(
        n=n,
        indptr=indptr,
        neighbors=neighbors,
        kinds=kinds,
        edges=edges,
        edge_kinds=edge_kinds,
        built_triangles=triples,
    )
    report = GenerationReport(
        erased_single_halfedges=erased_single,
        erased_triangle_pairs=erased_pairs,
        self_loops_removed=self_loops_removed,
        multi_edges_merged=int(multi_edges_merged),
    )
    return graph, report


def _to_csr(n: int, edges: np.ndarray, edge_kinds: np.ndarray):
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    kind2 = np.concatenate([edge_kinds, edge_kinds])
    order = np.argsort(src * n + dst)  # sorts by source, then neighbor
    src, dst, kind2 = src[order], dst[order], kind2[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, dst, kind2


def clustering_empirical(g: CmcGraph) -> ClusteringStats:
    """Ordered wedge/triangle counts on the post-erasure simple graph."""
    d = g.degrees
    wedges = int(np.dot(d, d - 1))
    if g.n and len(g.neighbors):
        adj = sparse.csr_matrix(
            (np.ones(len(g.neighbors), dtype=np.int64), g.neighbors, g.indptr),
            shape=(g.n, g.n),
        )
        triangles = int((adj @ adj).multiply(adj).sum())
    else:
        triangles = 0
    coeff = triangles / wedges if wedges > 0 else None
    return ClusteringStats(ordered_wedges=wedges, ordered_triangles=triangles, coefficient=coeff)


def clustering_asymptotic(dist: DegreeDistribution) -> float:
    """Large-N limit of the clustering coefficient:
    2 E(Delta) / (E((2 Delta + S)^2) - E(2 Delta + S))."""
    m = dist.moments()
    total2 = 4 * m.mean_delta2 + 4 * m.mean_s_delta + m.mean_s2
    total = 2 * m.mean_delta + m.mean_s
    denom = total2 - total
    if denom <= 0:
        raise DomainError("all total degrees <= 1: clustering limit undefined")
    return 2 * m.mean_delta / denom


def write_edge_list(g: CmcGraph, path) -> None:
    """Dump one 'u v kind' line per edge, 0-indexed."""
    names = {KIND_SINGLE: "single", KIND_TRIANGLE: "triangle"}
    with open(path, "w", newline="\n") as fh:
        for (a, b), k in zip(g.edges, g.edge_kinds):
            fh.write(f"{a} {b} {names[int(k)]}\n")
