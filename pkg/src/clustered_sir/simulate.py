"""Percolation-style SIR simulation on generated graphs.

Each node draws its transmission weight once and uses it for all outgoing
edges, which realizes the within-node dependence of transmissions.  A
breadth-first sweep over the realized open digraph yields the final
infected set and the rank (generation) of every infected node, so final
outcomes are exact despite ignoring real-time dynamics.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .branching import _Model
from .degrees import DegreeDistribution
from .errors import DomainError, InsufficientDataError
from .graph import KIND_TRIANGLE, CmcGraph, build_graph, sample_degrees
from .transmission import TransmissionLaw


@dataclass(frozen=True)
class EpidemicConfig:
    f_v: float = 0.0
    outbreak_threshold_fraction: float = 0.05

    def __post_init__(self):
        if not 0.0 <= self.f_v < 1.0:
            raise DomainError(f"f_v must lie in [0, 1), got {self.f_v}")
        if not 0.0 < self.outbreak_threshold_fraction < 1.0:
            raise DomainError("outbreak threshold fraction must lie in (0, 1)")


@dataclass(frozen=True)
class EpidemicResult:
    final_size: int
    generations: list[int]
    is_major: bool
    # per-infection records aligned with each other, initial case excluded:
    infected: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    parents: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    ranks: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    via_triangle: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=bool))
    initial_case: int = -1
    node_rank: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))


@dataclass(frozen=True)
class MonteCarloSummary:
    replicates: int
    n: int
    outbreak_frequency: float
    mean_final_fraction_major: float
    se_outbreak_frequency: float
    se_final_fraction_major: float
    seed: int
    final_sizes: np.ndarray
    is_major: np.ndarray
    generations: list[list[int]]

    def to_dict(self) -> dict:
        return {
            "replicates": self.replicates,
            "n": self.n,
            "outbreak_frequency": self.outbreak_frequency,
            "mean_final_fraction_major": self.mean_final_fraction_major,
            "se_outbreak_frequency": self.se_outbreak_frequency,
            "se_final_fraction_major": self.se_final_fraction_major,
            "seed": self.seed,
        }


def _gather_neighbors(g: CmcGraph, frontier: np.ndarray):
    """Flattened neighbor slice of the frontier in CSR order."""
    starts = g.indptr[frontier]
    counts = g.indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty, empty
    cum = np.cumsum(counts)
    idx = np.arange(total) - np.repeat(cum - counts, counts) + np.repeat(starts, counts)
    sources = np.repeat(frontier, counts)
    return sources, g.neighbors[idx], idx


def simulate_once(
    g: CmcGraph, t_law: TransmissionLaw, cfg: EpidemicConfig, seed: int
) -> EpidemicResult:
    """One epidemic: Bernoulli(f_v) vaccination, uniform unvaccinated
    initial case, per-node weights, reachability by rank."""
    if g.n == 0:
        raise DomainError("empty graph")
    rng = np.random.default_rng(seed)
    vaccinated = rng.random(g.n) < cfg.f_v
    susceptible_nodes = np.flatnonzero(~vaccinated)
    if len(susceptible_nodes) == 0:
        raise DomainError("all nodes vaccinated")
    initial = int(rng.choice(susceptible_nodes))
    weights = t_law.sample(rng, g.n)

    infected = np.zeros(g.n, dtype=bool)
    rank = np.full(g.n, -1, dtype=np.int64)
    infected[initial] = True
    rank[initial] = 0
    generations = [1]
    rec_nodes, rec_parents, rec_ranks, rec_tri = [], [], [], []

    frontier = np.array([initial], dtype=np.int64)
    depth = 0
    while len(frontier):
        depth += 1
        sources, targets, csr_idx = _gather_neighbors(g, frontier)
        if len(targets) == 0:
            break
        open_edge = rng.random(len(targets)) < weights[sources]
        viable = open_edge & ~vaccinated[targets] & ~infected[targets]
        new_nodes, first = np.unique(targets[viable], return_index=True)
        if len(new_nodes) == 0:
            break
        infected[new_nodes] = True
        rank[new_nodes] = depth
        generations.append(len(new_nodes))
        rec_nodes.append(new_nodes)
        rec_parents.append(sources[viable][first])
        rec_ranks.append(np.full(len(new_nodes), depth, dtype=np.int64))
        rec_tri.append(g.kinds[csr_idx[viable][first]] == KIND_TRIANGLE)
        frontier = new_nodes

    final_size = int(infected.sum())
    cat = lambda chunks, dt: (
        np.concatenate(chunks) if chunks else np.empty(0, dtype=dt)
    )
    return EpidemicResult(
        final_size=final_size,
        generations=generations,
        is_major=final_size >= cfg.outbreak_threshold_fraction * g.n,
        infected=cat(rec_nodes, np.int64),
        parents=cat(rec_parents, np.int64),
        ranks=cat(rec_ranks, np.int64),
        via_triangle=cat(rec_tri, bool),
        initial_case=initial,
        node_rank=rank,
    )


def _replicate_seeds(master_seed: int, replicate: int) -> tuple[int, int, int]:
    """Sub-seeds for (degrees, matching, epidemic): SeedSequence keyed on
    (master seed, replicate index), reproducible and order-independent."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(replicate,))
    a, b, c = ss.generate_state(3, dtype=np.uint64)
    return int(a), int(b), int(c)


def _one_replicate(dist, t_law, n, cfg, master_seed, replicate):
    s_deg, s_graph, s_epi = _replicate_seeds(master_seed, replicate)
    seq = sample_degrees(dist, n, s_deg)
    g, _ = build_graph(seq, s_graph)
    return g, simulate_once(g, t_law, cfg, s_epi)


def monte_carlo(
    dist: DegreeDistribution,
    t_law: TransmissionLaw,
    n: int,
    replicates: int,
    cfg: EpidemicConfig,
    seed: int,
) -> MonteCarloSummary:
    """Fresh graph and epidemic per replicate; outcomes and binomial /
    empirical standard errors."""
    if n < 1000:
        raise DomainError(f"need n >= 1000, got {n}")
    if replicates < 1:
        raise DomainError(f"need at least one replicate, got {replicates}")
    sizes = np.empty(replicates, dtype=np.int64)
    major = np.empty(replicates, dtype=bool)
    generations: list[list[int]] = []
    for rep in range(replicates):
        _, res = _one_replicate(dist, t_law, n, cfg, seed, rep)
        sizes[rep] = res.final_size
        major[rep] = res.is_major
        generations.append(res.generations)
    freq = float(major.mean())
    se_freq = float(np.sqrt(freq * (1.0 - freq) / replicates))
    if major.any():
        fractions = sizes[major] / n
        mean_major = float(fractions.mean())
        se_major = float(fractions.std(ddof=1) / np.sqrt(len(fractions))) if len(fractions) > 1 else 0.0
    else:
        mean_major = 0.0
        se_major = 0.0
    return MonteCarloSummary(
        replicates=replicates,
        n=n,
        outbreak_frequency=freq,
        mean_final_fraction_major=mean_major,
        se_outbreak_frequency=se_freq,
        se_final_fraction_major=se_major,
        seed=seed,
        final_sizes=sizes,
        is_major=major,
        generations=generations,
    )


def _classify_types(g: CmcGraph, res: EpidemicResult, subset: np.ndarray | None = None) -> np.ndarray:
    """Branching type (1, 2, 3) of recorded infections.

    Single-edge infections are type 3.  Triangle-edge infections are type 1
    when the twin (the third node of the matched triple) is infected at the
    same rank or earlier, otherwise type 2.  ``subset`` restricts the work
    to the given record indices; other entries are left as type 3.
    """
    types = np.full(len(res.infected), 3, dtype=np.int64)
    tri_idx = np.flatnonzero(res.via_triangle)
    if subset is not None:
        tri_idx = np.intersect1d(tri_idx, subset)
    if len(tri_idx) == 0:
        return types
    twins = g.triangle_thirds(res.infected[tri_idx], res.parents[tri_idx])
    twin_rank = np.where(twins >= 0, res.node_rank[np.maximum(twins, 0)], -1)
    early = (twin_rank >= 0) & (twin_rank <= res.ranks[tri_idx])
    types[tri_idx] = np.where(early, 1, 2)
    return types


def estimate_forward_means(
    dist: DegreeDistribution,
    t_law: TransmissionLaw,
    n: int,
    replicates: int,
    seed: int,
    max_parent_rank: int = 3,
    branching_window_fraction: float = 0.01,
) -> np.ndarray:
    """Empirical forward mean matrix from typed offspring counts.

    Parents are typed infections at ranks 1..max_parent_rank whose
    offspring generation still lies in the branching window (cumulative
    infected fraction below ``branching_window_fraction``); offspring are
    averaged per parent type.  Rows/columns follow the analytic matrix,
    reduced in the same way for absent branches.
    """
    model = _Model(dist, t_law)
    active = ([1, 2] if model.has_triangle else []) + ([3] if model.has_single else [])
    cfg = EpidemicConfig()
    counts = np.zeros((4, 4))
    parents_per_type = np.zeros(4)
    window = branching_window_fraction * n
    for rep in range(replicates):
        g, res = _one_replicate(dist, t_law, n, cfg, seed, rep)
        if len(res.infected) == 0:
            continue
        types = _classify_types(
            g, res, subset=np.flatnonzero(res.ranks <= max_parent_rank + 1)
        )
        cum = np.cumsum(res.generations)

        def infected_through(rank_arr):
            return cum[np.minimum(rank_arr, len(cum) - 1)]

        # a parent at rank r is usable while its offspring generation r+1
        # is still inside the branching window
        eligible = (
            (res.ranks >= 1)
            & (res.ranks <= max_parent_rank)
            & (infected_through(res.ranks + 1) < window)
        )
        parents_per_type += np.bincount(types[eligible], minlength=4)
        parent_type = np.zeros(n, dtype=np.int64)
        is_eligible_parent = np.zeros(n, dtype=bool)
        parent_type[res.infected] = types
        is_eligible_parent[res.infected[eligible]] = True
        child_mask = is_eligible_parent[res.parents]
        np.add.at(
            counts,
            (parent_type[res.parents[child_mask]], types[child_mask]),
            1,
        )
    if any(parents_per_type[t] < 100 for t in active):
        raise InsufficientDataError(
            f"typed parent counts {parents_per_type[1:].tolist()} below 100 for an active type"
        )
    est = np.zeros((len(active), len(active)))
    for i, ti in enumerate(active):
        for j, tj in enumerate(active):
            est[i, j] = counts[ti, tj] / parents_per_type[ti]
    return est
