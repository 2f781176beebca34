"""Batch front end.

Experiments are described by a single JSON config; the command line only
selects the subcommand, config path, output path, and seed/n/replicates
overrides.  Subcommands: analyze, simulate, sweep, graph-stats.

Exit codes: 0 success, 2 config error, 3 numerical non-convergence,
4 insufficient data.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass


from . import branching, graph, simulate
from .degrees import DegreeDistribution
from .errors import ConvergenceError, DomainError, InsufficientDataError, PmfError
from .transmission import (
    BetaSymmetric,
    DiscreteAtoms,
    InfectiousPeriod,
    LaplaceSpec,
    TransmissionLaw,
    bernoulli_endpoints,
    point_mass,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_INSUFFICIENT = 4


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    dist: DegreeDistribution
    t_law: TransmissionLaw | None
    f_v: float
    n: int
    replicates: int
    seed: int
    outbreak_threshold_fraction: float
    alpha_grid: list[float] | None


def parse_t_law(spec: dict) -> TransmissionLaw:
    kind = spec.get("kind")
    if kind == "point":
        return point_mass(float(spec["t"]))
    if kind == "bernoulli":
        return bernoulli_endpoints(float(spec["p"]))
    if kind == "atoms":
        return DiscreteAtoms([(float(t), float(w)) for t, w in spec["atoms"]])
    if kind == "beta":
        return BetaSymmetric(float(spec["alpha"]))
    if kind == "exp_period":
        return InfectiousPeriod(LaplaceSpec.exponential(float(spec["rate"])))
    if kind == "const_period":
        return InfectiousPeriod(LaplaceSpec.constant(float(spec["duration"])))
    raise ConfigError(f"unknown transmission law kind {kind!r}")


def parse_config(raw: dict, overrides: argparse.Namespace) -> ExperimentConfig:
    try:
        atoms = {
            (int(k_s), int(k_delta)): float(p)
            for k_s, k_delta, p in raw["degree_distribution"]
        }
        dist = DegreeDistribution(atoms)
        t_law = parse_t_law(raw["t_law"]) if "t_law" in raw else None
        sweep = raw.get("sweep")
        alpha_grid = None
        if sweep is not None:
            alpha_grid = [float(a) for a in sweep["alpha_grid"]]
            if any(a <= 0 for a in alpha_grid):
                raise ConfigError("alpha grid entries must be positive")
        cfg = ExperimentConfig(
            dist=dist,
            t_law=t_law,
            f_v=float(raw.get("f_v", 0.0)),
            n=int(raw.get("n", 10**5)),
            replicates=int(raw.get("replicates", 0)),
            seed=int(raw.get("seed", 0)),
            outbreak_threshold_fraction=float(raw.get("outbreak_threshold_fraction", 0.05)),
            alpha_grid=alpha_grid,
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError, PmfError, DomainError) as exc:
        raise ConfigError(str(exc)) from exc
    if overrides.seed is not None:
        cfg.seed = overrides.seed
    if overrides.n is not None:
        cfg.n = overrides.n
    if overrides.replicates is not None:
        cfg.replicates = overrides.replicates
    return cfg


def _dump_json(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(header: list[str], rows: list[list], path: str | None) -> None:
    lines = [",".join(header)] + [",".join(_fmt(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def cmd_analyze(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    if cfg.t_law is None:
        raise ConfigError("analyze requires a t_law entry")
    report = branching.analyze(cfg.dist, cfg.t_law, cfg.f_v)
    _dump_json(report.to_dict(), args.output)
    return EXIT_OK


def cmd_simulate(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    if cfg.t_law is None:
        raise ConfigError("simulate requires a t_law entry")
    if cfg.replicates < 1:
        raise ConfigError("simulate requires replicates >= 1")
    epi_cfg = simulate.EpidemicConfig(
        f_v=cfg.f_v, outbreak_threshold_fraction=cfg.outbreak_threshold_fraction
    )
    summary = simulate.monte_carlo(
        cfg.dist, cfg.t_law, cfg.n, cfg.replicates, epi_cfg, cfg.seed
    )
    rows = [
        [rep, cfg.n, int(summary.final_sizes[rep]), int(summary.is_major[rep]),
         json.dumps(summary.generations[rep], separators=(",", ":"))]
        for rep in range(cfg.replicates)
    ]
    base = args.output or "simulate_out"
    _write_csv(
        ["replicate", "n", "final_size", "is_major", "generations_json"],
        rows,
        base + ".csv",
    )
    _dump_json(summary.to_dict(), base + ".json")
    return EXIT_OK


SWEEP_HEADER = [
    "distribution",
    "alpha",
    "e_t2",
    "r0",
    "extinction_probability",
    "final_size",
    "critical_coverage",
]
SWEEP_MC_HEADER = [
    "outbreak_frequency",
    "mean_final_fraction_major",
    "se_outbreak_frequency",
    "se_final_fraction_major",
]


def cmd_sweep(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    if cfg.alpha_grid is None:
        raise ConfigError("sweep requires a sweep.alpha_grid entry")
    with_mc = cfg.replicates > 0
    header = SWEEP_HEADER + (SWEEP_MC_HEADER if with_mc else [])
    rows = []
    for alpha in sorted(cfg.alpha_grid):
        law = BetaSymmetric(alpha)
        report = branching.analyze(cfg.dist, law, cfg.f_v)
        row = [
            "dist",
            alpha,
            law.raw_moment(2),
            report.r0,
            1.0 - report.outbreak_probability,
            report.final_size,
            report.critical_coverage,
        ]
        if with_mc:
            epi_cfg = simulate.EpidemicConfig(
                f_v=cfg.f_v,
                outbreak_threshold_fraction=cfg.outbreak_threshold_fraction,
            )
            summary = simulate.monte_carlo(
                cfg.dist, law, cfg.n, cfg.replicates, epi_cfg, cfg.seed
            )
            row += [
                summary.outbreak_frequency,
                summary.mean_final_fraction_major,
                summary.se_outbreak_frequency,
                summary.se_final_fraction_major,
            ]
        rows.append(row)
    _write_csv(header, rows, args.output)
    return EXIT_OK


def cmd_graph_stats(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    seq = graph.sample_degrees(cfg.dist, cfg.n, cfg.seed)
    g, report = graph.build_graph(seq, cfg.seed)
    stats = graph.clustering_empirical(g)
    payload = {
        "n": cfg.n,
        "empirical_clustering": stats.coefficient,
        "asymptotic_clustering": graph.clustering_asymptotic(cfg.dist),
        "ordered_wedges": stats.ordered_wedges,
        "ordered_triangles": stats.ordered_triangles,
        "generation_report": {
            "erased_single_halfedges": report.erased_single_halfedges,
            "erased_triangle_pairs": report.erased_triangle_pairs,
            "self_loops_removed": report.self_loops_removed,
            "multi_edges_merged": report.multi_edges_merged,
        },
    }
    _dump_json(payload, args.output)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "graph-stats": cmd_graph_stats,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clustered-sir",
        description="Epidemics on clustered configuration-model graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="experiment config JSON")
        p.add_argument("--output", default=None, help="output path (default stdout; "
                       "for simulate, a base path for .csv/.json)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--replicates", type=int, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
        cfg = parse_config(raw, args)
        return COMMANDS[args.command](cfg, args)
    except (ConfigError, OSError, json.JSONDecodeError, PmfError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except InsufficientDataError as exc:
        print(f"insufficient data: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT


if __name__ == "__main__":
    sys.exit(main())
