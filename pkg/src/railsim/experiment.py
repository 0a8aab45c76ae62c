"""Seeded Monte Carlo evaluation: batch runs over node densities, the
Euclidean error metric, and mean/std aggregation with CSV export.

Per-run seeds derive from (base_seed, density, run_index), so runs can
execute serially or in parallel with bit-identical results; all three
algorithms share one deployment and graph per run for paired comparison.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import baselines, rail
from .geometry import Point, contains, distance
from .network import (
    Deployment,
    GenerationFailed,
    build_graph,
    generate_deployment,
    hop_tree_ranging,
    min_hops,
    shortest_ranging,
)
from .radio import PathLossModel

ALL_ALGORITHMS = ("RAIL", "MinMax", "RssiDvHop")


@dataclass(frozen=True)
class ExperimentConfig:
    width: float = 50.0
    height: float = 50.0
    densities: tuple[int, ...] = (100, 200, 500)
    n_anchors: int = 3
    comm_range: float = 10.0
    sigma: float = 0.0
    runs_per_density: int = 50
    base_seed: int = 1
    algorithms: tuple[str, ...] = ALL_ALGORITHMS

    def __post_init__(self):
        if self.runs_per_density < 1:
            raise ValueError("runs_per_density must be >= 1")
        if not self.densities:
            raise ValueError("densities must be non-empty")
        unknown = set(self.algorithms) - set(ALL_ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")

    @classmethod
    def from_json_dict(cls, d: dict) -> "ExperimentConfig":
        kwargs = dict(d)
        if "densities" in kwargs:
            kwargs["densities"] = tuple(int(x) for x in kwargs["densities"])
        if "algorithms" in kwargs:
            kwargs["algorithms"] = tuple(kwargs["algorithms"])
        return cls(**kwargs)

    @classmethod
    def from_json_file(cls, path: str) -> "ExperimentConfig":
        with open(path) as f:
            return cls.from_json_dict(json.load(f))

    def to_json_dict(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "densities": list(self.densities),
            "n_anchors": self.n_anchors,
            "comm_range": self.comm_range,
            "sigma": self.sigma,
            "runs_per_density": self.runs_per_density,
            "base_seed": self.base_seed,
            "algorithms": list(self.algorithms),
        }


@dataclass
class RunRecord:
    density: int
    run_index: int
    seed: int
    node_ids: list[int]
    true_positions: list[Point]
    estimates: dict[str, list[Point]]
    errors: dict[str, list[float]]
    run_mean_error: dict[str, float]
    rail_box_contains: int = 0  # targets whose box held the true position


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    mean_error: dict[tuple[str, int], float]
    std_error: dict[tuple[str, int], float]
    run_series: dict[tuple[str, int], list[float]]
    records: list[RunRecord] = field(repr=False, default_factory=list)


def localization_error(true_p: Point, est_p: Point) -> float:
    """Euclidean distance between true and estimated coordinates."""
    return distance(true_p, est_p)


def clamp_to_area(p: Point, width: float, height: float) -> Point:
    """Clip an estimate into the deployment region.

    All nodes are known to live inside the region, so estimates outside it
    are trimmed; applied uniformly to every algorithm.
    """
    return Point(min(max(p.x, 0.0), width), min(max(p.y, 0.0), height))


def run_seed(base_seed: int, density: int, run_index: int) -> int:
    """Stable per-run seed derived from the base seed and run identity."""
    ss = np.random.SeedSequence([base_seed, density, run_index])
    return int(ss.generate_state(1)[0])


def _run_single(cfg: ExperimentConfig, density: int, run_index: int) -> RunRecord:
    seed = run_seed(cfg.base_seed, density, run_index)
    ss = np.random.SeedSequence([cfg.base_seed, density, run_index])
    dep_stream, noise_stream = ss.spawn(2)

    model = PathLossModel(sigma=cfg.sigma)
    try:
        dep = generate_deployment(
            cfg.width, cfg.height, density, cfg.n_anchors, cfg.comm_range, dep_stream
        )
    except GenerationFailed as exc:
        raise GenerationFailed(
            f"density {density}, run {run_index}: {exc}"
        ) from exc
    g = build_graph(dep, model, rng=np.random.default_rng(noise_stream))

    targets = list(dep.unknown_ids)
    all_ids = list(range(len(dep.nodes)))
    ranging = {
        a: {r.target_id: r for r in shortest_ranging(g, a, all_ids)}
        for a in dep.anchor_ids
    }

    estimates: dict[str, list[Point]] = {}
    errors: dict[str, list[float]] = {}
    rail_contained = 0

    if "RAIL" in cfg.algorithms:
        results = rail.localize_all(dep, g)
        est = [results[t][0] for t in targets]
        estimates["RAIL"] = est
        rail_contained = sum(
            contains(results[t][1].box, dep.nodes[t]) for t in targets
        )

    if "MinMax" in cfg.algorithms:
        hops = {a: min_hops(g, a) for a in dep.anchor_ids}
        est = []
        for t in targets:
            inputs = [(dep.nodes[a], hops[a][t]) for a in dep.anchor_ids]
            est.append(baselines.min_max(inputs, cfg.comm_range).position)
        estimates["MinMax"] = est

    if "RssiDvHop" in cfg.algorithms:
        # DV-hop propagates beacons by hop count, so the accumulated RSSI
        # distance follows the hop-minimal flooding path, not the
        # distance-optimal one RAIL uses.
        acc = {a: hop_tree_ranging(g, a)[0] for a in dep.anchor_ids}
        est = []
        for t in targets:
            chosen = sorted(dep.anchor_ids, key=lambda a: acc[a][t])[:3]
            inputs = [(dep.nodes[a], acc[a][t]) for a in chosen]
            est.append(baselines.rssi_dv_hop(inputs).position)
        estimates["RssiDvHop"] = est

    for alg, est in estimates.items():
        clamped = [clamp_to_area(p, cfg.width, cfg.height) for p in est]
        estimates[alg] = clamped
        errors[alg] = [
            localization_error(dep.nodes[t], p) for t, p in zip(targets, clamped)
        ]

    return RunRecord(
        density=density,
        run_index=run_index,
        seed=seed,
        node_ids=targets,
        true_positions=[dep.nodes[t] for t in targets],
        estimates=estimates,
        errors=errors,
        run_mean_error={alg: float(np.mean(errs)) for alg, errs in errors.items()},
        rail_box_contains=rail_contained,
    )


def aggregate(records: Sequence[RunRecord], cfg: Optional[ExperimentConfig] = None) -> ExperimentReport:
    """Pooled per-node mean and population std per (algorithm, density),
    plus the per-run mean series.
    """
    if not records:
        raise ValueError("no run records to aggregate")
    records = sorted(records, key=lambda r: (r.density, r.run_index))
    pooled: dict[tuple[str, int], list[float]] = {}
    series: dict[tuple[str, int], list[float]] = {}
    for rec in records:
        for alg, errs in rec.errors.items():
            pooled.setdefault((alg, rec.density), []).extend(errs)
            series.setdefault((alg, rec.density), []).append(rec.run_mean_error[alg])
    mean = {k: float(np.mean(v)) for k, v in pooled.items()}
    std = {k: float(np.std(v)) for k, v in pooled.items()}
    return ExperimentReport(
        config=cfg if cfg is not None else ExperimentConfig(),
        mean_error=mean,
        std_error=std,
        run_series=series,
        records=list(records),
    )


def run_experiment(cfg: ExperimentConfig, n_workers: int = 1) -> ExperimentReport:
    """Execute the full (density x run) sweep; deterministic given cfg."""
    jobs = [(d, r) for d in cfg.densities for r in range(cfg.runs_per_density)]
    if n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            records = list(pool.map(_run_single, *zip(*[(cfg, d, r) for d, r in jobs])))
    else:
        records = [_run_single(cfg, d, r) for d, r in jobs]
    return aggregate(records, cfg)


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def write_report_csv(report: ExperimentReport, path: str) -> None:
    lines = ["algorithm,density,mean_error_m,std_error_m"]
    for alg in report.config.algorithms:
        for d in report.config.densities:
            key = (alg, d)
            if key in report.mean_error:
                lines.append(
                    f"{alg},{d},{_fmt(report.mean_error[key])},{_fmt(report.std_error[key])}"
                )
    _atomic_write(path, "\n".join(lines) + "\n")


def write_runs_csv(report: ExperimentReport, path: str) -> None:
    lines = ["algorithm,density,run_index,seed,run_mean_error_m"]
    for rec in report.records:
        for alg in report.config.algorithms:
            if alg in rec.run_mean_error:
                lines.append(
                    f"{alg},{rec.density},{rec.run_index},{rec.seed},"
                    f"{_fmt(rec.run_mean_error[alg])}"
                )
    _atomic_write(path, "\n".join(lines) + "\n")


def write_errors_csv(report: ExperimentReport, path: str) -> None:
    lines = ["algorithm,density,run_index,node_id,error_m"]
    for rec in report.records:
        for alg in report.config.algorithms:
            if alg in rec.errors:
                for node, err in zip(rec.node_ids, rec.errors[alg]):
                    lines.append(f"{alg},{rec.density},{rec.run_index},{node},{_fmt(err)}")
    _atomic_write(path, "\n".join(lines) + "\n")


def read_runs_csv(path: str) -> list[dict]:
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    for row in rows:
        row["density"] = int(row["density"])
        row["run_index"] = int(row["run_index"])
        row["run_mean_error_m"] = float(row["run_mean_error_m"])
    return rows
