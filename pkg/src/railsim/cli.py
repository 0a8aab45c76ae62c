"""Command-line front end: run experiments, inspect one seeded scenario,
and turn runs.csv into per-density error charts.

Exit codes: 0 success, 1 bad input (config/CSV), 2 infeasible deployment.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys

import numpy as np

from . import rail, svgplot
from .experiment import (
    ExperimentConfig,
    _atomic_write,
    read_runs_csv,
    run_experiment,
    write_errors_csv,
    write_report_csv,
    write_runs_csv,
)
from .network import GenerationFailed, build_graph, generate_deployment
from .radio import PathLossModel

log = logging.getLogger("railsim")


def _setup_logging() -> None:
    level = {"off": logging.CRITICAL, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("RAIL_LOG", "info").lower(), logging.INFO
    )
    logging.basicConfig(level=level, format="%(levelname)s %(message)s")


def _load_config(path: str, seed_override=None) -> ExperimentConfig:
    if not os.path.exists(path):
        raise FileNotFoundError(f"config file not found: {path}")
    cfg = ExperimentConfig.from_json_file(path)
    if seed_override is not None:
        cfg = dataclasses.replace(cfg, base_seed=seed_override)
    return cfg


def cmd_run(args) -> int:
    try:
        cfg = _load_config(args.config, args.seed)
    except (OSError, ValueError, TypeError, KeyError) as exc:
        log.error("cannot load config: %s", exc)
        return 1
    os.makedirs(args.out, exist_ok=True)
    try:
        report = run_experiment(cfg, n_workers=args.workers)
    except GenerationFailed as exc:
        log.error("deployment generation failed: %s", exc)
        return 2
    write_report_csv(report, os.path.join(args.out, "report.csv"))
    write_runs_csv(report, os.path.join(args.out, "runs.csv"))
    write_errors_csv(report, os.path.join(args.out, "errors.csv"))

    print(f"{'':>12}" + "".join(f"{alg:>14}" for alg in cfg.algorithms))
    for d in cfg.densities:
        row = f"{d:>8} mean"
        for alg in cfg.algorithms:
            row += f"{report.mean_error[(alg, d)]:>14.4f}"
        print(row)
        row = f"{'':>9}std"
        for alg in cfg.algorithms:
            row += f"{report.std_error[(alg, d)]:>14.4f}"
        print(row)
    log.info("wrote report.csv, runs.csv, errors.csv to %s", args.out)
    return 0


def cmd_demo(args) -> int:
    try:
        cfg = _load_config(args.config, args.seed)
    except (OSError, ValueError, TypeError, KeyError) as exc:
        log.error("cannot load config: %s", exc)
        return 1
    os.makedirs(args.out, exist_ok=True)
    density = cfg.densities[0]
    try:
        dep = generate_deployment(
            cfg.width, cfg.height, density, cfg.n_anchors, cfg.comm_range, cfg.base_seed
        )
    except GenerationFailed as exc:
        log.error("deployment generation failed: %s", exc)
        return 2
    model = PathLossModel(sigma=cfg.sigma)
    g = build_graph(dep, model, rng=np.random.default_rng(cfg.base_seed))
    results = rail.localize_all(dep, g)

    target = args.target if args.target is not None else dep.unknown_ids[0]
    if target not in results:
        log.error("node %s is not an unknown node of this scenario", target)
        return 1
    est, diag = results[target]

    scene = {
        "deployment": dep.to_json_dict(),
        "target": target,
        "estimates": {str(t): [p.x, p.y] for t, (p, _) in sorted(results.items())},
        "diagnostics": {str(t): d.to_json_dict() for t, (_, d) in sorted(results.items())},
    }
    _atomic_write(os.path.join(args.out, "scene.json"), json.dumps(scene, indent=2) + "\n")
    svg = svgplot.scene_svg(
        dep.width,
        dep.height,
        dep.nodes,
        dep.anchor_ids,
        target,
        diag.box,
        diag.rays,
        diag.intersections,
        est,
    )
    _atomic_write(os.path.join(args.out, "scene.svg"), svg)
    log.info("wrote scene.json and scene.svg to %s", args.out)
    return 0


def cmd_plot(args) -> int:
    try:
        rows = read_runs_csv(args.runs)
    except (OSError, ValueError, KeyError) as exc:
        log.error("cannot read runs csv: %s", exc)
        return 1
    if not rows:
        log.error("runs csv %s contains no data rows", args.runs)
        return 1
    os.makedirs(args.out, exist_ok=True)
    densities = sorted({r["density"] for r in rows})
    for d in densities:
        series: dict[str, list[tuple[float, float]]] = {}
        for r in rows:
            if r["density"] == d:
                series.setdefault(r["algorithm"], []).append(
                    (float(r["run_index"]), r["run_mean_error_m"])
                )
        svg = line_chart_for_density(series, d)
        _atomic_write(os.path.join(args.out, f"errors_{d}.svg"), svg)
    log.info("wrote %d chart(s) to %s", len(densities), args.out)
    return 0


def line_chart_for_density(series, density: int) -> str:
    return svgplot.line_chart(
        {name: sorted(pts) for name, pts in series.items()},
        title=f"Per-run mean localization error, {density} unknown nodes",
        x_label="run index",
        y_label="mean error (m)",
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rail", description="RSSI-based localization simulator"
    )
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full Monte Carlo sweep")
    run.add_argument("--config", required=True)
    run.add_argument("--out", required=True)
    run.add_argument("--seed", type=int, default=None, help="override base_seed")
    run.add_argument("--workers", type=int, default=1)
    run.set_defaults(func=cmd_run)

    demo = sub.add_parser("demo", help="render one seeded scenario")
    demo.add_argument("--config", required=True)
    demo.add_argument("--seed", type=int, default=None, help="override base_seed")
    demo.add_argument("--target", type=int, default=None)
    demo.add_argument("--out", required=True)
    demo.set_defaults(func=cmd_demo)

    plot = sub.add_parser("plot", help="chart per-run errors from runs.csv")
    plot.add_argument("--runs", required=True)
    plot.add_argument("--out", required=True)
    plot.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
