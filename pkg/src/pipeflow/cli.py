"""Command-line front end: single runs, grid-refinement studies and
backend benchmarks.

Verbosity comes from the ``PIPEFLOW_LOG`` environment variable (debug,
info, warning, error; default warning).  Every run writes one CSV snapshot
of the final state and one JSON run report into the output directory.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import statistics
import sys
from pathlib import Path

from . import _kernels
from .config import RunConfig, build_topology, load_config
from .diagnostics import l1_difference, runge_rate
from .driver import SCHEMES, simulate
from .model import pressure
from .presets import PRESET_NAMES, build_preset

log = logging.getLogger("pipeflow")


def _setup_logging() -> None:
    level = os.environ.get("PIPEFLOW_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH",
                        help="YAML run configuration")
    parser.add_argument("--preset", choices=PRESET_NAMES,
                        help="built-in experiment setup")
    parser.add_argument("--scheme", choices=SCHEMES,
                        help="time integrator (default ap)")
    parser.add_argument("--epsilon", type=float, metavar="F",
                        help="reference Mach number")
    parser.add_argument("--cells", type=int, metavar="N",
                        help="cells per pipe")
    parser.add_argument("--final-time", type=float, metavar="F",
                        help="simulation end time")
    parser.add_argument("--out", metavar="DIR", default="out",
                        help="output directory (default: out)")
    parser.add_argument("--threads", type=int, metavar="N",
                        help="numba thread count")


def _resolve(args) -> tuple:
    """Merge config file and CLI flags into (config, setup builder inputs)."""
    cfg = load_config(args.config) if args.config else RunConfig()
    preset = args.preset or cfg.preset
    scheme = args.scheme or cfg.scheme
    epsilon = args.epsilon if args.epsilon is not None else cfg.epsilon
    cells = args.cells if args.cells is not None else cfg.cells
    final_time = (args.final_time if args.final_time is not None
                  else cfg.final_time)
    if preset is None and cfg.topology is None:
        raise SystemExit("error: need --preset or a config with a topology")
    return cfg, preset, scheme, epsilon, cells, final_time


def _build(cfg: RunConfig, preset, epsilon, cells, final_time):
    """Instantiate the network and constants; returns (net, params, t_end)."""
    if preset is not None:
        eff_eps = epsilon if epsilon is not None else 0.1
        setup = build_preset(preset, epsilon=eff_eps, n_cells=cells,
                             params=None if not _has_gas_overrides(cfg)
                             else cfg.gas_parameters(eff_eps))
        t_end = final_time if final_time is not None else setup.final_time
        return setup.net, setup.params, t_end
    net = build_topology(cfg.topology)
    params = cfg.gas_parameters(epsilon)
    if final_time is None:
        raise SystemExit("error: final_time is required for inline topologies")
    return net, params, final_time


def _has_gas_overrides(cfg: RunConfig) -> bool:
    return any(getattr(cfg, k) is not None
               for k in ("gamma", "b", "kappa", "c_delta", "theta", "nu"))


def _set_threads(n) -> None:
    if n is None:
        return
    try:
        import numba

        numba.set_num_threads(n)
    except ImportError:
        log.warning("numba unavailable; --threads ignored")


def write_snapshot(path: Path, net, params) -> None:
    """Final state as CSV; float cells use the shortest round-trip form."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pipe_id", "x_center", "rho", "u", "p"])
        for pid, pipe in enumerate(net.pipes):
            x = pipe.x_centers()
            u = pipe.u
            p = pressure(pipe.rho, params)
            for j in range(pipe.n_cells):
                writer.writerow([pid, repr(float(x[j])), repr(float(pipe.rho[j])),
                                 repr(float(u[j])), repr(float(p[j]))])


def _report_common(result, params, cells) -> dict:
    iters = result.junction_iterations
    return {
        "scheme": result.scheme,
        "epsilon": params.epsilon,
        "cells_per_pipe": cells,
        "final_time": result.final_time,
        "n_steps": result.n_steps,
        "wall_time_s": result.wall_time,
        "backend": _kernels.get_backend(),
        "junction": {
            "max_residual": result.max_junction_residual,
            "median_iterations": statistics.median(iters) if iters else None,
            "max_iterations": max(iters) if iters else None,
        },
    }


def _write_report(out_dir: Path, report: dict) -> Path:
    path = out_dir / "report.json"
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    return path


def cmd_run(args) -> int:
    cfg, preset, scheme, epsilon, cells, final_time = _resolve(args)
    net, params, t_end = _build(cfg, preset, epsilon, cells, final_time)
    result = simulate(net, params, t_end, scheme=scheme, dt_max=cfg.dt_max,
                      boundary_dx_variant=cfg.boundary_dx_variant,
                      verbatim_sum=cfg.verbatim_junction_sum)
    out_dir = Path(args.out or cfg.out or "out")
    out_dir.mkdir(parents=True, exist_ok=True)
    snap = out_dir / "snapshot.csv"
    write_snapshot(snap, result.net, params)
    report = _report_common(result, params, net.pipes[0].n_cells)
    report["preset"] = preset
    report["files"] = {"snapshot": str(snap)}
    path = _write_report(out_dir, report)
    print(f"run complete: {result.n_steps} steps to t = {result.final_time:g}; "
          f"wrote {snap} and {path}")
    return 0


def cmd_converge(args) -> int:
    cfg, preset, scheme, epsilon, cells, final_time = _resolve(args)
    if preset is None:
        raise SystemExit("error: converge needs a --preset")
    base = cells or 100
    rows = []
    prev_net = None
    prev = None
    out_dir = Path(args.out or cfg.out or "out")
    out_dir.mkdir(parents=True, exist_ok=True)
    n = base
    for _ in range(args.levels + 1):
        net, params, t_end = _build(cfg, preset, epsilon, n, final_time)
        result = simulate(net, params, t_end, scheme=scheme, dt_max=cfg.dt_max,
                          boundary_dx_variant=cfg.boundary_dx_variant,
                          verbatim_sum=cfg.verbatim_junction_sum)
        if prev_net is not None:
            err_rho, err_q = l1_difference(prev_net.pipes, net.pipes)
            dx = prev_net.pipes[0].dx
            row = {"cells": n // 2, "dx": dx, "err_rho": err_rho,
                   "err_q": err_q, "rate_rho": None, "rate_q": None}
            if prev is not None:
                row["rate_rho"] = runge_rate(prev[0], err_rho)
                row["rate_q"] = runge_rate(prev[1], err_q)
            rows.append(row)
            prev = (err_rho, err_q)
        prev_net = net
        n *= 2

    table_path = out_dir / "convergence.csv"
    with open(table_path, "w", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["cells", "dx", "err_rho", "err_q",
                            "rate_rho", "rate_q"])
        writer.writeheader()
        writer.writerows(rows)
    report = _report_common(result, params, n // 2)
    report["preset"] = preset
    report["convergence"] = rows
    report["files"] = {"table": str(table_path)}
    path = _write_report(out_dir, report)
    for row in rows:
        rate = row["rate_rho"]
        print(f"cells={row['cells']:>7d}  err_rho={row['err_rho']:.3e}  "
              f"rate={'--' if rate is None else f'{rate:.2f}'}")
    print(f"wrote {table_path} and {path}")
    return 0


def cmd_bench(args) -> int:
    cfg, preset, scheme, epsilon, cells, final_time = _resolve(args)
    timings = {}
    params = None
    for backend in ("numba", "numpy"):
        try:
            _kernels.set_backend(backend)
        except (ImportError, ValueError) as exc:
            log.warning("backend %s unavailable: %s", backend, exc)
            continue
        net, params, t_end = _build(cfg, preset, epsilon, cells, final_time)
        if backend == "numba":
            # warm the jit cache outside the timed region
            warm = net.copy()
            simulate(warm, params, min(t_end, 1e-12) or 0.0, scheme=scheme,
                     max_steps=1)
        result = simulate(net, params, t_end, scheme=scheme, dt_max=cfg.dt_max,
                          boundary_dx_variant=cfg.boundary_dx_variant,
                          verbatim_sum=cfg.verbatim_junction_sum)
        timings[backend] = {"wall_time_s": result.wall_time,
                            "n_steps": result.n_steps}
        print(f"{backend:>5s}: {result.n_steps} steps in "
              f"{result.wall_time:.3f} s")
    out_dir = Path(args.out or cfg.out or "out")
    out_dir.mkdir(parents=True, exist_ok=True)
    report = {
        "benchmark": "backend",
        "scheme": scheme,
        "epsilon": params.epsilon if params else epsilon,
        "cells_per_pipe": cells,
        "timings": timings,
    }
    if "numba" in timings and "numpy" in timings:
        report["numpy_over_numba"] = (timings["numpy"]["wall_time_s"]
                                      / timings["numba"]["wall_time_s"])
        print(f"numpy / numba wall-time ratio: {report['numpy_over_numba']:.2f}")
    path = _write_report(out_dir, report)
    print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    _setup_logging()
    parser = argparse.ArgumentParser(
        prog="pipeflow",
        description="Low-Mach gas flow on pipe networks with friction")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate and write a snapshot")
    _add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_conv = sub.add_parser("converge", help="grid-refinement study")
    _add_common(p_conv)
    p_conv.add_argument("--levels", type=int, default=4,
                        help="number of refinement doublings (default 4)")
    p_conv.set_defaults(func=cmd_converge)

    p_bench = sub.add_parser("bench", help="compare the numba and numpy backends")
    _add_common(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    args = parser.parse_args(argv)
    _set_threads(args.threads)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
