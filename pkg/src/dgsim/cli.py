"""``dgsim <subcommand> --config <path> [--out <dir>]``.

Each subcommand reads an INI config (see :mod:`dgsim.config`), runs one
experiment, writes ``report.json`` plus CSV (and, for ``ftl``, a binary
two-particle dump) into the output directory and prints a one-line
summary.  Exit status: 0 on success, 2 for usage or config errors, 1 when
the experiment itself fails.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Callable

import numpy as np

from .config import COMMANDS, RunConfig, parse_config
from .dynamics import DgCoefficients, evolve_dg, evolve_dg_direct, hamiltonian_conjugation_gap
from .errors import ConfigError, DgsimError
from .experiments.ftl import FtlConfig, ftl_experiment
from .experiments.identities import intertwiner_identities
from .experiments.logic import logic_isomorphism_check
from .experiments.mixture import default_probes, mixture_experiment
from .experiments.momentum import (
    conservation_experiment,
    momentum_convergence,
    momentum_expectation_agreement,
)
from .experiments.overlap import overlap_experiment
from .experiments.states import exp_gaussian, gaussian, random_state, two_plateau
from .gpvm import Gpvm, check_gpvm_axioms
from .grid import WaveFn, norm
from .intervals import IntervalSet
from .io import write_table_csv, write_wavefn2, write_wavefn_csv
from .propagators import StepConfig, split_step_evolve
from .report import write_report

Outcome = tuple[dict, str]


def build_state(cfg: RunConfig) -> WaveFn:
    s, grid = cfg["state"], cfg.grid()
    if s["kind"] == "gaussian":
        return gaussian(grid, s["center"], s["sigma"], s["k0"])
    if s["kind"] == "two_plateau":
        return two_plateau(grid, s["plateau_D"])
    return exp_gaussian(grid, s["center"], s["sigma"], s["decay"])


def _step(dt: float, t_final: float) -> StepConfig:
    return StepConfig(dt=min(dt, t_final) if t_final > 0 else dt, t_final=t_final)


def run_evolve(cfg: RunConfig, out: Path) -> Outcome:
    e = cfg["evolve"]
    D, t_final = e["D"], e["t_final"]
    psi0 = build_state(cfg)
    potential = cfg.potential()
    step = _step(cfg["run"]["dt"], t_final)
    if e["mode"] == "linear":
        if D != 0:
            raise ConfigError("mode = linear requires D = 0")
        final = split_step_evolve(psi0, potential, step)
    else:
        final = evolve_dg(psi0, D, potential, step)
    write_wavefn_csv(out / "psi_final.csv", final)
    result: dict = {
        "norm_initial": norm(psi0),
        "norm_final": norm(final),
        "norm_drift": abs(norm(final) - norm(psi0)),
        "steps": step.n_steps,
        "checks": {},
    }
    parts = [f"evolve: D={D:g} t={t_final:g} norm drift={result['norm_drift']:.3g}"]
    checks = e["checks"]
    if "direct" in checks:
        direct = evolve_dg_direct(psi0, DgCoefficients.linearizable(D), D, potential, step)
        gap = norm(direct - final) / norm(psi0)
        result["checks"]["direct_l2_gap"] = gap
        parts.append(f"direct gap={gap:.3g}")
    if "hamiltonian_gap" in checks:
        vec, exp = hamiltonian_conjugation_gap(psi0, D, e["gap_delta"])
        result["checks"]["hamiltonian_gap"] = {"gap_vector_norm": vec, "gap_expectation": exp}
        parts.append(f"H gap vector={vec:.4g} expectation={exp:.3g}")
    if "identities" in checks:
        rep = intertwiner_identities(cfg.grid(), D, e["n_random"], np.random.default_rng(cfg.seed))
        result["checks"]["identities"] = rep.to_dict()
        parts.append(f"identities max residual={rep.max_residual:.3g}")
    return result, ", ".join(parts)


def run_overlap(cfg: RunConfig, out: Path) -> Outcome:
    o, g = cfg["overlap"], cfg["grid"]
    rows, runs = [], []
    for D in o["D"]:
        for level in range(o["refinements"] + 1):
            r = overlap_experiment(D, g["n"] * 2**level, g["x_min"], g["x_max"], aligned=o["aligned"])
            runs.append(r.to_dict())
            rows.append([D, r.n, r.numeric, r.analytic, r.gap, r.pre_overlap])
    write_table_csv(out / "overlap.csv", ["D", "n", "numeric", "analytic", "gap", "pre_overlap"], rows)
    first = runs[0]
    summary = (f"overlap: D={first['D']:g} n={first['n']} numeric={first['numeric']:.6f} "
               f"analytic={first['analytic']:.6f} gap={first['gap']:.3g}")
    return {"runs": runs}, summary


def run_ftl(cfg: RunConfig, out: Path) -> Outcome:
    f = dict(cfg["ftl"])
    d_values, far, dump = f.pop("D"), f.pop("far_factor"), f.pop("dump_state")
    f["lab_centers"] = tuple(f["lab_centers"])
    f["moon_offsets"] = tuple(f["moon_offsets"])
    runs, rows = [], []
    for i, D in enumerate(d_values):
        rep = ftl_experiment(FtlConfig(D=D, **f), far_factor=far)
        runs.append(rep.to_dict())
        for key in rep.on.statistics:
            rows.append([D, key, rep.off.statistics[key], rep.on.statistics[key],
                         rep.on.factorized[key], rep.off.mixture[key]])
        if dump and i == 0:
            write_wavefn2(out / "ftl_state.bin", rep.on.final_state)
    write_table_csv(out / "ftl.csv", ["D", "test", "pulse_off", "pulse_on", "factorized_on", "mixture_off"],
                    rows)
    first = runs[0]
    summary = (f"ftl: D={first['D']:g} delta={first['delta']:.4g} "
               f"distance shift={first['distance_shift']} mixture gap={first['mixture_gap_off']:.3g}")
    return {"runs": runs}, summary


def run_mixture(cfg: RunConfig, out: Path) -> Outcome:
    m = cfg["mixture"]
    grid = cfg.grid()
    probes = default_probes(m["probes"], m["probe_lo"], m["probe_hi"])
    runs, rows = [], []
    for D in m["D"]:
        for t in m["times"]:
            r = mixture_experiment(D, t, probes, grid, centers=tuple(m["centers"]), sigma=m["sigma"])
            runs.append(r.to_dict())
            rows.append([D, t, r.delta])
    write_table_csv(out / "mixture.csv", ["D", "t", "delta"], rows)
    worst = {D: max(r[2] for r in rows if r[0] == D) for D in m["D"]}
    summary = "mixture: " + ", ".join(f"D={D:g} max delta={v:.3g}" for D, v in worst.items())
    return {"runs": runs}, summary


def run_momentum(cfg: RunConfig, out: Path) -> Outcome:
    m = cfg["momentum"]
    psi = build_state(cfg)
    region = IntervalSet.of(tuple(m["region"]))
    runs, rows = [], []
    for D in m["D"]:
        r = momentum_convergence(D, region, psi, m["times"], boundary_tol=m["boundary_tol"],
                                 overflow_tol=m["overflow_tol"])
        runs.append(r.to_dict())
        for t, err, edge, flag in zip(r.times, r.errors, r.edge_mass, r.boundary_dominated):
            rows.append([D, t, err, edge, int(flag)])
    write_table_csv(out / "momentum.csv", ["D", "t", "error", "edge_mass", "boundary_dominated"], rows)
    result: dict = {"runs": runs}
    if m["agreement_times"]:
        result["agreement"] = momentum_expectation_agreement(m["agreement_D"], psi, m["agreement_times"]).to_dict()
    summary = "momentum: " + ", ".join(
        f"D={r['D']:g} final/first={r['final_over_first']:.3f} decreasing={r['strictly_decreasing']}"
        for r in runs)
    return result, summary


def run_conservation(cfg: RunConfig, out: Path) -> Outcome:
    c = cfg["conservation"]
    r = conservation_experiment(c["D"], build_state(cfg), IntervalSet.of(tuple(c["region"])), c["times"])
    rows = zip(r.times, r.residual_pD, r.residual_p0, r.prob_pD, r.prob_p0)
    write_table_csv(out / "conservation.csv", ["t", "residual_pD", "residual_p0", "prob_pD", "prob_p0"], rows)
    summary = (f"conservation: D={c['D']:g} max residual p_D={max(r.residual_pD):.3g} "
               f"p_0={max(r.residual_p0):.3g} drift p_D={r.drift_pD:.3g} p_0={r.drift_p0:.3g}")
    return r.to_dict(), summary


def run_logic(cfg: RunConfig, out: Path) -> Outcome:
    lg = cfg["logic"]
    grid, rng = cfg.grid(), np.random.default_rng(cfg.seed)
    samples = [random_state(grid, rng, lg["spread"]) for _ in range(lg["n_states"])]
    r = logic_isomorphism_check(lg["D"], samples, lg["n_projections"], rng=rng,
                                momentum_span=lg["momentum_span"], heisenberg_t=lg["heisenberg_t"])
    summary = (f"logic: D={lg['D']:g} max residual={r.max_residual:.3g} "
               f"negative control={r.negative_control:.3g}")
    return r.to_dict(), summary


def partition_from_edges(edges) -> list[IntervalSet]:
    pts = [-math.inf, *sorted(edges), math.inf]
    return [IntervalSet.of((a, b)) for a, b in zip(pts, pts[1:])]


def run_gpvm_check(cfg: RunConfig, out: Path) -> Outcome:
    gp = cfg["gpvm"]
    grid, rng = cfg.grid(), np.random.default_rng(cfg.seed)
    samples = [random_state(grid, rng, gp["spread"]) for _ in range(gp["n_states"])]
    cells = partition_from_edges(gp["edges"])
    span = (min(gp["edges"]), max(gp["edges"]))
    runs = []
    for D in gp["D"]:
        rep = check_gpvm_axioms(Gpvm(gp["base"], D), samples, cells, rng=rng, n_pairs=gp["n_pairs"], span=span)
        runs.append({"D": D, **rep.to_dict()})
    result: dict = {"base": gp["base"], "partition": [c.to_list() for c in cells], "runs": runs}
    summary = f"gpvm-check: {gp['base']} max residual={max(r['max_residual'] for r in runs):.3g}"
    if gp["negative_control"]:
        D_bad = max((abs(d) for d in gp["D"]), default=0.0) or 1.0
        bad = check_gpvm_axioms(Gpvm(gp["base"], D_bad, D_inner=0.0), samples, cells, rng=rng,
                                n_pairs=gp["n_pairs"], span=span)
        result["negative_control"] = {"D": D_bad, "D_inner": 0.0, **bad.to_dict()}
        summary += f", negative control composition={bad.composition:.3g}"
    return result, summary


HANDLERS: dict[str, Callable[[RunConfig, Path], Outcome]] = {
    "evolve": run_evolve,
    "overlap": run_overlap,
    "ftl": run_ftl,
    "mixture": run_mixture,
    "momentum": run_momentum,
    "conservation": run_conservation,
    "logic": run_logic,
    "gpvm-check": run_gpvm_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dgsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", required=True, help="INI config file")
        p.add_argument("--out", default=None, help="output directory (default: dgsim_out/<subcommand>)")
    return parser


def execute(command: str, config_path: str, out_dir: str | None = None) -> tuple[Path, dict, str]:
    """Run one subcommand and write its artifacts; returns (report path, result, summary)."""
    cfg = parse_config(config_path, command)
    out = Path(out_dir) if out_dir else Path("dgsim_out") / command
    out.mkdir(parents=True, exist_ok=True)
    cfg.out_dir = str(out)
    result, summary = HANDLERS[command](cfg, out)
    path = write_report(out / "report.json", command, cfg.resolved(), result, summary)
    return path, result, summary


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _, _, summary = execute(args.command, args.config, args.out)
    except ConfigError as exc:
        print(f"dgsim: config error: {exc}", file=sys.stderr)
        return 2
    except (DgsimError, RuntimeError, ValueError, OSError) as exc:
        print(f"dgsim: {args.command} failed: {exc}", file=sys.stderr)
        return 1
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
