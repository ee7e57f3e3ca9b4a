"""Command-line front end: Monte-Carlo sweeps, single-shot runs, validation.

Three subcommands:

    simulate   sweep circuit power x harvester saturation, CSV out
    single     one seeded frame with all intermediates, JSON out
    validate   run the built-in correctness checks, table out

Reproducibility contract: (config, seed) determines every output byte.  Each
trial of a sweep gets its own random stream derived from (seed, cell index,
trial index) where cells enumerate the (p_cir, c) grid row-major in config
order; `single` uses the (0, 0) stream.  Aggregation relies on NumPy's
pairwise summation, so per-cell statistics do not depend on trial order.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from .channel import draw_channel, draw_topology, topology_rng, trial_rng
from .config import ConfigError, defaults_text, load_config
from .emwt import run_emwt

_LN2 = math.log(2.0)

CSV_HEADER = "p_cir,c,mean_throughput,ci95,mean_budget,frac_infeasible"


@dataclass(frozen=True)
class SweepSpec:
    """The sweep grid: circuit powers x saturation levels, trials, seed."""

    p_cir_values: tuple
    c_values: tuple
    trials: int
    seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if any(v < 0 for v in self.p_cir_values) or any(v < 0 for v in self.c_values):
            raise ValueError("swept powers must be nonnegative")

    @property
    def cells(self):
        return [(p, c) for p in self.p_cir_values for c in self.c_values]


@dataclass(frozen=True)
class SweepRow:
    """Aggregated Monte-Carlo statistics for one (p_cir, c) cell."""

    p_cir: float
    c: float
    mean_throughput: float
    ci95_halfwidth: float
    mean_budget: float
    fraction_infeasible: float


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def format_csv(rows) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    row.p_cir,
                    row.c,
                    row.mean_throughput,
                    row.ci95_halfwidth,
                    row.mean_budget,
                    row.fraction_infeasible,
                )
            )
        )
    return "\n".join(lines) + "\n"


def run_cell(cfg, spec: SweepSpec, cell_index: int, frozen_topology=None):
    """All trials of one sweep cell; returns (SweepRow, nonconverged count)."""
    p_cir, c = spec.cells[cell_index]
    sys_cfg = cfg.system(circuit_power=p_cir, eh_c=c)
    throughputs = np.empty(spec.trials)
    budgets = np.empty(spec.trials)
    nonconverged = 0
    for t in range(spec.trials):
        rng = trial_rng(spec.seed, cell=cell_index, trial=t)
        if frozen_topology is not None:
            topo = frozen_topology
        else:
            topo = draw_topology(
                rng, cfg.n_ues, cfg.r_min, cfg.r_max, cfg.height, cfg.alpha, cfg.kappa
            )
        channels = draw_channel(rng, topo, cfg.n_antennas)
        downlink = draw_channel(rng, topo, cfg.n_antennas) if cfg.independent_dl else None
        result = run_emwt(
            sys_cfg,
            channels,
            downlink=downlink,
            tol=cfg.solver_tol,
            max_iter=cfg.solver_max_iter,
        )
        throughputs[t] = result.weighted_throughput
        budgets[t] = result.budget
        nonconverged += not result.solve.converged
    mean = float(np.mean(throughputs))
    if spec.trials > 1:
        ci95 = float(1.96 * np.std(throughputs, ddof=1) / math.sqrt(spec.trials))
    else:
        ci95 = 0.0
    row = SweepRow(
        p_cir=p_cir,
        c=c,
        mean_throughput=mean,
        ci95_halfwidth=ci95,
        mean_budget=float(np.mean(budgets)),
        fraction_infeasible=float(np.mean(budgets == 0.0)),
    )
    return row, nonconverged


def run_sweep(cfg, spec: SweepSpec = None, bits=False):
    """Monte-Carlo sweep over every (p_cir, c) cell.

    Returns (rows, warnings); warnings report cells with nonconverged
    solves.  With cfg.frozen_topology one topology draw (from the reserved
    stream) is shared by every cell and trial; fading is always redrawn.
    """
    if spec is None:
        spec = SweepSpec(cfg.sweep_p_cir, cfg.sweep_c, cfg.trials, cfg.seed)
    frozen = None
    if cfg.frozen_topology:
        frozen = draw_topology(
            topology_rng(spec.seed),
            cfg.n_ues,
            cfg.r_min,
            cfg.r_max,
            cfg.height,
            cfg.alpha,
            cfg.kappa,
        )
    rows = []
    warnings = []
    for cell_index, (p_cir, c) in enumerate(spec.cells):
        row, nonconverged = run_cell(cfg, spec, cell_index, frozen_topology=frozen)
        if bits:
            row = replace(
                row,
                mean_throughput=row.mean_throughput / _LN2,
                ci95_halfwidth=row.ci95_halfwidth / _LN2,
            )
        rows.append(row)
        if nonconverged:
            warnings.append(
                f"cell p_cir={p_cir:g} c={c:g}: {nonconverged} of {spec.trials} "
                "trials did not converge"
            )
    return rows, warnings


def single_record(cfg, bits=False) -> dict:
    """One frame on the (cell 0, trial 0) stream, all intermediates."""
    rng = trial_rng(cfg.seed, cell=0, trial=0)
    if cfg.frozen_topology:
        topo = draw_topology(
            topology_rng(cfg.seed),
            cfg.n_ues,
            cfg.r_min,
            cfg.r_max,
            cfg.height,
            cfg.alpha,
            cfg.kappa,
        )
    else:
        topo = draw_topology(
            rng, cfg.n_ues, cfg.r_min, cfg.r_max, cfg.height, cfg.alpha, cfg.kappa
        )
    channels = draw_channel(rng, topo, cfg.n_antennas)
    downlink = draw_channel(rng, topo, cfg.n_antennas) if cfg.independent_dl else None
    result = run_emwt(
        cfg.system(),
        channels,
        downlink=downlink,
        tol=cfg.solver_tol,
        max_iter=cfg.solver_max_iter,
    )
    scale = _LN2 if bits else 1.0
    return {
        "seed": cfg.seed,
        "units": "bits" if bits else "nats",
        "ue_horizontal_distances": [float(d) for d in topo.ue_horizontal_distances],
        "p_in": result.p_in,
        "p_out": result.p_out,
        "budget": result.budget,
        "allocation": [float(p) for p in result.allocation],
        "weighted_throughput": result.weighted_throughput / scale,
        "beams": [[[w.real, w.imag] for w in row] for row in result.beams],
        "solve": {
            "objective": result.solve.objective,
            "iterations": result.solve.iterations,
            "kkt_residual": result.solve.kkt_residual,
            "converged": result.solve.converged,
        },
    }


def _emit(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _add_common(sub):
    sub.add_argument("--config", default=None, help="INI config file (defaults built in)")
    sub.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override one config value; repeatable",
    )
    sub.add_argument("--seed", type=int, default=None, help="override sweep.seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uavwpt",
        description="Wireless-powered UAV base-station simulator "
        "(harvest-then-broadcast, weighted throughput).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte-Carlo sweep, CSV output")
    _add_common(sim)
    sim.add_argument("--trials", type=int, default=None, help="override sweep.trials")
    sim.add_argument("--out", default=None, help="write CSV here instead of stdout")
    sim.add_argument("--bits", action="store_true", help="report bits instead of nats")

    one = sub.add_parser("single", help="one seeded frame, JSON output")
    _add_common(one)
    one.add_argument("--out", default=None, help="write JSON here instead of stdout")
    one.add_argument("--bits", action="store_true", help="report bits instead of nats")

    val = sub.add_parser("validate", help="run built-in correctness checks")
    _add_common(val)
    val.add_argument(
        "--instances", type=int, default=25, help="instances per randomized check"
    )

    sub.add_parser("defaults", help="print the built-in config")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "defaults":
        sys.stdout.write(defaults_text())
        return 0
    try:
        cfg = load_config(args.config, args.overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)

    if args.command == "simulate":
        if args.trials is not None:
            if args.trials < 1:
                print("config error: --trials must be at least 1", file=sys.stderr)
                return 2
            cfg = replace(cfg, trials=args.trials)
        rows, warnings = run_sweep(cfg, bits=args.bits)
        for line in warnings:
            print(f"warning: {line}", file=sys.stderr)
        _emit(format_csv(rows), args.out)
        return 0

    if args.command == "single":
        record = single_record(cfg, bits=args.bits)
        _emit(json.dumps(record, sort_keys=True, indent=2) + "\n", args.out)
        return 0

    # validate
    from . import checks

    if args.instances < 1:
        print("config error: --instances must be at least 1", file=sys.stderr)
        return 2
    results = checks.run_all(cfg, cfg.seed, args.instances)
    width = max(len(name) for name, _, _ in results)
    failed = []
    for name, passed, detail in results:
        status = "PASS" if passed else "FAIL"
        print(f"{name:<{width}}  {status}  {detail}")
        if not passed:
            failed.append(name)
    if failed:
        print(f"failed checks: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
