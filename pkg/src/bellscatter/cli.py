"""Command-line front end.

Subcommands write CSV (header row, 17 significant digits) to ``--out`` or
stdout. Exit status: 0 success, 2 configuration error, 3 domain error,
4 internal consistency error.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import math
import sys

import numpy as np

from . import kernels
from .biphoton import concurrence, s_from_p
from .errors import BellScatterError, DomainError
from .media import (plasmon_resonance, propagation_length, symmetry_ratio,
                    transmission_eigs, transmit)
from .scenario import ConfigError, Scenario, SweepGrid, load_scenario
from .transfer import (bounds, capped_tau, distillable, optimize_incident, region_boundary,
                       s_max_of_ratio, s_max_quadratic, yield_check)

EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_INTERNAL = 4


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (complex, np.complexfloating)):
        return f"{x.real:.17g}{x.imag:+.17g}i"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def write_table(out, header, rows):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def _matrix_rows(prefix, m):
    return [(f"{prefix}_{s}{t}", m[i, j]) for i, s in enumerate("HV") for j, t in enumerate("HV")]


def smax_table(grid: SweepGrid):
    return [(r, s_max_of_ratio(r), s_max_quadratic(r)) for r in grid.values()]


def distill_table(p_in: float, ln_tau_max: float, steps: int):
    """Grid verdicts followed by the sampled strip boundary."""
    axis = np.linspace(0.0, ln_tau_max, steps)
    rows = []
    for i, x in enumerate(axis):
        for j, y in enumerate(axis):
            v = distillable(p_in, math.exp(x), math.exp(y))
            rows.append(("grid", x, y, v.feasible, v.margin_diff, v.margin_sum))
    for line in region_boundary(p_in, ln_tau_max, steps):
        for x, y in zip(line.ln_tau1, line.ln_tau2):
            v = distillable(p_in, math.exp(x), math.exp(y))
            rows.append((line.name, x, y, v.feasible, v.margin_diff, v.margin_sum))
    return rows


def _media_summary(t1, t2):
    e1, e2 = transmission_eigs(t1), transmission_eigs(t2)
    tau1, tau2 = capped_tau(e1), capped_tau(e2)
    b = bounds(tau1, tau2)
    return [("T1_plus", e1.t_plus), ("T1_minus", e1.t_minus),
            ("T2_plus", e2.t_plus), ("T2_minus", e2.t_minus),
            ("tau1", tau1), ("tau2", tau2), ("tau_ratio", tau1 / tau2),
            ("p_min", b.p_min), ("p_max", b.p_max), ("s_max", b.s_max)], tau1, tau2


def _distill_rows(p_in, tau1, tau2):
    if p_in <= 0.0:
        return []
    v = distillable(p_in, tau1, tau2)
    return [("distillable", v.feasible), ("margin_diff", v.margin_diff),
            ("margin_sum", v.margin_sum)]


def transfer_report(sc: Scenario):
    s_in = sc.input_state()
    t1, t2 = sc.media()
    res = transmit(s_in, t1, t2)
    p_in = min(concurrence(s_in), 1.0)
    media_rows, tau1, tau2 = _media_summary(t1, t2)
    zp, ok = yield_check(p_in, res)
    rows = [("p_in", p_in), ("s_in", s_from_p(p_in))]
    rows += _matrix_rows("a_out", res.state_out.a)
    rows += [("z", res.z), ("p_out", res.p_out), ("s_out", res.s_out)]
    rows += media_rows
    rows += _distill_rows(p_in, tau1, tau2)
    rows += [("z_times_p_out", zp), ("yield_ok", ok)]
    return rows


def optimize_report(sc: Scenario, seed: int, restarts: int):
    t1, t2 = sc.media()
    p_in = sc.p_in if sc.p_in is not None else min(concurrence(sc.input_state()), 1.0)
    rep = optimize_incident(t1, t2, p_in, restarts=restarts, seed=seed)
    media_rows, tau1, tau2 = _media_summary(t1, t2)
    rows = [("p_in", p_in), ("seed", seed), ("restarts", rep.restarts),
            ("best_p_out", rep.best_p_out), ("best_s_out", s_from_p(rep.best_p_out))]
    rows += _matrix_rows("a_in", rep.best_input.a)
    rows += [("iterations", rep.iterations), ("converged", rep.converged),
             ("backend", kernels.BACKEND)]
    rows += media_rows
    rows += _distill_rows(p_in, tau1, tau2)
    return rows


def plasmon_report(sc: Scenario):
    if sc.films is None:
        raise ConfigError("plasmon needs film media ([film1], [film2], [media] omega0)")
    t1, t2 = sc.media()
    rows = [("omega0", sc.omega0)]
    for k, spec in enumerate(sc.films, start=1):
        rows += [(f"film{k}_omega_a", plasmon_resonance(spec.lattice_a, spec.order_n, spec.epsilon)),
                 (f"film{k}_omega_b", plasmon_resonance(spec.lattice_b, spec.order_n, spec.epsilon)),
                 (f"film{k}_propagation_length", propagation_length(spec.gamma, spec.epsilon))]
    media_rows, tau1, tau2 = _media_summary(t1, t2)
    rows += media_rows
    f1, f2 = sc.films
    square = f2.lattice_a == f2.lattice_b
    shared = (f1.order_n, f1.gamma, f1.epsilon) == (f2.order_n, f2.gamma, f2.epsilon)
    on_res = sc.omega0 == plasmon_resonance(f2.lattice_a, f2.order_n, f2.epsilon)
    if square and shared and on_res and f2.lattice_a in (f1.lattice_a, f1.lattice_b):
        other = f1.lattice_b if f1.lattice_a == f2.lattice_a else f1.lattice_a
        rows.append(("symmetry_ratio_closed_form",
                     symmetry_ratio(f2.lattice_a, other, f1.order_n, f1.gamma, f1.epsilon)))
    return rows


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0, metavar="N", help="random seed (default 0)")

    p = argparse.ArgumentParser(prog="bellscatter", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("transfer", parents=[common],
                       help="propagate an input state through two media")
    s.add_argument("--config", required=True, metavar="PATH")

    s = sub.add_parser("optimize", parents=[common],
                       help="best local rotation of the input for given media")
    s.add_argument("--config", required=True, metavar="PATH")
    s.add_argument("--pin", type=float, metavar="X", help="override the input concurrence")
    s.add_argument("--restarts", type=int, default=32, metavar="N")

    s = sub.add_parser("plasmon", parents=[common], help="Lorentzian hole-array film pair")
    s.add_argument("--config", required=True, metavar="PATH")

    s = sub.add_parser("smax-sweep", parents=[common],
                       help="maximal CHSH value versus tau1/tau2")
    s.add_argument("--steps", type=int, default=200, metavar="N")
    s.add_argument("--min", type=float, default=1 / 30, dest="lo", metavar="X")
    s.add_argument("--max", type=float, default=30.0, dest="hi", metavar="X")
    s.add_argument("--scale", choices=("linear", "log"), default="log")

    s = sub.add_parser("distill-region", parents=[common],
                       help="distillation strip in the (ln tau1, ln tau2) plane")
    s.add_argument("--pin", type=float, required=True, metavar="X")
    s.add_argument("--ln-tau-max", type=float, default=3.0, metavar="X")
    s.add_argument("--steps", type=int, default=40, metavar="N")
    return p


def run(args) -> tuple[list[str], list]:
    if args.command == "smax-sweep":
        grid = SweepGrid("tau_ratio", args.lo, args.hi, args.steps, args.scale)
        return ["ratio", "s_max", "s_max_quadratic"], smax_table(grid)
    if args.command == "distill-region":
        if args.steps < 2:
            raise ConfigError("--steps must be >= 2")
        return (["kind", "ln_tau1", "ln_tau2", "feasible", "margin_diff", "margin_sum"],
                distill_table(args.pin, args.ln_tau_max, args.steps))
    sc = load_scenario(args.config)
    if args.command == "transfer":
        rows = transfer_report(sc)
    elif args.command == "optimize":
        if args.pin is not None:
            sc = Scenario(sc.t1, sc.t2, sc.films, sc.omega0, args.pin, None)
        if args.restarts < 1:
            raise ConfigError("--restarts must be >= 1")
        rows = optimize_report(sc, args.seed, args.restarts)
    else:
        rows = plasmon_report(sc)
    return ["quantity", "value"], rows


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        header, rows = run(args)
        with contextlib.ExitStack() as stack:
            out = sys.stdout if args.out is None else stack.enter_context(
                open(args.out, "w", newline="", encoding="utf-8"))
            write_table(out, header, rows)
    except ConfigError as exc:
        print(f"bellscatter: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"bellscatter: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BellScatterError as exc:
        print(f"bellscatter: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"bellscatter: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
