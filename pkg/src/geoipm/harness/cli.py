"""Command-line front end.

Subcommands: ``gen`` (random instance -> problem file), ``solve`` (run the
short- or long-step algorithm on a problem file), ``bench`` (experiment
drivers).  Exit codes: 0 converged, 2 iteration cap, 3 parse/parameter
error, 4 numerical failure; one-line diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .. import jordan, solver, subspace
from ..errors import (
    GeoipmError,
    IterationLimitError,
    ParameterError,
    ProblemFormatError,
)
from . import experiments, generate, io

__all__ = ["solve_cli", "main"]

EXIT_OK = 0
EXIT_ITERATION_CAP = 2
EXIT_PARSE = 3
EXIT_NUMERICAL = 4

TRACE_HEADER = "outer,mu,h_ub,h_lb,norm_d,norm_d_inf,step,elapsed"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geoipm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a random SDP instance")
    p_gen.add_argument("--n", type=int, required=True, help="matrix side of the PSD cone")
    p_gen.add_argument("--dim-l", type=int, default=10, help="dimension of the subspace L")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")

    p_solve = sub.add_parser("solve", help="track the central path on a problem file")
    p_solve.add_argument("--input", type=Path, required=True)
    p_solve.add_argument("--algo", choices=("short", "long"), default="long")
    p_solve.add_argument("--mu0", type=float, default=1.0)
    p_solve.add_argument("--muf", type=float, default=None, help="default mu0/1024")
    p_solve.add_argument("--eps", type=float, default=1e-4, help="final tolerance")
    p_solve.add_argument("--beta", type=float, default=None,
                         help="divergence bound (long) / contraction target (short)")
    p_solve.add_argument("--alpha", type=float, default=10.0, help="recentering tolerance (long)")
    p_solve.add_argument("--gamma", type=float, default=0.5, help="step fraction of t_max")
    p_solve.add_argument("--max-newton", type=int, default=solver.DEFAULT_CENTER_CAP)
    p_solve.add_argument("--max-outer", type=int, default=solver.DEFAULT_OUTER_CAP)
    p_solve.add_argument("--trace", type=Path, default=None, help="write per-step CSV here")
    p_solve.add_argument("--feasible-out", type=Path, default=None,
                         help="write the extracted feasible (x, s) when available")
    p_solve.add_argument("--seed", type=int, default=None,
                         help="randomize the initial point (default: identity)")
    p_solve.add_argument("--precenter", action=argparse.BooleanOptionalAction, default=None,
                         help="center at mu0 before tracking (default: on for --algo short, "
                              "whose step-count guarantee assumes a centered start)")

    p_bench = sub.add_parser("bench", help="run an experiment driver")
    p_bench.add_argument("--experiment", choices=("fig3", "fig4"), required=True)
    p_bench.add_argument("--config", type=Path, default=None, help="JSON experiment config")
    p_bench.add_argument("--outdir", type=Path, default=Path("."))
    return parser


def _cmd_gen(args) -> int:
    problem = generate.generate_random_sdp(args.n, args.dim_l, args.seed)
    doc = json.dumps(io.problem_to_dict(problem))
    if args.out is None:
        print(doc)
    else:
        args.out.write_text(doc + "\n", encoding="utf-8")
    return EXIT_OK


def _initial_point(problem, seed):
    if seed is None:
        return jordan.identity(problem.cone)
    rng = np.random.default_rng(int(seed))
    return jordan.exp(jordan.element(problem.cone, 0.5 * rng.standard_normal(problem.cone.dim)))


def _write_trace(path: Path, trace: solver.SolverTrace) -> None:
    lines = [TRACE_HEADER]
    for r in trace.records:
        lines.append(
            f"{r.outer},{r.mu!r},{r.h_ub!r},{r.h_lb!r},{r.norm_d!r},{r.norm_d_inf!r},{r.step!r},{r.elapsed!r}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _cmd_solve(args) -> int:
    problem = io.load_problem(args.input)
    mu0 = args.mu0
    mu_f = args.muf if args.muf is not None else mu0 / 1024.0
    if mu0 <= 0.0 or mu_f <= 0.0:
        raise ParameterError("mu0 and muf must be positive")
    w0 = _initial_point(problem, args.seed)
    if args.algo == "short":
        beta = args.beta if args.beta is not None else 0.5
        params = solver.shortstep_params(beta, args.eps, problem.cone.rank)
        precenter = args.precenter if args.precenter is not None else True
        state, trace = solver.shortstep(problem, w0, mu0, mu_f, params, precenter=precenter)
    else:
        beta = args.beta if args.beta is not None else 100.0
        params = solver.LongStepParams(
            beta=beta, alpha=args.alpha, eps=args.eps, gamma=args.gamma,
            max_newton=args.max_newton, max_outer=args.max_outer,
        )
        state, trace = solver.longstep(problem, w0, mu0, mu_f, params)
    nd = subspace.newton_direction(problem, state.w, state.mu)
    print(
        f"status={trace.status} algo={args.algo} newton_steps={trace.newton_steps} "
        f"mu={state.mu!r} h_ub={nd.h_ub!r}"
    )
    if args.trace is not None:
        _write_trace(args.trace, trace)
    if args.feasible_out is not None:
        pair = subspace.feasible_point(problem, state.w, state.mu, nd=nd)
        if pair is None:
            print("feasible pair unavailable (||d||_inf > 1); nothing written", file=sys.stderr)
        else:
            x, s = pair
            io.write_feasible_pair(args.feasible_out, x, s, state.mu, subspace.duality_gap(x, s))
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.config is not None:
        try:
            doc = json.loads(args.config.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ProblemFormatError(f"cannot read experiment config: {exc}") from exc
        config = experiments.ExperimentConfig.from_dict(doc)
    else:
        config = experiments.ExperimentConfig()
    if args.experiment == "fig3":
        experiments.run_experiment_fig3(config, args.outdir)
    else:
        experiments.run_experiment_fig4(config, args.outdir)
    return EXIT_OK


def solve_cli(argv=None) -> int:
    """Entry point returning the process exit status."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "solve":
            return _cmd_solve(args)
        return _cmd_bench(args)
    except IterationLimitError as exc:
        print(f"geoipm: iteration cap exceeded: {exc}", file=sys.stderr)
        return EXIT_ITERATION_CAP
    except (ProblemFormatError, ParameterError, ValueError) as exc:
        print(f"geoipm: invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (GeoipmError, np.linalg.LinAlgError) as exc:
        print(f"geoipm: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main() -> None:
    sys.exit(solve_cli())
