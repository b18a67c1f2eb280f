"""Experiment drivers: step-count comparison and centering convergence profiles.

Both drivers emit plain CSV (data only, no plotting) with pinned headers:

* ``fig3_steps.csv``: ``n,algo,trial,steps,errors`` per (instance, algorithm);
* ``fig3_mu_trace.csv``: ``step,mu`` for a representative long-step run;
* ``fig4_center.csv``: ``init_id,iter,delta,h_ub`` per centering iteration.

Trials are independent and may run in parallel; the GEOIPM_THREADS
environment variable caps the worker count (default 1).  Aggregation is
sorted by (n, algo, trial), so output is deterministic under the seed.
"""

from __future__ import annotations

import concurrent.futures
import os
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .. import geometry, jordan, solver
from ..errors import GeoipmError, ProblemFormatError
from .generate import generate_random_sdp

__all__ = ["ExperimentConfig", "run_experiment_fig3", "run_experiment_fig4", "trial_seed"]

FIG3_STEPS_HEADER = "n,algo,trial,steps,errors"
FIG3_MU_HEADER = "step,mu"
FIG4_HEADER = "init_id,iter,delta,h_ub"


@dataclass(frozen=True)
class ExperimentConfig:
    """Knobs for the experiment drivers (defaults match the reported study).

    ``mu0`` defaults to 1 and the centering runs both start and measure at
    it; fig4's initial points sit at the exact distances ``fig4_deltas``
    from the centered point (geodesic perturbations preserve length).
    """

    seed: int = 0
    n_values: tuple = (10, 20, 30)
    trials: int = 20
    dim_l: int = 10
    mu_ratio: float = 1024.0
    mu0: float = 1.0
    short_beta: float = 0.5
    short_eps: float = 1e-4
    long_beta: float = 100.0
    long_alpha: float = 10.0
    long_eps: float = 1e-4
    gamma: float = 0.5
    fig4_n: int = 10
    fig4_deltas: tuple = (0.5, 2.0, 5.0, 8.0)
    fig4_eps: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(v) for v in self.n_values))
        object.__setattr__(self, "fig4_deltas", tuple(float(v) for v in self.fig4_deltas))
        if self.trials < 1 or self.dim_l < 1 or not self.n_values:
            raise ProblemFormatError("experiment config needs positive counts")
        if self.mu_ratio <= 1.0 or self.mu0 <= 0.0:
            raise ProblemFormatError("need mu_ratio > 1 and mu0 > 0")

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ProblemFormatError(f"unknown experiment config keys: {sorted(unknown)}")
        return cls(**doc)

    def long_params(self) -> solver.LongStepParams:
        return solver.LongStepParams(
            beta=self.long_beta, alpha=self.long_alpha, eps=self.long_eps, gamma=self.gamma
        )


def trial_seed(seed: int, n: int, trial: int) -> int:
    """Stable 64-bit per-trial seed derived from (seed, n, trial)."""
    ss = np.random.SeedSequence((int(seed), int(n), int(trial)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _worker_count() -> int:
    raw = os.environ.get("GEOIPM_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _fig3_trial(config: ExperimentConfig, n: int, trial: int):
    """One instance: oracle-center at mu0, run both algorithms down mu_ratio."""
    tseed = trial_seed(config.seed, n, trial)
    mu_f = config.mu0 / config.mu_ratio
    out = []
    trace_rows = None
    try:
        problem = generate_random_sdp(n, config.dim_l, tseed)
        w0 = solver.oracle_center(problem, config.mu0)
        params = solver.shortstep_params(config.short_beta, config.short_eps, n)
        _, strace = solver.shortstep(problem, w0, config.mu0, mu_f, params)
        out.append((n, "short", trial, strace.newton_steps, ""))
        _, ltrace = solver.longstep(problem, w0, config.mu0, mu_f, config.long_params())
        out.append((n, "long", trial, ltrace.newton_steps, ""))
        trace_rows = _mu_trace_rows(ltrace, config.mu0)
    except GeoipmError as exc:
        out.append((n, "failed", trial, "", str(exc).replace(",", ";")))
    return out, trace_rows


def _mu_trace_rows(trace: solver.SolverTrace, mu0: float):
    rows = [(0, float(mu0))]
    last = float(mu0)
    for i, rec in enumerate(trace.records):
        if rec.mu != last:
            rows.append((i, rec.mu))
            last = rec.mu
    return rows


def run_experiment_fig3(config: ExperimentConfig, outdir) -> dict:
    """Newton-step totals for both algorithms over random instances.

    Writes ``fig3_steps.csv`` and ``fig3_mu_trace.csv`` (representative
    run: first trial of the largest n) and returns summary statistics
    keyed by (n, algo).
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    jobs = [(n, trial) for n in config.n_values for trial in range(config.trials)]
    results = {}
    workers = _worker_count()
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            futs = {pool.submit(_fig3_trial, config, n, t): (n, t) for n, t in jobs}
            for fut in concurrent.futures.as_completed(futs):
                results[futs[fut]] = fut.result()
    else:
        for n, t in jobs:
            results[(n, t)] = _fig3_trial(config, n, t)

    rows = []
    for key in sorted(results):
        rows.extend(results[key][0])
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    _write_csv(outdir / "fig3_steps.csv", FIG3_STEPS_HEADER, rows)

    representative = (max(config.n_values), 0)
    trace_rows = results.get(representative, (None, None))[1]
    if trace_rows is None:
        for key in sorted(results):
            if results[key][1] is not None:
                trace_rows = results[key][1]
                break
    _write_csv(outdir / "fig3_mu_trace.csv", FIG3_MU_HEADER, trace_rows or [])

    summary = {}
    for n in config.n_values:
        for algo in ("short", "long"):
            steps = [r[3] for r in rows if r[0] == n and r[1] == algo and r[3] != ""]
            if steps:
                arr = np.array(steps, dtype=float)
                summary[(n, algo)] = (float(arr.mean()), float(arr.std()))
    for (n, algo), (mean, std) in sorted(summary.items()):
        print(f"fig3: n={n} {algo:5s} steps mean={mean:.2f} std={std:.3f}")
    return summary


def run_experiment_fig4(config: ExperimentConfig, outdir) -> Path:
    """Centering convergence from initial points at increasing distance.

    One fixed instance; per iteration the oracle distance delta and the
    computable bound h_ub are logged for each initial point.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    tseed = trial_seed(config.seed, config.fig4_n, 0)
    problem = generate_random_sdp(config.fig4_n, config.dim_l, tseed)
    w_hat = solver.oracle_center(problem, config.mu0)
    rng = np.random.default_rng([int(config.seed), 13])
    rows = []
    for init_id, delta in enumerate(config.fig4_deltas):
        v = jordan.element(problem.cone, rng.standard_normal(problem.cone.dim))
        v = v / jordan.norm2(v)
        w0 = geometry.geodesic_point(geometry.ray(w_hat, v), float(delta))

        def observe(step, w, nd, _rows=rows, _id=init_id):
            _rows.append((_id, step, geometry.geodesic_distance(w, w_hat), nd.h_ub))

        solver.center(problem, w0, config.mu0, config.fig4_eps,
                      gamma=config.gamma, observer=observe)
    path = outdir / "fig4_center.csv"
    _write_csv(path, FIG4_HEADER, rows)
    return path
