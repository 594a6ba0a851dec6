"""Monte-Carlo benchmark harness: generate, sample, fit, evaluate, tabulate.

A benchmark is described by an :class:`ExperimentSpec`, usually loaded from
a TOML or JSON file.  Each cell is one (n/p ratio, replication) pair.  The
ground-truth graph depends only on the replication, the samples on both, and
all seeds derive from ``base_seed`` through ``numpy.random.SeedSequence``,
so a rerun with the same spec writes the same result bytes.  Wall times go
to a separate file because they never repeat exactly.
"""

import csv
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from .config import AdjacencySpectralSet, ConfigError, LaplacianSpectralSet, SolverConfig
from .graphops import lap_apply
from .metrics import EDGE_THRESHOLD, baseline_naive, baseline_qp, f_score
from .sga import sga_fit
from .sgl import sgl_fit
from .sgla import FREE_SYMMETRIC, sgla_fit
from .synthlab import (
    compose_disjoint,
    compose_noisy,
    gen_bipartite,
    gen_er_noise,
    gen_grid,
    gen_modular,
    gen_multicomponent,
    sample_igmrf,
    scm,
)

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

__all__ = [
    "ExperimentSpec",
    "ALGORITHMS",
    "make_truth",
    "fit",
    "run_cell",
    "run_experiment",
    "summarize",
    "load_spec",
    "spec_from_dict",
    "write_table",
]

ALGORITHMS = ("sgl", "sga", "sgla", "qp", "naive")

_GENERATORS = {
    "grid": gen_grid,
    "modular": gen_modular,
    "multicomponent": gen_multicomponent,
    "bipartite": gen_bipartite,
}

# Distinct streams drawn from one (base_seed, replication) pair.
_GRAPH, _NOISE, _SAMPLE = 0, 1, 2


@dataclass
class ExperimentSpec:
    """One benchmark: graph model, sample sizes, estimator and replications.

    Parameters
    ----------
    generator : str
        ``grid``, ``modular``, ``multicomponent``, ``bipartite`` or
        ``disjoint_bipartite``.
    generator_params : dict
        Keyword arguments of the generator, without ``seed``.  For
        ``disjoint_bipartite`` give ``parts`` as ``[[p1, p2, prob], ...]``
        plus ``wmin`` and ``wmax``.
    noise : dict, optional
        ``{"prob": ..., "kappa": ...}`` adds an Erdos-Renyi Laplacian to the
        sampling precision; metrics are still taken against the clean graph.
    n_over_p : list of float
    algorithm : str
        One of ``ALGORITHMS``.
    solver : SolverConfig
    lap_spec, adj_spec : spectral sets
        ``adj_spec=None`` selects the solver's default.
    mc_reps, base_seed : int
    threshold : float
        Edge threshold for the F-score.
    """

    generator: str
    generator_params: dict = field(default_factory=dict)
    noise: dict = None
    n_over_p: list = field(default_factory=lambda: [10.0])
    algorithm: str = "sgl"
    solver: SolverConfig = field(default_factory=SolverConfig)
    lap_spec: LaplacianSpectralSet = field(default_factory=LaplacianSpectralSet)
    adj_spec: AdjacencySpectralSet = None
    mc_reps: int = 1
    base_seed: int = 0
    threshold: float = EDGE_THRESHOLD

    def __post_init__(self):
        if self.generator not in _GENERATORS and self.generator != "disjoint_bipartite":
            raise ConfigError(f"generator: unknown generator {self.generator!r}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm: must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if int(self.mc_reps) != self.mc_reps or self.mc_reps < 1:
            raise ConfigError(f"mc_reps: must be an integer >= 1, got {self.mc_reps!r}")
        ratios = list(self.n_over_p)
        if not ratios or any(not (isinstance(r, (int, float)) and r > 0) for r in ratios):
            raise ConfigError(f"n_over_p: entries must be positive numbers, got {self.n_over_p!r}")
        self.n_over_p = [float(r) for r in ratios]
        if self.noise is not None and set(self.noise) != {"prob", "kappa"}:
            raise ConfigError(f"noise: expected keys prob and kappa, got {sorted(self.noise)}")

    def to_dict(self):
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["solver"] = self.solver.to_dict()
        out["lap_spec"] = _plain(self.lap_spec)
        out["adj_spec"] = None if self.adj_spec is None else _plain(self.adj_spec)
        return out


def _plain(obj):
    return {f.name: getattr(obj, f.name) for f in fields(obj)}


def _seed(base_seed, rep, stream, extra=0):
    ss = np.random.SeedSequence([int(base_seed), int(rep), stream, int(extra)])
    return int(ss.generate_state(1)[0])


def make_truth(spec, rep):
    """Ground truth for replication ``rep`` and the precision used for
    sampling, which includes the noise graph if any."""
    seed = _seed(spec.base_seed, rep, _GRAPH)
    params = dict(spec.generator_params)
    try:
        if spec.generator == "disjoint_bipartite":
            parts = params.pop("parts")
            rng = np.random.SeedSequence(seed).spawn(len(parts))
            truth = compose_disjoint(*(
                gen_bipartite(int(p1), int(p2), prob, seed=int(s.generate_state(1)[0]), **params)
                for (p1, p2, prob), s in zip(parts, rng)
            ))
        else:
            truth = _GENERATORS[spec.generator](seed=seed, **params)
    except (TypeError, KeyError, ValueError) as exc:
        raise ConfigError(f"generator_params: {exc}") from exc
    sampling = truth
    if spec.noise is not None:
        noise = gen_er_noise(truth.p, spec.noise["prob"], spec.noise["kappa"],
                             seed=_seed(spec.base_seed, rep, _NOISE))
        sampling = compose_noisy(truth, noise)
    return truth, sampling


def fit(S, algorithm, solver, lap_spec=None, adj_spec=None):
    """Run one estimator on ``S``.  Returns ``(theta_hat, info)``, where
    ``info`` holds the iteration count, convergence flag and final
    objective (empty values for the closed-form baselines)."""
    lap_spec = lap_spec or LaplacianSpectralSet()
    if algorithm == "naive":
        return baseline_naive(S), dict(iterations=0, converged=True, objective=float("nan"))
    if algorithm == "qp":
        return lap_apply(baseline_qp(S)), dict(iterations=0, converged=True, objective=float("nan"))
    if algorithm == "sgl":
        res = sgl_fit(S, lap_spec, solver)
    elif algorithm == "sga":
        res = sga_fit(S, adj_spec or AdjacencySpectralSet(), solver)
    elif algorithm == "sgla":
        res = sgla_fit(S, lap_spec, adj_spec or FREE_SYMMETRIC, solver)
    else:
        raise ConfigError(f"algorithm: unknown algorithm {algorithm!r}")
    return res.theta, dict(iterations=res.iterations, converged=res.converged,
                           objective=float(res.objective[-1]), result=res)


def run_cell(spec, ratio_index, rep):
    """Evaluate one cell; returns ``(row, seconds)``."""
    truth, sampling = make_truth(spec, rep)
    ratio = spec.n_over_p[ratio_index]
    n = max(2, int(round(ratio * truth.p)))
    X = sample_igmrf(sampling.theta, n, seed=_seed(spec.base_seed, rep, _SAMPLE, ratio_index))
    S = scm(X)
    start = time.perf_counter()
    theta_hat, info = fit(S, spec.algorithm, spec.solver, spec.lap_spec, spec.adj_spec)
    elapsed = time.perf_counter() - start
    report = f_score(theta_hat, truth.theta, spec.threshold)
    row = dict(
        n_over_p=ratio,
        rep=rep,
        n=n,
        algorithm=spec.algorithm,
        relative_error=report.relative_error,
        f_score=report.f_score,
        tp=report.tp,
        fp=report.fp,
        fn=report.fn,
        iterations=info["iterations"],
        converged=info["converged"],
        objective=info["objective"],
    )
    return row, elapsed


def _run_cell_args(args):
    return run_cell(*args)


def run_experiment(spec, workers=1, output_dir=None):
    """Run every cell of ``spec``.

    Cells run in a process pool when ``workers > 1``; rows come back in
    cell order regardless of completion order.

    Returns
    -------
    rows : list of dict
        One row per cell.
    summary : list of dict
        Mean, median and standard deviation of RE and FS per n/p ratio.
    """
    cells = [(spec, i, rep) for i in range(len(spec.n_over_p)) for rep in range(spec.mc_reps)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_run_cell_args, cells))
    else:
        out = [run_cell(*c) for c in cells]
    rows = [r for r, _ in out]
    timings = [dict(n_over_p=r["n_over_p"], rep=r["rep"], seconds=t) for r, t in out]
    summary = summarize(rows)
    if output_dir is not None:
        os.makedirs(output_dir, exist_ok=True)
        write_table(os.path.join(output_dir, "results.csv"), rows)
        write_table(os.path.join(output_dir, "summary.csv"), summary)
        write_table(os.path.join(output_dir, "timings.csv"), timings)
    return rows, summary


def summarize(rows):
    out = []
    for ratio in sorted({r["n_over_p"] for r in rows}):
        sel = [r for r in rows if r["n_over_p"] == ratio]
        re = np.array([r["relative_error"] for r in sel])
        fs = np.array([r["f_score"] for r in sel])
        out.append(dict(
            n_over_p=ratio,
            reps=len(sel),
            re_mean=float(re.mean()), re_median=float(np.median(re)), re_std=float(re.std()),
            fs_mean=float(fs.mean()), fs_median=float(np.median(fs)), fs_std=float(fs.std()),
            converged=sum(bool(r["converged"]) for r in sel),
        ))
    return out


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_table(path, rows):
    """CSV with a header taken from the first row; floats in ``repr`` form so
    the bytes depend only on the values."""
    with open(path, "w", newline="") as fh:
        if not rows:
            return
        out = csv.writer(fh, lineterminator="\n")
        keys = list(rows[0])
        out.writerow(keys)
        for r in rows:
            out.writerow([_fmt(r[k]) for k in keys])


def load_spec(path, overrides=None):
    """Read an :class:`ExperimentSpec` from ``.toml`` or ``.json``.

    ``overrides`` maps dotted field paths (``"solver.beta"``) to values and
    is applied before validation.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        if str(path).endswith(".json"):
            data = json.loads(raw)
        else:
            data = tomllib.loads(raw.decode())
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    for key, value in (overrides or {}).items():
        node = data
        *parents, leaf = key.split(".")
        for part in parents:
            node = node.setdefault(part, {})
        node[leaf] = value
    return spec_from_dict(data)


def _build(cls, data, where):
    if data is None:
        return None
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected a table, got {data!r}")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {sorted(unknown)}")
    try:
        return cls(**data)
    except ConfigError as exc:
        raise ConfigError(f"{where}.{exc}") from exc
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def spec_from_dict(data):
    data = dict(data)
    known = {f.name for f in fields(ExperimentSpec)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown field(s) {sorted(unknown)}")
    data["solver"] = _build(SolverConfig, data.get("solver", {}), "solver")
    data["lap_spec"] = _build(LaplacianSpectralSet, data.get("lap_spec", {}), "lap_spec")
    data["adj_spec"] = _build(AdjacencySpectralSet, data.get("adj_spec"), "adj_spec")
    if "generator" not in data:
        raise ConfigError("generator: required field missing")
    return ExperimentSpec(**data)
