"""Command-line entry point: ``specgraph {generate,learn,benchmark,selfcheck}``."""

import argparse
import json
import os
import re
import sys
import time

import numpy as np

from .config import AdjacencySpectralSet, ConfigError, LaplacianSpectralSet, SolverConfig
from .experiments import ALGORITHMS, fit, load_spec, make_truth, run_experiment
from .metrics import EDGE_THRESHOLD, f_score
from .synthlab import sample_igmrf, scm, write_edge_list

__all__ = ["main", "read_matrix", "selfcheck"]


def read_matrix(path):
    """Dense square matrix from a CSV or whitespace-separated text file.

    Blank lines and lines starting with ``#`` are skipped.  Raises
    ``ValueError`` naming the first offending line.
    """
    rows, width = [], None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                vals = [float(tok) for tok in re.split(r"[,\s]+", text) if tok]
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from exc
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise ValueError(f"{path}: line {lineno}: expected {width} values, got {len(vals)}")
            rows.append(vals)
    M = np.array(rows, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 2:
        raise ValueError(f"{path}: expected a square matrix of size >= 2, got shape {M.shape}")
    if not np.allclose(M, M.T, atol=1e-10 * max(1.0, np.max(np.abs(M)))):
        raise ValueError(f"{path}: matrix is not symmetric")
    return 0.5 * (M + M.T)


def _write_matrix(path, M):
    np.savetxt(path, M, delimiter=",", fmt="%.17g")


def _parse_value(text):
    try:
        return json.loads(text)
    except ValueError:
        return text


def _solver_flags(args):
    out = {}
    for name in ("beta", "gamma", "alpha", "tol", "max_iter"):
        v = getattr(args, name, None)
        if v is not None:
            out[name] = v
    return out


def _add_solver_flags(p):
    p.add_argument("--algo", choices=ALGORITHMS)
    p.add_argument("--k", type=int, help="number of graph components")
    p.add_argument("--z", type=int, help="number of zero adjacency eigenvalues")
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", dest="max_iter", type=int)
    p.add_argument("--threshold", type=float, help="edge threshold for the F-score")
    p.add_argument("--seed", type=int)


def _build_parser():
    parser = argparse.ArgumentParser(prog="specgraph", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="draw a ground-truth graph and its sample covariance")
    g.add_argument("config", help="TOML or JSON experiment file (generator section is used)")
    g.add_argument("--out", required=True, help="output directory")
    g.add_argument("--rep", type=int, default=0, help="replication index")
    g.add_argument("--n-over-p", dest="n_over_p", type=float, help="sample ratio (default: first in config)")
    g.add_argument("--seed", type=int)
    g.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")

    lr = sub.add_parser("learn", help="fit a graph to a covariance matrix file")
    lr.add_argument("matrix", help="CSV or whitespace matrix file holding S")
    lr.add_argument("--out", required=True, help="output directory")
    lr.add_argument("--truth", help="optional true Laplacian for RE/FS")
    lr.add_argument("--full-trace", action="store_true", help="store every objective value")
    _add_solver_flags(lr)

    b = sub.add_parser("benchmark", help="run a Monte-Carlo experiment")
    b.add_argument("config", help="TOML or JSON experiment file")
    b.add_argument("--out", required=True, help="output directory")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--reps", type=int, help="override mc_reps")
    b.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override any field by dotted path, e.g. solver.beta=10")
    _add_solver_flags(b)

    sub.add_parser("selfcheck", help="run the fast invariant suite")
    return parser


def _overrides(args):
    out = {}
    for item in getattr(args, "set", []):
        if "=" not in item:
            raise ConfigError(f"--set: expected KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = _parse_value(value)
    for key, value in _solver_flags(args).items():
        out[f"solver.{key}"] = value
    if getattr(args, "seed", None) is not None:
        out["base_seed"] = args.seed
    if getattr(args, "algo", None) is not None:
        out["algorithm"] = args.algo
    if getattr(args, "k", None) is not None:
        out["lap_spec.k"] = args.k
    if getattr(args, "z", None) is not None:
        out["adj_spec.z"] = args.z
    if getattr(args, "threshold", None) is not None:
        out["threshold"] = args.threshold
    if getattr(args, "reps", None) is not None:
        out["mc_reps"] = args.reps
    return out


def cmd_generate(args):
    spec = load_spec(args.config, _overrides(args))
    truth, sampling = make_truth(spec, args.rep)
    ratio = args.n_over_p or spec.n_over_p[0]
    n = max(2, int(round(ratio * truth.p)))
    from .experiments import _SAMPLE, _seed

    X = sample_igmrf(sampling.theta, n, seed=_seed(spec.base_seed, args.rep, _SAMPLE, 0))
    os.makedirs(args.out, exist_ok=True)
    _write_matrix(os.path.join(args.out, "theta_true.csv"), truth.theta)
    _write_matrix(os.path.join(args.out, "scm.csv"), scm(X))
    write_edge_list(os.path.join(args.out, "edges_true.csv"), truth.theta)
    with open(os.path.join(args.out, "truth.json"), "w") as fh:
        json.dump(dict(p=truth.p, n=n, labels=truth.labels.tolist(),
                       bipartition=None if truth.bipartition is None else truth.bipartition.tolist(),
                       provenance=truth.provenance), fh, indent=1, default=str)
    print(f"wrote p={truth.p}, n={n} to {args.out}")
    return 0


def cmd_learn(args):
    S = read_matrix(args.matrix)
    solver = SolverConfig(**_solver_flags(args))
    lap = LaplacianSpectralSet(k=args.k or 1)
    adj = AdjacencySpectralSet(z=args.z) if args.z is not None else None
    algo = args.algo or "sgl"
    theta, info = fit(S, algo, solver, lap, adj)
    os.makedirs(args.out, exist_ok=True)
    threshold = EDGE_THRESHOLD if args.threshold is None else args.threshold
    write_edge_list(os.path.join(args.out, "edges.csv"), theta)
    report = {"algorithm": algo, "iterations": info["iterations"], "converged": info["converged"]}
    if "result" in info:
        report.update(info["result"].to_dict(full_trace=args.full_trace))
    if args.truth:
        report["evaluation"] = f_score(theta, read_matrix(args.truth), threshold).to_dict()
    with open(os.path.join(args.out, "fit.json"), "w") as fh:
        json.dump(report, fh, indent=1)
    print(f"{algo}: {info['iterations']} iterations, converged={info['converged']}")
    return 0


def cmd_benchmark(args):
    spec = load_spec(args.config, _overrides(args))
    rows, summary = run_experiment(spec, workers=args.workers, output_dir=args.out)
    with open(os.path.join(args.out, "spec.json"), "w") as fh:
        json.dump(spec.to_dict(), fh, indent=1, default=str)
    for s in summary:
        print(f"n/p={s['n_over_p']:g}: RE median {s['re_median']:.4f}, FS median {s['fs_median']:.4f}, "
              f"converged {s['converged']}/{s['reps']}")
    return 0


def selfcheck(out=sys.stdout):
    """Fast invariant suite.  Returns True when every check passes."""
    from .graphops import adj_adjoint, adj_apply, lap_adjoint, lap_apply
    from .isotonic import OrderedBox, oracle_solve, reg_isotonic
    from .sga import sga_fit
    from .sgl import sgl_fit
    from .sgla import sgla_fit
    from .synthlab import gen_bipartite, gen_multicomponent

    rng = np.random.default_rng(0)
    checks = []

    worst = 0.0
    for p in range(2, 30):
        m = p * (p - 1) // 2
        w, Y = rng.random(m), rng.standard_normal((p, p))
        for a, b in ((np.sum(lap_apply(w) * Y), w @ lap_adjoint(Y)), (np.sum(adj_apply(w) * Y), w @ adj_adjoint(Y))):
            worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    checks.append(("operator adjoint identities", worst <= 1e-12, f"max rel gap {worst:.1e}"))

    worst = 0.0
    for _ in range(200):
        q = int(rng.integers(1, 11))
        d = rng.normal(0, 3, q)
        beta = 10 ** rng.uniform(-1, 4)
        box = OrderedBox(10 ** rng.uniform(-6, -1), 10 ** rng.uniform(0, 2))
        worst = max(worst, float(np.max(np.abs(reg_isotonic(d, beta, box) - oracle_solve(d, beta, box)))))
    checks.append(("isotonic solver vs oracle", worst <= 1e-6, f"max gap {worst:.1e}"))

    def monotone(trace):
        t = np.asarray(trace)
        return bool(np.all(np.diff(t) <= 1e-9 * np.maximum(1.0, np.abs(t[1:]))))

    gt = gen_multicomponent(12, 2, 0.8, 0.5, 1.5, seed=1)
    S = scm(sample_igmrf(gt.theta, 600, seed=2))
    cfg = SolverConfig(beta=10, gamma=10, max_iter=200)
    checks.append(("SGL objective monotone", monotone(sgl_fit(S, LaplacianSpectralSet(k=2), cfg).objective), ""))
    gb = gen_bipartite(6, 6, 0.8, 0.5, 1.5, seed=3)
    Sb = scm(sample_igmrf(gb.theta, 600, seed=4))
    checks.append(("SGA objective monotone", monotone(sga_fit(Sb, None, cfg).objective), ""))
    checks.append(("SGLA objective monotone", monotone(sgla_fit(Sb, None, None, cfg).objective), ""))

    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip(), file=out)
    return all(ok for _, ok, _ in checks)


def cmd_selfcheck(args):
    start = time.perf_counter()
    ok = selfcheck()
    print(f"selfcheck {'passed' if ok else 'FAILED'} in {time.perf_counter() - start:.1f} s")
    return 0 if ok else 1


def main(argv=None):
    args = _build_parser().parse_args(argv)
    handler = {"generate": cmd_generate, "learn": cmd_learn,
               "benchmark": cmd_benchmark, "selfcheck": cmd_selfcheck}[args.command]
    try:
        return handler(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"specgraph {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
