import json
from pathlib import Path

import numpy as np
import pytest

from specgraph.config import ConfigError, SolverConfig
from specgraph.experiments import (
    ExperimentSpec,
    fit,
    load_spec,
    make_truth,
    run_experiment,
    spec_from_dict,
)
from specgraph.synthlab import gen_multicomponent, sample_igmrf, scm

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*")), ids=lambda p: p.name)
def test_shipped_configs_load(path):
    spec = load_spec(path)
    truth, sampling = make_truth(spec, 0)
    assert truth.p == sampling.p


def test_overrides_and_errors(tmp_path):
    spec = load_spec(CONFIGS / "smoke.json", {"solver.beta": 7.0, "mc_reps": 3})
    assert spec.solver.beta == 7.0 and spec.mc_reps == 3
    with pytest.raises(ConfigError, match="solver"):
        load_spec(CONFIGS / "smoke.json", {"solver.bogus": 1})
    with pytest.raises(ConfigError, match="lap_spec.k"):
        load_spec(CONFIGS / "smoke.json", {"lap_spec.k": 0})
    with pytest.raises(ConfigError, match="algorithm"):
        spec_from_dict({"generator": "grid", "algorithm": "magic"})
    with pytest.raises(ConfigError, match="generator"):
        spec_from_dict({"algorithm": "sgl"})
    bad = tmp_path / "bad.toml"
    bad.write_text("generator = [")
    with pytest.raises(ConfigError):
        load_spec(bad)


def test_truth_depends_only_on_replication():
    spec = load_spec(CONFIGS / "noisy_multicomponent.toml")
    a, _ = make_truth(spec, 0)
    b, _ = make_truth(spec, 0)
    c, _ = make_truth(spec, 1)
    assert np.array_equal(a.theta, b.theta) and not np.array_equal(a.theta, c.theta)


@pytest.mark.parametrize("algo", ["sgl", "sga", "sgla", "qp", "naive"])
def test_fit_dispatch(algo):
    gt = gen_multicomponent(8, 1, 1.0, 0.5, 1.0, seed=0)
    S = scm(sample_igmrf(gt.theta, 400, seed=1))
    theta, info = fit(S, algo, SolverConfig(max_iter=20))
    assert theta.shape == (8, 8) and "iterations" in info


def test_run_experiment_is_deterministic(tmp_path):
    spec = load_spec(CONFIGS / "smoke.json")
    rows, summary = run_experiment(spec, output_dir=tmp_path / "a")
    run_experiment(spec, workers=2, output_dir=tmp_path / "b")
    for name in ("results.csv", "summary.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert len(rows) == 4 and [s["reps"] for s in summary] == [2, 2]
    assert (tmp_path / "a" / "timings.csv").exists()
    json.dumps(spec.to_dict(), default=str)


def test_spec_validation():
    with pytest.raises(ConfigError):
        ExperimentSpec(generator="grid", n_over_p=[])
    with pytest.raises(ConfigError):
        ExperimentSpec(generator="grid", noise={"prob": 0.1})
    with pytest.raises(ConfigError):
        ExperimentSpec(generator="grid", mc_reps=0)
