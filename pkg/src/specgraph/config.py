"""Spectral constraint sets, solver settings and fit results."""

from dataclasses import dataclass, field, fields, asdict
import math

import numpy as np

from .graphops import lap_apply, n_nodes

__all__ = [
    "ConfigError",
    "LaplacianSpectralSet",
    "AdjacencySpectralSet",
    "SolverConfig",
    "FitResult",
]


class ConfigError(ValueError):
    """Invalid configuration value; the message names the offending field."""


def _positive(name, value):
    if not (isinstance(value, (int, float)) and value > 0 and not math.isnan(value)):
        raise ConfigError(f"{name}: must be a positive number, got {value!r}")


@dataclass(frozen=True)
class LaplacianSpectralSet:
    """Admissible Laplacian spectra: ``k`` zeros, then ``q = p - k`` ordered
    eigenvalues in ``[c1, c2]``.

    ``k = 1`` with the default wide box is the connected mode.  Setting
    ``fixed_spectrum`` (length ``p - k``, ascending) pins the non-zero
    eigenvalues, which is the cospectral problem.
    """

    k: int = 1
    c1: float = 1e-6
    c2: float = 1e6
    fixed_spectrum: tuple = None

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ConfigError(f"k: must be an integer >= 1, got {self.k!r}")
        _positive("c1", self.c1)
        _positive("c2", self.c2)
        if self.c1 > self.c2:
            raise ConfigError(f"c1: must not exceed c2 ({self.c1} > {self.c2})")
        if self.fixed_spectrum is not None:
            spec = tuple(float(v) for v in self.fixed_spectrum)
            arr = np.array(spec)
            if np.any(np.diff(arr) < 0) or arr.min() < self.c1 or arr.max() > self.c2:
                raise ConfigError("fixed_spectrum: must be ascending within [c1, c2]")
            object.__setattr__(self, "fixed_spectrum", spec)

    def check(self, p):
        if self.k >= p:
            raise ConfigError(f"k: must be < p={p}, got {self.k}")
        if self.fixed_spectrum is not None and len(self.fixed_spectrum) != p - self.k:
            raise ConfigError(
                f"fixed_spectrum: needs {p - self.k} entries, got {len(self.fixed_spectrum)}"
            )
        return p - self.k


@dataclass(frozen=True)
class AdjacencySpectralSet:
    """Admissible adjacency spectra: symmetric about the origin with ``z``
    zeros in the middle and the positive half in ``[c2, c1]`` (``c1`` is the
    upper bound, as for a decreasing sequence).

    ``z=None`` means ``p mod 2``, the fewest zeros parity allows.
    """

    z: int = None
    c1: float = 1e6
    c2: float = 1e-6

    def __post_init__(self):
        if self.z is not None and (int(self.z) != self.z or self.z < 0):
            raise ConfigError(f"z: must be an integer >= 0, got {self.z!r}")
        if not self.c1 >= self.c2 >= 0:
            raise ConfigError(f"c1, c2: need c1 >= c2 >= 0, got ({self.c1}, {self.c2})")

    def zeros(self, p):
        z = p % 2 if self.z is None else int(self.z)
        if z > p or (p - z) % 2:
            raise ConfigError(f"z: p - z must be even and >= 0, got p={p}, z={z}")
        return z


@dataclass
class SolverConfig:
    """Penalties, stopping rule and ``beta`` schedule shared by all solvers.

    Parameters
    ----------
    beta, gamma : float
        Weights of the Laplacian and adjacency spectral penalties.
    alpha : float
        Sparsity weight; enters through ``K = S + alpha * (2I - 11^T)``.
    tol : float
        Stop when ``||w_new - w|| / max(||w||, eps) < tol``.
    max_iter : int
        Iteration cap; hitting it marks the result not converged.
    beta_growth, beta_max : float
        After each iteration ``beta <- min(beta_growth * beta, beta_max)``.
        The default growth of 1 keeps ``beta`` fixed, which is the only
        setting under which the objective trace must be monotone.
    l2_max : float
        Cap on the curvature estimate of the log-det term in the adjacency
        weight step.
    eps : float
        Floor for the stopping-rule denominator.
    """

    beta: float = 100.0
    gamma: float = 100.0
    alpha: float = 0.0
    tol: float = 1e-5
    max_iter: int = 5000
    beta_growth: float = 1.0
    beta_max: float = 1e8
    l2_max: float = 1e6
    eps: float = 1e-12

    def __post_init__(self):
        for name in ("beta", "gamma", "tol", "beta_max", "l2_max", "eps"):
            _positive(name, getattr(self, name))
        if not self.alpha >= 0:
            raise ConfigError(f"alpha: must be >= 0, got {self.alpha!r}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ConfigError(f"max_iter: must be a positive integer, got {self.max_iter!r}")
        self.max_iter = int(self.max_iter)
        if not self.beta_growth >= 1:
            raise ConfigError(f"beta_growth: must be >= 1, got {self.beta_growth!r}")

    def replace(self, **changes):
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        unknown = set(changes) - set(data)
        if unknown:
            raise ConfigError(f"unknown solver option(s): {sorted(unknown)}")
        data.update(changes)
        return SolverConfig(**data)

    def to_dict(self):
        return asdict(self)


def _tolist(a):
    return None if a is None else np.asarray(a).tolist()


@dataclass
class FitResult:
    """Output of a solver run.

    ``objective`` holds the objective after initialisation followed by one
    value per completed iteration.
    """

    algorithm: str
    w: np.ndarray
    objective: list
    iterations: int
    converged: bool
    lambdas: np.ndarray = None
    U: np.ndarray = None
    psi: np.ndarray = None
    V: np.ndarray = None
    beta: float = None
    gamma: float = None
    extra: dict = field(default_factory=dict)

    @property
    def p(self):
        return n_nodes(len(self.w))

    @property
    def theta(self):
        """Learned Laplacian ``Lw``."""
        return lap_apply(self.w)

    def trace_summary(self, stride=10):
        """Every ``stride``-th objective value plus the last one."""
        obj = list(self.objective)
        if not obj:
            return []
        keep = obj[::stride]
        if (len(obj) - 1) % stride:
            keep.append(obj[-1])
        return keep

    def to_dict(self, full_trace=False):
        """JSON-ready dictionary; eigenvectors are omitted."""
        return {
            "algorithm": self.algorithm,
            "converged": bool(self.converged),
            "iterations": int(self.iterations),
            "beta": self.beta,
            "gamma": self.gamma,
            "w": _tolist(self.w),
            "lambda": _tolist(self.lambdas),
            "psi": _tolist(self.psi),
            "objective": [float(v) for v in (self.objective if full_trace else self.trace_summary())],
            "objective_stride": 1 if full_trace else 10,
            **self.extra,
        }
