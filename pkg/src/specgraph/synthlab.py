"""Synthetic ground-truth graphs, improper GMRF sampling and sample covariances.

Every generator draws first the edge set (one Bernoulli per node pair, in
the canonical weight-vector order) and then one uniform weight per retained
edge, so a seed and the generator arguments fully determine the graph.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .eigen import RANK_TOL, sym_eigen
from .graphops import EdgeIndexMap, StructureError, lap_apply, lap_inverse, n_edges

__all__ = [
    "GroundTruth",
    "gen_grid",
    "gen_modular",
    "gen_multicomponent",
    "gen_bipartite",
    "gen_er_noise",
    "compose_noisy",
    "compose_disjoint",
    "sample_igmrf",
    "scm",
    "is_laplacian",
    "write_edge_list",
    "read_edge_list",
]


@dataclass(frozen=True)
class GroundTruth:
    """A Laplacian with its component labels and, if any, a two-colouring.

    Attributes
    ----------
    theta : ndarray, shape (p, p)
    labels : ndarray of int, shape (p,)
        Component (or block) membership.
    bipartition : ndarray of int, shape (p,), optional
        0/1 side of each node for bipartite models.
    provenance : dict
        Generator name and arguments.
    """

    theta: np.ndarray
    labels: np.ndarray
    bipartition: np.ndarray = None
    provenance: dict = field(default_factory=dict)

    @property
    def p(self):
        return self.theta.shape[0]

    @property
    def w(self):
        return lap_inverse(self.theta)


def _rng(seed):
    return np.random.default_rng(seed)


def _draw(p, prob, wmin, wmax, rng):
    """Weights for a pair-wise edge probability vector ``prob`` (length m)."""
    if wmin > wmax or wmin < 0:
        raise ValueError(f"need 0 <= wmin <= wmax, got [{wmin}, {wmax}]")
    keep = rng.random(n_edges(p)) < prob
    w = np.zeros(n_edges(p))
    w[keep] = rng.uniform(wmin, wmax, int(keep.sum()))
    return w


def _pair_labels(labels):
    p = len(labels)
    emap = EdgeIndexMap(p)
    return labels[emap.rows], labels[emap.cols]


def _block_labels(p, k):
    if not 1 <= k <= p:
        raise ValueError(f"need 1 <= k <= p, got k={k}, p={p}")
    sizes = np.full(k, p // k)
    sizes[: p % k] += 1
    return np.repeat(np.arange(k), sizes)


def gen_grid(side, wmin=0.1, wmax=3.0, seed=None):
    """``side x side`` lattice, each node joined to its 4 nearest neighbours."""
    if side < 2:
        raise ValueError(f"side must be >= 2, got {side}")
    p = side * side
    emap = EdgeIndexMap(p)
    r, c = emap.rows, emap.cols
    right = (c == r + 1) & (r % side != side - 1)
    down = c == r + side
    w = _draw(p, (right | down).astype(float), wmin, wmax, _rng(seed))
    return GroundTruth(
        lap_apply(w), np.zeros(p, dtype=int), None,
        dict(generator="grid", side=side, wmin=wmin, wmax=wmax, seed=seed),
    )


def gen_modular(p, k, p_in, p_out, wmin=0.0, wmax=1.0, seed=None):
    """Stochastic block model with ``k`` near-equal blocks."""
    labels = _block_labels(p, k)
    a, b = _pair_labels(labels)
    w = _draw(p, np.where(a == b, p_in, p_out), wmin, wmax, _rng(seed))
    return GroundTruth(
        lap_apply(w), labels, None,
        dict(generator="modular", p=p, k=k, p_in=p_in, p_out=p_out,
             wmin=wmin, wmax=wmax, seed=seed),
    )


def gen_multicomponent(p, k, prob, wmin=0.0, wmax=1.0, seed=None):
    """``k`` disjoint random blocks; no edges between blocks."""
    gt = gen_modular(p, k, prob, 0.0, wmin, wmax, seed)
    prov = dict(gt.provenance, generator="multicomponent", prob=prob)
    del prov["p_in"], prov["p_out"]
    return GroundTruth(gt.theta, gt.labels, None, prov)


def gen_bipartite(p1, p2, prob, wmin=0.0, wmax=1.0, seed=None):
    """Random bipartite graph; nodes ``0..p1-1`` form the first side."""
    p = p1 + p2
    side = np.r_[np.zeros(p1, dtype=int), np.ones(p2, dtype=int)]
    a, b = _pair_labels(side)
    w = _draw(p, np.where(a != b, prob, 0.0), wmin, wmax, _rng(seed))
    return GroundTruth(
        lap_apply(w), np.zeros(p, dtype=int), side,
        dict(generator="bipartite", p1=p1, p2=p2, prob=prob, wmin=wmin, wmax=wmax, seed=seed),
    )


def gen_er_noise(p, prob, kappa, seed=None):
    """Erdos-Renyi graph with weights uniform on ``[0, kappa]``."""
    w = _draw(p, np.full(n_edges(p), float(prob)), 0.0, kappa, _rng(seed))
    return GroundTruth(
        lap_apply(w), np.zeros(p, dtype=int), None,
        dict(generator="er", p=p, prob=prob, kappa=kappa, seed=seed),
    )


def compose_noisy(truth, noise):
    """Add the noise Laplacian; labels and bipartition come from ``truth``."""
    if truth.p != noise.p:
        raise StructureError(f"size mismatch: {truth.p} vs {noise.p}")
    return GroundTruth(
        truth.theta + noise.theta, truth.labels, truth.bipartition,
        dict(generator="noisy", truth=truth.provenance, noise=noise.provenance),
    )


def compose_disjoint(*parts):
    """Block-diagonal union of graphs; component labels follow the parts."""
    p = sum(g.p for g in parts)
    theta = np.zeros((p, p))
    labels, sides, at = [], [], 0
    for i, g in enumerate(parts):
        theta[at:at + g.p, at:at + g.p] = g.theta
        labels.append(np.full(g.p, i))
        sides.append(g.bipartition if g.bipartition is not None else np.zeros(g.p, dtype=int))
        at += g.p
    bip = np.concatenate(sides) if all(g.bipartition is not None for g in parts) else None
    return GroundTruth(
        theta, np.concatenate(labels), bip,
        dict(generator="disjoint", parts=[g.provenance for g in parts]),
    )


def sample_igmrf(theta, n, seed=None, rank_tol=RANK_TOL):
    """Draw ``n`` samples of the improper GMRF with precision ``theta``.

    Uses the spectral square root ``x = U+ Diag(lambda+)^(-1/2) z`` on the
    non-null eigenspace, so every sample is orthogonal to the null space and
    the covariance is ``pinv(theta)``.

    Returns
    -------
    ndarray, shape (n, p)
    """
    pair = sym_eigen(theta)
    vals = pair.values
    keep = vals > rank_tol * max(np.max(np.abs(vals)), 0.0)
    root = pair.vectors[:, keep] / np.sqrt(vals[keep])
    z = _rng(seed).standard_normal((int(n), int(keep.sum())))
    return z @ root.T


def scm(X):
    """Mean-centred sample covariance ``(1/n) sum (x - xbar)(x - xbar)^T``."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError(f"expected an n x p data matrix with n >= 1, got {X.shape}")
    Xc = X - X.mean(axis=0)
    S = Xc.T @ Xc / X.shape[0]
    return 0.5 * (S + S.T)


def is_laplacian(theta, tol=1e-10):
    """Symmetric, non-positive off-diagonal, zero row sums and PSD."""
    theta = np.asarray(theta, dtype=float)
    scale = max(1.0, float(np.max(np.abs(theta))))
    off = theta - np.diag(np.diag(theta))
    return bool(
        np.allclose(theta, theta.T, atol=tol * scale)
        and np.all(off <= tol * scale)
        and np.all(np.abs(theta.sum(axis=1)) <= tol * scale * theta.shape[0])
        and np.linalg.eigvalsh(theta)[0] >= -tol * scale * theta.shape[0]
    )


def write_edge_list(path, theta, threshold=0.0):
    """Write ``i,j,weight`` rows (1-based, ``i > j``) for weights above
    ``threshold``."""
    w = lap_inverse(theta)
    emap = EdgeIndexMap(np.asarray(theta).shape[0])
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["i", "j", "weight"])
        for k in np.flatnonzero(w > threshold):
            i, j = emap.pair(int(k) + 1)
            out.writerow([i, j, repr(float(w[k]))])


def read_edge_list(path, p):
    """Inverse of :func:`write_edge_list`; returns the Laplacian."""
    emap = EdgeIndexMap(p)
    w = np.zeros(emap.m)
    with open(path, newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if header != ["i", "j", "weight"]:
            raise ValueError(f"{path}: expected header i,j,weight, got {header}")
        for lineno, row in enumerate(rows, start=2):
            try:
                i, j, weight = int(row[0]), int(row[1]), float(row[2])
            except (ValueError, IndexError) as exc:
                raise ValueError(f"{path}: line {lineno}: cannot parse {row}") from exc
            w[emap.index(i, j) - 1] = weight
    return lap_apply(w)
