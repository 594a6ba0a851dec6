"""Symmetric eigendecomposition, generalized determinant and pseudo-inverse."""

from dataclasses import dataclass

import numpy as np

__all__ = ["SpectralPair", "NumericalError", "sym_eigen", "gdet", "log_gdet", "pinv"]

RANK_TOL = 1e-9
SYMMETRY_TOL = 1e-8


class NumericalError(ArithmeticError):
    """A linear-algebra backend failed or an input was numerically unusable."""


@dataclass(frozen=True)
class SpectralPair:
    """Eigenvalues in ascending order and matching orthonormal eigenvectors.

    ``vectors[:, i]`` belongs to ``values[i]``.
    """

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self):
        return (self.vectors * self.values) @ self.vectors.T


def _check_symmetric(M):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NumericalError("matrix has non-finite entries")
    asym = np.max(np.abs(M - M.T)) if M.size else 0.0
    if asym > SYMMETRY_TOL * max(1.0, np.max(np.abs(M))):
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    return M


def sym_eigen(M):
    """Eigendecomposition of a symmetric matrix.

    Only the lower triangle is read by the backend.  Each eigenvector is
    signed so that its largest-magnitude entry is non-negative (ties go to
    the first such entry), which makes repeated runs reproducible.

    Parameters
    ----------
    M : array_like, shape (p, p)
        Symmetric up to ``1e-8`` relative asymmetry.

    Returns
    -------
    SpectralPair

    Raises
    ------
    NumericalError
        If LAPACK does not converge.
    """
    M = _check_symmetric(M)
    try:
        vals, vecs = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        cond = np.linalg.cond(M) if M.size else np.nan
        raise NumericalError(
            f"eigendecomposition failed for {M.shape[0]}x{M.shape[0]} matrix "
            f"(cond={cond:.3e}, max|M|={np.max(np.abs(M)):.3e})"
        ) from exc
    if vecs.size:
        lead = np.argmax(np.abs(vecs), axis=0)
        signs = np.sign(vecs[lead, np.arange(vecs.shape[1])])
        signs[signs == 0] = 1.0
        vecs = vecs * signs
    return SpectralPair(vals, vecs)


def _nonzero_eigs(M, rank_tol):
    vals = sym_eigen(M).values
    top = np.max(np.abs(vals)) if vals.size else 0.0
    return vals[vals > rank_tol * top]


def log_gdet(M, rank_tol=RANK_TOL):
    """Log of the generalized determinant (product of eigenvalues above
    ``rank_tol * max eigenvalue``) of a PSD matrix."""
    keep = _nonzero_eigs(M, rank_tol)
    return float(np.sum(np.log(keep)))


def gdet(M, rank_tol=RANK_TOL):
    """Generalized determinant of a PSD matrix.

    The product is accumulated in the log domain; an all-zero matrix has an
    empty product and returns 1.

    Examples
    --------
    >>> round(gdet(np.diag([0.0, 2.0, 3.0])), 12)
    6.0
    """
    return float(np.exp(log_gdet(M, rank_tol)))


def pinv(M, rank_tol=RANK_TOL):
    """Moore-Penrose pseudo-inverse of a symmetric PSD matrix.

    Eigenvalues at or below ``rank_tol * max eigenvalue`` are treated as zero.
    """
    pair = sym_eigen(M)
    vals = pair.values
    top = np.max(np.abs(vals)) if vals.size else 0.0
    keep = vals > rank_tol * top
    inv = np.zeros_like(vals)
    inv[keep] = 1.0 / vals[keep]
    out = (pair.vectors * inv) @ pair.vectors.T
    return 0.5 * (out + out.T)
