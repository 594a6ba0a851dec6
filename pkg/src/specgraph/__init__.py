"""Learning structured graph Laplacians from sample covariance matrices.

The three solvers share one signature style::

    sgl_fit(S, LaplacianSpectralSet(k=...), SolverConfig(...))
    sga_fit(S, AdjacencySpectralSet(...), SolverConfig(...))
    sgla_fit(S, LaplacianSpectralSet(k=...), AdjacencySpectralSet(...), SolverConfig(...))

and return a :class:`FitResult`.
"""

from .config import (
    AdjacencySpectralSet,
    ConfigError,
    FitResult,
    LaplacianSpectralSet,
    SolverConfig,
)
from .eigen import NumericalError, SpectralPair, gdet, log_gdet, pinv, sym_eigen
from .graphops import (
    EdgeIndexMap,
    StructureError,
    adj_adjoint,
    adj_apply,
    lap_adjoint,
    lap_apply,
    lap_inverse,
    operator_norms,
)
from .isotonic import DomainError, OrderedBox, oracle_solve, reg_isotonic, sym_isotonic_psi
from .metrics import EvalReport, baseline_naive, baseline_qp, f_score, relative_error
from .sga import sga_fit
from .sgl import sgl_fit
from .sgla import sgla_fit
from .synthlab import (
    GroundTruth,
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

__version__ = "0.1.0"
