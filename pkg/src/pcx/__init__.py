"""Pairwise-comparison toolkit.

Reciprocal judgment matrices, four priority-weight methods (direct least
squares, weighted least squares, logarithmic least squares, eigenvector),
distance-based inconsistency with triad localization, and certification of
unique least-squares solvability via the convexity band [1/a0, a0].
"""

__version__ = "0.1.0"

from .convexity import (
    CONSTANTS,
    ConvexityReport,
    Verdict,
    certify,
    compute_a0,
    compute_w0,
    f_a,
    f_a_second,
    phi,
    psi,
)
from .errors import (
    ConfigError,
    DimensionMismatch,
    MatrixFormatError,
    NonPositiveEntry,
    NonPositiveParameter,
    OutOfScale,
    PcxError,
    SingularSystem,
    TooSmall,
    UnsupportedSize,
)
from .matrix import (
    ACCEPTABILITY_THRESHOLD,
    InconsistencyReport,
    Normalization,
    PCMatrix,
    TriadReport,
    WeightVector,
    build_matrix,
    from_weights,
    inconsistency,
    is_consistent,
    triad_inconsistency,
)
from .oracle import GridSpec, finite_diff, grid_local_minima, grid_min_lsm
from .scales import (
    MonteCarloConfig,
    MonteCarloReport,
    Scale,
    builtin_scales,
    map_scale,
    run_monte_carlo,
    scale_by_name,
    search_counterexample,
    snap_to_scale,
)
from .solvers import (
    LogPoint,
    Method,
    Minimum,
    SolveOptions,
    SolveResult,
    census_local_minima,
    objective_lsm,
    phi_gradient,
    phi_objective,
    solve_all,
    solve_evm,
    solve_llsm,
    solve_lsm,
    solve_wlsm,
)

__all__ = [
    "ACCEPTABILITY_THRESHOLD",
    "CONSTANTS",
    "ConfigError",
    "ConvexityReport",
    "DimensionMismatch",
    "GridSpec",
    "InconsistencyReport",
    "LogPoint",
    "MatrixFormatError",
    "Method",
    "Minimum",
    "MonteCarloConfig",
    "MonteCarloReport",
    "NonPositiveEntry",
    "NonPositiveParameter",
    "Normalization",
    "OutOfScale",
    "PCMatrix",
    "PcxError",
    "Scale",
    "SingularSystem",
    "SolveOptions",
    "SolveResult",
    "TooSmall",
    "TriadReport",
    "UnsupportedSize",
    "Verdict",
    "WeightVector",
    "build_matrix",
    "builtin_scales",
    "census_local_minima",
    "certify",
    "compute_a0",
    "compute_w0",
    "f_a",
    "f_a_second",
    "finite_diff",
    "from_weights",
    "grid_local_minima",
    "grid_min_lsm",
    "inconsistency",
    "is_consistent",
    "map_scale",
    "objective_lsm",
    "phi",
    "phi_gradient",
    "phi_objective",
    "psi",
    "run_monte_carlo",
    "scale_by_name",
    "search_counterexample",
    "snap_to_scale",
    "solve_all",
    "solve_evm",
    "solve_llsm",
    "solve_lsm",
    "solve_wlsm",
    "triad_inconsistency",
]
