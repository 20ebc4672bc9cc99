"""Priority-weight derivation from a judgment matrix.

Four methods:

* LSM: direct least squares sum_ij (a_ij - w_i/w_j)^2, minimized in log
  coordinates on the sum-zero hyperplane by damped Newton with Armijo
  backtracking (projected-gradient fallback when the reduced Hessian is not
  positive definite), multi-start with minimizer clustering.
* WLSM: weighted least squares sum_ij (a_ij w_j - w_i)^2 under sum(w) = 1,
  solved exactly through its KKT linear system.
* LLSM: logarithmic least squares; the closed-form solution is the vector of
  row geometric means.
* EVM: principal eigenvector by power iteration.

``SolveResult.objective`` is always the direct least-squares value at the
returned weights, so methods are comparable on one scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .convexity import certify
from .errors import DimensionMismatch, SingularSystem
from .matrix import Normalization, PCMatrix, WeightVector
from .errors import PcxError

ARMIJO_C1 = 1e-4
ARMIJO_BACKTRACK = 0.5
_MAX_BACKTRACKS = 60


class Method(Enum):
    LSM = "lsm"
    WLSM = "wlsm"
    LLSM = "llsm"
    EVM = "evm"


@dataclass(frozen=True)
class SolveOptions:
    """Tolerances and multi-start policy for the LSM solver.

    ``starts=None`` resolves to 1 when the matrix is certified to have a
    unique minimizer and to 20 otherwise.
    """

    grad_tol: float = 1e-10
    max_iters: int = 500
    starts: int | None = None
    start_seed: int = 0
    distinct_tol: float = 1e-4

    def __post_init__(self):
        if self.grad_tol <= 0 or self.distinct_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.starts is not None and self.starts < 1:
            raise ValueError("starts must be >= 1")


@dataclass(frozen=True)
class LogPoint:
    """Point on the sum-zero hyperplane of log-weights (t_i = log w_i)."""

    t: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=np.float64)
        if t.ndim != 1:
            raise DimensionMismatch("log point must be one-dimensional")
        if abs(float(t.sum())) > 1e-12 * max(1.0, float(np.abs(t).max(initial=0.0))):
            raise DimensionMismatch(f"log point must sum to 0, got sum {t.sum()!r}")
        t.flags.writeable = False
        object.__setattr__(self, "t", t)

    @property
    def n(self) -> int:
        return self.t.size

    def weights(self) -> np.ndarray:
        return np.exp(self.t)


@dataclass(frozen=True)
class Minimum:
    """A distinct local minimizer found by multi-start."""

    point: LogPoint
    objective: float


@dataclass(frozen=True)
class SolveResult:
    method: Method
    w_sum: np.ndarray
    w_prod: np.ndarray | None
    objective: float
    iterations: int
    converged: bool
    minima: tuple[Minimum, ...] = ()
    unique: bool | None = None
    warnings: tuple[str, ...] = ()
    stats: dict = field(default_factory=dict)

    def weights(self, normalization: Normalization = Normalization.SUM_ONE) -> WeightVector:
        if normalization is Normalization.SUM_ONE:
            return WeightVector(self.w_sum, Normalization.SUM_ONE)
        if self.w_prod is None:
            raise PcxError("no product-normalized weights (solution left the positive cone)")
        return WeightVector(self.w_prod, Normalization.PRODUCT_ONE)

    def as_dict(self) -> dict:
        return {
            "method": self.method.value,
            "weights_sum_one": None if self.w_sum is None else list(self.w_sum),
            "weights_product_one": None if self.w_prod is None else list(self.w_prod),
            "objective": self.objective,
            "iterations": self.iterations,
            "converged": self.converged,
            "unique": self.unique,
            "minima": [{"t": list(m.point.t), "objective": m.objective} for m in self.minima],
            "warnings": list(self.warnings),
            "stats": {k: v for k, v in self.stats.items()},
        }


def _weights_array(w) -> np.ndarray:
    arr = w.w if isinstance(w, WeightVector) else np.asarray(w, dtype=np.float64)
    return arr


def _point_array(p) -> np.ndarray:
    return p.t if isinstance(p, LogPoint) else np.asarray(p, dtype=np.float64)


@lru_cache(maxsize=64)
def _pair_indices(n: int):
    """Upper-triangle pair indices and the pair incidence matrix (n x m)."""
    iu, ju = np.triu_indices(n, 1)
    inc = np.zeros((n, iu.size))
    inc[iu, np.arange(iu.size)] = 1.0
    inc[ju, np.arange(ju.size)] = -1.0
    for arr in (iu, ju, inc):
        arr.flags.writeable = False
    return iu, ju, inc


def _pair_view(A: PCMatrix):
    iu, ju, _ = _pair_indices(A.n)
    return iu, ju, A.upper


class _PairObjective:
    """Fused value / gradient / Hessian evaluation for one matrix.

    Pair data is prepared once per solve; the Newton loop calls these methods
    thousands of times, so they avoid per-call index construction.
    """

    def __init__(self, A: PCMatrix):
        self.n = A.n
        self.iu, self.ju, self.inc = _pair_indices(A.n)
        self.a = A.upper
        self.a_inv = 1.0 / A.upper

    def value(self, t: np.ndarray) -> float:
        # line-search probes may overflow to inf; that is a valid reject signal
        with np.errstate(over="ignore", divide="ignore"):
            x = t[self.iu] - t[self.ju]
            ex = np.exp(x)
            return float(np.sum((ex - self.a) ** 2 + (1.0 / ex - self.a_inv) ** 2))

    def value_grad_hess(self, t: np.ndarray):
        with np.errstate(over="ignore", divide="ignore"):
            x = t[self.iu] - t[self.ju]
            ex = np.exp(x)
            emx = 1.0 / ex
            du = ex - self.a
            dl = emx - self.a_inv
            val = float(np.sum(du * du + dl * dl))
            fp = 2.0 * (du * ex - dl * emx)
            g = self.inc @ fp
            g -= g.mean()
            fpp = 2.0 * (ex * (2.0 * ex - self.a) + emx * (2.0 * emx - self.a_inv))
        W = np.zeros((self.n, self.n))
        W[self.iu, self.ju] = fpp
        W += W.T
        H = np.diag(W.sum(axis=1)) - W
        return val, g, H


def objective_lsm(A: PCMatrix, w) -> float:
    """Direct least-squares objective sum_ij (a_ij - w_i/w_j)^2, all ordered pairs.

    The diagonal contributes zero; the value is invariant under rescaling w.
    """
    arr = _weights_array(w)
    if arr.size != A.n:
        raise DimensionMismatch(f"weight vector of size {arr.size} vs n={A.n}")
    ratios = arr[:, None] / arr[None, :]
    return float(np.sum((A.to_array() - ratios) ** 2))


def phi_objective(A: PCMatrix, p) -> float:
    """Log-domain form of the objective: sum over pairs i<j of both orientations."""
    t = _point_array(p)
    if t.size != A.n:
        raise DimensionMismatch(f"log point of size {t.size} vs n={A.n}")
    iu, ju, a = _pair_view(A)
    x = t[iu] - t[ju]
    return float(np.sum((np.exp(x) - a) ** 2 + (np.exp(-x) - 1.0 / a) ** 2))


def phi_gradient(A: PCMatrix, p) -> np.ndarray:
    """Gradient of the log-domain objective, projected onto the sum-zero hyperplane."""
    t = _point_array(p)
    if t.size != A.n:
        raise DimensionMismatch(f"log point of size {t.size} vs n={A.n}")
    iu, ju, a = _pair_view(A)
    x = t[iu] - t[ju]
    ex = np.exp(x)
    emx = np.exp(-x)
    fp = 2.0 * (ex - a) * ex - 2.0 * (emx - 1.0 / a) * emx
    g = np.zeros(A.n)
    np.add.at(g, iu, fp)
    np.add.at(g, ju, -fp)
    return g - g.mean()


def phi_hessian(A: PCMatrix, p) -> np.ndarray:
    """Full-space Hessian of the log-domain objective (before projection)."""
    t = _point_array(p)
    iu, ju, a = _pair_view(A)
    x = t[iu] - t[ju]
    ex = np.exp(x)
    emx = np.exp(-x)
    fpp = 2.0 * ex * (2.0 * ex - a) + 2.0 * emx * (2.0 * emx - 1.0 / a)
    H = np.zeros((A.n, A.n))
    np.add.at(H, (iu, iu), fpp)
    np.add.at(H, (ju, ju), fpp)
    np.add.at(H, (iu, ju), -fpp)
    np.add.at(H, (ju, iu), -fpp)
    return H


@lru_cache(maxsize=64)
def _hyperplane_basis(n: int) -> np.ndarray:
    """Fixed orthonormal basis of the sum-zero subspace (Helmert columns)."""
    B = np.zeros((n, n - 1))
    for k in range(1, n):
        B[:k, k - 1] = 1.0
        B[k, k - 1] = -float(k)
        B[:, k - 1] /= math.sqrt(k * (k + 1))
    B.flags.writeable = False
    return B


def _escape_direction(B: np.ndarray, H: np.ndarray):
    """Most-negative-curvature direction at a gradient-zero point, or None.

    Symmetric matrices (e.g. perfectly cyclic judgments) make the uniform
    start an exact stationary point that is a saddle, not a minimum; a first
    order test alone would accept it.
    """
    Hr = B.T @ H @ B
    evals, evecs = np.linalg.eigh(Hr)
    if evals[0] >= -1e-8 * max(1.0, abs(evals[-1])):
        return None
    return B @ evecs[:, 0]


def _newton_descend(A: PCMatrix, t0: np.ndarray, opts: SolveOptions, trace: list | None = None):
    """Damped Newton on the hyperplane from one start.

    Returns (t, objective, iterations, converged). Convergence requires a
    small projected gradient and a positive-semidefinite reduced Hessian;
    saddles are escaped along their negative-curvature direction. The line
    search never accepts an increase, so objective values are nonincreasing;
    ``trace`` (if given) receives the objective after every accepted step.
    """
    pobj = _PairObjective(A)
    B = _hyperplane_basis(A.n)
    t = t0 - t0.mean()
    val = pobj.value(t)
    if trace is not None:
        trace.append(val)
    converged = False
    it = 0
    for it in range(1, opts.max_iters + 1):
        val, g, H = pobj.value_grad_hess(t)
        d = None
        slope = 0.0
        try:
            Hr = B.T @ H @ B
            c = np.linalg.cholesky(Hr)
            dr = np.linalg.solve(c.T, np.linalg.solve(c, -(B.T @ g)))
            d = B @ dr
            slope = float(d @ g)
            if slope >= 0.0:  # not a descent direction, Hessian too ill-conditioned
                d = None
        except np.linalg.LinAlgError:
            d = None
        # The objective cannot be resolved below ~eps*|val| in float64, so a
        # Newton decrement under that floor means the iterate is numerically
        # stationary even if the gradient noise floor sits above grad_tol.
        at_float_floor = d is not None and -slope <= 4.0 * np.finfo(float).eps * abs(val)
        if np.abs(g).max() <= opts.grad_tol or at_float_floor:
            esc = _escape_direction(B, H)
            if esc is None:
                converged = True
                break
            delta = 1e-2
            moved = False
            for _ in range(_MAX_BACKTRACKS):
                cand = t + delta * esc
                cand -= cand.mean()
                cval = pobj.value(cand)
                if cval < val:
                    t, val = cand, cval
                    moved = True
                    if trace is not None:
                        trace.append(val)
                    break
                delta *= 0.5
            if not moved:
                break  # curvature too weak to exploit at float precision
            continue
        if d is None:
            d = -g / max(1.0, float(np.abs(g).max()))  # unit-capped descent step
            slope = float(d @ g)
        alpha = 1.0
        accepted = False
        for _ in range(_MAX_BACKTRACKS):
            cand = t + alpha * d
            cand -= cand.mean()
            cval = pobj.value(cand)
            if cval <= val + ARMIJO_C1 * alpha * slope:
                t, val = cand, cval
                accepted = True
                if trace is not None:
                    trace.append(val)
                break
            alpha *= ARMIJO_BACKTRACK
        if not accepted:
            break  # stalled at numerical precision
    return t, val, it, converged


def _resolve_starts(A: PCMatrix, opts: SolveOptions) -> int:
    if opts.starts is not None:
        return opts.starts
    return 1 if certify(A).admissible else 20


def _start_points(A: PCMatrix, n_starts: int, seed: int) -> list[np.ndarray]:
    """First start is the uniform point; the rest are uniform in the data's log range."""
    points = [np.zeros(A.n)]
    if n_starts > 1:
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        span = math.log(A.max_entry()) or 1.0
        for _ in range(n_starts - 1):
            t = rng.uniform(-span, span, size=A.n)
            points.append(t - t.mean())
    return points


def _cluster_minima(found, distinct_tol: float) -> list[tuple[np.ndarray, float]]:
    """Greedy clustering of minimizers by sup-distance in t, best objective first."""
    found = sorted(found, key=lambda m: (m[1], tuple(m[0])))
    reps: list[tuple[np.ndarray, float]] = []
    for t, val in found:
        if all(np.abs(t - rt).max() > distinct_tol for rt, _ in reps):
            reps.append((t, val))
    return reps


def _multistart(A: PCMatrix, opts: SolveOptions):
    n_starts = _resolve_starts(A, opts)
    results = []
    for t0 in _start_points(A, n_starts, opts.start_seed):
        results.append(_newton_descend(A, t0, opts))
    converged = [(t, v, i) for t, v, i, ok in results if ok]
    failed = len(results) - len(converged)
    pool = converged if converged else [(t, v, i) for t, v, i, _ in results]
    reps = _cluster_minima([(t, v) for t, v, _ in pool], opts.distinct_tol)
    best_t, best_val = reps[0]
    best_iters = min(i for t, v, i in pool if v == best_val and np.array_equal(t, best_t))
    return reps, best_t, best_val, best_iters, len(results), failed


def _both_normalizations(w: np.ndarray):
    w_sum = w / w.sum()
    w_prod = w / np.exp(np.mean(np.log(w)))
    return w_sum, w_prod


def solve_lsm(A: PCMatrix, opts: SolveOptions | None = None) -> SolveResult:
    """Minimize the direct least-squares objective over positive weights.

    Runs multi-start damped Newton in log coordinates and clusters the
    minimizers; ``unique`` is True when every start collapsed to one cluster.
    For matrices certified admissible the single cluster is the global
    minimum. Non-convergence is reported through ``converged``, never raised.
    """
    opts = opts or SolveOptions()
    reps, best_t, best_val, iters, total, failed = _multistart(A, opts)
    w_sum, w_prod = _both_normalizations(np.exp(best_t))
    warnings = ()
    if failed:
        warnings = (f"{failed} of {total} starts did not reach grad_tol within max_iters",)
    return SolveResult(
        method=Method.LSM,
        w_sum=w_sum,
        w_prod=w_prod,
        objective=objective_lsm(A, w_sum),
        iterations=iters,
        converged=failed < total,
        minima=tuple(Minimum(LogPoint(t - t.mean()), v) for t, v in reps),
        unique=len(reps) == 1,
        warnings=warnings,
        stats={"starts_total": total, "starts_converged": total - failed},
    )


def census_local_minima(A: PCMatrix, opts: SolveOptions | None = None) -> tuple[Minimum, ...]:
    """Distinct local minimizers found across starts, best objective first.

    Starts that failed to converge are excluded from the census; their count
    is available from ``solve_lsm(A, opts).stats``.
    """
    opts = opts or SolveOptions()
    n_starts = _resolve_starts(A, opts)
    found = []
    for t0 in _start_points(A, n_starts, opts.start_seed):
        t, v, _, ok = _newton_descend(A, t0, opts)
        if ok:
            found.append((t, v))
    reps = _cluster_minima(found, opts.distinct_tol)
    return tuple(Minimum(LogPoint(t - t.mean()), v) for t, v in reps)


def _wlsm_matrix(A: PCMatrix) -> np.ndarray:
    """Quadratic form Q with sum_ij (a_ij w_j - w_i)^2 = w^T Q w."""
    a = A.to_array()
    n = A.n
    Q = -(a + a.T)
    Q[np.diag_indices(n)] = np.sum(a * a, axis=0) + n - 2.0
    return Q


def _wlsm_spot_check(Q: np.ndarray, w: np.ndarray, trials: int = 1000) -> None:
    """The KKT solution must beat random feasible perturbations of itself."""
    rng = np.random.default_rng(np.random.SeedSequence(2025))
    base = float(w @ Q @ w)
    d = rng.standard_normal((trials, w.size))
    d -= d.mean(axis=1, keepdims=True)  # keep sum(w) = 1
    eps = 10.0 ** rng.uniform(-6, -1, size=(trials, 1)) * float(np.abs(w).max())
    cands = w + eps * d
    feasible = np.all(cands > 0.0, axis=1)
    values = np.einsum("ki,ij,kj->k", cands, Q, cands)
    if np.any(values[feasible] < base - 1e-12 * max(1.0, abs(base))):
        raise PcxError("weighted-least-squares spot check failed: a perturbation beat the KKT solution")


def solve_wlsm(A: PCMatrix) -> SolveResult:
    """Weighted least squares via its KKT linear system.

    The problem is an equality-constrained convex quadratic, so the linear
    system is exact; one step of iterative refinement keeps the stationarity
    residual at machine precision. A solution component <= 0 is reported as a
    warning (the linear system can leave the open cone for wild inputs).
    """
    n = A.n
    Q = _wlsm_matrix(A)
    M = np.zeros((n + 1, n + 1))
    M[:n, :n] = 2.0 * Q
    M[:n, n] = -1.0
    M[n, :n] = 1.0
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    try:
        sol = np.linalg.solve(M, rhs)
        sol += np.linalg.solve(M, rhs - M @ sol)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"WLSM KKT system is singular: {exc}") from exc
    w, lam = sol[:n], float(sol[n])
    residual = float(np.abs(2.0 * Q @ w - lam).max())
    warnings = []
    w_sum = w / w.sum()
    w_prod = None
    objective = math.nan
    if np.all(w > 0.0):
        _wlsm_spot_check(Q, w_sum)
        w_sum, w_prod = _both_normalizations(w)
        objective = objective_lsm(A, w_sum)
    else:
        warnings.append("solution has non-positive components; weights left the feasible cone")
    return SolveResult(
        method=Method.WLSM,
        w_sum=w_sum,
        w_prod=w_prod,
        objective=objective,
        iterations=0,
        converged=True,
        warnings=tuple(warnings),
        stats={"kkt_multiplier": lam, "stationarity_residual": residual, "wlsm_objective": float(w_sum @ Q @ w_sum)},
    )


def solve_llsm(A: PCMatrix) -> SolveResult:
    """Logarithmic least squares: weights are the row geometric means."""
    logs = np.log(A.to_array())
    t = logs.mean(axis=1)
    t -= t.mean()  # product-1 normalization, exact in log space
    w_sum, w_prod = _both_normalizations(np.exp(t))
    iu, ju = np.triu_indices(A.n, 1)
    log_obj = float(np.sum((logs[iu, ju] - (t[iu] - t[ju])) ** 2))
    return SolveResult(
        method=Method.LLSM,
        w_sum=w_sum,
        w_prod=w_prod,
        objective=objective_lsm(A, w_sum),
        iterations=0,
        converged=True,
        stats={"log_objective": log_obj},
    )


def solve_evm(A: PCMatrix, tol: float = 1e-12, max_iters: int = 10000) -> SolveResult:
    """Principal eigenvector by power iteration from the uniform vector.

    The eigenvalue is estimated by the Rayleigh-style ratio sum(Aw)/sum(w);
    for a reciprocal matrix it is >= n with equality iff consistent.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = A.to_array()
    w = np.full(A.n, 1.0 / A.n)
    lam = float(A.n)
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        v = a @ w
        lam = float(v.sum())  # w sums to 1
        v /= v.sum()
        if np.abs(v - w).max() <= tol:
            w = v
            converged = True
            break
        w = v
    lam = float((a @ w).sum())
    residual = float(np.abs(a @ w - lam * w).max())
    w_sum, w_prod = _both_normalizations(w)
    return SolveResult(
        method=Method.EVM,
        w_sum=w_sum,
        w_prod=w_prod,
        objective=objective_lsm(A, w_sum),
        iterations=it,
        converged=converged,
        warnings=() if converged else (f"power iteration did not converge in {max_iters} iterations",),
        stats={"eigenvalue": lam, "eigen_residual": residual},
    )


def solve_all(A: PCMatrix, opts: SolveOptions | None = None) -> dict[Method, SolveResult]:
    """All four methods on one matrix."""
    return {
        Method.LSM: solve_lsm(A, opts),
        Method.WLSM: solve_wlsm(A),
        Method.LLSM: solve_llsm(A),
        Method.EVM: solve_evm(A),
    }
