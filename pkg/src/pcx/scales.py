"""Judgment scales, cross-scale mapping, Monte-Carlo harness, and the
search for matrices with multiple least-squares minima.

A scale is a finite set of admissible values >= 1 (reciprocals implied). The
affine cross-scale map is demonstration-grade: there is no canonical mapping
between scales, this one just preserves endpoints and spacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .convexity import certify
from .errors import ConfigError, NonPositiveEntry, OutOfScale
from .matrix import PCMatrix, build_matrix, from_weights, inconsistency
from .oracle import GridSpec, grid_local_minima
from .solvers import Method, SolveOptions, census_local_minima, solve_all

_REL_MATCH = 1e-9


@dataclass(frozen=True)
class Scale:
    """Ordered admissible values, starting at 1."""

    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals or vals[0] != 1.0:
            raise ConfigError(f"scale {self.name!r} must start at 1")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ConfigError(f"scale {self.name!r} values must be strictly ascending")
        object.__setattr__(self, "values", vals)

    @property
    def top(self) -> float:
        return self.values[-1]

    def admissible_values(self) -> tuple[float, ...]:
        """All values the scale admits: reciprocals ascending, then the values."""
        recip = tuple(1.0 / v for v in reversed(self.values[1:]))
        return recip + self.values

    def canonical(self, value: float) -> float | None:
        """Match ``value`` against the admissible set (relative 1e-9), or None."""
        if not (math.isfinite(value) and value > 0.0):
            return None
        for v in self.admissible_values():
            if abs(value - v) <= _REL_MATCH * v:
                return v
        return None


def builtin_scales() -> tuple[Scale, ...]:
    return (
        Scale("1-3", (1.0, 2.0, 3.0)),
        Scale("1-3-half", (1.0, 1.5, 2.0, 2.5, 3.0)),
        Scale("1-5", (1.0, 2.0, 3.0, 4.0, 5.0)),
        Scale("1-9", tuple(float(v) for v in range(1, 10))),
    )


def scale_by_name(name: str) -> Scale:
    for s in builtin_scales():
        if s.name == name:
            return s
    valid = ", ".join(s.name for s in builtin_scales())
    raise ConfigError(f"unknown scale {name!r}; valid scales: {valid}")


def map_scale(v: float, frm: Scale, to: Scale) -> float:
    """Affine map of a judgment between scales, endpoints to endpoints.

    Values in [1, frm.top] map by m(v) = 1 + (v-1)*(to.top-1)/(frm.top-1);
    reciprocals map as 1/m(1/v). Demonstration-grade by design.
    """
    if not (math.isfinite(v) and v > 0.0):
        raise NonPositiveEntry(f"judgment must be finite and positive, got {v!r}")
    if v < 1.0:
        return 1.0 / map_scale(1.0 / v, frm, to)
    if v > frm.top * (1.0 + 1e-12):
        raise OutOfScale(f"{v!r} exceeds the top of scale {frm.name} ({frm.top})")
    return 1.0 + (min(v, frm.top) - 1.0) * (to.top - 1.0) / (frm.top - 1.0)


def snap_to_scale(v: float, scale: Scale) -> float:
    """Nearest admissible value; reciprocals snap in the reciprocal domain.

    Exact ties resolve to the smaller scale value.
    """
    if not (math.isfinite(v) and v > 0.0):
        raise NonPositiveEntry(f"judgment must be finite and positive, got {v!r}")
    if v < 1.0:
        return 1.0 / snap_to_scale(1.0 / v, scale)
    best = min(scale.values, key=lambda s: (abs(v - s), s))
    return best


def snap_matrix(A: PCMatrix, scale: Scale) -> PCMatrix:
    return build_matrix(A.n, [snap_to_scale(v, scale) for v in A.upper], A.labels)


@dataclass(frozen=True)
class MonteCarloConfig:
    scale: Scale
    n: int = 4
    trials: int = 100
    perturb_delta: float = 0.5
    snap: bool = True
    seed: int = 0

    def __post_init__(self):
        if not (2 <= self.n <= 8):
            raise ConfigError(f"n must be in [2, 8], got {self.n}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.perturb_delta < 0:
            raise ConfigError(f"perturb_delta must be >= 0, got {self.perturb_delta}")

    def as_dict(self) -> dict:
        return {
            "scale": self.scale.name,
            "n": self.n,
            "trials": self.trials,
            "perturb_delta": self.perturb_delta,
            "snap": self.snap,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    inconsistency: float
    acceptable: bool
    certified_unique: bool
    lsm_objective: float
    clusters: int
    unique: bool
    max_entry: float
    weight_disagreement: float


#: Column order of the per-trial CSV. Fixed; do not reorder.
TRIAL_COLUMNS = (
    "trial",
    "inconsistency",
    "acceptable",
    "certified_unique",
    "lsm_objective",
    "clusters",
    "unique",
    "max_entry",
    "weight_disagreement",
)


@dataclass(frozen=True)
class MonteCarloReport:
    config: MonteCarloConfig
    records: tuple[TrialRecord, ...]
    mean_inconsistency: float = field(init=False)
    max_inconsistency: float = field(init=False)
    fraction_acceptable: float = field(init=False)
    fraction_unique: float = field(init=False)

    def __post_init__(self):
        vals = [r.inconsistency for r in self.records]
        k = len(self.records)
        object.__setattr__(self, "mean_inconsistency", sum(vals) / k)
        object.__setattr__(self, "max_inconsistency", max(vals))
        object.__setattr__(self, "fraction_acceptable", sum(r.acceptable for r in self.records) / k)
        object.__setattr__(self, "fraction_unique", sum(r.unique for r in self.records) / k)

    def csv_lines(self) -> list[str]:
        lines = [",".join(TRIAL_COLUMNS)]
        for r in self.records:
            lines.append(
                ",".join(
                    repr(v) if isinstance(v, float) else str(v)
                    for v in (getattr(r, c) for c in TRIAL_COLUMNS)
                )
            )
        return lines

    def aggregate_dict(self) -> dict:
        return {
            "config": self.config.as_dict(),
            "trials": len(self.records),
            "mean_inconsistency": self.mean_inconsistency,
            "max_inconsistency": self.max_inconsistency,
            "fraction_acceptable": self.fraction_acceptable,
            "fraction_unique": self.fraction_unique,
        }


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def _weight_disagreement(results) -> float:
    ws = [r.w_sum for r in results.values() if r.w_prod is not None]
    worst = 0.0
    for i in range(len(ws)):
        for j in range(i + 1, len(ws)):
            worst = max(worst, float(np.abs(ws[i] - ws[j]).max()))
    return worst


def run_monte_carlo(cfg: MonteCarloConfig) -> MonteCarloReport:
    """Per trial: consistent matrix from a random weight vector, multiplicative
    log-space perturbation, optional snapping to the scale, then the full
    analysis pipeline. Bit-reproducible for a fixed (seed, config): every
    trial derives its own RNG stream from (seed, trial index).
    """
    records = []
    span = math.log(cfg.scale.top)
    for k in range(cfg.trials):
        rng = _trial_rng(cfg.seed, k)
        w = np.exp(rng.uniform(-span, span, size=cfg.n))
        A = from_weights(w)
        upper = A.upper * np.exp(rng.uniform(-cfg.perturb_delta, cfg.perturb_delta, size=A.upper.size))
        A = build_matrix(cfg.n, upper)
        if cfg.snap:
            A = snap_matrix(A, cfg.scale)
        inc = inconsistency(A)
        cert = certify(A)
        opts = SolveOptions(start_seed=int(rng.integers(2**63)))
        results = solve_all(A, opts)
        lsm = results[Method.LSM]
        records.append(
            TrialRecord(
                trial=k,
                inconsistency=inc.global_value,
                acceptable=inc.acceptable,
                certified_unique=cert.admissible,
                lsm_objective=lsm.objective,
                clusters=len(lsm.minima),
                unique=bool(lsm.unique),
                max_entry=A.max_entry(),
                weight_disagreement=_weight_disagreement(results),
            )
        )
    return MonteCarloReport(cfg, tuple(records))


def search_counterexample(lambda_min: float, budget: int, seed: int = 0) -> PCMatrix | None:
    """Random search for a 3x3 matrix with multiple least-squares local minima.

    Candidates have max element in [lambda_min, 2*lambda_min]; a candidate
    counts as found when the exhaustive grid scan shows >= 2 basins and the
    Newton multi-start census confirms >= 2 distinct converged minimizers.
    Returns None when the budget is exhausted, which is a legitimate outcome
    (e.g. for windows inside the certified-unique band).
    """
    if budget < 1:
        raise ConfigError(f"budget must be >= 1, got {budget}")
    if not (lambda_min > 0 and math.isfinite(lambda_min)):
        raise ConfigError(f"lambda_min must be positive, got {lambda_min}")
    if 2.0 * lambda_min < 1.0:
        return None  # every reciprocal matrix has max element >= 1
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    span = math.log(2.0 * lambda_min)
    spec = GridSpec()
    for k in range(budget):
        while True:
            upper = np.exp(rng.uniform(-span, span, size=3))
            m = max(upper.max(), (1.0 / upper).max())
            if lambda_min <= m <= 2.0 * lambda_min:
                break
        A = build_matrix(3, upper)
        if len(grid_local_minima(A, spec)) < 2:
            continue
        opts = SolveOptions(starts=20, start_seed=int(rng.integers(2**63)))
        if len(census_local_minima(A, opts)) >= 2:
            return A
    return None
