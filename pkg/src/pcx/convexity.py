"""Convexity analysis of the log-domain least-squares objective.

The pair objective ``f_a(t) = (e^t - a)^2 + (e^{-t} - 1/a)^2`` is strictly
convex on the whole line exactly when the judgment ``a`` lies in
``[1/a0, a0]``, where ``a0 = sqrt((11 + 5*sqrt(5))/2) ~ 3.330191``. A matrix
whose entries all lie in that band therefore has a strictly convex
least-squares problem on the sum-zero log hyperplane, hence a unique
minimizer that local search is guaranteed to find.

The band boundary comes from the root curves of f_a'' viewed as a quadratic
in ``a``: for w = e^x the roots are phi(w) and psi(w), psi has its single
minimum at w0 = sqrt((1 + sqrt(5))/2), and a0 = psi(w0). Entries outside the
band do not prove non-uniqueness (the honest verdict is UNKNOWN): the true
threshold is somewhere between a0 and roughly 3.6, above which 3x3
counterexamples with multiple local minima exist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NonPositiveParameter
from .matrix import PCMatrix

__all__ = [
    "CONSTANTS",
    "ConvexityConstants",
    "ConvexityReport",
    "Verdict",
    "certify",
    "compute_a0",
    "compute_a0_quartic",
    "compute_w0",
    "curve_table",
    "f_a",
    "f_a_second",
    "phi",
    "psi",
    "psi_prime_scaled",
]


def compute_a0() -> float:
    """Convexity threshold sqrt((11 + 5*sqrt(5))/2)."""
    return math.sqrt((11.0 + 5.0 * math.sqrt(5.0)) / 2.0)


def compute_a0_quartic() -> float:
    """The same threshold via its quartic form ((123 + 55*sqrt(5))/2)^(1/4)."""
    return ((123.0 + 55.0 * math.sqrt(5.0)) / 2.0) ** 0.25


def compute_w0() -> float:
    """Location of the minimum of psi: sqrt((1 + sqrt(5))/2)."""
    return math.sqrt((1.0 + math.sqrt(5.0)) / 2.0)


def _check_positive(a: float, name: str = "a") -> float:
    a = float(a)
    if not (math.isfinite(a) and a > 0.0):
        raise NonPositiveParameter(f"{name} must be finite and positive, got {a!r}")
    return a


def f_a(t, a):
    """Pair objective (e^t - a)^2 + (e^{-t} - 1/a)^2; zero only at t = log a."""
    a = _check_positive(a)
    t = np.asarray(t, dtype=np.float64)
    et = np.exp(t)
    emt = np.exp(-t)
    out = (et - a) ** 2 + (emt - 1.0 / a) ** 2
    return float(out) if out.ndim == 0 else out

def f_a_second(x, a):
    """Second derivative of f_a: -2*(a^2 e^x - 2a(e^{-2x} + e^{2x}) + e^{-x})/a."""
    a = _check_positive(a)
    x = np.asarray(x, dtype=np.float64)
    ex = np.exp(x)
    emx = np.exp(-x)
    out = -2.0 * (a * a * ex - 2.0 * a * (emx * emx + ex * ex) + emx) / a
    return float(out) if out.ndim == 0 else out


def psi(w):
    """Upper root curve (1 + w^4 + sqrt(1 + w^4 + w^8)) / w^3."""
    w = _as_positive(w)
    w4 = w**4
    out = (1.0 + w4 + np.sqrt(1.0 + w4 * (1.0 + w4))) / w**3
    return float(out) if out.ndim == 0 else out


def phi(w):
    """Lower root curve (1 + w^4 - sqrt(1 + w^4 + w^8)) / w^3.

    Evaluated in the rationalized form w / (1 + w^4 + sqrt(1 + w^4 + w^8)):
    the textbook form cancels catastrophically for large w.
    """
    w = _as_positive(w)
    w4 = w**4
    out = w / (1.0 + w4 + np.sqrt(1.0 + w4 * (1.0 + w4)))
    return float(out) if out.ndim == 0 else out


def psi_prime_scaled(w):
    """w^4 * psi'(w) = (-3 - w^4 + w^8)/sqrt(1 + w^4 + w^8) + w^4 - 3.

    Vanishes only at w0; negative below, positive above.
    """
    w = _as_positive(w)
    w4 = w**4
    w8 = w4 * w4
    out = (-3.0 - w4 + w8) / np.sqrt(1.0 + w4 + w8) + w4 - 3.0
    return float(out) if out.ndim == 0 else out


def _as_positive(w):
    w = np.asarray(w, dtype=np.float64)
    if w.size and (not np.all(np.isfinite(w)) or np.any(w <= 0.0)):
        raise NonPositiveParameter("w must be finite and positive")
    return w


@dataclass(frozen=True)
class ConvexityConstants:
    """Band constants, computed from closed forms at import (never literals)."""

    a0: float
    a1: float  # documented upper bound on the true threshold; not used to certify
    w0: float


CONSTANTS = ConvexityConstants(a0=compute_a0(), a1=3.6, w0=compute_w0())

# Closed-form self-test: the quartic and square-root forms must agree, and a0
# must sit at the minimum of psi.
assert abs(compute_a0() - compute_a0_quartic()) <= 1e-12 * compute_a0()
assert abs(psi(CONSTANTS.w0) - CONSTANTS.a0) <= 1e-9


class Verdict(Enum):
    UNIQUE_GUARANTEED = "unique_guaranteed"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ConvexityReport:
    """Entrywise admissibility of a matrix against [1/a0, a0].

    ``violations`` lists upper-triangle positions (i, j, a_ij) outside the
    band, 0-based; each offending pair appears once (its reciprocal is out of
    band exactly when the entry is).
    """

    max_entry: float
    admissible: bool
    violations: tuple[tuple[int, int, float], ...]
    verdict: Verdict

    def as_dict(self) -> dict:
        return {
            "a0": CONSTANTS.a0,
            "max_entry": self.max_entry,
            "admissible": self.admissible,
            "violations": [{"i": i, "j": j, "value": v} for i, j, v in self.violations],
            "verdict": self.verdict.value,
        }


def certify(A: PCMatrix) -> ConvexityReport:
    """Certify unique least-squares solvability of a judgment matrix.

    UNIQUE_GUARANTEED iff every entry lies in [1/a0, a0], endpoints included
    (at the endpoints f_a'' vanishes at a single point, which still leaves
    f_a strictly convex). Outside the band the verdict is UNKNOWN, not
    NON_UNIQUE: uniqueness may still hold up to roughly a1.
    """
    a0 = CONSTANTS.a0
    lo = 1.0 / a0
    violations = [(i, j, v) for i, j, v in A.pairs() if not (lo <= v <= a0)]
    admissible = not violations
    return ConvexityReport(
        max_entry=A.max_entry(),
        admissible=admissible,
        violations=tuple(violations),
        verdict=Verdict.UNIQUE_GUARANTEED if admissible else Verdict.UNKNOWN,
    )


def curve_table(w_min: float = 1e-2, w_max: float = 1e2, points: int = 4001) -> np.ndarray:
    """(w, phi(w), psi(w)) rows on a log-spaced grid, for plotting the band."""
    _check_positive(w_min, "w_min")
    _check_positive(w_max, "w_max")
    w = np.logspace(math.log10(w_min), math.log10(w_max), points)
    return np.column_stack([w, phi(w), psi(w)])
