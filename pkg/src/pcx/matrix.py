"""Reciprocal pairwise-comparison matrices and the distance-based inconsistency.

A judgment matrix stores only its upper triangle, so reciprocity
(``a_ji = 1/a_ij``) holds by construction rather than by tolerance. The
distance-based inconsistency of a matrix is the maximum over all index triads
of ``min(|1 - a_ij/(a_ik*a_kj)|, |1 - a_ik*a_kj/a_ij|)``; it is 0 exactly for
consistent matrices and always below 1.

All indices in this module are 0-based. The CLI renders them 1-based for
humans.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, NonPositiveEntry, TooSmall

#: Acceptability heuristic for the global inconsistency ("off by one grade or
#: less"). Reports compare against this by default; callers may override.
ACCEPTABILITY_THRESHOLD = 1.0 / 3.0

CONSISTENCY_TOL = 1e-10


class Normalization(Enum):
    SUM_ONE = "sum_one"
    PRODUCT_ONE = "product_one"


def _as_positive_array(values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{what} must be one-dimensional, got shape {arr.shape}")
    if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 0.0)):
        bad = arr[~(np.isfinite(arr) & (arr > 0.0))][0]
        raise NonPositiveEntry(f"{what} must be finite and positive, got {bad!r}")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class WeightVector:
    """Positive priority vector under an explicit normalization."""

    w: np.ndarray
    normalization: Normalization

    def __post_init__(self):
        arr = _as_positive_array(self.w, "weights")
        if arr.size < 2:
            raise TooSmall("need at least 2 weights")
        object.__setattr__(self, "w", arr)
        if self.normalization is Normalization.SUM_ONE:
            if abs(arr.sum() - 1.0) > 1e-12:
                raise DimensionMismatch(f"weights must sum to 1, got {arr.sum()!r}")
        else:
            prod = float(np.prod(arr))
            if abs(prod - 1.0) > 1e-12:
                raise DimensionMismatch(f"weight product must be 1, got {prod!r}")

    @property
    def n(self) -> int:
        return self.w.size

    @staticmethod
    def sum_one(values) -> "WeightVector":
        """Scale ``values`` to sum 1 and wrap them."""
        arr = _as_positive_array(values, "weights")
        return WeightVector(arr / arr.sum(), Normalization.SUM_ONE)

    @staticmethod
    def product_one(values) -> "WeightVector":
        """Scale ``values`` to product 1 (geometric-mean division) and wrap them."""
        arr = _as_positive_array(values, "weights")
        g = np.exp(np.mean(np.log(arr)))
        return WeightVector(arr / g, Normalization.PRODUCT_ONE)

    def as_sum_one(self) -> "WeightVector":
        if self.normalization is Normalization.SUM_ONE:
            return self
        return WeightVector.sum_one(self.w)

    def as_product_one(self) -> "WeightVector":
        if self.normalization is Normalization.PRODUCT_ONE:
            return self
        return WeightVector.product_one(self.w)


@dataclass(frozen=True)
class PCMatrix:
    """n x n positive reciprocal judgment matrix, stored as its upper triangle.

    ``upper`` holds the entries a_ij for i < j in row-major order; the diagonal
    is 1 and the lower triangle is read as exact reciprocals.
    """

    n: int
    upper: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 2:
            raise TooSmall(f"need at least 2 alternatives, got n={self.n}")
        arr = _as_positive_array(self.upper, "matrix entries")
        expected = self.n * (self.n - 1) // 2
        if arr.size != expected:
            raise DimensionMismatch(
                f"upper triangle of an {self.n}x{self.n} matrix needs {expected} entries, got {arr.size}"
            )
        object.__setattr__(self, "upper", arr)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.n:
                raise DimensionMismatch(f"expected {self.n} labels, got {len(labels)}")
            object.__setattr__(self, "labels", labels)

    def _upper_index(self, i: int, j: int) -> int:
        # row-major upper triangle: row i starts at i*n - i*(i+1)/2 - i
        return i * (2 * self.n - i - 1) // 2 + (j - i - 1)

    def entry(self, i: int, j: int) -> float:
        """a_ij with 0-based indices; the lower triangle is 1/a_ji exactly."""
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"index ({i},{j}) out of range for n={self.n}")
        if i == j:
            return 1.0
        if i < j:
            return float(self.upper[self._upper_index(i, j)])
        return 1.0 / float(self.upper[self._upper_index(j, i)])

    def to_array(self) -> np.ndarray:
        """Dense n x n array (diagonal 1, lower triangle reciprocal)."""
        a = np.ones((self.n, self.n), dtype=np.float64)
        iu, ju = np.triu_indices(self.n, 1)
        a[iu, ju] = self.upper
        a[ju, iu] = 1.0 / self.upper
        return a

    def max_entry(self) -> float:
        """Largest entry of the full matrix (reciprocals included)."""
        return float(max(self.upper.max(), (1.0 / self.upper).max(), 1.0))

    def pairs(self):
        """Iterate (i, j, a_ij) over the upper triangle."""
        k = 0
        for i in range(self.n - 1):
            for j in range(i + 1, self.n):
                yield i, j, float(self.upper[k])
                k += 1

    def permuted(self, perm) -> "PCMatrix":
        """Relabel alternatives: row/column i of the result is perm[i] of self."""
        perm = list(perm)
        if sorted(perm) != list(range(self.n)):
            raise DimensionMismatch(f"not a permutation of 0..{self.n - 1}: {perm}")
        entries = []
        for i in range(self.n - 1):
            for j in range(i + 1, self.n):
                entries.append(self.entry(perm[i], perm[j]))
        labels = tuple(self.labels[p] for p in perm) if self.labels else None
        return PCMatrix(self.n, np.array(entries), labels)


@dataclass(frozen=True)
class TriadReport:
    """One triad (i, k, j), its entries, and its inconsistency value."""

    i: int
    k: int
    j: int
    a_ik: float
    a_kj: float
    a_ij: float
    value: float

    def as_dict(self) -> dict:
        return {
            "i": self.i,
            "k": self.k,
            "j": self.j,
            "a_ik": self.a_ik,
            "a_kj": self.a_kj,
            "a_ij": self.a_ij,
            "value": self.value,
        }


@dataclass(frozen=True)
class InconsistencyReport:
    """Global distance-based inconsistency with its worst triad."""

    global_value: float
    worst: TriadReport | None
    acceptable: bool
    threshold: float = ACCEPTABILITY_THRESHOLD
    all_triads: tuple[TriadReport, ...] | None = field(default=None, repr=False)

    def as_dict(self, include_all: bool = False) -> dict:
        d = {
            "global_value": self.global_value,
            "acceptable": self.acceptable,
            "threshold": self.threshold,
            "worst": self.worst.as_dict() if self.worst else None,
        }
        if include_all and self.all_triads is not None:
            d["all_triads"] = [t.as_dict() for t in self.all_triads]
        return d


def build_matrix(n: int, upper_entries, labels=None) -> PCMatrix:
    """Build a PCMatrix from its upper-triangle entries (row-major, i < j)."""
    return PCMatrix(int(n), np.asarray(upper_entries, dtype=np.float64), labels)


def from_weights(w) -> PCMatrix:
    """Consistent matrix a_ij = w_i / w_j generated by a positive weight vector."""
    arr = w.w if isinstance(w, WeightVector) else _as_positive_array(w, "weights")
    n = arr.size
    if n < 2:
        raise TooSmall("need at least 2 weights")
    iu, ju = np.triu_indices(n, 1)
    return PCMatrix(n, arr[iu] / arr[ju])


@lru_cache(maxsize=64)
def _triad_indices(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Index arrays (i, k, j) of all triads i < k < j, lexicographic order."""
    combos = list(itertools.combinations(range(n), 3))
    if not combos:
        empty = np.empty(0, dtype=np.intp)
        return empty, empty, empty
    arr = np.array(combos, dtype=np.intp)
    return arr[:, 0], arr[:, 1], arr[:, 2]


def triad_inconsistency(a_ik: float, a_ij: float, a_kj: float) -> float:
    """Inconsistency of a single triad, in [0, 1).

    The middle argument is the direct judgment a_ij; the other two form the
    indirect path a_ik * a_kj.
    """
    for v in (a_ik, a_ij, a_kj):
        if not (math.isfinite(v) and v > 0.0):
            raise NonPositiveEntry(f"triad entries must be finite and positive, got {v!r}")
    ratio = a_ij / (a_ik * a_kj)
    return min(abs(1.0 - ratio), abs(1.0 - 1.0 / ratio))


def is_consistent(A: PCMatrix, tol: float = CONSISTENCY_TOL) -> bool:
    """True iff a_ik * a_kj == a_ij for every triad, relatively within ``tol``."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    if A.n < 3:
        return True
    a = A.to_array()
    i, k, j = _triad_indices(A.n)
    direct = a[i, j]
    indirect = a[i, k] * a[k, j]
    return bool(np.all(np.abs(indirect - direct) <= tol * np.maximum(direct, indirect)))


def inconsistency(
    A: PCMatrix,
    include_all: bool = False,
    threshold: float = ACCEPTABILITY_THRESHOLD,
) -> InconsistencyReport:
    """Global distance-based inconsistency with worst-triad localization.

    The worst triad is the argmax; ties resolve to the lexicographically
    smallest (i, k, j). For n = 2 there are no triads and the value is 0.
    """
    if A.n < 3:
        return InconsistencyReport(0.0, None, True, threshold, () if include_all else None)
    a = A.to_array()
    i, k, j = _triad_indices(A.n)
    direct = a[i, j]
    indirect = a[i, k] * a[k, j]
    ratio = direct / indirect
    values = np.minimum(np.abs(1.0 - ratio), np.abs(1.0 - 1.0 / ratio))
    best = int(np.argmax(values))  # first occurrence = lexicographic winner

    def report(idx: int) -> TriadReport:
        ii, kk, jj = int(i[idx]), int(k[idx]), int(j[idx])
        return TriadReport(ii, kk, jj, float(a[ii, kk]), float(a[kk, jj]), float(a[ii, jj]), float(values[idx]))

    all_triads = None
    if include_all:
        order = sorted(range(values.size), key=lambda idx: (-values[idx], (int(i[idx]), int(k[idx]), int(j[idx]))))
        all_triads = tuple(report(idx) for idx in order)
    gv = float(values[best])
    return InconsistencyReport(gv, report(best), gv <= threshold, threshold, all_triads)
