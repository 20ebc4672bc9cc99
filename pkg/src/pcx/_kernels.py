"""Grid-evaluation kernels for the brute-force oracle.

These are the hot loops of the package: exhaustive evaluation of the
log-domain least-squares objective over 2-D (n=3) and 3-D (n=4) grids on the
sum-zero hyperplane. Each kernel has a numba ``@njit`` build and a pure-numpy
build producing the same values; :mod:`pcx._backend` picks between them.

Free coordinates are (t1, t2[, t3]) with the last log-weight eliminated via
t_n = -(t1 + ... + t_{n-1}).
"""

import numpy as np

from ._backend import active_backend

_JIT = None


def _jit_kernels():
    """Compile the numba kernels once per process (disk-cached by numba)."""
    global _JIT
    if _JIT is not None:
        return _JIT

    from numba import njit

    @njit(cache=True)
    def values3(a12, a13, a23, e1, e2, out):
        # t3 = -t1 - t2, so the three pair ratios are
        #   w1/w2 = e1/e2,  w1/w3 = e1^2 e2,  w2/w3 = e1 e2^2
        for i in range(e1.shape[0]):
            u = e1[i]
            for j in range(e2.shape[0]):
                v = e2[j]
                r12 = u / v
                r13 = u * u * v
                r23 = u * v * v
                d1 = r12 - a12
                d1r = 1.0 / r12 - 1.0 / a12
                d2 = r13 - a13
                d2r = 1.0 / r13 - 1.0 / a13
                d3 = r23 - a23
                d3r = 1.0 / r23 - 1.0 / a23
                out[i, j] = d1 * d1 + d1r * d1r + d2 * d2 + d2r * d2r + d3 * d3 + d3r * d3r

    @njit(cache=True)
    def min4(a12, a13, a14, a23, a24, a34, e1, e2, e3):
        best = np.inf
        bi = 0
        bj = 0
        bk = 0
        for i in range(e1.shape[0]):
            u = e1[i]
            for j in range(e2.shape[0]):
                v = e2[j]
                uv = u * v
                r12 = u / v
                for k in range(e3.shape[0]):
                    s = e3[k]
                    # w4 = 1/(w1 w2 w3)
                    p = uv * s
                    r13 = u / s
                    r14 = u * p
                    r23 = v / s
                    r24 = v * p
                    r34 = s * p
                    d = r12 - a12
                    dr = 1.0 / r12 - 1.0 / a12
                    val = d * d + dr * dr
                    d = r13 - a13
                    dr = 1.0 / r13 - 1.0 / a13
                    val += d * d + dr * dr
                    d = r14 - a14
                    dr = 1.0 / r14 - 1.0 / a14
                    val += d * d + dr * dr
                    d = r23 - a23
                    dr = 1.0 / r23 - 1.0 / a23
                    val += d * d + dr * dr
                    d = r24 - a24
                    dr = 1.0 / r24 - 1.0 / a24
                    val += d * d + dr * dr
                    d = r34 - a34
                    dr = 1.0 / r34 - 1.0 / a34
                    val += d * d + dr * dr
                    if val < best:
                        best = val
                        bi = i
                        bj = j
                        bk = k
        return best, bi, bj, bk

    _JIT = (values3, min4)
    return _JIT


def _values3_numpy(a12, a13, a23, e1, e2, out):
    u = e1[:, None]
    v = e2[None, :]
    r12 = u / v
    r13 = u * u * v
    r23 = u * v * v
    out[:] = (r12 - a12) ** 2 + (1.0 / r12 - 1.0 / a12) ** 2
    out += (r13 - a13) ** 2 + (1.0 / r13 - 1.0 / a13) ** 2
    out += (r23 - a23) ** 2 + (1.0 / r23 - 1.0 / a23) ** 2


def _min4_numpy(a12, a13, a14, a23, a24, a34, e1, e2, e3):
    best = np.inf
    arg = (0, 0, 0)
    v = e2[:, None]
    s = e3[None, :]
    r23 = v / s
    t23 = (r23 - a23) ** 2 + (1.0 / r23 - 1.0 / a23) ** 2
    vs = v * s
    for i, u in enumerate(e1):
        p = u * vs
        r13 = u / s
        r14 = u * p
        r24 = v * p
        r34 = s * p
        val = (
            (u / v - a12) ** 2
            + (v / u - 1.0 / a12) ** 2
            + (r13 - a13) ** 2
            + (1.0 / r13 - 1.0 / a13) ** 2
            + t23
        )
        val += (r14 - a14) ** 2 + (1.0 / r14 - 1.0 / a14) ** 2
        val += (r24 - a24) ** 2 + (1.0 / r24 - 1.0 / a24) ** 2
        val += (r34 - a34) ** 2 + (1.0 / r34 - 1.0 / a34) ** 2
        k = int(np.argmin(val))
        j, kk = divmod(k, val.shape[1])
        if val[j, kk] < best:
            best = float(val[j, kk])
            arg = (i, j, kk)
    return best, arg[0], arg[1], arg[2]


def grid_values_3(a12: float, a13: float, a23: float, g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
    """Objective values over the (t1, t2) grid for a 3x3 matrix."""
    e1 = np.exp(np.asarray(g1, dtype=np.float64))
    e2 = np.exp(np.asarray(g2, dtype=np.float64))
    out = np.empty((e1.shape[0], e2.shape[0]), dtype=np.float64)
    if active_backend() == "numba":
        _jit_kernels()[0](a12, a13, a23, e1, e2, out)
    else:
        _values3_numpy(a12, a13, a23, e1, e2, out)
    return out


def grid_min_4(upper: np.ndarray, g1: np.ndarray, g2: np.ndarray, g3: np.ndarray) -> tuple[float, int, int, int]:
    """Minimum objective and its grid index over the (t1, t2, t3) grid, n=4.

    The scan is row-major, so ties resolve to the lexicographically smallest
    index triple under strict improvement.
    """
    a12, a13, a14, a23, a24, a34 = (float(x) for x in upper)
    e1 = np.exp(np.asarray(g1, dtype=np.float64))
    e2 = np.exp(np.asarray(g2, dtype=np.float64))
    e3 = np.exp(np.asarray(g3, dtype=np.float64))
    if active_backend() == "numba":
        best, i, j, k = _jit_kernels()[1](a12, a13, a14, a23, a24, a34, e1, e2, e3)
    else:
        best, i, j, k = _min4_numpy(a12, a13, a14, a23, a24, a34, e1, e2, e3)
    return float(best), int(i), int(j), int(k)


def local_min_mask(values: np.ndarray) -> np.ndarray:
    """Boolean mask of interior grid points strictly below all 8 neighbours."""
    c = values[1:-1, 1:-1]
    mask = np.ones_like(c, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            n0, n1 = values.shape
            nb = values[1 + di : n0 - 1 + di, 1 + dj : n1 - 1 + dj]
            mask &= c < nb
    out = np.zeros_like(values, dtype=bool)
    out[1:-1, 1:-1] = mask
    return out
