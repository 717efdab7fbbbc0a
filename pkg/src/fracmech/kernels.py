"""
Hot loops for the Grunwald-Letnikov operators.

Every kernel has a numba version and a pure-numpy version with the same
signature; the module-level names point at one or the other depending on
``fracmech._accel.USE_NUMBA``. Both variants are deterministic for a fixed
input (row sums are always accumulated in the same order).
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit, prange


def gl_weights(alpha: float, n: int) -> np.ndarray:
    """Weights ``w_0 = 1, w_j = w_{j-1} (j - 1 - alpha) / j`` for ``j < n``."""
    ratios = np.empty(n, dtype=np.float64)
    ratios[0] = 1.0
    j = np.arange(1, n, dtype=np.float64)
    ratios[1:] = (j - 1.0 - alpha) / j
    return np.cumprod(ratios)


# Row sums use Neumaier compensation: the discrete Euler-Lagrange/Hamilton
# identity relies on M_L q reproducing its right-hand side to a few ulps.

# {{{ numpy

def _lower_apply_numpy(w, f):
    # vectorized over rows; per row the terms are added in order j = 0..i
    n = f.shape[0]
    acc = np.zeros(n)
    comp = np.zeros(n)
    for j in range(n):
        x = w[j] * f[: n - j]
        s = acc[j:]
        tot = s + x
        big = np.abs(s) >= np.abs(x)
        comp[j:] += np.where(big, (s - tot) + x, (x - tot) + s)
        acc[j:] = tot
    return acc + comp


def _lower_solve_numpy(w, s):
    n = s.shape[0]
    y = np.empty(n, dtype=np.float64)
    for i in range(n):
        acc = math.fsum(w[1 : i + 1] * y[i - 1 :: -1]) if i > 0 else 0.0
        y[i] = (s[i] - acc) / w[0]
    return y

# }}}


# {{{ numba

@njit(parallel=True, cache=True)
def _lower_apply_numba(w, f):
    n = f.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in prange(n):
        acc = 0.0
        comp = 0.0
        for j in range(i + 1):
            x = w[j] * f[i - j]
            tot = acc + x
            if abs(acc) >= abs(x):
                comp += (acc - tot) + x
            else:
                comp += (x - tot) + acc
            acc = tot
        out[i] = acc + comp
    return out


@njit(cache=True)
def _lower_solve_numba(w, s):
    n = s.shape[0]
    y = np.empty(n, dtype=np.float64)
    for i in range(n):
        acc = 0.0
        comp = 0.0
        for j in range(1, i + 1):
            x = w[j] * y[i - j]
            tot = acc + x
            if abs(acc) >= abs(x):
                comp += (acc - tot) + x
            else:
                comp += (x - tot) + acc
            acc = tot
        y[i] = (s[i] - (acc + comp)) / w[0]
    return y

# }}}


if USE_NUMBA:
    lower_apply = _lower_apply_numba
    lower_solve = _lower_solve_numba
else:
    lower_apply = _lower_apply_numpy
    lower_solve = _lower_solve_numpy


def upper_apply(w, f):
    """Apply the upper-triangular Toeplitz operator with first row ``w``."""
    return lower_apply(w, np.ascontiguousarray(f[::-1]))[::-1].copy()


def upper_solve(w, s):
    """Back substitution for the upper-triangular Toeplitz system."""
    return lower_solve(w, np.ascontiguousarray(s[::-1]))[::-1].copy()
