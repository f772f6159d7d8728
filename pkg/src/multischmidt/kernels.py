"""Hot contraction kernels for product-state overlaps.

Every kernel exists twice: a numba version (``*_nb``) and a numpy version
(``*_np``) with the same signature. The module-level names without suffix
point at the numba versions unless ``MULTISCHMIDT_DISABLE_NUMBA`` is set.

Conventions shared by all kernels:

* ``ct`` is the *conjugated* coefficient tensor flattened in C order (last
  index fastest), complex128.
* ``dims`` is an int64 array of mode dimensions.
* ``V`` is an ``(n, dmax)`` complex128 array; row ``r`` holds the mode-``r``
  vector in its first ``dims[r]`` entries.

The environment of mode ``r`` is ``env_j = sum conj(t)[..j..] prod_{s!=r} V[s, i_s]``
so that the overlap equals ``env @ V[r, :dims[r]]``.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

# iterate() status codes
CONVERGED_CHANGE = 0
ZERO_ENVIRONMENT = 1
BUDGET_EXHAUSTED = 2


@njit(cache=True)
def env_nb(ct, dims, V, r):
    n = dims.shape[0]
    out = np.zeros(dims[r], dtype=np.complex128)
    idx = np.zeros(n, dtype=np.int64)
    for flat in range(ct.shape[0]):
        w = ct[flat]
        if w != 0:
            for s in range(n):
                if s != r:
                    w *= V[s, idx[s]]
            out[idx[r]] += w
        s = n - 1
        while s >= 0:
            idx[s] += 1
            if idx[s] < dims[s]:
                break
            idx[s] = 0
            s -= 1
    return out


@njit(cache=True)
def iterate_nb(ct, dims, V, free, max_sweeps, tol_change, zero_tol, history):
    """Alternating power sweeps, in place on ``V``.

    Returns ``(sweeps_done, status, mode)``; ``mode`` is the offending mode
    for ``ZERO_ENVIRONMENT`` and -1 otherwise.
    """
    n = dims.shape[0]
    prev = -1.0
    for sweep in range(max_sweeps):
        cur = 0.0
        for r in range(n):
            if not free[r]:
                continue
            e = env_nb(ct, dims, V, r)
            nrm = np.sqrt(np.sum(e.real ** 2 + e.imag ** 2))
            if nrm < zero_tol:
                return sweep, 1, r
            for j in range(dims[r]):
                V[r, j] = np.conj(e[j]) / nrm
            cur = nrm
        history[sweep] = cur
        if abs(cur - prev) < tol_change:
            return sweep + 1, 0, -1
        prev = cur
    return max_sweeps, 2, -1


@njit(cache=True)
def batch_abs_overlap_nb(ct, dims, Vb):
    """``|overlap|`` for each product state ``Vb[k]`` (shape ``(S, n, dmax)``).

    Contracts one mode at a time from the last, so the cost per sample is
    ``sum_k prod(dims[:k+1])`` rather than ``n * prod(dims)``.
    """
    S = Vb.shape[0]
    n = dims.shape[0]
    size = ct.shape[0]
    out = np.empty(S, dtype=np.float64)
    a = np.empty(size, dtype=np.complex128)
    b = np.empty(size, dtype=np.complex128)
    for k in range(S):
        d = dims[n - 1]
        m = size // d
        for j in range(m):
            acc = 0j
            for i in range(d):
                acc += ct[j * d + i] * Vb[k, n - 1, i]
            a[j] = acc
        for s in range(n - 2, -1, -1):
            d = dims[s]
            m2 = m // d
            for j in range(m2):
                acc = 0j
                for i in range(d):
                    acc += a[j * d + i] * Vb[k, s, i]
                b[j] = acc
            a, b = b, a
            m = m2
        out[k] = abs(a[0])
    return out


def env_np(ct, dims, V, r):
    n = len(dims)
    X = ct.reshape(tuple(dims))
    for s in range(n - 1, -1, -1):
        if s == r:
            continue
        X = np.tensordot(X, V[s, :dims[s]], axes=([s], [0]))
    return np.asarray(X, dtype=np.complex128)


def iterate_np(ct, dims, V, free, max_sweeps, tol_change, zero_tol, history):
    n = len(dims)
    prev = -1.0
    for sweep in range(max_sweeps):
        cur = 0.0
        for r in range(n):
            if not free[r]:
                continue
            e = env_np(ct, dims, V, r)
            nrm = np.linalg.norm(e)
            if nrm < zero_tol:
                return sweep, ZERO_ENVIRONMENT, r
            V[r, :dims[r]] = np.conj(e) / nrm
            cur = nrm
        history[sweep] = cur
        if abs(cur - prev) < tol_change:
            return sweep + 1, CONVERGED_CHANGE, -1
        prev = cur
    return max_sweeps, BUDGET_EXHAUSTED, -1


def batch_abs_overlap_np(ct, dims, Vb, chunk=65536):
    n = len(dims)
    T = ct.reshape(tuple(dims))
    out = np.empty(Vb.shape[0])
    for start in range(0, Vb.shape[0], chunk):
        blk = Vb[start:start + chunk]
        # Y[k, i_1..i_{n-1}] after contracting the last mode
        Y = np.tensordot(blk[:, n - 1, :dims[n - 1]], T, axes=([1], [n - 1]))
        for s in range(n - 2, -1, -1):
            Y = np.einsum("k...j,kj->k...", Y, blk[:, s, :dims[s]])
        out[start:start + chunk] = np.abs(Y)
    return out


if USE_NUMBA:
    env = env_nb
    iterate = iterate_nb
    batch_abs_overlap = batch_abs_overlap_nb
else:
    env = env_np
    iterate = iterate_np
    batch_abs_overlap = batch_abs_overlap_np


def backend():
    """Name of the active kernel backend."""
    return "numba" if USE_NUMBA else "numpy"
