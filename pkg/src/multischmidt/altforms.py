"""Other candidate canonical forms.

* the marginal form: each mode expanded in the eigenbasis of its reduced
  density matrix;
* Ingarden-Urbanik entropy ``-sum |c|^2 log |c|^2`` (natural log), its
  directional derivatives along local unitary generators, and a descent
  over the local unitary group;
* the ordinary two-part Schmidt decomposition.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .config import TOL
from .tensor import (LocalUnitaryTuple, ShapeError, StateTensor, apply_local, as_array,
                     gauge_vector, multiply_modes, reduced_density)


@dataclass(frozen=True)
class MarginalForm:
    coefficients: StateTensor
    transforms: LocalUnitaryTuple
    eigenvalues: tuple  # per mode, descending
    flags: list = field(default_factory=list)


@dataclass(frozen=True)
class EntropyTrace:
    entropies: np.ndarray
    state: StateTensor
    transforms: LocalUnitaryTuple
    gradient_norm: float
    iterations: int


def marginal_basis_form(psi, degeneracy_tol: float = 1e-9) -> MarginalForm:
    """Expand ``psi`` in the eigenbases of its one-mode marginals (descending
    eigenvalues). Each eigenvector is gauged so its first largest component is
    real positive; degenerate eigenvalues are flagged since the basis is then
    not unique."""
    arr = as_array(psi)
    if arr.ndim < 2:
        raise ShapeError("need at least two modes")
    mats, evals, flags = [], [], []
    for r in range(arr.ndim):
        w, v = np.linalg.eigh(reduced_density(arr, r))
        order = np.argsort(-w, kind="stable")
        w, v = w[order], v[:, order]
        for j in range(v.shape[1]):
            v[:, j] = gauge_vector(v[:, j])
        if np.any(np.abs(np.diff(w)) < degeneracy_tol):
            flags.append(f"mode {r + 1}: degenerate marginal spectrum, basis not unique")
        mats.append(v.conj().T)
        evals.append(tuple(float(x) for x in np.clip(w, 0.0, None)))
    U = LocalUnitaryTuple(tuple(mats))
    coeffs = apply_local(psi if isinstance(psi, StateTensor) else StateTensor(arr), U)
    return MarginalForm(coefficients=coeffs, transforms=U, eigenvalues=tuple(evals), flags=flags)


def marginal_orthogonality(coeffs, r: int) -> np.ndarray:
    """Matrix ``M[i, j] = sum_others c_{..i..} conj(c_{..j..})`` for mode ``r``.

    Equal to the transpose of the reduced density matrix; the marginal form
    makes it diagonal."""
    c = as_array(coeffs)
    m = np.moveaxis(c, r, 0).reshape(c.shape[r], -1)
    return m @ m.conj().T


def iu_entropy(psi) -> float:
    p = np.abs(as_array(psi)) ** 2
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def _check_generator(G, d):
    G = np.asarray(G, dtype=np.complex128)
    if G.shape != (d, d):
        raise ShapeError(f"generator must be {d}x{d}")
    if np.abs(G + G.conj().T).max() > TOL.equality:
        raise ValueError("generator is not anti-Hermitian")
    return G


def iu_directional_derivative(psi, r: int, generator) -> float:
    """``d/d eps  S_IU(exp(eps G)_r psi)`` at ``eps = 0``.

    ``exp(eps G)`` acts on mode ``r`` as a matrix on column vectors; for
    ``G = [[0, -1], [1, 0]]`` this is ``|0> -> |0> + eps|1>, |1> -> |1> - eps|0>``.
    """
    c = as_array(psi)
    G = _check_generator(generator, c.shape[r])
    mats = [None] * c.ndim
    mats[r] = G
    dc = multiply_modes(c, mats)
    p = np.abs(c) ** 2
    dp = 2 * np.real(np.conj(c) * dc)
    mask = p > 0
    return float(-np.sum(dp[mask] * (np.log(p[mask]) + 1)))


def iu_gradient(psi) -> list:
    """Per-mode anti-Hermitian gradients of ``S_IU`` w.r.t. the generator in
    ``exp(G)_r``, for the inner product ``Re tr(A^dagger B)``."""
    c = as_array(psi)
    p = np.abs(c) ** 2
    W = np.zeros_like(p)
    mask = p > 0
    W[mask] = -(np.log(p[mask]) + 1)
    grads = []
    for r in range(c.ndim):
        cm = np.moveaxis(c, r, 0).reshape(c.shape[r], -1)
        wm = np.moveaxis(W, r, 0).reshape(c.shape[r], -1)
        # dS = 2 Re sum_jk G_jk M_jk with M_jk = sum_others W_j conj(c_j) c_k
        M = (wm * cm.conj()) @ cm.T
        X = np.conj(M)
        grads.append(X - X.conj().T)
    return grads


def iu_descend(psi, step: float = 0.5, max_iter: int = 2000, grad_tol: float = 1e-8,
               min_step: float = 1e-12) -> EntropyTrace:
    """Gradient descent of ``S_IU`` over local unitaries.

    Each iteration moves every mode by ``exp(-t * grad_r)`` with backtracking
    (halving ``t``) until the entropy decreases; ``t`` restarts from ``step``.
    """
    arr = as_array(psi)
    cur = StateTensor(arr, check=isinstance(psi, StateTensor))
    Us = [np.eye(d, dtype=np.complex128) for d in arr.shape]
    S = iu_entropy(cur)
    hist = [S]
    gnorm = 0.0
    it = 0
    for it in range(1, max_iter + 1):
        grads = iu_gradient(cur)
        gnorm = float(np.sqrt(sum(np.sum(np.abs(g) ** 2) for g in grads)))
        if gnorm < grad_tol:
            it -= 1
            break
        t = step
        while t >= min_step:
            mats = [expm(-t * g) for g in grads]
            trial = StateTensor(multiply_modes(cur.data, mats), check=False)
            S_new = iu_entropy(trial)
            if S_new < S:
                break
            t /= 2
        else:
            break
        cur = trial
        Us = [m @ u for m, u in zip(mats, Us)]
        S = S_new
        hist.append(S)
    U = LocalUnitaryTuple(tuple(Us))
    return EntropyTrace(entropies=np.array(hist), state=apply_local(arr, U),
                        transforms=U,
                        gradient_norm=gnorm, iterations=it)


def classical_schmidt(psi) -> MarginalForm:
    """Two-part Schmidt form: diagonal, real, non-increasing coefficients."""
    arr = as_array(psi)
    if arr.ndim != 2:
        raise ShapeError("classical Schmidt decomposition needs exactly two modes")
    u, s, vh = np.linalg.svd(arr)
    U = LocalUnitaryTuple((u.conj().T, vh.conj()))
    coeffs = apply_local(psi if isinstance(psi, StateTensor) else StateTensor(arr), U)
    sq = tuple(float(x) for x in s ** 2)
    pad1 = sq + (0.0,) * (arr.shape[0] - len(sq))
    pad2 = sq + (0.0,) * (arr.shape[1] - len(sq))
    return MarginalForm(coefficients=coeffs, transforms=U, eigenvalues=(pad1, pad2))
