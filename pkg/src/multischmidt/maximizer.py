"""Maximal product-state overlap by alternating power iteration.

A constraint restricts mode ``r`` to the orthogonal complement of a set of
forbidden vectors. Internally the tensor is compressed onto the allowed
subspaces (``Q_r^dagger`` applied on every mode) so the kernels only ever
solve an unconstrained problem; vectors are mapped back with ``Q_r``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .config import TOL
from .tensor import (ShapeError, as_array, complete_basis, environment,
                     gauge_vector, multiply_modes, overlap, random_unit_vector)


class EmptySubspaceError(ValueError):
    """A constraint forbids every direction of some mode."""


@dataclass(frozen=True)
class SubspaceConstraint:
    """Per-mode orthonormal lists of forbidden vectors (columns of ``d_r x k_r`` arrays)."""
    forbidden: tuple

    def __post_init__(self):
        mats = []
        for r, f in enumerate(self.forbidden):
            f = np.array(f, dtype=np.complex128, copy=True)
            if f.ndim == 1:
                f = f.reshape(-1, 1) if f.size else f.reshape(0, 0)
            if f.size and np.abs(f.conj().T @ f - np.eye(f.shape[1])).max() > TOL.norm:
                raise ValueError(f"forbidden vectors of mode {r} are not orthonormal")
            f.setflags(write=False)
            mats.append(f)
        object.__setattr__(self, "forbidden", tuple(mats))

    @classmethod
    def none(cls, dims) -> "SubspaceConstraint":
        return cls(tuple(np.zeros((d, 0), dtype=np.complex128) for d in dims))

    @classmethod
    def from_vectors(cls, dims, lists) -> "SubspaceConstraint":
        mats = []
        for d, vs in zip(dims, lists):
            if len(vs):
                mats.append(np.stack([np.asarray(v, dtype=np.complex128) for v in vs], axis=1))
            else:
                mats.append(np.zeros((d, 0), dtype=np.complex128))
        return cls(tuple(mats))

    def count(self, r: int) -> int:
        f = self.forbidden[r]
        return f.shape[1] if f.size else 0

    @property
    def is_trivial(self) -> bool:
        return all(self.count(r) == 0 for r in range(len(self.forbidden)))

    def allowed_basis(self, r: int, d: int) -> np.ndarray:
        """Orthonormal basis (columns) of the allowed subspace of mode ``r``."""
        k = self.count(r)
        if k == 0:
            return np.eye(d, dtype=np.complex128)
        if self.forbidden[r].shape[0] != d:
            raise ShapeError(f"constraint for mode {r} has wrong dimension")
        if k >= d:
            raise EmptySubspaceError(f"mode {r}: no allowed directions left")
        return complete_basis(self.forbidden[r], d)[:, k:]

    def projector(self, r: int, d: int) -> np.ndarray:
        k = self.count(r)
        if k == 0:
            return np.eye(d, dtype=np.complex128)
        F = self.forbidden[r]
        return np.eye(d) - F @ F.conj().T


@dataclass(frozen=True)
class MaximizerOptions:
    starts: int | None = None  # None: 16*max(d) unconstrained, 8 under a constraint
    overlap_tol: float = TOL.overlap_change
    residual_tol: float = TOL.residual
    max_iter: int = 10_000
    seed: int = 0
    start_scale: int = 1

    def __post_init__(self):
        if self.starts is not None and self.starts < 1:
            raise ValueError("starts must be >= 1")
        if self.overlap_tol <= 0 or self.residual_tol <= 0:
            raise ValueError("tolerances must be positive")

    def n_starts(self, dims, constrained: bool) -> int:
        base = self.starts if self.starts is not None else (8 if constrained else 16 * max(dims))
        return base * self.start_scale


@dataclass(frozen=True)
class ProductCritical:
    phis: tuple
    lam: complex
    residual: float
    iterations: int
    converged: bool
    history: np.ndarray = field(repr=False, compare=False)
    nonunique: bool = False

    @property
    def value(self) -> float:
        """``|lambda|^2``, the squared maximal overlap."""
        return abs(self.lam) ** 2


def stationarity_residual(psi, phis, constraint: SubspaceConstraint | None = None) -> float:
    """Max over modes of ``|| P_r conj(env_r) - conj(lambda) u_r ||``.

    Recomputed from scratch with :func:`environment`; zero exactly when the
    stationarity equations ``env_r = lambda conj(u_r)`` hold on the allowed
    subspaces.
    """
    arr = as_array(psi)
    lam = overlap(arr, phis)
    res = 0.0
    for r, u in enumerate(phis):
        x = np.conj(environment(arr, phis, r))
        if constraint is not None:
            x = constraint.projector(r, arr.shape[r]) @ x
        res = max(res, float(np.linalg.norm(x - np.conj(lam) * np.asarray(u))))
    return res


class _Compressed:
    """The problem restricted to the allowed subspaces."""

    def __init__(self, psi, constraint):
        self.arr = as_array(psi)
        self.dims = self.arr.shape
        self.constraint = constraint if constraint is not None else SubspaceConstraint.none(self.dims)
        if len(self.constraint.forbidden) != len(self.dims):
            raise ShapeError("constraint has the wrong number of modes")
        self.Q = [self.constraint.allowed_basis(r, d) for r, d in enumerate(self.dims)]
        self.mdims = np.array([q.shape[1] for q in self.Q], dtype=np.int64)
        tc = multiply_modes(self.arr, [q.conj().T for q in self.Q])
        self.tc = tc
        self.ct = np.ascontiguousarray(tc.conj().ravel())
        self.free = self.mdims > 1
        self.zero = np.linalg.norm(tc) < TOL.zero_environment

    def pack(self, coords) -> np.ndarray:
        A = np.zeros((len(self.mdims), int(self.mdims.max())), dtype=np.complex128)
        for r, a in enumerate(coords):
            A[r, :self.mdims[r]] = a
        return A

    def compress(self, phis):
        coords = []
        for r, (q, u) in enumerate(zip(self.Q, phis)):
            u = np.asarray(u, dtype=np.complex128)
            a = q.conj().T @ u
            if abs(np.linalg.norm(a) - 1) > TOL.norm:
                raise ValueError(f"initial vector of mode {r} violates the constraint")
            coords.append(a / np.linalg.norm(a))
        return self.pack(coords)

    def expand(self, A):
        return tuple(q @ A[r, :q.shape[1]] for r, q in enumerate(self.Q))

    def residual(self, A) -> float:
        lam = None
        res = 0.0
        for r in range(len(self.mdims)):
            e = kernels.env(self.ct, self.mdims, A, r)
            a = A[r, :self.mdims[r]]
            if lam is None:
                lam = e @ a
            res = max(res, float(np.linalg.norm(np.conj(e) - np.conj(lam) * a)))
        return res

    def iterate(self, A, opts: MaximizerOptions, restart_seed) -> tuple:
        """Run sweeps in place on ``A``; returns (sweeps, converged, history)."""
        if self.zero or not self.free.any():
            return 0, True, np.zeros(0)
        done = 0
        restarts = 0
        pieces = []
        converged = False
        while done < opts.max_iter:
            h = np.empty(opts.max_iter - done)
            k, status, mode = kernels.iterate(
                self.ct, self.mdims, A, self.free, opts.max_iter - done,
                opts.overlap_tol, TOL.zero_environment, h)
            pieces.append(h[:k])
            done += k
            if status == kernels.ZERO_ENVIRONMENT:
                # exactly stationary saddle with vanishing environment: reseed that mode
                rng = np.random.default_rng([restart_seed, restarts])
                A[mode, :self.mdims[mode]] = random_unit_vector(int(self.mdims[mode]), rng)
                restarts += 1
                done += 1
                continue
            if status == kernels.BUDGET_EXHAUSTED:
                break
            if self.residual(A) <= opts.residual_tol:
                converged = True
                break
        return done, converged, np.concatenate(pieces) if pieces else np.zeros(0)

    def result(self, A, sweeps, converged, history, residual_tol) -> ProductCritical:
        phis = self.expand(A)
        lam = overlap(self.arr, phis)
        res = stationarity_residual(self.arr, phis, self.constraint)
        return ProductCritical(phis=phis, lam=lam, residual=res, iterations=sweeps,
                               converged=converged and res <= residual_tol,
                               history=history)

    # --- starting points -------------------------------------------------
    def basis_start(self, flat_index: int) -> np.ndarray:
        idx = np.unravel_index(flat_index, tuple(self.mdims))
        A = np.zeros((len(self.mdims), int(self.mdims.max())), dtype=np.complex128)
        for r, i in enumerate(idx):
            A[r, i] = 1.0
        return A

    def max_modulus_start(self) -> np.ndarray:
        return self.basis_start(int(np.argmax(np.abs(self.tc).ravel())))

    def hosvd_start(self) -> np.ndarray:
        coords = []
        for r, m in enumerate(self.mdims):
            unf = np.moveaxis(self.tc, r, 0).reshape(m, -1)
            u, _, _ = np.linalg.svd(unf, full_matrices=False)
            coords.append(u[:, 0])
        return self.pack(coords)

    def random_start(self, seed) -> np.ndarray:
        rng = np.random.default_rng(seed)
        return self.pack([random_unit_vector(int(m), rng) for m in self.mdims])


def power_iterate(psi, init, constraint: SubspaceConstraint | None = None,
                  opts: MaximizerOptions | None = None) -> ProductCritical:
    """Alternating maximisation from ``init``.

    Each update replaces ``u_r`` by the normalised projection of
    ``conj(env_r)`` onto the allowed subspace. Modes whose allowed subspace is
    one-dimensional are never touched. Stops when the overlap changes by less
    than ``opts.overlap_tol`` in a sweep and the stationarity residual is
    below ``opts.residual_tol``; otherwise returns the last iterate with
    ``converged=False``.
    """
    opts = opts or MaximizerOptions()
    prob = _Compressed(psi, constraint)
    A = prob.compress(init)
    sweeps, conv, hist = prob.iterate(A, opts, opts.seed)
    return prob.result(A, sweeps, conv, hist, opts.residual_tol)


def _merge_key(crit: ProductCritical) -> tuple:
    key = []
    for u in crit.phis:
        g = gauge_vector(u)
        key.extend(np.round(np.column_stack([g.real, g.imag]).ravel(), 9).tolist())
    return tuple(key)


def _select(results, tie_tol=1e-9) -> ProductCritical:
    """Largest |lambda|; ties broken by the lexicographically largest gauged
    vector tuple, so the result does not depend on evaluation order."""
    best = max(abs(c.lam) for c in results)
    tied = [c for c in results if abs(c.lam) >= best - tie_tol]
    tied.sort(key=_merge_key, reverse=True)
    chosen = tied[0]
    ref = [gauge_vector(u) for u in chosen.phis]
    nonunique = any(
        max(np.abs(gauge_vector(u) - g).max() for u, g in zip(c.phis, ref)) > 1e-6
        for c in tied[1:])
    return replace(chosen, nonunique=nonunique)


def _run_starts(psi, constraint, opts, extra_starts=()):
    prob = _Compressed(psi, constraint)
    constrained = not prob.constraint.is_trivial
    n = opts.n_starts(prob.dims, constrained)
    starts = list(extra_starts)
    starts.append(prob.max_modulus_start())
    if n > 1:
        starts.append(prob.hosvd_start())
    for k in range(2, n):
        starts.append(prob.random_start(opts.seed ^ k))
    out = []
    for k, A in enumerate(starts):
        A = A.copy()
        sweeps, conv, hist = prob.iterate(A, opts, (opts.seed ^ k) + 7919)
        out.append(prob.result(A, sweeps, conv, hist, opts.residual_tol))
    return prob, out


def multistart_maximize(psi, constraint: SubspaceConstraint | None = None,
                        opts: MaximizerOptions | None = None) -> ProductCritical:
    """Best critical point over deterministic starts.

    Start 0 is the basis product state at the largest-modulus coefficient,
    start 1 the leading singular vectors of each unfolding, and start ``k``
    for ``k >= 2`` a random product state from seed ``seed ^ k``.
    """
    opts = opts or MaximizerOptions()
    _, results = _run_starts(psi, constraint, opts)
    return _select(results)


def stationary_points(psi, constraint: SubspaceConstraint | None = None,
                      opts: MaximizerOptions | None = None, cluster_tol: float = 1e-6,
                      max_basis_starts: int = 4096) -> list:
    """Distinct converged critical values, largest first.

    Besides the multistart set, every basis product state with a nonzero
    coefficient is used as a start: saddle-type critical points (such as the
    ``|lambda|^2 = 1/4`` point of the worked three-qubit example) are not
    reached from random starts but often sit exactly on a basis product.
    Values with ``|lambda| < 1e-9`` are dropped.
    """
    opts = opts or MaximizerOptions()
    prob = _Compressed(psi, constraint)
    mags = np.abs(prob.tc).ravel()
    order = [int(i) for i in np.argsort(-mags, kind="stable") if mags[i] > TOL.zero_environment]
    extra = [prob.basis_start(i) for i in order[:max_basis_starts]]
    _, results = _run_starts(psi, constraint, opts, extra_starts=extra)
    found = sorted((c for c in results if c.converged and abs(c.lam) > 1e-9),
                   key=lambda c: (-abs(c.lam), _merge_key(c)))
    distinct = []
    for c in found:
        if not distinct or abs(abs(distinct[-1].lam) - abs(c.lam)) > cluster_tol:
            distinct.append(c)
    return distinct
