"""Dense complex tensors for pure states of n finite-dimensional parts.

Amplitudes are stored in C order (last index fastest). Storage indices are
0-based; reports and the canonical-form conditions use 1-based indices, so
the coefficient ``c_{i1...in}`` lives at ``data[i1-1, ..., in-1]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import TOL


class ShapeError(ValueError):
    """Dimensions of two objects do not fit together."""


class NotUnitaryError(ValueError):
    pass


class NormalizationError(ValueError):
    pass


@dataclass(frozen=True)
class ModeShape:
    dims: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 1 or any(d < 1 for d in dims):
            raise ShapeError(f"invalid mode dimensions {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return int(np.prod(self.dims))

    @property
    def canonical_ready(self) -> bool:
        """n >= 3 and 2 <= d_1 <= ... <= d_n."""
        d = self.dims
        return len(d) >= 3 and d[0] >= 2 and all(a <= b for a, b in zip(d, d[1:]))


def require_canonical_ready(dims) -> tuple:
    shape = ModeShape(tuple(dims))
    if not shape.canonical_ready:
        raise ShapeError(
            f"shape {shape.dims} is not canonical-ready: need n >= 3 and "
            "2 <= d_1 <= ... <= d_n (sort the modes first)")
    return shape.dims


@dataclass(frozen=True)
class StateTensor:
    """Coefficient tensor of a pure state.

    ``data`` has shape ``dims``. Unit norm is enforced unless ``check=False``.
    """
    data: np.ndarray
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.complex128, copy=True)
        if arr.ndim < 1:
            raise ShapeError("a state needs at least one mode")
        ModeShape(arr.shape)
        if self.check:
            nrm = np.linalg.norm(arr)
            if abs(nrm - 1.0) > TOL.norm:
                raise NormalizationError(f"state norm is {nrm!r}, expected 1")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_amplitudes(cls, dims, amplitudes, normalize=False) -> "StateTensor":
        dims = ModeShape(tuple(dims)).dims
        amps = np.asarray(amplitudes, dtype=np.complex128).ravel()
        if amps.size != int(np.prod(dims)):
            raise ShapeError(
                f"expected {int(np.prod(dims))} amplitudes for dims {dims}, got {amps.size}")
        if normalize:
            nrm = np.linalg.norm(amps)
            if nrm == 0:
                raise NormalizationError("cannot normalize the zero vector")
            amps = amps / nrm
        return cls(amps.reshape(dims))

    @classmethod
    def from_terms(cls, dims, terms: dict, normalize=False) -> "StateTensor":
        """Build from ``{index-tuple or bit-string: amplitude}`` (0-based)."""
        arr = np.zeros(tuple(dims), dtype=np.complex128)
        for key, amp in terms.items():
            if isinstance(key, str):
                key = tuple(int(ch) for ch in key)
            arr[tuple(key)] += amp
        return cls.from_amplitudes(dims, arr, normalize=normalize)

    @classmethod
    def basis(cls, dims, index) -> "StateTensor":
        return cls.from_terms(dims, {tuple(index): 1.0})

    @property
    def dims(self) -> tuple:
        return self.data.shape

    @property
    def n(self) -> int:
        return self.data.ndim

    @property
    def amplitudes(self) -> np.ndarray:
        return self.data.ravel()

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def __getitem__(self, index):
        return self.data[index]


def as_array(psi) -> np.ndarray:
    if isinstance(psi, StateTensor):
        return psi.data
    return np.asarray(psi, dtype=np.complex128)


@dataclass(frozen=True)
class LocalUnitaryTuple:
    """One unitary per mode; acts on column vectors as ``U_1 x ... x U_n``."""
    matrices: tuple

    def __post_init__(self):
        mats = []
        for k, m in enumerate(self.matrices):
            m = np.array(m, dtype=np.complex128, copy=True)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ShapeError(f"matrix {k} is not square: {m.shape}")
            err = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
            if err > TOL.unitarity:
                raise NotUnitaryError(f"matrix {k} deviates from unitarity by {err:.3g}")
            m.setflags(write=False)
            mats.append(m)
        object.__setattr__(self, "matrices", tuple(mats))

    @classmethod
    def identity(cls, dims) -> "LocalUnitaryTuple":
        return cls(tuple(np.eye(d) for d in dims))

    @property
    def dims(self) -> tuple:
        return tuple(m.shape[0] for m in self.matrices)

    def adjoint(self) -> "LocalUnitaryTuple":
        return LocalUnitaryTuple(tuple(m.conj().T for m in self.matrices))

    def __len__(self):
        return len(self.matrices)

    def __getitem__(self, r):
        return self.matrices[r]


def _check_vectors(dims, phis):
    if len(phis) != len(dims):
        raise ShapeError(f"{len(phis)} vectors for a {len(dims)}-mode state")
    vs = []
    for r, (d, v) in enumerate(zip(dims, phis)):
        v = np.asarray(v, dtype=np.complex128).ravel()
        if v.size != d:
            raise ShapeError(f"mode {r}: vector of length {v.size}, dimension {d}")
        vs.append(v)
    return vs


def _check_mode(n, r):
    if not 0 <= r < n:
        raise IndexError(f"mode index {r} out of range for {n} modes")


def multiply_modes(arr: np.ndarray, mats: Sequence) -> np.ndarray:
    """``(M_1 x ... x M_n) arr`` for arbitrary (possibly rectangular) ``M_r``.

    ``None`` entries leave a mode untouched.
    """
    out = arr
    for r, m in enumerate(mats):
        if m is None:
            continue
        out = np.moveaxis(np.tensordot(m, out, axes=([1], [r])), 0, r)
    return out


def overlap(psi, phis) -> complex:
    """``<psi|(phi_1 x ... x phi_n)>``: conjugates the tensor, not the vectors."""
    arr = as_array(psi)
    vs = _check_vectors(arr.shape, phis)
    X = arr.conj()
    for v in reversed(vs):
        X = X @ v
    return complex(X)


def environment(psi, phis, r: int) -> np.ndarray:
    """Mode-``r`` contraction of ``conj(psi)`` with all other vectors.

    Satisfies ``overlap(psi, phis) == environment(psi, phis, r) @ phis[r]``.
    """
    arr = as_array(psi)
    _check_mode(arr.ndim, r)
    vs = _check_vectors(arr.shape, phis)
    X = arr.conj()
    for s in range(arr.ndim - 1, -1, -1):
        if s != r:
            X = np.tensordot(X, vs[s], axes=([s], [0]))
    return np.asarray(X)


def apply_local(psi, us) -> StateTensor:
    """Apply the local unitary ``U_1 x ... x U_n`` to ``psi``."""
    arr = as_array(psi)
    if not isinstance(us, LocalUnitaryTuple):
        us = LocalUnitaryTuple(tuple(us))
    if us.dims != arr.shape:
        raise ShapeError(f"unitary dimensions {us.dims} do not match state {arr.shape}")
    return StateTensor(multiply_modes(arr, us.matrices), check=isinstance(psi, StateTensor))


def reduced_density(psi, r: int) -> np.ndarray:
    """Single-mode marginal density matrix ``rho_r`` (d_r x d_r)."""
    arr = as_array(psi)
    _check_mode(arr.ndim, r)
    m = np.moveaxis(arr, r, 0).reshape(arr.shape[r], -1)
    rho = m @ m.conj().T
    return (rho + rho.conj().T) / 2


def haar_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-random ``d x d`` unitary (QR of a Ginibre matrix, phase-corrected)."""
    if d < 1:
        raise ValueError("dimension must be at least 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, rr = np.linalg.qr(z)
    ph = np.diag(rr) / np.abs(np.diag(rr))
    return q * ph


def random_local_unitaries(dims, seed=None) -> LocalUnitaryTuple:
    seqs = np.random.SeedSequence(seed).spawn(len(dims)) if not isinstance(
        seed, np.random.Generator) else [seed] * len(dims)
    return LocalUnitaryTuple(tuple(haar_unitary(d, s) for d, s in zip(dims, seqs)))


def random_state(dims, seed=None) -> StateTensor:
    """Uniformly random unit vector (normalised complex Gaussian)."""
    dims = ModeShape(tuple(dims)).dims
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(dims) + 1j * rng.standard_normal(dims)
    return StateTensor(z / np.linalg.norm(z))


def random_unit_vector(d: int, rng) -> np.ndarray:
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def complete_basis(vs, d: int) -> np.ndarray:
    """Extend ``k < d`` orthonormal vectors to an orthonormal basis of C^d.

    Returns a ``d x d`` matrix whose columns are the basis; the first ``k``
    columns are the inputs, unchanged. New columns come from Gram-Schmidt on
    the standard basis, taking at each step the standard vector with the
    largest component outside the current span.
    """
    if isinstance(vs, np.ndarray) and vs.ndim == 2:
        cols = [vs[:, k] for k in range(vs.shape[1])]
    else:
        cols = [np.asarray(v, dtype=np.complex128).ravel() for v in vs]
    k = len(cols)
    if k > d:
        raise ShapeError(f"{k} vectors cannot be orthonormal in dimension {d}")
    B = np.zeros((d, d), dtype=np.complex128)
    for j, v in enumerate(cols):
        if v.size != d:
            raise ShapeError(f"vector {j} has length {v.size}, expected {d}")
        B[:, j] = v
    if k:
        gram = B[:, :k].conj().T @ B[:, :k]
        if np.abs(gram - np.eye(k)).max() > TOL.norm:
            raise ValueError("input vectors are not orthonormal")
    for j in range(k, d):
        Q = B[:, :j]
        resid = np.eye(d, dtype=np.complex128) - Q @ Q.conj().T
        pick = int(np.argmax(np.linalg.norm(resid, axis=0)))
        w = resid[:, pick]
        w = w - Q @ (Q.conj().T @ w)
        B[:, j] = w / np.linalg.norm(w)
    return B


def gauge_vector(v: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Rotate the global phase so the first component of (near-)maximal
    modulus is real positive. Deterministic representative of ``v``'s ray."""
    mags = np.abs(v)
    j = int(np.argmax(mags >= mags.max() - tol))
    if mags[j] == 0:
        return v.copy()
    return v * (np.conj(v[j]) / mags[j])
