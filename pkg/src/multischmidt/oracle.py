"""Independent checks on the product-overlap maximiser.

``brute_force_max`` samples product states and polishes the best of them
with its own batched numpy update; it shares only the overlap kernel with
the maximiser. The three-qubit family ``a|000> + b|011> + c|111>`` has a
closed-form stationarity analysis, used by ``appendix_verify``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .maximizer import MaximizerOptions, stationary_points
from .tensor import StateTensor, as_array


@dataclass(frozen=True)
class AppendixFamily:
    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        nrm = abs(self.a) ** 2 + abs(self.b) ** 2 + abs(self.c) ** 2
        if abs(nrm - 1) > 1e-12:
            raise ValueError(f"|a|^2 + |b|^2 + |c|^2 = {nrm!r}, expected 1")

    def state(self) -> StateTensor:
        return StateTensor.from_terms((2, 2, 2), {"000": self.a, "011": self.b, "111": self.c})

    @classmethod
    def random(cls, rng, a2_range=(0.51, 0.99)) -> "AppendixFamily":
        a2 = rng.uniform(*a2_range)
        split = rng.uniform()
        ph = np.exp(2j * np.pi * rng.uniform(size=3))
        rest = 1 - a2
        return cls(np.sqrt(a2) * ph[0], np.sqrt(rest * split) * ph[1],
                   np.sqrt(rest * (1 - split)) * ph[2])


@dataclass(frozen=True)
class AppendixReport:
    values: list                  # distinct |lambda|^2, descending
    expected_max: float           # |a|^2
    equation_residual: float      # worst residual of the six stationarity equations
    quadratic_residual: float     # worst |F(|lambda|^2)| at each point's |v_1|^2
    passed: bool
    details: list = field(default_factory=list)


def _sample_products(rng, dims, count):
    dmax = max(dims)
    V = np.zeros((count, len(dims), dmax), dtype=np.complex128)
    for r, d in enumerate(dims):
        z = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
        V[:, r, :d] = z / np.linalg.norm(z, axis=1, keepdims=True)
    return V


def _polish(T, V, sweeps):
    """Batched alternating updates ``u_r <- conj(env_r)/|env_r|`` on every sample."""
    n = T.ndim
    dims = T.shape
    letters = "abcdefghijklmnopqrstuvw"[:n]
    Tc = T.conj()
    for _ in range(sweeps):
        for r in range(n):
            ops = [Tc]
            subs = [letters]
            for s in range(n):
                if s != r:
                    ops.append(V[:, s, :dims[s]])
                    subs.append("z" + letters[s])
            env = np.einsum(",".join(subs) + "->z" + letters[r], *ops)
            nrm = np.linalg.norm(env, axis=1, keepdims=True)
            nrm[nrm == 0] = 1
            V[:, r, :dims[r]] = env.conj() / nrm
    return V


def brute_force_max(psi, samples: int = 100_000, seed=0, polish_sweeps: int = 50,
                    top_fraction: float = 0.01, chunk: int = 50_000) -> float:
    """Lower bound on ``max |<psi|phi_1 ... phi_n>|`` from random product states.

    Samples are uniform on each unit sphere; the best ``top_fraction`` of them
    get ``polish_sweeps`` alternating updates before the maximum is taken.
    """
    T = as_array(psi)
    dims = T.shape
    ct = np.ascontiguousarray(T.conj().ravel())
    dvec = np.array(dims, dtype=np.int64)
    rng = np.random.default_rng(seed)
    keep = max(1, int(samples * top_fraction))
    best_vals = np.empty(0)
    best_V = np.zeros((0, len(dims), max(dims)), dtype=np.complex128)
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        V = _sample_products(rng, dims, m)
        vals = kernels.batch_abs_overlap(ct, dvec, V)
        best_vals = np.concatenate([best_vals, vals])
        best_V = np.concatenate([best_V, V])
        if best_vals.size > keep:
            idx = np.argpartition(-best_vals, keep - 1)[:keep]
            best_vals, best_V = best_vals[idx], best_V[idx]
        done += m
    raw = float(best_vals.max())
    if polish_sweeps <= 0:
        return raw
    V = _polish(T, best_V.copy(), polish_sweeps)
    return max(raw, float(kernels.batch_abs_overlap(ct, dvec, V).max()))


def appendix_quadratic(fam: AppendixFamily, v1sq: float) -> tuple:
    """Roots (descending) of ``F(x) = x^2 - x(|a|^2 + (1-2|a|^2)|v_1|^2) + |a|^2|c|^2|v_0|^2|v_1|^2``
    and the value ``F(|a|^2)``."""
    if not 0.0 <= v1sq <= 1.0:
        raise ValueError("|v_1|^2 must lie in [0, 1]")
    a2, c2 = abs(fam.a) ** 2, abs(fam.c) ** 2
    v0sq = 1.0 - v1sq
    lin = a2 + (1 - 2 * a2) * v1sq
    const = a2 * c2 * v0sq * v1sq
    disc = max(lin * lin - 4 * const, 0.0)
    roots = ((lin + np.sqrt(disc)) / 2, (lin - np.sqrt(disc)) / 2)
    F_at_a2 = a2 * v1sq * (2 * a2 - 1 + c2 * v0sq)
    return roots, F_at_a2


def appendix_F(fam: AppendixFamily, x: float, v1sq: float) -> float:
    a2, c2 = abs(fam.a) ** 2, abs(fam.c) ** 2
    return x * x - x * (a2 + (1 - 2 * a2) * v1sq) + a2 * c2 * (1 - v1sq) * v1sq


def appendix_equations(fam: AppendixFamily, u, v, w, lam) -> np.ndarray:
    """Residuals of the six stationarity equations, written out term by term."""
    a, b, c = np.conj(fam.a), np.conj(fam.b), np.conj(fam.c)
    u0, u1 = u
    v0, v1 = v
    w0, w1 = w
    L = lam
    return np.array([
        a * v0 * w0 + b * v1 * w1 - L * np.conj(u0),
        c * v1 * w1 - L * np.conj(u1),
        a * u0 * w0 - L * np.conj(v0),
        b * u0 * w1 + c * u1 * w1 - L * np.conj(v1),
        a * u0 * v0 - L * np.conj(w0),
        b * u0 * v1 + c * u1 * v1 - L * np.conj(w1),
    ])


def appendix_verify(fam: AppendixFamily, opts: MaximizerOptions | None = None,
                    eq_tol: float = 1e-9, max_tol: float = 1e-8) -> AppendixReport:
    """Check numerically that ``|a|^2`` is the largest stationary value of the
    product overlap and every other stationary value lies strictly below it."""
    a2 = abs(fam.a) ** 2
    if abs(fam.a) <= 1 / np.sqrt(2) + 1e-9:
        raise ValueError("maximality of |a|^2 needs |a| > 1/sqrt(2)")
    points = stationary_points(fam.state(), opts=opts)
    values = [p.value for p in points]
    eq_res = 0.0
    quad_res = 0.0
    details = []
    for p in points:
        u, v, w = p.phis
        eq = float(np.abs(appendix_equations(fam, u, v, w, p.lam)).max())
        v1sq = float(min(max(abs(v[1]) ** 2, 0.0), 1.0))
        quad = abs(appendix_F(fam, p.value, v1sq))
        eq_res = max(eq_res, eq)
        quad_res = max(quad_res, quad)
        details.append({"value": p.value, "v1sq": v1sq, "equations": eq, "F": quad})
    ok = (bool(values) and abs(values[0] - a2) <= max_tol
          and all(x < a2 - 1e-9 for x in values[1:]) and eq_res <= eq_tol)
    return AppendixReport(values=values, expected_max=a2, equation_residual=eq_res,
                          quadratic_residual=quad_res, passed=ok, details=details)
