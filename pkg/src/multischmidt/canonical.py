"""Generalised Schmidt decomposition for n >= 3 parts.

The construction follows the deflation ladder:

1. Maximise ``|<psi|phi_1 ... phi_n>|`` with every mode restricted to the
   complement of the basis vectors found so far; append the maximiser to each
   mode that still has more than one free direction. Modes whose complement
   is one-dimensional are pinned to that last direction, which reproduces the
   staircase for unequal dimensions. Stop once mode ``n-1`` is complete.
2. Fix the remaining ``d_n - d_{n-1} + 1`` basis vectors of mode ``n`` one at a
   time by maximising the overlap with ``psi_{I_k} x phi`` for the index
   tuples ``I_1, I_2, ...`` until the tuples or the free directions run out.
3. Rotate basis-vector phases so that the designated coefficients become
   real and non-negative.

``transforms[r]`` is the adjoint of the mode-``r`` basis matrix, so
``apply_local(psi, transforms)`` gives the canonical coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .config import TOL
from .indexsets import enumerate_index_sets, staircase_index, to_storage
from .maximizer import MaximizerOptions, SubspaceConstraint, multistart_maximize
from .orbit import ConditionReport, check_conditions
from .tensor import (LocalUnitaryTuple, ShapeError, StateTensor, apply_local, as_array,
                     complete_basis, gauge_vector, multiply_modes, require_canonical_ready)


@dataclass(frozen=True)
class CanonicalForm:
    coefficients: StateTensor
    transforms: LocalUnitaryTuple
    report: ConditionReport
    R: list
    ladder: list = field(default_factory=list)  # |lambda| of each deflation step
    flags: list = field(default_factory=list)
    escalations: int = 0

    @property
    def passed(self) -> bool:
        return self.report.passed


def _complete(found, d):
    B = complete_basis(found, d)
    for j in range(len(found), d):
        B[:, j] = gauge_vector(B[:, j])
    return B


def _phase_fixes_general(dims) -> list:
    """(mode, basis index, coefficient index), 1-based, in fixing order."""
    n = len(dims)
    sets = enumerate_index_sets(dims)
    last = dims[-2]
    fixes = [(n, 1, tuple(dims[:-1]) + (1,)),
             (n, last, tuple(dims[:-1]) + (last,))]
    for ix in sets.B1:
        r = next(s for s in range(n - 2) if ix[s] != dims[s]) + 1
        fixes.append((r, ix[r - 1], ix))
    for ix in sets.B2 + sets.B3:
        if ix[-2] < last:
            fixes.append((n - 1, ix[-2], ix))
    for j in range(2, min(dims[-1], sets.D) + 1):
        if j != last:
            fixes.append((n, j, staircase_index(dims[:-1], j) + (j,)))
    return fixes


def _phase_fixes_equal(d, n) -> list:
    # c_{d..d} first: each later fix then touches only its own coefficient
    fixes = [(1, d, (d,) * n)]
    for r in range(1, n + 1):
        for i in range(1, d):
            ix = [d] * n
            ix[r - 1] = i
            fixes.append((r, i, tuple(ix)))
    return fixes


def _construct(arr, opts, convention):
    dims = arr.shape
    n = len(dims)
    flags = []
    ladder = []

    found = [[] for _ in dims]
    step = 0
    while len(found[n - 2]) < dims[n - 2] - 1:
        con = SubspaceConstraint.from_vectors(dims, found)
        crit = multistart_maximize(arr, con, opts)
        ladder.append(abs(crit.lam))
        if crit.nonunique:
            flags.append(f"ladder step {step + 1}: maximum attained at inequivalent product states")
        if not crit.converged:
            flags.append(f"ladder step {step + 1}: power iteration did not converge "
                         f"(residual {crit.residual:.2e})")
        for r in range(n):
            if dims[r] - len(found[r]) > 1:
                found[r].append(gauge_vector(crit.phis[r]))
        step += 1

    bases = [_complete(found[r], dims[r]) for r in range(n - 1)]

    sets = enumerate_index_sets(dims)
    last = found[n - 1]
    for k, ix in enumerate(sets.I, start=1):
        if dims[-1] - len(last) <= 1:
            break
        rows = [bases[s][:, ix[s] - 1].conj()[None, :] for s in range(n - 1)]
        x = multiply_modes(arr, rows + [None]).ravel()
        if last:
            F = np.stack(last, axis=1)
            x = x - F @ (F.conj().T @ x)
        nrm = np.linalg.norm(x)
        if nrm <= TOL.phase_zero:
            flags.append(f"index set I_{k}={ix}: zero maximum, skipped")
            continue
        last.append(gauge_vector(x / nrm))
    bases.append(_complete(last, dims[-1]))

    fixes = (_phase_fixes_equal(dims[0], n) if convention == "equal"
             else _phase_fixes_general(dims))
    C = multiply_modes(arr, [B.conj().T for B in bases])
    for r, j, ix in fixes:
        v = C[to_storage(ix)]
        if abs(v) < TOL.phase_zero:
            flags.append(f"c{ix} ~ 0: phase of basis vector {j} of mode {r} left free")
            continue
        ph = v / abs(v)
        bases[r - 1][:, j - 1] *= ph
        sl = [slice(None)] * n
        sl[r - 1] = j - 1
        C[tuple(sl)] *= np.conj(ph)
    return bases, ladder, flags


def canonicalize(psi, opts: MaximizerOptions | None = None, *, convention: str = "general",
                 max_escalations: int = 3, tol: float = TOL.condition) -> CanonicalForm:
    """Canonical coefficients of ``psi`` and the local unitaries producing them.

    ``convention="general"`` fixes phases so the B-set coefficients are real;
    ``convention="equal"`` (equal dims only) makes real every coefficient with
    at most one index different from ``d``. The two coincide for qubits.

    If the final condition check fails (usually a missed global maximum) the
    whole construction reruns with 4x the starts, up to ``max_escalations``
    times. The last attempt is returned either way; inspect ``.passed``.
    ``tol`` is the condition-check tolerance.
    """
    arr = as_array(psi)
    if arr.ndim == 2:
        raise ShapeError("two-part states: use altforms.classical_schmidt")
    dims = require_canonical_ready(arr.shape)
    if convention not in ("general", "equal"):
        raise ValueError("convention must be 'general' or 'equal'")
    if convention == "equal" and len(set(dims)) != 1:
        raise ValueError("the 'equal' convention needs equal dimensions")
    if not isinstance(psi, StateTensor):
        psi = StateTensor(arr)
    opts = opts or MaximizerOptions()

    form = None
    for esc in range(max_escalations + 1):
        o = replace(opts, start_scale=opts.start_scale * 4 ** esc)
        bases, ladder, flags = _construct(arr, o, convention)
        U = LocalUnitaryTuple(tuple(B.conj().T for B in bases))
        coeffs = apply_local(psi, U)
        report = check_conditions(coeffs, tol=tol, convention=convention)
        if esc:
            flags = flags + [f"escalation {esc}: starts x{4 ** esc}"]
        form = CanonicalForm(coefficients=coeffs, transforms=U, report=report, R=report.R,
                             ladder=ladder, flags=flags, escalations=esc)
        if report.passed:
            break
    return form


def sort_modes(psi) -> tuple:
    """Reorder modes by non-decreasing dimension (stable).

    Returns ``(sorted_state, perm)`` where new mode ``k`` is old mode ``perm[k]``.
    """
    arr = as_array(psi)
    perm = tuple(int(p) for p in np.argsort(arr.shape, kind="stable"))
    out = np.transpose(arr, perm)
    return StateTensor(out, check=isinstance(psi, StateTensor)), perm


def unsort_modes(psi, perm) -> StateTensor:
    arr = as_array(psi)
    out = np.transpose(arr, tuple(int(p) for p in np.argsort(perm)))
    return StateTensor(out, check=isinstance(psi, StateTensor))


def strip_trivial_modes(psi) -> tuple:
    """Drop modes of dimension 1; returns ``(state, kept_mode_indices)``."""
    arr = as_array(psi)
    kept = tuple(r for r, d in enumerate(arr.shape) if d > 1)
    out = arr.reshape(tuple(arr.shape[r] for r in kept)) if kept else arr.reshape(1)
    return StateTensor(out, check=isinstance(psi, StateTensor)), kept
