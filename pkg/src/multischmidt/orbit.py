"""Condition checking and parameter counting for the general canonical form.

Counting uses integers only. Index tuples in reports are 1-based.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod

import numpy as np

from .config import TOL
from .indexsets import (condition1_indices, condition2_indices, enumerate_index_sets,
                        staircase_index, to_storage)
from .tensor import as_array, require_canonical_ready


@dataclass(frozen=True)
class ConditionResult:
    passed: bool
    violations: list = field(default_factory=list)  # (index or pair, magnitude)


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of :func:`check_conditions`.

    ``general`` maps 1..5 to the general conditions; ``equal_dims`` maps 1..3
    to the equal-dimension conditions and is ``None`` for unequal dims.
    ``convention`` decides which of them :attr:`passed` requires (the two
    reality conditions fix phases differently once ``d >= 3``).
    """
    dims: tuple
    tol: float
    convention: str
    general: dict
    equal_dims: dict | None
    R: list
    zeros_found: int
    forced_zeros: int
    forced_reals: int

    @property
    def required(self) -> list:
        if self.convention == "equal":
            return [("equal_dims", k) for k in (1, 2, 3)] + [("general", k) for k in (1, 2, 3, 5)]
        req = [("general", k) for k in (1, 2, 3, 4, 5)]
        if self.equal_dims is not None:
            req += [("equal_dims", 1), ("equal_dims", 3)]
        return req

    @property
    def passed(self) -> bool:
        return all(getattr(self, group)[k].passed for group, k in self.required)

    def failing(self) -> list:
        return [f"{group}.{k}" for group, k in self.required if not getattr(self, group)[k].passed]

    def to_dict(self) -> dict:
        def conv(group):
            if group is None:
                return None
            return {str(k): {"passed": v.passed,
                             "violations": [[list(ix) if isinstance(ix, tuple) else ix, float(m)]
                                            for ix, m in v.violations]}
                    for k, v in group.items()}
        return {"dims": list(self.dims), "tol": self.tol, "convention": self.convention,
                "passed": self.passed, "failing": self.failing(),
                "general": conv(self.general), "equal_dims": conv(self.equal_dims),
                "R": [float(x) for x in self.R], "zeros_found": self.zeros_found,
                "forced_zeros": self.forced_zeros, "forced_reals": self.forced_reals}


def _zero_check(c, indices, tol) -> ConditionResult:
    bad = [(ix, abs(c[to_storage(ix)])) for ix in indices if abs(c[to_storage(ix)]) > tol]
    return ConditionResult(not bad, bad)


def _real_check(c, indices, tol) -> ConditionResult:
    bad = []
    for ix in indices:
        v = c[to_storage(ix)]
        if abs(v.imag) > tol or v.real < -tol:
            bad.append((ix, abs(v.imag) if abs(v.imag) > tol else -v.real))
    return ConditionResult(not bad, bad)


def r_values(coeffs) -> list:
    """``R_i = |c_{d_1..d_r i..i}|`` for ``i = 1..d_{n-1}``."""
    c = as_array(coeffs)
    dims = c.shape
    return [float(abs(c[to_storage(staircase_index(dims, i))])) for i in range(1, dims[-2] + 1)]


def _equal_dims_checks(c, d, n, tol) -> dict:
    t1 = _zero_check(c, condition1_indices((d,) * n), tol)
    near_d = [(d,) * n]
    for r in range(n):
        for i in range(1, d):
            t = [d] * n
            t[r] = i
            near_d.append(tuple(t))
    t2 = _real_check(c, near_d, tol)
    bad = []
    for i in range(1, d + 1):
        top = abs(c[(i - 1,) * n])
        block = np.abs(c[(slice(i - 1, None),) * n])
        for off in zip(*np.nonzero(block > top + tol)):
            ix = tuple(int(o) + i for o in off)
            bad.append((((i,) * n, ix), float(block[off] - top)))
    return {1: t1, 2: t2, 3: ConditionResult(not bad, bad)}


def check_conditions(coeffs, tol: float = TOL.condition, convention: str = "general") -> ConditionReport:
    """Evaluate every canonical-form condition on a coefficient tensor.

    All conditions are evaluated and listed regardless of ``convention``.
    """
    if convention not in ("general", "equal"):
        raise ValueError("convention must be 'general' or 'equal'")
    c = as_array(coeffs)
    dims = require_canonical_ready(c.shape)
    n = len(dims)
    if convention == "equal" and len(set(dims)) != 1:
        raise ValueError("the 'equal' convention needs equal dimensions")
    sets = enumerate_index_sets(dims)

    R = r_values(c)
    bad5 = [((i + 1, i + 2), R[i + 1] - R[i]) for i in range(len(R) - 1) if R[i + 1] > R[i] + tol]
    t2 = {
        1: _zero_check(c, condition1_indices(dims), tol),
        2: _zero_check(c, condition2_indices(dims), tol),
        3: _zero_check(c, sets.A, tol),
        4: _real_check(c, sets.reals, tol),
        5: ConditionResult(not bad5, bad5),
    }
    t1 = _equal_dims_checks(c, dims[0], n, tol) if len(set(dims)) == 1 else None
    info = orbit_info(dims)
    return ConditionReport(
        dims=dims, tol=tol, convention=convention, general=t2, equal_dims=t1, R=R,
        zeros_found=int(np.sum(np.abs(c) <= tol)),
        forced_zeros=info.zeros_cond12 + info.zeros_cond3,
        forced_reals=info.phases_removed)


@dataclass(frozen=True)
class OrbitInfo:
    dims: tuple
    D: int
    N: int
    delta: int
    Delta: int
    zeros_cond12: int
    zeros_cond3: int
    phases_removed: int
    real_parameters: int
    group_dimension: int
    orbit_dimension: int
    stabilizer_dimension: int

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.__dict__.items()}


def orbit_info(dims) -> OrbitInfo:
    """Closed-form counts of the canonical form and the generic orbit."""
    d = require_canonical_ready(dims)
    D = prod(d[:-1])
    N = D - d[-2] + 1
    delta = d[-1] - d[-2]
    half_sum = sum(x * (x - 1) for x in d) // 2
    zeros12 = half_sum - delta * (delta + 1) // 2
    group = sum(x * x - 1 for x in d) + 1
    phases = sum(x - 1 for x in d) + 1
    if d[-1] <= D:
        Delta = 0
        zeros3 = delta * (delta + 1) // 2
    else:
        Delta = d[-1] - D
        zeros3 = N * (delta + 1) - N * (N + 1) // 2
        phases -= Delta
    params = 2 * prod(d) - 2 * (zeros12 + zeros3) - phases
    return OrbitInfo(dims=d, D=D, N=N, delta=delta, Delta=Delta,
                     zeros_cond12=zeros12, zeros_cond3=zeros3, phases_removed=phases,
                     real_parameters=params, group_dimension=group,
                     orbit_dimension=group - Delta ** 2, stabilizer_dimension=Delta ** 2)


def count_constrained_indices(dims) -> tuple:
    """Explicit (zeros, reals) index lists from the condition definitions."""
    d = require_canonical_ready(dims)
    sets = enumerate_index_sets(d)
    zeros = condition1_indices(d) + condition2_indices(d) + sets.A
    return zeros, sets.reals


def canonical_ready_shapes(n_values=(3, 4), max_dim=4):
    """Every sorted shape with the given mode counts and ``2 <= d_r <= max_dim``."""
    for n in n_values:
        yield from itertools.combinations_with_replacement(range(2, max_dim + 1), n)
