"""Index families that shape the general canonical form.

All tuples here are 1-based, matching the coefficient labels
``c_{i1...in}``. Use :func:`to_storage` to address a numpy array.

For dims ``2 <= d_1 <= ... <= d_n`` with ``D = d_1 ... d_{n-1}``:

* ``I`` lists the ``(n-1)``-tuples still free after the deflation ladder,
  lexicographically; the last one is ``(d_1, ..., d_{n-1})``.
* ``A`` holds the coefficients zeroed while fixing the last ``d_n - d_{n-1} + 1``
  basis vectors of mode ``n``.
* ``B1 .. B4`` hold the coefficients made real non-negative by phase choices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

from .tensor import require_canonical_ready


def to_storage(index) -> tuple:
    return tuple(i - 1 for i in index)


def from_storage(index) -> tuple:
    return tuple(int(i) + 1 for i in index)


def staircase_index(dims, i: int) -> tuple:
    """``(d_1, ..., d_r, i, ..., i)`` with ``d_r < i <= d_{r+1}``; ``(i, ..., i)`` for ``i <= d_1``."""
    return tuple(min(d, i) for d in dims)


@dataclass(frozen=True)
class IndexSets:
    dims: tuple
    I: list
    A: list
    B1: list
    B2: list
    B3: list
    B4: list
    N: int
    D: int
    delta: int
    Delta: int

    @property
    def reals(self) -> list:
        return self.B1 + self.B2 + self.B3 + self.B4


def _excluded_prefixes(dims) -> set:
    """(n-1)-tuples whose mode-n coefficients are zeroed by the deflation ladder."""
    n = len(dims)
    out = {(i,) * (n - 1) for i in range(1, dims[0])}
    for r in range(1, n - 1):  # 1 <= r <= n-2
        for i in range(dims[r - 1], dims[r]):
            out.add(tuple(dims[:r]) + (i,) * (n - 1 - r))
    return out


def enumerate_index_sets(dims) -> IndexSets:
    d = require_canonical_ready(dims)
    n = len(d)
    D = prod(d[:-1])
    delta = d[-1] - d[-2]
    Delta = max(d[-1] - D, 0)

    excluded = _excluded_prefixes(d)
    I = [t for t in itertools.product(*(range(1, dr + 1) for dr in d[:-1])) if t not in excluded]
    N = len(I)

    A = []
    for k in range(1, min(N, delta) + 1):
        for l in range(k, delta + 1):
            A.append(I[k - 1] + (d[-2] + l,))

    B1 = []
    for r in range(1, n - 1):  # 1 <= r <= n-2
        for j in range(1, d[r - 1]):
            B1.append(tuple(d[:r - 1]) + (j,) + tuple(d[r:n - 1]) + (d[-2],))
    B2 = [tuple(d[:n - 2]) + (j, d[-2]) for j in range(1, d[n - 3])]
    B3 = [tuple(d[:n - 2]) + (j, 1) for j in range(d[n - 3], d[-2] + 1)]
    B4 = [(i,) * n for i in range(2, d[0] + 1)]
    for r in range(1, n - 1):  # 1 <= r < n-1
        for i in range(d[r - 1] + 1, d[r] + 1):
            B4.append(tuple(d[:r]) + (i,) * (n - r))
    for i in range(d[-2] + 1, min(D, d[-1]) + 1):
        B4.append(tuple(d[:-1]) + (i,))

    return IndexSets(dims=d, I=I, A=A, B1=B1, B2=B2, B3=B3, B4=B4,
                     N=N, D=D, delta=delta, Delta=Delta)


def condition1_indices(dims) -> list:
    """``c_{i..i j i..i}`` with ``1 <= i < d_1``, ``i < j``, ``j`` in any position."""
    n = len(dims)
    out = []
    for i in range(1, dims[0]):
        for s in range(n):
            for j in range(i + 1, dims[s] + 1):
                t = [i] * n
                t[s] = j
                out.append(tuple(t))
    return out


def condition2_indices(dims) -> list:
    """``c_{d_1..d_r i..i j i..i}`` with ``d_r <= i < d_{r+1}``, ``i < j``, ``1 <= r <= n-2``."""
    n = len(dims)
    out = []
    for r in range(1, n - 1):
        for i in range(dims[r - 1], dims[r]):
            for s in range(r, n):
                for j in range(i + 1, dims[s] + 1):
                    t = list(dims[:r]) + [i] * (n - r)
                    t[s] = j
                    out.append(tuple(t))
    return out
