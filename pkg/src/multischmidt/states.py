"""Named states.

``psi_star`` is the three-qubit example ``(3|000> + |011> + sqrt2|111>) / (2 sqrt3)``;
``phi_star`` is the same state in the marginal eigenbasis of qubit 1, and
``half_variant`` a locally equivalent form whose ``|000>`` coefficient is 1/2.
"""
import numpy as np

from .tensor import StateTensor

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)

# maps psi_star to phi_star on qubit 1 (column-vector action)
QUBIT1_ROTATION = np.array([[SQRT2 + 1, SQRT2 - 1],
                            [1 - SQRT2, SQRT2 + 1]]) / np.sqrt(6.0)


def ghz(n: int = 3, d: int = 2) -> StateTensor:
    arr = np.zeros((d,) * n, dtype=np.complex128)
    for i in range(d):
        arr[(i,) * n] = 1 / np.sqrt(d)
    return StateTensor(arr)


def w_state(n: int = 3) -> StateTensor:
    arr = np.zeros((2,) * n, dtype=np.complex128)
    for r in range(n):
        idx = [0] * n
        idx[r] = 1
        arr[tuple(idx)] = 1 / np.sqrt(n)
    return StateTensor(arr)


def psi_star() -> StateTensor:
    k = 1 / (2 * SQRT3)
    return StateTensor.from_terms((2, 2, 2), {"000": 3 * k, "011": k, "111": SQRT2 * k})


def phi_star() -> StateTensor:
    k = 1 / (2 * SQRT2)
    return StateTensor.from_terms((2, 2, 2), {"000": (SQRT2 + 1) * k, "100": -(SQRT2 - 1) * k,
                                              "011": k, "111": k})


def half_variant() -> StateTensor:
    """``|000>/2 + |011>/2 + |111>/sqrt2``: qubits 2, 3 relabelled and qubit 1
    rotated onto the stationary point of overlap 1/2."""
    return StateTensor.from_terms((2, 2, 2), {"000": 0.5, "011": 0.5, "111": 1 / SQRT2})
