import os
import subprocess
import sys

import numpy as np
import pytest

from multischmidt import kernels
from multischmidt._accel import HAVE_NUMBA
from multischmidt.tensor import environment, random_state

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


def _problem(dims, seed):
    rng = np.random.default_rng(seed)
    psi = random_state(dims, rng)
    ct = np.ascontiguousarray(psi.data.conj().ravel())
    V = np.zeros((len(dims), max(dims)), dtype=np.complex128)
    for r, d in enumerate(dims):
        z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        V[r, :d] = z / np.linalg.norm(z)
    return psi, ct, np.array(dims, dtype=np.int64), V


@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 3, 4), (3, 2, 2, 2)])
def test_numpy_env_matches_reference(dims):
    psi, ct, dv, V = _problem(dims, 1)
    phis = [V[r, :d] for r, d in enumerate(dims)]
    for r in range(len(dims)):
        assert np.allclose(kernels.env_np(ct, dv, V, r), environment(psi, phis, r), atol=1e-14)


@needs_numba
@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 3, 4), (3, 2, 2, 2)])
def test_backends_agree(dims):
    psi, ct, dv, V = _problem(dims, 2)
    for r in range(len(dims)):
        assert np.allclose(kernels.env_nb(ct, dv, V, r), kernels.env_np(ct, dv, V, r), atol=1e-14)
    free = np.ones(len(dims), dtype=np.bool_)
    V1, V2 = V.copy(), V.copy()
    h1, h2 = np.zeros(500), np.zeros(500)
    o1 = kernels.iterate_nb(ct, dv, V1, free, 500, 1e-13, 1e-14, h1)
    o2 = kernels.iterate_np(ct, dv, V2, free, 500, 1e-13, 1e-14, h2)
    assert tuple(o1) == tuple(o2)
    assert np.allclose(V1, V2, atol=1e-10)
    rng = np.random.default_rng(3)
    Vb = np.stack([_problem(dims, s)[3] for s in rng.integers(0, 1000, 17)])
    assert np.allclose(kernels.batch_abs_overlap_nb(ct, dv, Vb),
                       kernels.batch_abs_overlap_np(ct, dv, Vb), atol=1e-14)


def test_history_is_monotone():
    _, ct, dv, V = _problem((2, 3, 3), 4)
    h = np.zeros(1000)
    sweeps, status, _ = kernels.iterate(ct, dv, V, np.ones(3, dtype=np.bool_), 1000, 1e-13, 1e-14, h)
    assert status == kernels.CONVERGED_CHANGE
    assert np.all(np.diff(h[:sweeps]) >= -1e-14)


def test_zero_environment_reported():
    ct = np.zeros(8, dtype=np.complex128)
    ct[7] = 1
    V = np.zeros((3, 2), dtype=np.complex128)
    V[:, 0] = 1
    out = kernels.iterate(ct, np.array([2, 2, 2]), V, np.ones(3, dtype=np.bool_), 10, 1e-13, 1e-14,
                          np.zeros(10))
    assert out[1] == kernels.ZERO_ENVIRONMENT


def test_env_flag_selects_numpy():
    env = dict(os.environ, MULTISCHMIDT_DISABLE_NUMBA="1")
    code = ("from multischmidt import kernels, multistart_maximize;"
            "from multischmidt.states import psi_star;"
            "print(kernels.backend(), round(multistart_maximize(psi_star()).value, 12))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    assert out == ["numpy", "0.75"]


@needs_numba
def test_canonical_form_same_on_both_backends(tmp_path):
    from multischmidt.canonical import canonicalize
    psi = random_state((2, 2, 3), 21)
    out = tmp_path / "c.npy"
    code = ("import numpy as np; from multischmidt import canonicalize, random_state;"
            f"np.save({str(out)!r}, canonicalize(random_state((2, 2, 3), 21)).coefficients.data)")
    env = dict(os.environ, MULTISCHMIDT_DISABLE_NUMBA="1")
    subprocess.run([sys.executable, "-c", code], env=env, check=True)
    assert np.abs(np.load(out) - canonicalize(psi).coefficients.data).max() < 1e-9
