import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multischmidt.tensor import (LocalUnitaryTuple, ModeShape, NormalizationError, NotUnitaryError,
                                 ShapeError, StateTensor, apply_local, complete_basis, environment,
                                 gauge_vector, haar_unitary, multiply_modes, overlap,
                                 random_local_unitaries, random_state, reduced_density,
                                 require_canonical_ready)

small_dims = st.lists(st.integers(1, 3), min_size=2, max_size=4).map(tuple)


def test_state_rejects_unnormalised():
    with pytest.raises(NormalizationError):
        StateTensor(np.ones((2, 2)))
    s = StateTensor.from_amplitudes((2, 2), np.ones(4), normalize=True)
    assert s.norm() == pytest.approx(1.0)


def test_state_rejects_wrong_length():
    with pytest.raises(ShapeError):
        StateTensor.from_amplitudes((2, 2, 2), np.ones(7) / np.sqrt(7))


def test_state_is_read_only():
    s = random_state((2, 2), seed=1)
    with pytest.raises(ValueError):
        s.data[0, 0] = 1


def test_from_terms_bitstrings():
    s = StateTensor.from_terms((2, 2, 2), {"000": 1, "111": 1}, normalize=True)
    assert s[0, 0, 0] == pytest.approx(1 / np.sqrt(2))
    assert s[1, 1, 1] == pytest.approx(1 / np.sqrt(2))


def test_canonical_ready():
    assert ModeShape((2, 2, 3)).canonical_ready
    assert not ModeShape((3, 2, 2)).canonical_ready
    assert not ModeShape((2, 2)).canonical_ready
    with pytest.raises(ShapeError):
        require_canonical_ready((2, 1, 2))


def test_unitarity_checked():
    with pytest.raises(NotUnitaryError):
        LocalUnitaryTuple((np.array([[1, 1], [0, 1]]),))
    with pytest.raises(ShapeError):
        LocalUnitaryTuple((np.ones((2, 3)),))


def test_haar_unitary_is_unitary():
    for d in (1, 2, 5):
        u = haar_unitary(d, seed=d)
        assert np.allclose(u.conj().T @ u, np.eye(d), atol=1e-12)


def test_haar_seed_reproducible():
    assert np.array_equal(haar_unitary(3, seed=7), haar_unitary(3, seed=7))


def test_overlap_of_basis_product():
    s = StateTensor.basis((2, 3, 2), (1, 2, 0))
    e = [np.eye(d) for d in (2, 3, 2)]
    assert overlap(s, [e[0][1], e[1][2], e[2][0]]) == pytest.approx(1.0)
    assert overlap(s, [e[0][0], e[1][2], e[2][0]]) == pytest.approx(0.0)


def test_overlap_conjugates_tensor():
    s = StateTensor.from_terms((2, 2), {(0, 0): 1j})
    assert overlap(s, [np.array([1, 0]), np.array([1, 0])]) == pytest.approx(-1j)


@settings(max_examples=30, deadline=None)
@given(small_dims, st.integers(0, 2**31))
def test_environment_contracts_to_overlap(dims, seed):
    rng = np.random.default_rng(seed)
    psi = random_state(dims, rng)
    phis = [rng.standard_normal(d) + 1j * rng.standard_normal(d) for d in dims]
    lam = overlap(psi, phis)
    for r in range(len(dims)):
        assert environment(psi, phis, r) @ phis[r] == pytest.approx(lam, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(small_dims, st.integers(0, 2**31))
def test_apply_local_preserves_norm_and_inverts(dims, seed):
    psi = random_state(dims, seed)
    U = random_local_unitaries(dims, seed + 1)
    out = apply_local(psi, U)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)
    back = apply_local(out, U.adjoint())
    assert np.abs(back.data - psi.data).max() < 1e-12


@settings(max_examples=30, deadline=None)
@given(small_dims, st.integers(0, 2**31))
def test_reduced_density_transforms_covariantly(dims, seed):
    psi = random_state(dims, seed)
    U = random_local_unitaries(dims, seed + 1)
    out = apply_local(psi, U)
    for r in range(len(dims)):
        rho = reduced_density(psi, r)
        assert np.trace(rho).real == pytest.approx(1.0)
        assert np.allclose(reduced_density(out, r), U[r] @ rho @ U[r].conj().T, atol=1e-12)


def test_apply_local_dimension_mismatch():
    with pytest.raises(ShapeError):
        apply_local(random_state((2, 2), 0), LocalUnitaryTuple.identity((2, 3)))


def test_multiply_modes_rectangular():
    arr = random_state((2, 3), 0).data
    out = multiply_modes(arr, [None, np.ones((1, 3))])
    assert out.shape == (2, 1)
    assert np.allclose(out[:, 0], arr.sum(axis=1))


def test_complete_basis_keeps_inputs(rng):
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v /= np.linalg.norm(v)
    B = complete_basis([v], 4)
    assert np.allclose(B[:, 0], v)
    assert np.allclose(B.conj().T @ B, np.eye(4), atol=1e-12)
    with pytest.raises(ValueError):
        complete_basis([v, v], 4)


def test_gauge_vector(rng):
    v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    g = gauge_vector(v * np.exp(0.7j))
    j = int(np.argmax(np.abs(g)))
    assert g[j].imag == pytest.approx(0, abs=1e-14) and g[j].real > 0
    assert np.allclose(gauge_vector(v), g)
