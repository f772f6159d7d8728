import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multischmidt.altforms import (classical_schmidt, iu_descend, iu_directional_derivative,
                                   iu_entropy, iu_gradient, marginal_basis_form,
                                   marginal_orthogonality)
from multischmidt.states import ghz
from multischmidt.tensor import apply_local, haar_unitary, random_local_unitaries, random_state

G = np.array([[0, -1], [1, 0]])


def test_entropy_values(psi):
    assert iu_entropy(ghz()) == pytest.approx(np.log(2))
    p = np.array([9, 1, 2]) / 12
    assert iu_entropy(psi) == pytest.approx(-np.sum(p * np.log(p)))


def test_derivatives_at_worked_examples(psi, phi):
    assert iu_directional_derivative(psi, 0, G) == pytest.approx(-np.log(2) / (3 * np.sqrt(2)), abs=1e-12)
    assert iu_directional_derivative(phi, 0, G) == pytest.approx(-np.log(np.sqrt(2) + 1), abs=1e-12)


def test_generator_must_be_antihermitian(psi):
    with pytest.raises(ValueError):
        iu_directional_derivative(psi, 0, np.eye(2))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31))
def test_gradient_matches_directional_derivative(seed):
    rng = np.random.default_rng(seed)
    psi = random_state((2, 3, 2), rng)
    grads = iu_gradient(psi)
    for r, d in enumerate((2, 3, 2)):
        H = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        A = H - H.conj().T
        lhs = iu_directional_derivative(psi, r, A)
        rhs = np.real(np.trace(grads[r].conj().T @ A))
        assert lhs == pytest.approx(rhs, abs=1e-9)


def test_marginal_form_of_psi_star(psi, phi):
    form = marginal_basis_form(psi)
    assert np.abs(form.coefficients.data - phi.data).max() < 1e-12


@pytest.mark.parametrize("dims", [(2, 2, 2), (2, 3, 4), (3, 3)])
def test_marginal_orthogonality(dims):
    for seed in range(5):
        c = marginal_basis_form(random_state(dims, seed)).coefficients
        for r in range(len(dims)):
            M = marginal_orthogonality(c, r)
            off = M - np.diag(np.diag(M))
            assert np.abs(off).max() < 1e-9
            assert np.all(np.diff(np.diag(M).real) <= 1e-12)


def test_degenerate_marginal_flagged():
    assert marginal_basis_form(ghz()).flags


def test_iu_descend_lowers_entropy(psi):
    tr = iu_descend(psi)
    assert tr.entropies[-1] < tr.entropies[0]
    assert np.all(np.diff(tr.entropies) < 0)
    assert np.abs(apply_local(psi, tr.transforms).data - tr.state.data).max() < 1e-10


def test_classical_schmidt_is_diagonal():
    psi = random_state((3, 4), 0)
    form = classical_schmidt(psi)
    c = form.coefficients.data
    assert np.abs(c - np.diag(np.diag(c)) @ np.eye(3, 4)).max() < 1e-12
    diag = np.diag(c)
    assert np.abs(diag.imag).max() < 1e-12 and np.all(np.diff(diag.real) <= 1e-15)


def test_schmidt_minimises_entropy(rng):
    for _ in range(10):
        psi = random_state((3, 3), rng)
        s0 = iu_entropy(classical_schmidt(psi).coefficients)
        for _ in range(5):
            moved = apply_local(psi, [haar_unitary(3, rng), haar_unitary(3, rng)])
            assert s0 <= iu_entropy(moved) + 1e-9


def test_entropy_not_invariant():
    psi = random_state((2, 2, 2), 3)
    moved = apply_local(psi, random_local_unitaries((2, 2, 2), 4))
    assert abs(iu_entropy(psi) - iu_entropy(moved)) > 1e-6
