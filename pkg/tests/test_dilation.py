"""Contraction scaling and unitary dilation of unbroken evolution."""

import numpy as np
import pytest

from ptqm.bender import BenderParams, bender_hamiltonian
from ptqm.canonical import pt_canonical_form
from ptqm.dilation import embedded_evolution_check, halmos_dilation, uniform_bound
from ptqm.dynamics import TimeGrid, propagator
from ptqm.errors import BrokenSymmetryError, PreconditionError, ValidationError
from ptqm.linalg import operator_norm
from ptqm.symmetry import PTPair, validate_pt_pair

SX = np.array([[0.0, 1.0], [1.0, 0.0]])
IDENTITY_PAIR = validate_pt_pair(np.eye(2), np.eye(2))


def bender(r, s, theta):
    return bender_hamiltonian(BenderParams(r, s, theta))


def test_uniform_bound_hermitian_is_slack():
    # Psi unitary up to column scaling, so ||Psi|| ||Psi^-1|| = 1
    h, pair = bender(0.0, 1.0, 0.0)
    dec = pt_canonical_form(h, pair)
    assert abs(uniform_bound(dec) - 0.99) <= 1e-12
    assert abs(uniform_bound(dec, slack=0.5) - 0.5) <= 1e-12


def test_uniform_bound_rejects_broken():
    h, pair = bender(2.0, 1.0, np.pi / 2)
    dec = pt_canonical_form(h, pair)
    with pytest.raises(BrokenSymmetryError):
        uniform_bound(dec)
    with pytest.raises(ValidationError):
        uniform_bound(pt_canonical_form(*bender(0.0, 1.0, 0.0)), slack=1.5)


def test_uniform_bound_caps_propagator_norm():
    # c ||U(t)|| < 1 for all t, checked on a long grid
    h, pair = bender(1.0, 1.0, np.pi / 3)
    dec = pt_canonical_form(h, pair)
    c = uniform_bound(dec)
    for t in np.linspace(0.0, 50.0, 101):
        assert c * operator_norm(propagator(h, t)) < 1.0


def test_halmos_identity_full_strength():
    res = halmos_dilation(np.eye(2), 1.0)
    expect = np.block([[np.eye(2), np.zeros((2, 2))],
                       [np.zeros((2, 2)), -np.eye(2)]])
    assert np.array_equal(res.V, expect)
    assert res.unitarity_residual <= 1e-15


def test_halmos_half_strength_defects():
    res = halmos_dilation(np.eye(2), 0.5)
    root3_half = np.sqrt(3.0) / 2.0
    assert operator_norm(res.V[:2, 2:] - root3_half * np.eye(2)) <= 1e-12
    assert operator_norm(res.V[2:, :2] - root3_half * np.eye(2)) <= 1e-12
    assert operator_norm(res.V[:2, :2] - 0.5 * np.eye(2)) <= 1e-15
    assert res.unitarity_residual <= 1e-12


def test_halmos_unitarity_random_contractions():
    rng = np.random.default_rng(83)
    for _ in range(20):
        d = int(rng.integers(2, 6))
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        u = a / (1.01 * operator_norm(a))
        res = halmos_dilation(u, 0.9)
        assert res.unitarity_residual <= 1e-9
        assert operator_norm(res.V[:d, :d] - 0.9 * u) <= 1e-15


def test_halmos_rejects_expansive_input():
    with pytest.raises(PreconditionError):
        halmos_dilation(2.0 * np.eye(2), 1.0)
    with pytest.raises(ValidationError):
        halmos_dilation(np.eye(2), 0.0)
    with pytest.raises(ValidationError):
        halmos_dilation(np.eye(2), 1.5)


def test_embedded_hermitian_exact():
    h = SX
    rho = np.array([[0.7, 0.1], [0.1, 0.3]], dtype=complex)
    rep = embedded_evolution_check(h, IDENTITY_PAIR, rho, TimeGrid(0.0, 5.0, 51))
    assert rep.max_deviation <= 1e-10
    # unitary U makes the success probability exactly c^2
    assert np.max(np.abs(rep.success_probabilities - rep.c ** 2)) <= 1e-12
    assert np.max(rep.unitarity_residuals) <= 1e-9


def test_embedded_unbroken_matches_direct():
    h, pair = bender(1.0, 1.0, np.pi / 6)
    rho = np.array([[0.6, 0.2 - 0.1j], [0.2 + 0.1j, 0.4]])
    rep = embedded_evolution_check(h, pair, rho, TimeGrid(0.0, 10.0, 101))
    assert rep.max_deviation <= 1e-8
    assert np.max(rep.unitarity_residuals) <= 1e-9
    assert np.all(rep.success_probabilities > 0.0)
    assert np.all(rep.success_probabilities <= 1.0 + 1e-12)


def test_embedded_time_zero_point():
    h, pair = bender(1.0, 1.0, 0.4)
    rho = np.diag([0.5, 0.5]).astype(complex)
    rep = embedded_evolution_check(h, pair, rho, TimeGrid(0.0, 0.0, 1))
    assert rep.max_deviation <= 1e-12
    assert abs(rep.success_probabilities[0] - rep.c ** 2) <= 1e-12


def test_embedded_rejects_broken():
    h, pair = bender(2.0, 1.0, np.pi / 2)
    rho = np.diag([0.5, 0.5]).astype(complex)
    with pytest.raises(BrokenSymmetryError):
        embedded_evolution_check(h, pair, rho)
