from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mubwitness.linalg import haar_state, swap_operator
from mubwitness.mub import MubSet, fourier_matrix, hw_set, standard_basis
from mubwitness.states import bell_state
from mubwitness.witness import (
    HermiticityWarning,
    joint_probability,
    upper_bound,
    witness_operator,
    witness_value,
    witness_value_product,
)


def random_density(n, rng, rank=None):
    rank = rank or n
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def singlet():
    psi = np.array([0, 1, -1, 0]) / np.sqrt(2)
    return np.outer(psi, psi)


def test_joint_probability_bell_state():
    assert abs(joint_probability(bell_state(2).matrix, standard_basis(2), 0) - 0.5) < 1e-15


@pytest.mark.parametrize("d", [2, 3, 5])
def test_joint_probability_maximally_mixed(d):
    rho = np.eye(d * d) / d**2
    for b in hw_set(d):
        for i in range(d):
            assert abs(joint_probability(rho, b, i) - 1 / d**2) < 1e-15


def test_joint_probability_singlet_vanishes():
    for b in hw_set(2):
        for i in range(2):
            assert abs(joint_probability(singlet(), b, i)) < 1e-15


def test_joint_probability_errors():
    with pytest.raises(IndexError):
        joint_probability(np.eye(4) / 4, standard_basis(2), 2)
    with pytest.raises(ValueError):
        joint_probability(np.eye(9) / 9, standard_basis(2), 0)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_witness_maximally_mixed(d):
    mubs = hw_set(d)
    for m in range(1, len(mubs) + 1):
        res = witness_value(np.eye(d * d) / d**2, mubs.subset(range(m)))
        assert abs(res.value - m / d) < 1e-13
        assert res.m == m and res.d == d


def test_witness_singlet_below_lower_bound_d2():
    assert abs(witness_value(singlet(), hw_set(2)).value) < 1e-15


def test_witness_d4_product_state_saturates_quarter():
    a = np.array([1, 0, -1, 0]) / np.sqrt(2)
    b = np.array([0, 1, 0, 1]) / np.sqrt(2)
    triple = hw_set(4).subset([0, 1, 2])
    rho = np.outer(np.kron(a, b), np.kron(a, b).conj())
    assert abs(witness_value(rho, triple).value - 0.25) < 1e-12
    assert abs(witness_value_product(a, b, triple) - 0.25) < 1e-12


def test_per_basis_sums_and_range():
    rng = np.random.default_rng(0)
    rho = random_density(16, rng)
    res = witness_value(rho, hw_set(4))
    assert abs(sum(res.per_basis) - res.value) < 1e-14
    assert all(-1e-12 <= p <= 1 + 1e-12 for p in res.per_basis)
    assert float(res) == res.value


def test_product_fast_path_trivial_cases():
    e0 = np.array([1, 0], dtype=complex)
    e1 = np.array([0, 1], dtype=complex)
    assert witness_value_product(e0, e0, MubSet((standard_basis(2),))) == pytest.approx(1.0)
    zx = MubSet((standard_basis(2), fourier_matrix(2)))
    assert witness_value_product(e0, e1, zx) == pytest.approx(0.5, abs=1e-15)


def test_product_requires_normalized_input():
    with pytest.raises(ValueError, match="not normalized"):
        witness_value_product(np.array([1, 1]), np.array([1, 0]), hw_set(2))
    with pytest.raises(ValueError):
        witness_value_product(np.ones(3) / np.sqrt(3), np.ones(3) / np.sqrt(3), hw_set(2))


@pytest.mark.parametrize("d", [2, 3, 4, 5, 7])
def test_product_fast_path_matches_dense_path(d):
    rng = np.random.default_rng(100 + d)
    mubs = hw_set(d)
    w = witness_operator(mubs)
    worst = 0.0
    for _ in range(1000):
        a, b = haar_state(d, rng), haar_state(d, rng)
        v = np.kron(a, b)
        dense = float(np.real(v.conj() @ w @ v))
        worst = max(worst, abs(dense - witness_value_product(a, b, mubs)))
    assert worst < 1e-12
    a, b = haar_state(d, rng), haar_state(d, rng)
    rho = np.outer(np.kron(a, b), np.kron(a, b).conj())
    assert abs(witness_value(rho, mubs).value - witness_value_product(a, b, mubs)) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_complete_set_swap_identity(d):
    rng = np.random.default_rng(d)
    mubs = hw_set(d)
    swap = swap_operator(d)
    for _ in range(20):
        rho = random_density(d * d, rng)
        lhs = witness_value(rho, mubs).value
        rhs = 1 + np.real(np.trace(swap @ rho))
        assert abs(lhs - rhs) < 1e-10


@settings(max_examples=40, deadline=None)
@given(d=st.sampled_from([2, 3, 4, 5]), lam=st.floats(0, 1), seed=st.integers(0, 2**32 - 1))
def test_witness_is_linear(d, lam, seed):
    rng = np.random.default_rng(seed)
    mubs = hw_set(d)
    r1, r2 = random_density(d * d, rng), random_density(d * d, rng)
    mix = witness_value(lam * r1 + (1 - lam) * r2, mubs).value
    parts = lam * witness_value(r1, mubs).value + (1 - lam) * witness_value(r2, mubs).value
    assert abs(mix - parts) < 1e-12


@settings(max_examples=40, deadline=None)
@given(d=st.sampled_from([2, 3, 4, 5, 7]), seed=st.integers(0, 2**32 - 1))
def test_witness_range(d, seed):
    rng = np.random.default_rng(seed)
    mubs = hw_set(d)
    rho = random_density(d * d, rng, rank=int(rng.integers(1, d * d + 1)))
    value = witness_value(rho, mubs).value
    assert -1e-12 <= value <= len(mubs) + 1e-12


def test_witness_operator_matches_value():
    rng = np.random.default_rng(7)
    mubs = hw_set(3)
    rho = random_density(9, rng)
    assert abs(np.real(np.trace(witness_operator(mubs) @ rho)) - witness_value(rho, mubs).value) < 1e-13


def test_non_hermitian_input_warns():
    rho = np.eye(4, dtype=complex) / 4
    rho[0, 3] = 0.3j
    with pytest.warns(HermiticityWarning):
        witness_value(rho, MubSet((fourier_matrix(2),)))


def test_upper_bound_examples():
    assert upper_bound(4, 3) == Fraction(6, 4)
    assert upper_bound(5, 2) == Fraction(6, 5)
    assert upper_bound(7, 8) == 2
    assert isinstance(upper_bound(3, 2), Fraction)


def test_upper_bound_range_checks():
    with pytest.raises(ValueError):
        upper_bound(3, 5)
    with pytest.raises(ValueError):
        upper_bound(3, 0)
    with pytest.raises(ValueError):
        upper_bound(1, 1)
