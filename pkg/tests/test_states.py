import numpy as np
import pytest

from mubwitness.linalg import haar_state, haar_unitary, swap_operator
from mubwitness.mub import family_set, hw_set
from mubwitness.states import (
    DensityMatrix,
    NonPhysicalStateError,
    bell_state,
    is_ppt,
    magic_simplex_state,
    product_state,
    weyl_operator,
    werner_state,
)
from mubwitness.witness import witness_value


def test_weyl_identity_and_phase():
    assert np.allclose(weyl_operator(3, 0, 0), np.eye(3))
    w = np.exp(2j * np.pi / 3)
    assert np.allclose(weyl_operator(3, 1, 0), np.diag([1, w, w**2]))


def test_weyl_shift_action():
    # W_(0,1) = sum_j |j><j+1|, so it maps |j+1> to |j>.
    w = weyl_operator(4, 0, 1)
    e = np.eye(4)
    assert np.allclose(w @ e[2], e[1])
    assert np.allclose(w @ e[0], e[3])


@pytest.mark.parametrize("d", range(2, 10))
def test_weyl_unitary(d):
    for k in range(d):
        for l in range(d):
            w = weyl_operator(d, k, l)
            assert np.allclose(w @ w.conj().T, np.eye(d), atol=1e-12)


def test_weyl_index_range():
    with pytest.raises(IndexError):
        weyl_operator(3, 3, 0)


def test_bell_d2_is_phi_plus():
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.allclose(bell_state(2).matrix, np.outer(phi, phi))


def test_bell_states_orthonormal_d3():
    d = 3
    states = [bell_state(d, k, l).matrix for k in range(d) for l in range(d)]
    gram = np.array([[np.real(np.trace(a @ b)) for b in states] for a in states])
    assert np.allclose(gram, np.eye(d * d), atol=1e-12)


def test_bell_state_is_rank_one_projector():
    p = bell_state(4, 1, 2).matrix
    assert np.allclose(p @ p, p, atol=1e-12)
    assert abs(np.trace(p) - 1) < 1e-12


def test_magic_simplex_endpoints():
    assert np.allclose(magic_simplex_state(3, 0, 0).matrix, np.eye(9) / 9)
    assert np.allclose(magic_simplex_state(3, 1, 0).matrix, bell_state(3).matrix)


def test_magic_simplex_rejects_nonphysical():
    with pytest.raises(NonPhysicalStateError) as info:
        magic_simplex_state(4, -0.5, -0.5)
    assert info.value.min_eigenvalue < 0


def test_magic_simplex_d4_ppt_boundary_from_eigenvalue_scan():
    # Bisection on the PT eigenvalue is the oracle; the sign must change across it.
    lo, hi = 0.0, 0.5
    for _ in range(60):
        mid = (lo + hi) / 2
        if is_ppt(magic_simplex_state(4, mid, mid), tol=0).ppt:
            lo = mid
        else:
            hi = mid
    assert is_ppt(magic_simplex_state(4, lo - 1e-6, lo - 1e-6)).ppt
    assert not is_ppt(magic_simplex_state(4, lo + 1e-6, lo + 1e-6), tol=0).ppt
    assert 0.1 < lo < 0.2


@pytest.mark.parametrize("d", [2, 3, 4])
def test_magic_simplex_linearity_pipeline(d):
    mubs = hw_set(d)
    p00 = witness_value(bell_state(d, 0, 0).matrix, mubs).value
    p01 = witness_value(bell_state(d, 0, 1).matrix, mubs).value
    for alpha, beta in [(0.1, 0.05), (0.3, 0.2), (-0.02, 0.1)]:
        got = witness_value(magic_simplex_state(d, alpha, beta).matrix, mubs).value
        want = (1 - alpha - beta) * len(mubs) / d + alpha * p00 + beta * p01
        assert abs(got - want) < 1e-12


def test_werner_zero_is_maximally_mixed():
    assert np.allclose(werner_state(3, 0).matrix, np.eye(9) / 9)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_werner_invariant_under_u_tensor_u(d):
    rng = np.random.default_rng(d)
    rho = werner_state(d, 0.7).matrix
    for _ in range(5):
        u = haar_unitary(d, rng)
        uu = np.kron(u, u)
        assert np.linalg.norm(uu @ rho @ uu.conj().T - rho) < 1e-10


def test_werner_ppt_boundary_d3():
    assert abs(is_ppt(werner_state(3, 1 / 3)).min_eigenvalue) < 1e-10


@pytest.mark.parametrize("d", [2, 3, 4])
def test_werner_entangled_iff_phi_above_one_over_d(d):
    for phi in np.linspace(-1, 1, 41):
        ppt = is_ppt(werner_state(d, phi)).ppt
        if phi < 1 / d - 1e-9:
            assert ppt
        elif phi > 1 / d + 1e-9:
            assert not ppt


def test_werner_range_check():
    with pytest.raises(ValueError):
        werner_state(3, 1.5)


@pytest.mark.parametrize("d,m", [(4, 2), (4, 3), (5, 3), (7, 3)])
def test_werner_value_independent_of_mub_choice(d, m):
    rho = werner_state(d, 0.6).matrix
    sets = [hw_set(d).subset(range(m)), hw_set(d).subset(range(len(hw_set(d)) - m, len(hw_set(d))))]
    if d == 4 and m == 3:
        sets.append(family_set("h4", 4, 0.3, 1.1, 2.0))
    if d == 4 and m == 2:
        sets.append(family_set("fourier4", 4, 0.9))
    if d == 7 and m == 3:
        sets.append(family_set("a7"))
    values = [witness_value(rho, s).value for s in sets]
    assert max(values) - min(values) < 1e-10


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_complete_set_detects_all_entangled_werner_states(d):
    mubs = hw_set(d)
    swap = swap_operator(d)
    for phi in np.linspace(-1, 1, 81):
        rho = werner_state(d, phi).matrix
        value = witness_value(rho, mubs).value
        assert abs(value - (1 + np.real(np.trace(swap @ rho)))) < 1e-10
        if phi > 1 / d + 1e-9:
            assert value < 1 - 1e-9
        elif phi < 1 / d - 1e-9:
            assert value > 1 - 1e-12


def test_is_ppt_examples():
    d = 3
    mixed = is_ppt(np.eye(d * d) / d**2)
    assert mixed.ppt and abs(mixed.min_eigenvalue - 1 / d**2) < 1e-14
    rng = np.random.default_rng(0)
    assert is_ppt(product_state(haar_state(d, rng), haar_state(d, rng))).ppt


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_bell_state_not_ppt(d):
    res = is_ppt(bell_state(d))
    assert not res.ppt
    assert not res
    assert abs(res.min_eigenvalue + 1 / d) < 1e-12


def test_density_matrix_validation():
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix(2, np.eye(4))
    with pytest.raises(ValueError):
        DensityMatrix(3, np.eye(4) / 4)
    with pytest.raises(NonPhysicalStateError):
        DensityMatrix(2, np.diag([1.5, -0.5, 0, 0]))
    rho = DensityMatrix(2, np.eye(4) / 4)
    assert not rho.matrix.flags.writeable
    assert np.asarray(rho).shape == (4, 4)
