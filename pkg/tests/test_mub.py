import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mubwitness.algebra import GaloisField, gf_trace
from mubwitness.linalg import haar_unitary
from mubwitness.mub import (
    Basis,
    MubSet,
    family_set,
    fourier_family_d4,
    fourier_matrix,
    grassl_a7,
    h_family_d4,
    hw_even_prime_power_set,
    hw_odd_prime_power_set,
    hw_prime_set,
    hw_set,
    hw_triple,
    load_mub_set,
    mub_set_from_json,
    mub_set_to_json,
    prime_diagonal,
    same_basis,
    save_mub_set,
    standard_basis,
    tao_matrix,
    verify_mub_set,
)

ALL_SETS = {
    "hw2": lambda: hw_set(2),
    "hw3": lambda: hw_set(3),
    "hw4": lambda: hw_set(4),
    "hw5": lambda: hw_set(5),
    "hw7": lambda: hw_set(7),
    "hw8": lambda: hw_set(8),
    "hw9": lambda: hw_set(9),
    "hw6 triple": lambda: hw_set(6),
    "tao6": lambda: family_set("tao6"),
    "a7": lambda: family_set("a7"),
    "d4 x=pi/2 y=z=0": lambda: family_set("h4", 4, np.pi / 2, 0, 0),
    "d4 random": lambda: family_set("h4", 4, 0.3, 1.1, 2.0),
}


@pytest.mark.parametrize("name", sorted(ALL_SETS))
def test_every_constructed_set_is_unbiased(name):
    report = verify_mub_set(ALL_SETS[name]())
    assert report.ok, report


@pytest.mark.parametrize("d,size", [(2, 3), (3, 4), (4, 5), (5, 6), (7, 8), (8, 9), (9, 10)])
def test_complete_sets_have_d_plus_one_bases(d, size):
    mubs = hw_set(d)
    assert len(mubs) == size
    assert mubs.dim == d
    assert same_basis(mubs[0], np.eye(d))


def test_d2_diagonal_is_diag_1_i():
    assert np.allclose(prime_diagonal(2), np.diag([1, 1j]))
    mubs = hw_prime_set(2)
    assert np.allclose(mubs[2].matrix, np.diag([1, 1j]) @ fourier_matrix(2))


def test_d5_diagonal_matches_published_pattern():
    w = np.exp(2j * np.pi / 5)
    assert np.allclose(prime_diagonal(5), np.diag([1, w, w**4, w**4, w]))


def test_d7_diagonal_matches_published_pattern():
    w = np.exp(2j * np.pi / 7)
    assert np.allclose(prime_diagonal(7), np.diag([1, w, w**4, w**2, w**2, w**4, w]))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_prime_ordering_is_powers_of_d_times_fourier(p):
    mubs = hw_prime_set(p)
    f = fourier_matrix(p)
    dg = prime_diagonal(p)
    assert np.allclose(mubs[1].matrix, f)
    for k in range(1, p):
        assert np.allclose(mubs[k + 1].matrix, np.linalg.matrix_power(dg, k) @ f)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_prime_state_formula_unbiased_to_prime_set(p):
    # |j_k> = p^(-1/2) sum_l w^(k l^2 + j l) |l>, built independently of hw_prime_set
    w = np.exp(2j * np.pi / p)
    ell = np.arange(p)
    mubs = hw_prime_set(p)
    for k in range(p):
        basis = np.stack([w ** ((k * ell * ell + j * ell) % p) for j in range(p)], axis=1) / np.sqrt(p)
        assert np.allclose(basis.conj().T @ basis, np.eye(p), atol=1e-12)
        matches = 0
        for b in mubs:
            overlaps = np.abs(b.matrix.conj().T @ basis) ** 2
            if same_basis(b, basis):
                matches += 1
            else:
                assert np.max(np.abs(overlaps - 1 / p)) < 1e-10
        assert matches == 1


def test_prime_set_rejects_unsupported():
    with pytest.raises(ValueError):
        hw_prime_set(11)
    with pytest.raises(ValueError):
        hw_set(10)


def test_d9_all_45_pairs_unbiased():
    mubs = hw_odd_prime_power_set(3, 2)
    assert len(mubs) == 10
    d = 9
    pairs = 0
    for a in range(10):
        for b in range(a + 1, 10):
            ov = np.abs(mubs[a].matrix.conj().T @ mubs[b].matrix) ** 2
            assert np.max(np.abs(ov - 1 / d)) < 1e-12
            pairs += 1
    assert pairs == 45


def test_d9_k0_basis_is_fourier_type():
    f = GaloisField(3, 2)
    els = f.elements()
    w = np.exp(2j * np.pi / 3)
    expected = np.array([[w ** gf_trace(j * ell) for j in els] for ell in els]) / 3
    assert np.allclose(hw_set(9)[1].matrix, expected)
    assert np.allclose(np.abs(expected) ** 2, 1 / 9)


@pytest.mark.parametrize("n,d", [(2, 4), (3, 8)])
def test_galois_ring_sets(n, d):
    mubs = hw_even_prime_power_set(n)
    assert len(mubs) == d + 1
    assert verify_mub_set(mubs).max_deviation < 1e-12


def test_hw_triple_valid_for_even_d():
    for d in (4, 6, 8, 10):
        assert verify_mub_set(hw_triple(d)).ok


def test_fourier_family_printed_entries():
    b = fourier_family_d4(np.pi / 2).matrix
    assert np.isclose(b[2, 2], 1j * np.exp(1j * np.pi / 2) / 2)
    assert np.isclose(b[3, 2], -1j * np.exp(1j * np.pi / 2) / 2)
    b0 = fourier_family_d4(0.0).matrix
    assert np.allclose(b0[2:, 2:] * 2, [[1j, -1j], [-1j, 1j]])
    assert np.allclose(b0[:2] * 2, [[1, 1, 1, 1], [1, 1, -1, -1]])


@settings(max_examples=25, deadline=None)
@given(x=st.floats(0, np.pi), y=st.floats(-np.pi, np.pi), z=st.floats(-np.pi, np.pi))
def test_d4_families_form_a_triple_for_all_parameters(x, y, z):
    f = fourier_family_d4(x).matrix
    h = h_family_d4(y, z).matrix
    for m in (f, h):
        assert np.allclose(m.conj().T @ m, np.eye(4), atol=1e-12)
        assert np.allclose(np.abs(m), 0.5)
    mubs = MubSet((standard_basis(4), Basis(f), Basis(h)))
    assert verify_mub_set(mubs).ok


def test_tao_matrix():
    s = tao_matrix().matrix
    assert np.allclose(np.abs(s) ** 2, 1 / 6)
    assert np.allclose(s.conj().T @ s, np.eye(6), atol=1e-12)
    assert verify_mub_set(family_set("tao6")).ok


def test_grassl_a7():
    alpha = (-3 + 1j * np.sqrt(7)) / 4
    assert abs(abs(alpha) - 1) < 1e-15
    a7 = grassl_a7().matrix
    assert np.allclose(np.abs(a7) ** 2, 1 / 7)
    assert verify_mub_set(family_set("a7")).ok


def test_verify_hw3_tight():
    report = verify_mub_set(hw_set(3))
    assert report.ok and report.max_deviation < 1e-12


def test_verify_flags_duplicate_basis():
    f2 = fourier_matrix(2)
    report = verify_mub_set(MubSet((np.eye(2), f2, np.eye(2))))
    assert not report.ok
    assert report.worst_pair == (0, 2)
    assert abs(report.max_deviation - 0.5) < 1e-12


def test_verify_flags_non_orthonormal_basis():
    bad = np.array([[1, 1], [0, 1]], dtype=complex)
    report = verify_mub_set(MubSet((np.eye(2), bad)))
    assert not report.ok


def test_verify_rejects_nonpositive_tol():
    with pytest.raises(ValueError):
        verify_mub_set(hw_set(2), tol=0)


def test_constructors_are_deterministic():
    for d in (5, 8, 9):
        a, b = hw_set(d), hw_set(d)
        for x, y in zip(a, b):
            assert np.array_equal(x.matrix, y.matrix)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_global_unitary_preserves_verification(d):
    rng = np.random.default_rng(d)
    mubs = hw_set(d).transformed(haar_unitary(d, rng))
    assert verify_mub_set(mubs).ok
    broken = MubSet((np.eye(d), np.eye(d))).transformed(haar_unitary(d, rng))
    assert not verify_mub_set(broken).ok


def test_same_basis_ignores_phases_and_order():
    rng = np.random.default_rng(0)
    f = fourier_matrix(4)
    perm = rng.permutation(4)
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, 4))
    assert same_basis(f, f[:, perm] * phases)
    assert not same_basis(f, np.eye(4))


def test_subset_labels_and_provenance():
    sub = hw_set(5).subset([0, 1, 3])
    assert sub.labels == ("B1", "B2", "B4")
    assert sub.provenance.endswith("subset 1,2,4")
    assert len(sub) == 3


def test_json_round_trip(tmp_path):
    mubs = family_set("a7")
    path = tmp_path / "a7.json"
    save_mub_set(mubs, path)
    back = load_mub_set(path)
    assert back.provenance == mubs.provenance
    assert back.labels == mubs.labels
    for a, b in zip(mubs, back):
        assert np.array_equal(a.matrix, b.matrix)
    obj = mub_set_to_json(mubs)
    obj["dim"] = 5
    with pytest.raises(ValueError):
        mub_set_from_json(obj)


def test_family_set_errors():
    with pytest.raises(ValueError):
        family_set("nope", 4)
    with pytest.raises(ValueError):
        family_set("tao6", 5)
    with pytest.raises(ValueError):
        family_set("hw")


def test_mubset_rejects_mixed_dimensions():
    with pytest.raises(ValueError):
        MubSet((np.eye(2), np.eye(3)))
