"""Dense complex linear algebra helpers for d <= 9 (bipartite size d^2 <= 81)."""

from __future__ import annotations

import numpy as np

__all__ = [
    "HERMITIAN_TOL",
    "NonHermitianError",
    "kron",
    "dagger",
    "hermitian_eigenvalues",
    "hermitian_eigh",
    "partial_transpose",
    "swap_operator",
    "haar_unitary",
    "haar_state",
    "matrix_to_json",
    "matrix_from_json",
]

HERMITIAN_TOL = 1e-10


class NonHermitianError(ValueError):
    """Raised for input that is not Hermitian within tolerance."""


def kron(a, b) -> np.ndarray:
    """Tensor product with the first factor as the most significant index."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def dagger(a) -> np.ndarray:
    return np.asarray(a).conj().T


def _symmetrized(a, tol):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    asym = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if asym > tol:
        raise NonHermitianError(f"matrix is not Hermitian: max |A - A^dagger| = {asym:.3e}")
    return (a + a.conj().T) / 2


def hermitian_eigenvalues(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    The input is symmetrized before diagonalization; an asymmetry larger than
    ``tol`` raises :class:`NonHermitianError`.
    """
    return np.linalg.eigvalsh(_symmetrized(a, tol))


def hermitian_eigh(a, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and the matching orthonormal eigenvectors (columns)."""
    return np.linalg.eigh(_symmetrized(a, tol))


def partial_transpose(rho, d: int) -> np.ndarray:
    """Transpose the second tensor factor of a (d^2 x d^2) operator."""
    rho = np.asarray(rho)
    if rho.shape != (d * d, d * d):
        raise ValueError(f"expected a {d * d}x{d * d} matrix for d={d}, got {rho.shape}")
    return rho.reshape(d, d, d, d).transpose(0, 3, 2, 1).reshape(d * d, d * d)


def swap_operator(d: int) -> np.ndarray:
    """The flip F |a>|b> = |b>|a> on C^d (x) C^d."""
    f = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            f[b * d + a, a * d + b] = 1.0
    return f


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with the phase fix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def haar_state(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def matrix_to_json(a) -> dict:
    """Serialize as ``{rows, cols, entries: [[re, im], ...]}`` in row-major order."""
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        a = a[:, None]
    rows, cols = a.shape
    return {
        "rows": rows,
        "cols": cols,
        "entries": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    entries = obj["entries"]
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
    if not np.all(np.isfinite(flat)):
        raise ValueError("matrix entries must be finite")
    return flat.reshape(rows, cols)
