"""Bipartite state families: Weyl operators, Bell states, magic simplex and Werner states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import HERMITIAN_TOL, hermitian_eigenvalues, partial_transpose, swap_operator

__all__ = [
    "DensityMatrix",
    "PPTResult",
    "NonPhysicalStateError",
    "weyl_operator",
    "bell_state",
    "magic_simplex_state",
    "werner_state",
    "product_state",
    "is_ppt",
    "POSITIVITY_TOL",
]

POSITIVITY_TOL = 1e-9
TRACE_TOL = 1e-10


class NonPhysicalStateError(ValueError):
    """Raised when a requested state is not positive semidefinite."""

    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated state on C^d (x) C^d."""

    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        d = self.dim
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (d * d, d * d):
            raise ValueError(f"expected a {d * d}x{d * d} matrix for d={d}, got {m.shape}")
        evals = hermitian_eigenvalues(m, HERMITIAN_TOL)
        tr = float(np.real(np.trace(m)))
        if abs(tr - 1) > TRACE_TOL:
            raise ValueError(f"trace is {tr!r}, expected 1")
        if evals[0] < -POSITIVITY_TOL:
            raise NonPhysicalStateError(f"not positive semidefinite: min eigenvalue {evals[0]:.3e}", float(evals[0]))
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def weyl_operator(d: int, k: int, l: int) -> np.ndarray:
    """W_(k,l) = sum_j w^(jk) |j><j+l| with indices mod d."""
    if not (0 <= k < d and 0 <= l < d):
        raise IndexError(f"Weyl indices ({k}, {l}) out of range for d={d}")
    j = np.arange(d)
    w = np.zeros((d, d), dtype=complex)
    w[j, (j + l) % d] = np.exp(2j * np.pi * j * k / d)
    return w


def bell_state(d: int, k: int = 0, l: int = 0) -> DensityMatrix:
    """P_(k,l) = (I (x) W_(k,l)) P_(0,0) (I (x) W_(k,l))^dagger."""
    phi = np.eye(d).reshape(d * d) / np.sqrt(d)
    psi = np.kron(np.eye(d), weyl_operator(d, k, l)) @ phi
    return DensityMatrix(d, np.outer(psi, psi.conj()))


def magic_simplex_state(d: int, alpha: float, beta: float) -> DensityMatrix:
    """(1 - alpha - beta) I/d^2 + alpha P_(0,0) + beta P_(0,1)."""
    m = (1 - alpha - beta) * np.eye(d * d) / d**2
    m = m + alpha * bell_state(d, 0, 0).matrix + beta * bell_state(d, 0, 1).matrix
    return DensityMatrix(d, m)


def werner_state(d: int, phi: float) -> DensityMatrix:
    """(I - phi F) / (d^2 - phi d), with F the swap; PPT (and separable) iff phi <= 1/d."""
    if not -1 <= phi <= 1:
        raise ValueError(f"Werner parameter must lie in [-1, 1], got {phi}")
    m = (np.eye(d * d) - phi * swap_operator(d)) / (d * d - phi * d)
    return DensityMatrix(d, m)


def product_state(a, b) -> DensityMatrix:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    v = np.kron(a, b)
    return DensityMatrix(a.size, np.outer(v, v.conj()))


@dataclass(frozen=True)
class PPTResult:
    ppt: bool
    min_eigenvalue: float

    def __bool__(self):
        return self.ppt


def is_ppt(rho, tol: float = POSITIVITY_TOL, dim: int | None = None) -> PPTResult:
    """Positive partial transpose test on the second subsystem."""
    if isinstance(rho, DensityMatrix):
        d, m = rho.dim, rho.matrix
    else:
        m = np.asarray(rho, dtype=complex)
        d = dim or int(round(np.sqrt(m.shape[0])))
    lam = float(hermitian_eigenvalues(partial_transpose(m, d))[0])
    return PPTResult(lam >= -tol, lam)
