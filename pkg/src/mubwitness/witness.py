"""The MUB correlation functional M_m and its separable-state upper bound."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .mub import Basis, MubSet

__all__ = [
    "WitnessResult",
    "joint_probability",
    "witness_value",
    "witness_value_product",
    "witness_operator",
    "upper_bound",
    "HermiticityWarning",
]

IMAG_TOL = 1e-10
NORM_TOL = 1e-9


class HermiticityWarning(UserWarning):
    """Emitted when probabilities carry a non-negligible imaginary part."""


@dataclass(frozen=True)
class WitnessResult:
    value: float
    per_basis: tuple[float, ...]
    m: int
    d: int

    def __float__(self):
        return self.value


def _as_rho(rho, d: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d * d, d * d):
        raise ValueError(f"state of shape {rho.shape} does not act on C^{d} (x) C^{d}")
    return rho


def _paired_vectors(basis) -> np.ndarray:
    """Columns |i_k>|i_k> for every i, shape (d^2, d)."""
    b = np.asarray(basis)
    d = b.shape[0]
    return np.einsum("ai,bi->abi", b, b).reshape(d * d, d)


def _diagonal_probabilities(rho: np.ndarray, basis) -> np.ndarray:
    v = _paired_vectors(basis)
    probs = np.einsum("ai,ab,bi->i", v.conj(), rho, v)
    if np.max(np.abs(probs.imag), initial=0.0) > IMAG_TOL:
        warnings.warn(
            f"imaginary probability residue {np.max(np.abs(probs.imag)):.2e}; state is not Hermitian",
            HermiticityWarning,
            stacklevel=3,
        )
    return probs.real


def joint_probability(rho, basis: Basis, i: int) -> float:
    """P(i, i | B, B) = tr(|i><i| (x) |i><i| rho) for the ``i``-th vector of ``basis``."""
    b = np.asarray(basis)
    d = b.shape[0]
    if not 0 <= i < d:
        raise IndexError(f"outcome {i} out of range for d={d}")
    rho = _as_rho(rho, d)
    v = np.kron(b[:, i], b[:, i])
    return float(np.real(v.conj() @ rho @ v))


def witness_value(rho, mubs: MubSet) -> WitnessResult:
    """M_m(rho): the sum over bases of the probability that both parties agree."""
    d = mubs.dim
    rho = _as_rho(rho, d)
    per_basis = tuple(float(_diagonal_probabilities(rho, b).sum()) for b in mubs.bases)
    return WitnessResult(float(sum(per_basis)), per_basis, len(mubs), d)


def witness_operator(mubs: MubSet) -> np.ndarray:
    """Operator W with M_m(rho) = tr(W rho)."""
    d = mubs.dim
    w = np.zeros((d * d, d * d), dtype=complex)
    for b in mubs.bases:
        v = _paired_vectors(b)
        w += v @ v.conj().T
    return w


def witness_value_product(a, b, mubs: MubSet) -> float:
    """M_m on |a><a| (x) |b><b|, i.e. sum_k sum_i |<i_k|a>|^2 |<i_k|b>|^2."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    d = mubs.dim
    if a.shape != (d,) or b.shape != (d,):
        raise ValueError(f"expected vectors of length {d}")
    for name, v in (("a", a), ("b", b)):
        norm = np.linalg.norm(v)
        if abs(norm - 1) > NORM_TOL:
            raise ValueError(f"state {name} is not normalized (norm {norm:.12g})")
    stack = mubs.stacked()
    pa = np.abs(np.einsum("kji,j->ki", stack.conj(), a)) ** 2
    pb = np.abs(np.einsum("kji,j->ki", stack.conj(), b)) ** 2
    return float(np.sum(pa * pb))


def upper_bound(d: int, m: int) -> Fraction:
    """U_m = 1 + (m - 1)/d as an exact rational."""
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    if not 1 <= m <= d + 1:
        raise ValueError(f"m must lie in [1, {d + 1}] for d={d}, got {m}")
    return 1 + Fraction(m - 1, d)
