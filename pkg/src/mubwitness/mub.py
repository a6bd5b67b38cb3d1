"""Constructions of mutually unbiased bases and their verification.

Every basis is a ``d x d`` unitary whose columns are the basis vectors. A
:class:`MubSet` is an ordered tuple of bases; the first one is always the
standard basis in the constructions here.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .algebra import GaloisField, GaloisRing, gf_trace, gr4_trace
from .linalg import matrix_from_json, matrix_to_json

__all__ = [
    "Basis",
    "MubSet",
    "VerifyReport",
    "standard_basis",
    "fourier_matrix",
    "prime_diagonal",
    "hw_prime_set",
    "hw_odd_prime_power_set",
    "hw_even_prime_power_set",
    "hw_triple",
    "hw_set",
    "fourier_family_d4",
    "h_family_d4",
    "tao_matrix",
    "grassl_a7",
    "FAMILIES",
    "family_set",
    "verify_mub_set",
    "same_basis",
    "mub_set_to_json",
    "mub_set_from_json",
    "save_mub_set",
    "load_mub_set",
]

SUPPORTED_PRIMES = (2, 3, 5, 7)


@dataclass(frozen=True, eq=False)
class Basis:
    """An orthonormal basis of C^d stored as the columns of a unitary matrix."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"basis matrix must be square, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def vectors(self) -> list[np.ndarray]:
        return [self.matrix[:, i] for i in range(self.dim)]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def transformed(self, unitary) -> Basis:
        return Basis(np.asarray(unitary) @ self.matrix, self.label)


@dataclass(frozen=True, eq=False)
class MubSet:
    """An ordered collection of bases with a provenance descriptor."""

    bases: tuple[Basis, ...]
    provenance: str = ""
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        bases = tuple(b if isinstance(b, Basis) else Basis(b) for b in self.bases)
        if not bases:
            raise ValueError("a MUB set needs at least one basis")
        dims = {b.dim for b in bases}
        if len(dims) != 1:
            raise ValueError(f"bases have inconsistent dimensions {sorted(dims)}")
        object.__setattr__(self, "bases", bases)
        if self.labels and len(self.labels) != len(bases):
            raise ValueError(f"{len(self.labels)} labels for {len(bases)} bases")
        if not self.labels:
            labels = tuple(f"B{i + 1}" for i in range(len(bases)))
            object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.bases[0].dim

    def __len__(self):
        return len(self.bases)

    def __iter__(self):
        return iter(self.bases)

    def __getitem__(self, i):
        return self.bases[i]

    def stacked(self) -> np.ndarray:
        """All bases as one ``(m, d, d)`` array."""
        return np.stack([b.matrix for b in self.bases])

    def subset(self, indices) -> MubSet:
        indices = tuple(indices)
        return MubSet(
            tuple(self.bases[i] for i in indices),
            provenance=f"{self.provenance} subset {','.join(str(i + 1) for i in indices)}",
            labels=tuple(self.labels[i] for i in indices),
        )

    def transformed(self, unitary) -> MubSet:
        return MubSet(tuple(b.transformed(unitary) for b in self.bases), self.provenance, self.labels)


def standard_basis(d: int) -> Basis:
    return Basis(np.eye(d, dtype=complex), "I")


def fourier_matrix(d: int) -> np.ndarray:
    j = np.arange(d)
    return np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)


def prime_diagonal(p: int) -> np.ndarray:
    """Diagonal D_p with B_{k+2} = D_p^k F_p.

    For odd p this is diag(w^(l^2)), e.g. D_5 = diag(1, w, w^4, w^4, w). For
    p = 2 the quadratic phase must be taken in Z/4, giving diag(1, i).
    """
    ell = np.arange(p)
    if p == 2:
        return np.diag(1j ** (ell * ell))
    return np.diag(np.exp(2j * np.pi * ((ell * ell) % p) / p))


def hw_prime_set(p: int) -> MubSet:
    """Complete set {I, F, DF, D^2F, ..., D^(p-1)F} for a prime p in {2, 3, 5, 7}."""
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"unsupported prime {p}; expected one of {SUPPORTED_PRIMES}")
    f = fourier_matrix(p)
    dg = np.diag(prime_diagonal(p))
    bases = [standard_basis(p), Basis(f, "F")]
    for k in range(1, p):
        bases.append(Basis(dg[:, None] ** k * f, f"D^{k}F"))
    return MubSet(tuple(bases), provenance=f"HW-prime d={p}")


def hw_odd_prime_power_set(p: int, n: int) -> MubSet:
    """Complete set from |j_k> = d^(-1/2) sum_l w_p^tr(k l^2 + j l) |l>.

    Field elements are enumerated by index (0, 1, 2, x, x+1, ...); basis
    ``k`` of that enumeration is placed at position ``k + 2``.
    """
    if p % 2 == 0:
        raise ValueError("use hw_even_prime_power_set for p = 2")
    field_ = GaloisField(p, n)
    elems = field_.elements()
    d = field_.order
    omega = np.exp(2j * np.pi / p)
    squares = [ell * ell for ell in elems]
    bases = [standard_basis(d)]
    for k in elems:
        phases = np.empty((d, d), dtype=int)
        for li, ell in enumerate(elems):
            kl2 = k * squares[li]
            for ji, j in enumerate(elems):
                phases[li, ji] = gf_trace(kl2 + j * ell)
        bases.append(Basis(omega**phases / np.sqrt(d), f"k={k!r}"))
    return MubSet(tuple(bases), provenance=f"HW-odd-prime-power d={d} ({field_!r}, modulus {field_.modulus})")


def hw_even_prime_power_set(n: int) -> MubSet:
    """Complete set from |j_k> = 2^(-n/2) sum_{l in T} i^tr((k + 2j) l) |l>, k, j in T."""
    if n not in (1, 2, 3):
        raise ValueError(f"supported n are 1, 2, 3; got {n}")
    ring = GaloisRing(n)
    tset = ring.teichmuller
    d = len(tset)
    bases = [standard_basis(d)]
    for k in tset:
        phases = np.empty((d, d), dtype=int)
        for li, ell in enumerate(tset):
            for ji, j in enumerate(tset):
                phases[li, ji] = gr4_trace((k + 2 * j) * ell)
        bases.append(Basis(1j**phases / np.sqrt(d), f"k={k.residue_index}"))
    return MubSet(tuple(bases), provenance=f"HW-Galois-ring d={d} ({ring!r}, modulus {ring.modulus})")


def hw_triple(d: int) -> MubSet:
    """Eigenbases of Z, X and XZ for any d: {I, F, D_tau F} with D_tau = diag(tau^(l^2)).

    tau = -exp(i pi / d), so that the construction is valid for even d too.
    """
    ell = np.arange(d)
    f = fourier_matrix(d)
    # tau^(l^2) with tau = exp(i pi (d + 1) / d); reduce the exponent mod 2d.
    phase = np.exp(1j * np.pi * (((d + 1) * ell * ell) % (2 * d)) / d)
    bases = (standard_basis(d), Basis(f, "F"), Basis(phase[:, None] * f, "DF"))
    return MubSet(bases, provenance=f"HW-triple d={d}")


def hw_set(d: int) -> MubSet:
    """The Heisenberg-Weyl family used for dimension ``d``."""
    if d in SUPPORTED_PRIMES:
        return hw_prime_set(d)
    if d in (4, 8):
        return hw_even_prime_power_set({4: 2, 8: 3}[d])
    if d == 9:
        return hw_odd_prime_power_set(3, 2)
    if d == 6:
        return hw_triple(6)
    raise ValueError(f"no Heisenberg-Weyl construction configured for d={d}")


def fourier_family_d4(x: float) -> Basis:
    """One-parameter family F(x) of 4x4 Hadamard matrices."""
    e = 1j * np.exp(1j * x)
    m = np.array(
        [
            [1, 1, 1, 1],
            [1, 1, -1, -1],
            [1, -1, e, -e],
            [1, -1, -e, e],
        ],
        dtype=complex,
    )
    return Basis(m / 2, f"F({x:g})")


def h_family_d4(y: float, z: float) -> Basis:
    """Two-parameter family H(y, z) unbiased to I and every F(x)."""
    a = np.exp(1j * y)
    b = np.exp(1j * z)
    m = np.array(
        [
            [1, 1, 1, 1],
            [1, 1, -1, -1],
            [-a, a, b, -b],
            [a, -a, b, -b],
        ],
        dtype=complex,
    )
    return Basis(m / 2, f"H({y:g},{z:g})")


def tao_matrix() -> Basis:
    w = np.exp(2j * np.pi / 3)
    exps = np.array(
        [
            [0, 0, 0, 0, 0, 0],
            [0, 0, 1, 1, 2, 2],
            [0, 1, 0, 2, 2, 1],
            [0, 1, 2, 0, 1, 2],
            [0, 2, 2, 1, 0, 1],
            [0, 2, 1, 2, 1, 0],
        ]
    )
    return Basis(w**exps / np.sqrt(6), "S6")


def grassl_a7() -> Basis:
    """The 7x7 Hadamard matrix completing {I, F_7} to an unextendible triple."""
    alpha = (-3 + 1j * np.sqrt(7)) / 4
    pattern = [
        "aaa1a11",
        "1aaa1a1",
        "11aaa1a",
        "a11aaa1",
        "1a11aaa",
        "a1a11aa",
        "aa1a11a",
    ]
    m = np.array([[alpha if c == "a" else 1 for c in row] for row in pattern], dtype=complex)
    return Basis(m / np.sqrt(7), "A7")


FAMILIES = ("hw", "fourier4", "h4", "tao6", "a7")


def family_set(family: str, d: int | None = None, x: float | None = None, y: float = 0.0, z: float = 0.0) -> MubSet:
    """Build a named MUB set.

    ``hw`` is the Heisenberg-Weyl set for ``d``; ``fourier4`` is {I, F(x)};
    ``h4`` is {I, F(x), H(y, z)}; ``tao6`` is {I, S6}; ``a7`` is {I, F7, A7}.
    ``x`` defaults to pi/2. The d4, d6 and d7 families reject any other ``d``.
    """
    fixed = {"fourier4": 4, "h4": 4, "tao6": 6, "a7": 7}
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if family == "hw":
        if d is None:
            raise ValueError("family 'hw' needs a dimension")
        return hw_set(d)
    if d is not None and d != fixed[family]:
        raise ValueError(f"family {family!r} exists only for d={fixed[family]}, got d={d}")
    x = np.pi / 2 if x is None else x
    if family == "fourier4":
        return MubSet((standard_basis(4), fourier_family_d4(x)), provenance=f"F(x) x={x:g}")
    if family == "h4":
        bases = (standard_basis(4), fourier_family_d4(x), h_family_d4(y, z))
        return MubSet(bases, provenance=f"F(x), H(y,z) x={x:g} y={y:g} z={z:g}")
    if family == "tao6":
        return MubSet((standard_basis(6), tao_matrix()), provenance="Tao pair d=6")
    bases = (standard_basis(7), Basis(fourier_matrix(7), "F"), grassl_a7())
    return MubSet(bases, provenance="unextendible triple I, F7, A7 d=7")


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    worst_pair: tuple[int, int] | None
    max_deviation: float
    tol: float

    def __bool__(self):
        return self.ok


def verify_mub_set(mubs: MubSet, tol: float = 1e-10) -> VerifyReport:
    """Check orthonormality within bases and |<i|j'>|^2 = 1/d across bases.

    Never raises on bad input sets; the report names the worst pair, with
    ``(k, k)`` flagging a basis that is not orthonormal.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    d = mubs.dim
    worst, worst_pair = 0.0, None
    mats = [b.matrix for b in mubs.bases]
    for k, bk in enumerate(mats):
        dev = float(np.max(np.abs(bk.conj().T @ bk - np.eye(d))))
        if dev > worst:
            worst, worst_pair = dev, (k, k)
    for k, kk in itertools.combinations(range(len(mats)), 2):
        overlaps = np.abs(mats[k].conj().T @ mats[kk]) ** 2
        dev = float(np.max(np.abs(overlaps - 1.0 / d)))
        if dev > worst:
            worst, worst_pair = dev, (k, kk)
    ok = bool(np.isfinite(worst) and worst <= tol)
    return VerifyReport(ok, worst_pair, worst, tol)


def same_basis(a, b, tol: float = 1e-10) -> bool:
    """True if two bases define the same set of projectors (ignores phases and order)."""
    a = np.asarray(a)
    b = np.asarray(b)
    overlaps = np.abs(a.conj().T @ b) ** 2
    return bool(np.all(np.abs(np.sort(overlaps, axis=1)[:, -1] - 1) < tol))


def mub_set_to_json(mubs: MubSet) -> dict:
    return {
        "dim": mubs.dim,
        "provenance": mubs.provenance,
        "labels": list(mubs.labels),
        "bases": [matrix_to_json(b.matrix) for b in mubs.bases],
    }


def mub_set_from_json(obj: dict) -> MubSet:
    mats = [matrix_from_json(m) for m in obj["bases"]]
    labels = tuple(obj.get("labels") or ())
    if labels and len(labels) != len(mats):
        raise ValueError(f"{len(labels)} labels for {len(mats)} bases")
    mubs = MubSet(tuple(Basis(m) for m in mats), provenance=obj.get("provenance", ""), labels=labels)
    if mubs.dim != int(obj["dim"]):
        raise ValueError(f"declared dim {obj['dim']} does not match matrices of size {mubs.dim}")
    return mubs


def save_mub_set(mubs: MubSet, path) -> None:
    Path(path).write_text(json.dumps(mub_set_to_json(mubs), indent=1) + "\n")


def load_mub_set(path) -> MubSet:
    return mub_set_from_json(json.loads(Path(path).read_text()))
