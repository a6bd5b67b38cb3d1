"""Finite field GF(p^n) and Galois ring GR(4, n) arithmetic.

Elements are stored as coefficient tuples over a fixed monic modulus
polynomial, lowest degree first. The dimensions involved (d <= 9) are small
enough that every structure is enumerated exhaustively where convenient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

__all__ = [
    "GaloisField",
    "FieldElement",
    "GaloisRing",
    "RingElement",
    "AlgebraError",
    "gf_trace",
    "gr4_trace",
    "teichmuller_set",
    "DEFAULT_FIELD_MODULI",
    "DEFAULT_RING_MODULI",
]


class AlgebraError(ValueError):
    """Raised when a field or ring cannot be built or decomposed."""


# Lowest-degree coefficient first; the leading 1 is implicit in the degree.
DEFAULT_FIELD_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (0, 1),
    (3, 1): (0, 1),
    (5, 1): (0, 1),
    (7, 1): (0, 1),
    (2, 2): (1, 1, 1),  # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),  # x^3 + x + 1
    (3, 2): (1, 0, 1),  # x^2 + 1
}

DEFAULT_RING_MODULI: dict[int, tuple[int, ...]] = {
    1: (0, 1),  # x, so GR(4, 1) = Z/4
    2: (1, 1, 1),  # x^2 + x + 1
    3: (3, 1, 2, 1),  # x^3 + 2x^2 + x + 3, Hensel lift of x^3 + x + 1
}


def _polymulmod(a, b, modulus, q):
    """Multiply coefficient tuples ``a``, ``b`` modulo a monic ``modulus`` and ``q``."""
    n = len(modulus) - 1
    prod = [0] * (2 * n - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    # x^n = -(m_0 + m_1 x + ... + m_{n-1} x^{n-1})
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k] % q
        if c:
            for i in range(n):
                prod[k - n + i] -= c * modulus[i]
        prod[k] = 0
    return tuple(c % q for c in prod[:n])


def _int_to_coeffs(index: int, base: int, n: int) -> tuple[int, ...]:
    coeffs = []
    for _ in range(n):
        index, r = divmod(index, base)
        coeffs.append(r)
    return tuple(coeffs)


@dataclass(frozen=True)
class GaloisField:
    """The field GF(p^n) as polynomials over F_p modulo an irreducible polynomial."""

    p: int
    n: int
    modulus: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.modulus:
            try:
                object.__setattr__(self, "modulus", DEFAULT_FIELD_MODULI[(self.p, self.n)])
            except KeyError:
                raise AlgebraError(f"no default modulus for GF({self.p}^{self.n})") from None
        if len(self.modulus) != self.n + 1 or self.modulus[-1] != 1:
            raise AlgebraError(f"modulus {self.modulus} is not monic of degree {self.n}")
        # Irreducible iff every nonzero element is invertible, i.e. no zero divisors.
        if self.n > 1:
            nonzero = self.elements()[1:]
            for a in nonzero:
                if not any((a * b).is_one() for b in nonzero):
                    raise AlgebraError(f"modulus {self.modulus} is reducible over F_{self.p}")

    @property
    def order(self) -> int:
        return self.p**self.n

    def element(self, value) -> FieldElement:
        """Build an element from an enumeration index or a coefficient sequence."""
        if isinstance(value, int):
            if not 0 <= value < self.order:
                raise AlgebraError(f"index {value} outside GF({self.p}^{self.n})")
            return FieldElement(self, _int_to_coeffs(value, self.p, self.n))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) != self.n:
            raise AlgebraError(f"expected {self.n} coefficients, got {len(coeffs)}")
        return FieldElement(self, coeffs)

    def zero(self) -> FieldElement:
        return self.element(0)

    def one(self) -> FieldElement:
        return self.element(1)

    def elements(self) -> list[FieldElement]:
        """All elements ordered by index: 0, 1, ..., p-1, x, x+1, ..."""
        return [self.element(i) for i in range(self.order)]

    def __repr__(self):
        return f"GF({self.p}^{self.n})"


@dataclass(frozen=True)
class FieldElement:
    field: GaloisField
    coeffs: tuple[int, ...]

    def _check(self, other):
        if isinstance(other, int):
            return self.field.element((other,) + (0,) * (self.field.n - 1))
        if other.field != self.field:
            raise AlgebraError("elements belong to different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        f = self.field
        return FieldElement(f, _polymulmod(self.coeffs, other.coeffs, f.modulus, f.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    @property
    def index(self) -> int:
        return sum(c * self.field.p**i for i, c in enumerate(self.coeffs))

    def __int__(self):
        return self.index

    def __repr__(self):
        terms = [
            (str(c) if i == 0 else (f"{c}x" if c != 1 else "x") + (f"^{i}" if i > 1 else ""))
            for i, c in enumerate(self.coeffs)
            if c
        ]
        return " + ".join(reversed(terms)) or "0"


def gf_trace(x: FieldElement) -> int:
    """Absolute trace x + x^p + ... + x^(p^(n-1)), returned as an integer mod p."""
    f = x.field
    total = f.zero()
    term = x
    for _ in range(f.n):
        total = total + term
        term = term**f.p
    if any(total.coeffs[1:]):
        raise AlgebraError(f"trace of {x!r} left the prime field: {total!r}")
    return total.coeffs[0]


@dataclass(frozen=True)
class GaloisRing:
    """The Galois ring GR(4, n) = Z_4[x] / (h(x)) for a monic basic irreducible h."""

    n: int
    modulus: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.modulus:
            try:
                object.__setattr__(self, "modulus", DEFAULT_RING_MODULI[self.n])
            except KeyError:
                raise AlgebraError(f"no default modulus for GR(4, {self.n})") from None
        if len(self.modulus) != self.n + 1 or self.modulus[-1] != 1:
            raise AlgebraError(f"modulus {self.modulus} is not monic of degree {self.n}")
        # Basic irreducible: the reduction mod 2 must define GF(2^n).
        GaloisField(2, self.n, tuple(c % 2 for c in self.modulus))

    @property
    def order(self) -> int:
        return 4**self.n

    def element(self, value) -> RingElement:
        if isinstance(value, int):
            return RingElement(self, _int_to_coeffs(value, 4, self.n))
        coeffs = tuple(int(c) % 4 for c in value)
        if len(coeffs) != self.n:
            raise AlgebraError(f"expected {self.n} coefficients, got {len(coeffs)}")
        return RingElement(self, coeffs)

    def zero(self) -> RingElement:
        return self.element(0)

    def one(self) -> RingElement:
        return self.element((1,) + (0,) * (self.n - 1))

    def elements(self) -> list[RingElement]:
        return [self.element(c[::-1]) for c in product(range(4), repeat=self.n)]

    @cached_property
    def teichmuller(self) -> tuple[RingElement, ...]:
        """Teichmuller set ordered by the GF(2^n) index of each element's reduction mod 2."""
        target = 2**self.n - 1
        generator = None
        for x in self.elements():
            if x.multiplicative_order() == target:
                generator = x
                break
        if generator is None:
            raise AlgebraError(
                f"no element of order {target} in GR(4, {self.n}); modulus {self.modulus} is not basic"
            )
        elems = [self.zero()]
        g = self.one()
        for _ in range(target):
            elems.append(g)
            g = g * generator
        return tuple(sorted(elems, key=lambda e: e.residue_index))

    @cached_property
    def _decomposition(self) -> dict[tuple[int, ...], tuple[RingElement, RingElement]]:
        table = {}
        for k in self.teichmuller:
            for j in self.teichmuller:
                table[(k + 2 * j).coeffs] = (k, j)
        if len(table) != self.order:
            raise AlgebraError("Teichmuller decomposition is not a bijection")
        return table

    def decompose(self, x: RingElement) -> tuple[RingElement, RingElement]:
        """Return Teichmuller elements (k, j) with x = k + 2j."""
        try:
            return self._decomposition[x.coeffs]
        except KeyError:
            raise AlgebraError(f"cannot decompose {x!r}") from None

    def frobenius(self, x: RingElement) -> RingElement:
        """The automorphism k + 2j -> k^2 + 2 j^2."""
        k, j = self.decompose(x)
        return k * k + 2 * (j * j)

    def __repr__(self):
        return f"GR(4,{self.n})"


@dataclass(frozen=True)
class RingElement:
    ring: GaloisRing
    coeffs: tuple[int, ...]

    def _check(self, other):
        if isinstance(other, int):
            return self.ring.element((other,) + (0,) * (self.ring.n - 1))
        if other.ring != self.ring:
            raise AlgebraError("elements belong to different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        return RingElement(self.ring, tuple((a + b) % 4 for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, tuple(-a % 4 for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        return RingElement(self.ring, _polymulmod(self.coeffs, other.coeffs, self.ring.modulus, 4))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise AlgebraError("negative powers are not supported in GR(4, n)")
        result, base = self.ring.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def multiplicative_order(self) -> int | None:
        """Smallest e > 0 with x^e = 1, or None for non-units."""
        if all(c % 2 == 0 for c in self.coeffs):
            return None
        one = self.ring.one()
        x = self
        # The unit group has order 2^n (2^n - 1) * ... bounded by |ring|.
        for e in range(1, self.ring.order + 1):
            if x == one:
                return e
            x = x * self
        return None

    @property
    def residue_index(self) -> int:
        return sum((c % 2) << i for i, c in enumerate(self.coeffs))

    @property
    def index(self) -> int:
        return sum(c * 4**i for i, c in enumerate(self.coeffs))

    def __repr__(self):
        return f"{self.ring!r}{list(self.coeffs)}"


def teichmuller_set(n: int, modulus: tuple[int, ...] | None = None) -> list[RingElement]:
    """The 2^n Teichmuller representatives {0} U <xi> of GR(4, n)."""
    if n not in (1, 2, 3):
        raise AlgebraError(f"Teichmuller sets are supported for n in (1, 2, 3), got {n}")
    ring = GaloisRing(n, modulus or ())
    return list(ring.teichmuller)


def gr4_trace(x: RingElement) -> int:
    """Trace GR(4, n) -> Z/4, the sum of the n Frobenius conjugates of ``x``."""
    ring = x.ring
    total = ring.zero()
    term = x
    for _ in range(ring.n):
        total = total + term
        term = ring.frobenius(term)
    if any(total.coeffs[1:]):
        raise AlgebraError(f"trace of {x!r} is not in Z/4: {total!r}")
    return total.coeffs[0]
