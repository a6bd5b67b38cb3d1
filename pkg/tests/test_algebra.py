import itertools

import pytest

from mubwitness.algebra import (
    AlgebraError,
    GaloisField,
    GaloisRing,
    gf_trace,
    gr4_trace,
    teichmuller_set,
)

FIELDS = [(2, 2), (2, 3), (3, 2)]


def slow_power(x, e):
    result = x.field.one()
    for _ in range(e):
        result = result * x
    return result


@pytest.mark.parametrize("p,n", FIELDS)
def test_field_axioms_exhaustive(p, n):
    f = GaloisField(p, n)
    els = f.elements()
    assert len(els) == p**n
    for a, b, c in itertools.product(els, repeat=3):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("p,n", FIELDS)
def test_every_nonzero_element_invertible(p, n):
    f = GaloisField(p, n)
    for a in f.elements()[1:]:
        assert (a * a.inverse()).is_one()
        assert (a ** (p**n - 1)).is_one()


def test_multiplicative_group_is_cyclic_of_order_eight_in_gf9():
    f = GaloisField(3, 2)
    orders = []
    for a in f.elements()[1:]:
        orders.append(next(e for e in range(1, 9) if slow_power(a, e).is_one()))
    assert max(orders) == 8


def test_reducible_modulus_rejected():
    with pytest.raises(AlgebraError):
        GaloisField(3, 2, (2, 0, 1))  # x^2 + 2 = (x + 1)(x + 2) over F_3


def test_trace_gf9_small_cases():
    f = GaloisField(3, 2)
    assert gf_trace(f.zero()) == 0
    assert gf_trace(f.one()) == 2


@pytest.mark.parametrize("p,n", FIELDS)
def test_trace_matches_brute_force(p, n):
    f = GaloisField(p, n)
    for x in f.elements():
        total = f.zero()
        for t in range(n):
            total = total + slow_power(x, p**t)
        assert total.coeffs[1:] == (0,) * (n - 1)
        assert gf_trace(x) == total.coeffs[0]


@pytest.mark.parametrize("p,n", FIELDS)
def test_trace_is_linear_and_onto(p, n):
    f = GaloisField(p, n)
    els = f.elements()
    for x, y in itertools.product(els, repeat=2):
        assert gf_trace(x + y) == (gf_trace(x) + gf_trace(y)) % p
    for x in els:
        for c in range(p):
            scaled = f.element((c,) + (0,) * (n - 1)) * x
            assert gf_trace(scaled) == c * gf_trace(x) % p
    assert {gf_trace(x) for x in els} == set(range(p))


def test_gf9_trace_table_frozen():
    f = GaloisField(3, 2)
    assert [gf_trace(x) for x in f.elements()] == [0, 2, 1, 0, 2, 1, 0, 2, 1]


def test_teichmuller_n1():
    t = teichmuller_set(1)
    assert sorted(x.coeffs for x in t) == [(0,), (1,)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_teichmuller_fixed_by_power(n):
    t = teichmuller_set(n)
    assert len(t) == 2**n
    assert len({x.coeffs for x in t}) == 2**n
    for x in t:
        assert x ** (2**n) == x


@pytest.mark.parametrize("n", [2, 3])
def test_teichmuller_decomposition_unique(n):
    ring = GaloisRing(n)
    t = teichmuller_set(n)
    sums = {(k + 2 * j).coeffs for k in t for j in t}
    assert len(sums) == ring.order
    for x in ring.elements():
        k, j = ring.decompose(x)
        assert k + 2 * j == x


def test_teichmuller_closed_under_frobenius():
    ring = GaloisRing(3)
    t = {x.coeffs for x in ring.teichmuller}
    for x in ring.teichmuller:
        assert ring.frobenius(x).coeffs in t
        assert ring.frobenius(x) == x * x


def test_gr4_trace_small_cases():
    ring = GaloisRing(2)
    assert gr4_trace(ring.zero()) == 0
    assert gr4_trace(ring.one()) == 2
    assert gr4_trace(GaloisRing(3).one()) == 3


def test_gr4_trace_generator_matches_explicit_conjugates():
    ring = GaloisRing(3)
    xi = next(x for x in ring.teichmuller if x.multiplicative_order() == 7)
    # sigma squares Teichmuller elements, so the conjugates are xi, xi^2, xi^4.
    explicit = xi + xi * xi + (xi * xi) * (xi * xi)
    assert explicit.coeffs[1:] == (0, 0)
    assert gr4_trace(xi) == explicit.coeffs[0]


@pytest.mark.parametrize("n", [2, 3])
def test_gr4_trace_additive(n):
    ring = GaloisRing(n)
    els = ring.elements()
    for x, y in itertools.product(els, repeat=2):
        assert gr4_trace(x + y) == (gr4_trace(x) + gr4_trace(y)) % 4


def test_gr42_teichmuller_trace_table_frozen():
    assert [gr4_trace(x) for x in teichmuller_set(2)] == [0, 2, 3, 3]


def test_non_basic_modulus_rejected():
    with pytest.raises(AlgebraError):
        GaloisRing(2, (0, 0, 1))  # x^2 reduces to a reducible polynomial
    with pytest.raises(AlgebraError):
        teichmuller_set(4)


def test_mixed_fields_rejected():
    with pytest.raises(AlgebraError):
        GaloisField(2, 2).one() + GaloisField(3, 2).one()
