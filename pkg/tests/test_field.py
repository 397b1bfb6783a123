import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frs_gaps.errors import ContextMismatch, DivisionByZero, NotPrime
from frs_gaps.field import FieldContext, element_order, is_prime, prime_factors, primitive_root

PRIMES = [2, 3, 5, 17, 97, 8191, 65537, 2**31 - 1, 2**61 - 1]
COMPOSITES = [0, 1, 4, 15, 561, 8192, 2**32 + 1, 3215031751]


@pytest.mark.parametrize("n", PRIMES)
def test_is_prime_accepts_primes(n):
    assert is_prime(n)


@pytest.mark.parametrize("n", COMPOSITES)
def test_is_prime_rejects_composites(n):
    assert not is_prime(n)


def test_prime_factors():
    assert prime_factors(16) == (2,)
    assert prime_factors(8190) == (2, 3, 5, 7, 13)
    assert prime_factors(2**32 + 1) == (641, 6700417)


def test_primitive_root_of_17_is_3():
    assert primitive_root(17) == 3


@pytest.mark.parametrize("q", [5, 17, 97, 8191, 65537])
def test_primitive_root_generates(q):
    g = primitive_root(q)
    assert FieldContext(q, g).gamma_order == q - 1
    # least generator
    assert all(FieldContext(q, h).gamma_order < q - 1 for h in range(2, g))


def test_context_rejects_composite_modulus():
    with pytest.raises(NotPrime):
        FieldContext(15, 2)


def test_context_rejects_zero_gamma():
    with pytest.raises(DivisionByZero):
        FieldContext(17, 34)


def test_gamma_order(ctx17):
    assert ctx17.gamma_order == 16
    assert FieldContext(17, 2).gamma_order == 8
    assert FieldContext(17, 16).gamma_order == 2


def test_inverse_of_zero_raises(ctx17):
    with pytest.raises(DivisionByZero):
        ctx17.inv(0)
    with pytest.raises(DivisionByZero):
        ctx17.element(5) / 0


def test_mixed_contexts_raise(ctx17):
    other = FieldContext(19, 2)
    with pytest.raises(ContextMismatch):
        ctx17.element(1) + other.element(1)


def test_element_order(ctx17):
    assert element_order(ctx17.element(1)) == 1
    assert element_order(ctx17.element(16)) == 2
    assert element_order(ctx17.element(3)) == 16
    with pytest.raises(DivisionByZero):
        element_order(ctx17.element(0))


def test_negative_power_is_inverse_power(ctx17):
    assert ctx17.pow(3, -1) == ctx17.inv(3)
    assert ctx17.pow(3, -2) == ctx17.mul(ctx17.inv(3), ctx17.inv(3))


@settings(deadline=None)
@given(st.integers(min_value=1, max_value=8190))
def test_inverse_property(a):
    ctx = FieldContext(8191, 17)
    x = ctx.element(a)
    assert int(x * x.inv()) == 1
    assert int(x / x) == 1


@settings(deadline=None)
@given(st.integers(), st.integers(), st.integers())
def test_field_axioms(a, b, c):
    ctx = FieldContext(97, 5)
    x, y, z = ctx.element(a), ctx.element(b), ctx.element(c)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x - x == ctx.element(0)
    assert -x + x == ctx.element(0)
    assert 0 <= int(x) < 97
