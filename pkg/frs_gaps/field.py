"""Exact arithmetic in a prime field F_q with a runtime-configurable modulus."""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .errors import ContextMismatch, DivisionByZero, NotPrime

logger = logging.getLogger(__name__)

# Deterministic for every n < 3.3e24, which covers all 64-bit moduli.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for 64-bit inputs."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """Return a nontrivial factor of the composite n (Brent's variant)."""
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


@lru_cache(maxsize=256)
def prime_factors(n: int) -> tuple[int, ...]:
    """Distinct prime factors of n, ascending."""
    factors: set[int] = set()
    stack = [n]
    while stack:
        v = stack.pop()
        if v == 1:
            continue
        for p in (2, 3, 5, 7, 11, 13):
            while v % p == 0:
                factors.add(p)
                v //= p
        if v == 1:
            continue
        if is_prime(v):
            factors.add(v)
            continue
        d = _pollard_rho(v)
        stack.extend((d, v // d))
    return tuple(sorted(factors))


def _order_mod(a: int, q: int) -> int:
    order = q - 1
    for p in prime_factors(q - 1):
        while order % p == 0 and pow(a, order // p, q) == 1:
            order //= p
    return order


def primitive_root(q: int) -> int:
    """Least generator of the multiplicative group of F_q."""
    if not is_prime(q):
        raise NotPrime(f"Modulus {q} is not prime")
    if q == 2:
        return 1
    for g in range(2, q):
        if _order_mod(g, q) == q - 1:
            return g
    raise NotPrime(f"No primitive root found for {q}")


@dataclass(frozen=True)
class FieldContext:
    """The field F_q together with the designated folding generator gamma."""

    q: int
    gamma: int
    gamma_order: int = field(init=False)

    def __post_init__(self) -> None:
        if not is_prime(self.q):
            raise NotPrime(f"Modulus {self.q} is not prime")
        gamma = self.gamma % self.q
        if gamma == 0:
            raise DivisionByZero("gamma must be a nonzero field element")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "gamma_order", _order_mod(gamma, self.q))

    @classmethod
    def with_primitive_root(cls, q: int) -> "FieldContext":
        """Build a context whose gamma generates all of F_q^x."""
        return cls(q, primitive_root(q))

    # Integer-level operations on canonical residues; bulk modules use these.

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def neg(self, a: int) -> int:
        return -a % self.q

    def mul(self, a: int, b: int) -> int:
        return a * b % self.q

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.q}")
        return pow(a, -1, self.q)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.q)
        return pow(a, e, self.q)

    def order(self, a: int) -> int:
        """Multiplicative order of the residue a."""
        a %= self.q
        if a == 0:
            raise DivisionByZero("0 has no multiplicative order")
        return _order_mod(a, self.q)

    def element(self, value: int) -> "FieldElement":
        return FieldElement(value, self)

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))

    def nonzero_elements(self) -> Iterator[int]:
        return iter(range(1, self.q))

    def gamma_power(self, j: int) -> int:
        return pow(self.gamma, j, self.q)


@dataclass(frozen=True)
class FieldElement:
    """An element of F_q bound to its FieldContext."""

    value: int
    ctx: FieldContext

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.value % self.ctx.q)

    def _coerce(self, other: "FieldElement | int") -> int:
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise ContextMismatch(
                    f"Cannot combine elements of F_{self.ctx.q} and F_{other.ctx.q}"
                )
            return other.value
        return int(other) % self.ctx.q

    def __add__(self, other: "FieldElement | int") -> "FieldElement":
        return FieldElement(self.value + self._coerce(other), self.ctx)

    __radd__ = __add__

    def __sub__(self, other: "FieldElement | int") -> "FieldElement":
        return FieldElement(self.value - self._coerce(other), self.ctx)

    def __rsub__(self, other: "FieldElement | int") -> "FieldElement":
        return FieldElement(self._coerce(other) - self.value, self.ctx)

    def __mul__(self, other: "FieldElement | int") -> "FieldElement":
        return FieldElement(self.value * self._coerce(other), self.ctx)

    __rmul__ = __mul__

    def __truediv__(self, other: "FieldElement | int") -> "FieldElement":
        return FieldElement(self.value * self.ctx.inv(self._coerce(other)), self.ctx)

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value, self.ctx)

    def __pow__(self, exponent: int) -> "FieldElement":
        return FieldElement(self.ctx.pow(self.value, exponent), self.ctx)

    def __int__(self) -> int:
        return self.value

    def inv(self) -> "FieldElement":
        return FieldElement(self.ctx.inv(self.value), self.ctx)

    def is_zero(self) -> bool:
        return self.value == 0

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.ctx.q})"


def element_order(a: FieldElement) -> int:
    """Smallest t >= 1 with a^t = 1.

    Raises:
        DivisionByZero: If a is zero.
    """
    return a.ctx.order(a.value)
