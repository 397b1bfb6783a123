"""Folded Reed-Solomon codes: parameters, encoding and block distance."""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import (
    DegreeOverflow,
    EnumerationTooLarge,
    FieldTooSmall,
    InvalidBasepoint,
    OrderTooSmall,
    ParameterError,
    PointCollision,
    ShapeError,
)
from .field import FieldContext
from .linalg import DEFAULT_ENUMERATION_CAP, LinearSubspace, Vector, span
from .poly import Poly, interpolate

logger = logging.getLogger(__name__)

Symbol = tuple[int, ...]


@dataclass(frozen=True)
class Word:
    """A length-n sequence of symbols in F_q^m."""

    blocks: tuple[Symbol, ...]

    def __post_init__(self) -> None:
        blocks = tuple(tuple(b) for b in self.blocks)
        if blocks and len({len(b) for b in blocks}) != 1:
            raise ShapeError("All symbols of a word must share the folding parameter m")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_flat(cls, vector: Sequence[int], m: int) -> "Word":
        if len(vector) % m:
            raise ShapeError(f"Vector of length {len(vector)} is not a multiple of m={m}")
        return cls(tuple(tuple(vector[i : i + m]) for i in range(0, len(vector), m)))

    @classmethod
    def zero(cls, n: int, m: int) -> "Word":
        return cls(((0,) * m,) * n)

    @property
    def n(self) -> int:
        return len(self.blocks)

    @property
    def m(self) -> int:
        return len(self.blocks[0]) if self.blocks else 0

    def flat(self) -> Vector:
        return tuple(x for block in self.blocks for x in block)

    def restrict(self, coords: Iterable[int]) -> tuple[Symbol, ...]:
        return tuple(self.blocks[i] for i in coords)

    def with_block(self, i: int, symbol: Sequence[int]) -> "Word":
        blocks = list(self.blocks)
        blocks[i] = tuple(symbol)
        return Word(tuple(blocks))


def _check_shapes(x: Word, y: Word) -> None:
    if x.n != y.n or x.m != y.m:
        raise ShapeError(f"Word shapes differ: ({x.n}, {x.m}) vs ({y.n}, {y.m})")


def word_add(ctx: FieldContext, x: Word, y: Word) -> Word:
    _check_shapes(x, y)
    q = ctx.q
    return Word(tuple(
        tuple((a + b) % q for a, b in zip(bx, by)) for bx, by in zip(x.blocks, y.blocks)
    ))


def word_sub(ctx: FieldContext, x: Word, y: Word) -> Word:
    _check_shapes(x, y)
    q = ctx.q
    return Word(tuple(
        tuple((a - b) % q for a, b in zip(bx, by)) for bx, by in zip(x.blocks, y.blocks)
    ))


def word_scale(ctx: FieldContext, c: int, x: Word) -> Word:
    q = ctx.q
    return Word(tuple(tuple(c * a % q for a in block) for block in x.blocks))


def word_axpy(ctx: FieldContext, x: Word, alpha: int, y: Word) -> Word:
    """x + alpha*y, block-wise."""
    _check_shapes(x, y)
    q = ctx.q
    return Word(tuple(
        tuple((a + alpha * b) % q for a, b in zip(bx, by))
        for bx, by in zip(x.blocks, y.blocks)
    ))


def block_distance(x: Word, y: Word) -> Fraction:
    """Fraction of blocks in which x and y differ."""
    _check_shapes(x, y)
    if x.n == 0:
        return Fraction(0)
    return Fraction(sum(1 for a, b in zip(x.blocks, y.blocks) if a != b), x.n)


def agreement_set(x: Word, y: Word) -> frozenset[int]:
    _check_shapes(x, y)
    return frozenset(i for i, (a, b) in enumerate(zip(x.blocks, y.blocks)) if a == b)


@dataclass(frozen=True)
class CodeParams:
    """The tuple (q, gamma, m, n, k, basepoints) defining FRS^m_{n,k}."""

    ctx: FieldContext
    m: int
    n: int
    k: int
    basepoints: tuple[int, ...]

    @classmethod
    def standard(cls, ctx: FieldContext, m: int, n: int, k: int) -> "CodeParams":
        """Default layout alpha_i = gamma^(m*i): consecutive disjoint gamma-orbits."""
        basepoints = tuple(ctx.gamma_power(m * i) for i in range(n))
        params = cls(ctx, m, n, k, basepoints)
        validate_params(params)
        return params

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.m * self.n)

    @cached_property
    def evaluation_points(self) -> tuple[tuple[int, ...], ...]:
        """Per block, the points (a, gamma*a, ..., gamma^(m-1)*a)."""
        q = self.ctx.q
        pts = []
        for a in self.basepoints:
            block, x = [], a % q
            for _ in range(self.m):
                block.append(x)
                x = x * self.ctx.gamma % q
            pts.append(tuple(block))
        return tuple(pts)

    @cached_property
    def flat_points(self) -> tuple[int, ...]:
        return tuple(x for block in self.evaluation_points for x in block)

    def describe(self) -> dict[str, int | list[int]]:
        return {
            "q": self.q,
            "gamma": self.ctx.gamma,
            "m": self.m,
            "n": self.n,
            "k": self.k,
            "basepoints": list(self.basepoints),
        }


def validate_params(p: CodeParams) -> None:
    """Check every CodeParams invariant.

    Raises:
        ParameterError: For m < 2, n < 1, k < 1 or a basepoint count mismatch.
        InvalidBasepoint: If a basepoint is zero.
        DegreeOverflow: If k > m*n.
        FieldTooSmall: If q <= m*n.
        OrderTooSmall: If the order of gamma is below m*n.
        PointCollision: If the m*n evaluation points are not pairwise distinct.
    """
    mn = p.m * p.n
    if p.m < 2:
        raise ParameterError(f"Folding parameter m={p.m} must be at least 2")
    if p.n < 1 or p.k < 1:
        raise ParameterError(f"Need n >= 1 and k >= 1 (got n={p.n}, k={p.k})")
    if len(p.basepoints) != p.n:
        raise ParameterError(f"Expected {p.n} basepoints, got {len(p.basepoints)}")
    if any(a % p.q == 0 for a in p.basepoints):
        raise InvalidBasepoint("Basepoints must be nonzero")
    if p.k > mn:
        raise DegreeOverflow(f"k={p.k} exceeds m*n={mn}")
    if p.q <= mn:
        raise FieldTooSmall(f"q={p.q} must exceed m*n={mn}")
    if p.ctx.gamma_order < mn:
        raise OrderTooSmall(f"order(gamma)={p.ctx.gamma_order} is below m*n={mn}")
    if len(set(p.flat_points)) != mn:
        raise PointCollision("The m*n evaluation points are not pairwise distinct")


def encode(p: CodeParams, f: Poly) -> Word:
    """The m-folded codeword of f.

    Raises:
        DegreeOverflow: If deg f >= k.
    """
    if f.degree >= p.k:
        raise DegreeOverflow(f"Message degree {f.degree} must be below k={p.k}")
    return Word(tuple(tuple(f(x) for x in block) for block in p.evaluation_points))


def encode_message(p: CodeParams, coeffs: Sequence[int]) -> Word:
    return encode(p, Poly(p.ctx, tuple(coeffs)))


def message_of(p: CodeParams, word: Word) -> Poly | None:
    """Message polynomial of a codeword, or None when `word` is not in the code."""
    if word.n != p.n or word.m != p.m:
        raise ShapeError(f"Word shape ({word.n}, {word.m}) does not match ({p.n}, {p.m})")
    flat = word.flat()
    f = interpolate(p.ctx, list(zip(p.flat_points[: p.k], flat[: p.k])))
    if all(f(x) == y for x, y in zip(p.flat_points[p.k :], flat[p.k :])):
        return f
    return None


def is_codeword(p: CodeParams, word: Word) -> bool:
    return message_of(p, word) is not None


def enumerate_codewords(
    p: CodeParams, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[tuple[Poly, Word]]:
    """Yield every (message, codeword) pair exactly once.

    Raises:
        EnumerationTooLarge: If q^k exceeds `cap`.
    """
    if p.q ** p.k > cap:
        raise EnumerationTooLarge(f"{p.q}^{p.k} codewords exceed the enumeration cap {cap}")

    def _stream() -> Iterator[tuple[Poly, Word]]:
        for coeffs in itertools.product(range(p.q), repeat=p.k):
            f = Poly(p.ctx, coeffs)
            yield f, encode(p, f)

    return _stream()


def generator_rows(p: CodeParams) -> list[Vector]:
    """Flattened encodings of the monomials 1, x, ..., x^(k-1)."""
    return [
        encode(p, Poly(p.ctx, (0,) * e + (1,))).flat() for e in range(p.k)
    ]


def code_subspace(p: CodeParams) -> LinearSubspace:
    return span(p.ctx, generator_rows(p), p.m * p.n)


def minimum_block_weight(p: CodeParams, cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    """Smallest number of nonzero blocks over all nonzero codewords (exhaustive)."""
    best = p.n
    for f, c in enumerate_codewords(p, cap):
        if f.is_zero():
            continue
        best = min(best, sum(1 for block in c.blocks if any(block)))
    return best


def unique_decoding_radius(p: CodeParams) -> Fraction:
    """Largest block radius below half the guaranteed minimum distance."""
    d_min = p.n - (p.k - 1) // p.m
    return Fraction((d_min - 1) // 2, p.n)
