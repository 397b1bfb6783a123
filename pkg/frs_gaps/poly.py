"""Univariate polynomials over F_q, dense and lowest-degree-first."""

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DuplicateNode, ShapeError
from .field import FieldContext, FieldElement

logger = logging.getLogger(__name__)


def _trim(coeffs: Iterable[int], q: int) -> tuple[int, ...]:
    out = [c % q for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Poly:
    """A polynomial with canonical-residue coefficients, lowest degree first.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    ctx: FieldContext
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _trim(self.coeffs, self.ctx.q))

    @classmethod
    def zero(cls, ctx: FieldContext) -> "Poly":
        return cls(ctx, ())

    @classmethod
    def constant(cls, ctx: FieldContext, c: int) -> "Poly":
        return cls(ctx, (c,))

    @classmethod
    def x(cls, ctx: FieldContext) -> "Poly":
        return cls(ctx, (0, 1))

    @classmethod
    def from_roots(cls, ctx: FieldContext, roots: Iterable[int]) -> "Poly":
        out = cls.constant(ctx, 1)
        for r in roots:
            out = out * cls(ctx, (-r, 1))
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def padded(self, length: int) -> tuple[int, ...]:
        """Coefficient vector of exactly `length` entries (message-space coordinates)."""
        if len(self.coeffs) > length:
            raise ShapeError(f"Degree {self.degree} does not fit in {length} coefficients")
        return self.coeffs + (0,) * (length - len(self.coeffs))

    def _check(self, other: "Poly") -> None:
        if other.ctx != self.ctx:
            raise ShapeError("Polynomials over different fields")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly(self.ctx, tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    def __neg__(self) -> "Poly":
        return Poly(self.ctx, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.ctx)
        q = self.ctx.q
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = (out[i + j] + a * b) % q
        return Poly(self.ctx, out)

    def scale(self, c: int) -> "Poly":
        return Poly(self.ctx, tuple(c * x for x in self.coeffs))

    def dilate(self, c: int) -> "Poly":
        """The polynomial X -> f(c*X)."""
        q = self.ctx.q
        out, power = [], 1
        for a in self.coeffs:
            out.append(a * power % q)
            power = power * c % q
        return Poly(self.ctx, out)

    def __call__(self, x: int) -> int:
        q = self.ctx.q
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % q
        return acc

    def __repr__(self) -> str:
        if self.is_zero():
            return "Poly(0)"
        terms = [f"{c}x^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return f"Poly({' + '.join(terms)} mod {self.ctx.q})"


def evaluate(f: Poly, x: FieldElement | int) -> FieldElement:
    """Horner evaluation of f at x."""
    return FieldElement(f(int(x)), f.ctx)


def interpolate(ctx: FieldContext, points: Sequence[tuple[int, int]]) -> Poly:
    """Lagrange interpolation through pairwise-distinct nodes.

    Args:
        ctx: Field context.
        points: (x, y) pairs of residues (or FieldElements).

    Returns:
        The unique polynomial of degree < len(points) through every point.

    Raises:
        DuplicateNode: If two points share an x-coordinate.
    """
    q = ctx.q
    xs = [int(x) % q for x, _ in points]
    ys = [int(y) % q for _, y in points]
    if len(set(xs)) != len(xs):
        raise DuplicateNode(f"Interpolation nodes are not distinct: {xs}")

    result = Poly.zero(ctx)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        basis = Poly.constant(ctx, 1)
        denom = 1
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = basis * Poly(ctx, (-xj, 1))
            denom = denom * (xi - xj) % q
        result = result + basis.scale(yi * ctx.inv(denom))
    return result


def poly_matrix_det(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square matrix of polynomials by cofactor expansion.

    Raises:
        ShapeError: If the matrix is empty or not square.
    """
    d = len(matrix)
    if d == 0 or any(len(row) != d for row in matrix):
        raise ShapeError("poly_matrix_det needs a non-empty square matrix")
    ctx = matrix[0][0].ctx
    if d == 1:
        return matrix[0][0]

    det = Poly.zero(ctx)
    for col, entry in enumerate(matrix[0]):
        if entry.is_zero():
            continue
        minor = [list(row[:col]) + list(row[col + 1:]) for row in matrix[1:]]
        term = entry * poly_matrix_det(minor)
        det = det - term if col % 2 else det + term
    return det
