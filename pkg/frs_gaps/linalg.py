"""Exact dense linear algebra over F_q.

Vectors are tuples of canonical residues. Subspaces are stored by their
reduced row-echelon basis, so equal subspaces compare equal.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import EnumerationTooLarge, ShapeError
from .field import FieldContext

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]

DEFAULT_ENUMERATION_CAP = 10**6


def vec_add(ctx: FieldContext, u: Sequence[int], v: Sequence[int]) -> Vector:
    q = ctx.q
    return tuple((a + b) % q for a, b in zip(u, v))


def vec_sub(ctx: FieldContext, u: Sequence[int], v: Sequence[int]) -> Vector:
    q = ctx.q
    return tuple((a - b) % q for a, b in zip(u, v))


def vec_scale(ctx: FieldContext, c: int, v: Sequence[int]) -> Vector:
    q = ctx.q
    return tuple(c * a % q for a in v)


def rref(
    ctx: FieldContext, rows: Iterable[Sequence[int]], ncols: int
) -> tuple[list[list[int]], list[int]]:
    """Reduced row-echelon form.

    Returns:
        Tuple of (nonzero RREF rows, pivot column of each row).
    """
    q = ctx.q
    mat = [[x % q for x in row] for row in rows]
    for row in mat:
        if len(row) != ncols:
            raise ShapeError(f"Row of length {len(row)} in a {ncols}-column matrix")

    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(mat):
            break
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][c], -1, q)
        lead = [x * inv % q for x in mat[r]]
        mat[r] = lead
        for i in range(len(mat)):
            f = mat[i][c]
            if i != r and f:
                mat[i] = [(x - f * y) % q for x, y in zip(mat[i], lead)]
        pivots.append(c)
        r += 1
    return mat[:r], pivots


def rank(ctx: FieldContext, rows: Iterable[Sequence[int]], ncols: int) -> int:
    return len(rref(ctx, rows, ncols)[1])


def kernel(ctx: FieldContext, rows: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Basis of {x : M x = 0}, one vector per free column in ascending order."""
    reduced, pivots = rref(ctx, rows, ncols)
    q = ctx.q
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        x = [0] * ncols
        x[free] = 1
        for row, p in zip(reduced, pivots):
            x[p] = -row[free] % q
        basis.append(tuple(x))
    return basis


@dataclass(frozen=True)
class LinearSubspace:
    """A subspace of F_q^D held by its canonical RREF basis."""

    ctx: FieldContext
    ambient_dim: int
    basis: tuple[Vector, ...]

    @classmethod
    def zero(cls, ctx: FieldContext, ambient_dim: int) -> "LinearSubspace":
        return cls(ctx, ambient_dim, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(row) if x) for row in self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def reduce(self, v: Sequence[int]) -> Vector:
        """Remainder of v after eliminating every pivot column."""
        q = self.ctx.q
        out = [x % q for x in v]
        for row, p in zip(self.basis, self.pivots):
            f = out[p]
            if f:
                out = [(x - f * y) % q for x, y in zip(out, row)]
        return tuple(out)

    def contains(self, v: Sequence[int]) -> bool:
        if len(v) != self.ambient_dim:
            raise ShapeError(f"Vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        return not any(self.reduce(v))

    def coordinates(self, v: Sequence[int]) -> Vector:
        """Coefficients of v (a member) in the echelon basis."""
        return tuple(v[p] % self.ctx.q for p in self.pivots)

    def combine(self, coeffs: Sequence[int]) -> Vector:
        q = self.ctx.q
        out = [0] * self.ambient_dim
        for c, row in zip(coeffs, self.basis):
            if c:
                out = [(x + c * y) % q for x, y in zip(out, row)]
        return tuple(out)

    def __add__(self, other: "LinearSubspace") -> "LinearSubspace":
        _check_same(self, other)
        return span(self.ctx, self.basis + other.basis, self.ambient_dim)

    def members(self, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Vector]:
        if self.ctx.q ** self.dim > cap:
            raise EnumerationTooLarge(
                f"{self.ctx.q}^{self.dim} members exceed the enumeration cap {cap}"
            )
        for coeffs in itertools.product(range(self.ctx.q), repeat=self.dim):
            yield self.combine(coeffs)


def _check_same(u: LinearSubspace, v: LinearSubspace) -> None:
    if u.ambient_dim != v.ambient_dim:
        raise ShapeError(f"Ambient dimensions differ: {u.ambient_dim} vs {v.ambient_dim}")
    if u.ctx != v.ctx:
        raise ShapeError("Subspaces over different fields")


def span(
    ctx: FieldContext, vectors: Iterable[Sequence[int]], ambient_dim: int | None = None
) -> LinearSubspace:
    """Canonical echelon basis of the span of `vectors`.

    Raises:
        ShapeError: On mixed vector lengths, or an empty input without ambient_dim.
    """
    vectors = [tuple(v) for v in vectors]
    if ambient_dim is None:
        if not vectors:
            raise ShapeError("span of no vectors needs an explicit ambient dimension")
        ambient_dim = len(vectors[0])
    if any(len(v) != ambient_dim for v in vectors):
        raise ShapeError(f"Mixed vector lengths in span (expected {ambient_dim})")
    reduced, _ = rref(ctx, vectors, ambient_dim)
    return LinearSubspace(ctx, ambient_dim, tuple(tuple(row) for row in reduced))


def intersect(u: LinearSubspace, v: LinearSubspace) -> LinearSubspace:
    """U ∩ V via the left kernel of the stacked bases."""
    _check_same(u, v)
    if u.is_zero() or v.is_zero():
        return LinearSubspace.zero(u.ctx, u.ambient_dim)
    stacked = u.basis + v.basis
    # Columns of the transpose are the stacked basis vectors.
    transpose = [[row[c] for row in stacked] for c in range(u.ambient_dim)]
    relations = kernel(u.ctx, transpose, len(stacked))
    return span(u.ctx, (u.combine(rel[: u.dim]) for rel in relations), u.ambient_dim)


def restriction_kernel(h: LinearSubspace, blocks: Iterable[int], m: int) -> LinearSubspace:
    """H_S: members of H whose blocks in S (m coordinates each) are all zero.

    Raises:
        IndexError: If a block index is outside range(n).
    """
    n = h.ambient_dim // m
    cols = []
    for i in sorted(set(blocks)):
        if not 0 <= i < n:
            raise IndexError(f"Block index {i} out of range for n={n}")
        cols.extend(range(i * m, (i + 1) * m))
    if not cols or h.is_zero():
        return h
    constraints = [[row[c] for row in h.basis] for c in cols]
    coeffs = kernel(h.ctx, constraints, h.dim)
    return span(h.ctx, (h.combine(c) for c in coeffs), h.ambient_dim)


def coordinate_kernel(a: LinearSubspace, i: int, m: int) -> LinearSubspace:
    """A_i := {a in A : a_i = 0} for the i-th block of m scalar coordinates."""
    return restriction_kernel(a, (i,), m)


@dataclass(frozen=True)
class AffineSubspace:
    """anchor + directions, with the anchor reduced to the lexicographically-least member."""

    anchor: Vector
    directions: LinearSubspace

    def __post_init__(self) -> None:
        if len(self.anchor) != self.directions.ambient_dim:
            raise ShapeError("Anchor length does not match the direction space")
        object.__setattr__(self, "anchor", self.directions.reduce(self.anchor))

    @property
    def ctx(self) -> FieldContext:
        return self.directions.ctx

    @property
    def dim(self) -> int:
        return self.directions.dim

    @property
    def ambient_dim(self) -> int:
        return self.directions.ambient_dim

    def contains(self, v: Sequence[int]) -> bool:
        return self.directions.contains(vec_sub(self.ctx, v, self.anchor))

    def members(self, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Vector]:
        for d in self.directions.members(cap):
            yield vec_add(self.ctx, self.anchor, d)


def affine_span(
    ctx: FieldContext, points: Sequence[Sequence[int]], ambient_dim: int | None = None
) -> AffineSubspace:
    if not points:
        raise ShapeError("affine_span needs at least one point")
    base = tuple(points[0])
    dirs = span(ctx, (vec_sub(ctx, p, base) for p in points[1:]), ambient_dim or len(base))
    return AffineSubspace(base, dirs)


def solve_affine(
    ctx: FieldContext, rows: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int
) -> AffineSubspace | None:
    """Solution set of M x = b, or None when the system is inconsistent."""
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(ctx, augmented, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    particular = [0] * ncols
    for row, p in zip(reduced, pivots):
        particular[p] = row[ncols]
    directions = span(ctx, kernel(ctx, rows, ncols), ncols)
    return AffineSubspace(tuple(particular), directions)
