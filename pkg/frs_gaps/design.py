"""Subspace-design checks for folded Reed-Solomon codes.

Message space is F_q^k (coefficient vectors, lowest degree first). For a
nonzero a, H_a is the kernel of the evaluation map f -> (f(a), f(γa), ...,
f(γ^(m-1)a)). Intersections with H_a are computed by rank-nullity on the
evaluation matrix of a basis of U, never via Wronskian roots.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

from .errors import (
    DegreeOverflow,
    DesignPreconditionViolated,
    EnumerationTooLarge,
    InvalidBasepoint,
    ShapeError,
    ZeroPolynomial,
)
from .field import FieldElement
from .frs import CodeParams, encode_message
from .linalg import DEFAULT_ENUMERATION_CAP, LinearSubspace, kernel, rank, span
from .poly import Poly, poly_matrix_det
from .rng import SeededRNG

logger = logging.getLogger(__name__)

DEFAULT_DESIGN_CAP = 2**16

SumDomain = Literal["auto", "all", "basepoints"]


@dataclass
class DesignReport:
    """Outcome of one design-sum check."""

    d: int
    sum_dims: int
    bound: Fraction
    domain: str
    contributions: dict[int, int] = field(default_factory=dict)
    wronskian_degree: int | None = None

    @property
    def passed(self) -> bool:
        return self.sum_dims <= self.bound

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def overlapping_windows(self, p: CodeParams) -> list[tuple[int, int]]:
        """Pairs (a, γ^j·a), 0 < j < m, that both contribute.

        Their evaluation windows share points, which is how the sum over all
        of F_q^x can exceed the bound while disjoint basepoints cannot.
        """
        pairs = []
        for a in sorted(self.contributions):
            for j in range(1, p.m):
                b = a * p.ctx.gamma_power(j) % p.q
                if b in self.contributions:
                    pairs.append((a, b))
        return pairs


def window_points(p: CodeParams, a: int) -> list[int]:
    q = p.q
    return [a * p.ctx.gamma_power(j) % q for j in range(p.m)]


def _evaluation_rows(p: CodeParams, a: int) -> list[list[int]]:
    """E_a as m rows over the k monomial coefficients."""
    q = p.q
    return [[pow(x, e, q) for e in range(p.k)] for x in window_points(p, a)]


def kernel_at(p: CodeParams, a: FieldElement | int) -> LinearSubspace:
    """H_a: messages vanishing on the whole window a, γa, ..., γ^(m-1)a.

    Raises:
        InvalidBasepoint: If a is zero.
    """
    a = int(a) % p.q
    if a == 0:
        raise InvalidBasepoint("H_a is defined for nonzero a only")
    return span(p.ctx, kernel(p.ctx, _evaluation_rows(p, a), p.k), p.k)


def _message_subspace(p: CodeParams, u: LinearSubspace | Sequence[Poly]) -> LinearSubspace:
    if isinstance(u, LinearSubspace):
        if u.ambient_dim != p.k:
            raise ShapeError(f"Message subspace must live in F_q^{p.k}")
        return u
    return span(p.ctx, (f.padded(p.k) for f in u), p.k)


def _window_nullity(p: CodeParams, basis: Sequence[Sequence[int]], a: int) -> int:
    """dim(U ∩ H_a) as d - rank of the basis evaluated on the window at a."""
    q = p.q
    pts = window_points(p, a)
    rows = []
    for coeffs in basis:
        row = []
        for x in pts:
            acc = 0
            for c in reversed(coeffs):
                acc = (acc * x + c) % q
            row.append(acc)
        rows.append(row)
    return len(basis) - rank(p.ctx, rows, p.m)


def design_sum(
    p: CodeParams,
    u: LinearSubspace | Sequence[Poly],
    domain: SumDomain = "auto",
    cap: int = DEFAULT_DESIGN_CAP,
    with_wronskian: bool = False,
) -> DesignReport:
    """Σ_a dim(U ∩ H_a) against the bound d(k-d)/(m-d+1).

    Args:
        p: Code parameters.
        u: Message subspace (or a list of spanning polynomials).
        domain: "all" sums over F_q^x, "basepoints" over the n basepoints,
            "auto" picks "all" when q <= cap.
        cap: Largest q for which F_q^x is iterated.
        with_wronskian: Also record the degree of the folded Wronskian.

    Raises:
        DesignPreconditionViolated: If dim U is 0 or exceeds m.
        EnumerationTooLarge: If domain is "all" and q exceeds cap.
    """
    u = _message_subspace(p, u)
    d = u.dim
    if d < 1 or d > p.m:
        raise DesignPreconditionViolated(f"Need 1 <= dim U <= m={p.m}, got {d}")
    if domain == "auto":
        domain = "all" if p.q <= cap else "basepoints"
    if domain == "all":
        if p.q > cap:
            raise EnumerationTooLarge(f"q={p.q} exceeds the design iteration cap {cap}")
        points = range(1, p.q)
    else:
        points = p.basepoints

    contributions = {}
    for a in points:
        nullity = _window_nullity(p, u.basis, a)
        if nullity:
            contributions[a] = nullity

    report = DesignReport(
        d=d,
        sum_dims=sum(contributions.values()),
        bound=Fraction(d * (p.k - d), p.m - d + 1),
        domain=domain,
        contributions=contributions,
    )
    if with_wronskian:
        report.wronskian_degree = folded_wronskian(p, u).degree
    if not report.passed:
        logger.info(
            f"Design sum {report.sum_dims} exceeds {report.bound} over {domain} "
            f"(overlapping windows: {report.overlapping_windows(p)})"
        )
    return report


def folded_wronskian(p: CodeParams, u: LinearSubspace | Sequence[Poly]) -> Poly:
    """det of the d x d matrix whose (i, j) entry is f_j(γ^i X).

    Raises:
        DesignPreconditionViolated: If the basis is empty or d > m.
    """
    if isinstance(u, LinearSubspace):
        basis = [Poly(p.ctx, row) for row in u.basis]
    else:
        basis = list(u)
    d = len(basis)
    if d < 1 or d > p.m:
        raise DesignPreconditionViolated(f"Need 1 <= d <= m={p.m}, got {d}")
    matrix = [[f.dilate(p.ctx.gamma_power(i)) for f in basis] for i in range(d)]
    return poly_matrix_det(matrix)


def block_collision_count(p: CodeParams, h: Poly) -> int:
    """Number of basepoints whose entire folded block of h vanishes.

    Raises:
        ZeroPolynomial: If h is zero.
        DegreeOverflow: If deg h >= k.
    """
    if h.is_zero():
        raise ZeroPolynomial("block_collision_count needs a nonzero polynomial")
    if h.degree >= p.k:
        raise DegreeOverflow(f"deg h = {h.degree} must be below k={p.k}")
    return sum(
        1 for block in p.evaluation_points if all(h(x) == 0 for x in block)
    )


def subspace_design_average(p: CodeParams, u: LinearSubspace) -> Fraction:
    """(1/(n·d)) Σ_i dim(A_i) for the code subspace A = encode(U)."""
    d = u.dim
    if d == 0:
        return Fraction(0)
    total = sum(_window_nullity(p, u.basis, a) for a in p.basepoints)
    return Fraction(total, p.n * d)


def _random_message_subspace(p: CodeParams, d: int, rng: SeededRNG) -> LinearSubspace:
    while True:
        u = span(p.ctx, (rng.vector(p.q, p.k) for _ in range(d)), p.k)
        if not u.is_zero():
            return u


def tau_estimate(p: CodeParams, r: int, trials: int, rng: SeededRNG) -> Fraction:
    """Largest sampled subspace-design average over random subspaces of dim <= r.

    An empirical lower bound on the best admissible τ(r). Trial t draws its
    subspace from rng.derive("tau", t).
    """
    if r < 1 or trials < 1:
        raise ValueError(f"Need r >= 1 and trials >= 1 (got r={r}, trials={trials})")
    best = Fraction(0)
    for t in range(trials):
        stream = rng.derive("tau", t)
        d = stream.randint(1, min(r, p.k))
        best = max(best, subspace_design_average(p, _random_message_subspace(p, d, stream)))
    logger.debug(f"tau_estimate(r={r}, trials={trials}) = {best}")
    return best


def tau_exhaustive(p: CodeParams, cap: int = DEFAULT_ENUMERATION_CAP) -> Fraction:
    """Exact r = 1 value: max over nonzero messages f of (zero blocks of f)/n.

    Scalar multiples share a zero pattern, so only monic messages are swept.
    """
    if p.q ** p.k > cap:
        raise EnumerationTooLarge(f"{p.q}^{p.k} messages exceed the enumeration cap {cap}")
    best = 0
    for deg in range(p.k):
        for lower in itertools.product(range(p.q), repeat=deg):
            c = encode_message(p, lower + (1,))
            best = max(best, sum(1 for block in c.blocks if not any(block)))
    return Fraction(best, p.n)
