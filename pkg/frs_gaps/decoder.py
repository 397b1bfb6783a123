"""List decoding of folded Reed-Solomon codes.

Two backends answer the same question, "which codewords lie within block
radius ρ of y": an exhaustive oracle over all q^k messages, and the
linear-algebraic decoder that interpolates Q(X, Y_1..Y_s) = A_0(X) +
Σ_l A_l(X)·Y_l over sliding windows and then prunes the resulting affine
space of candidate messages.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .errors import EnumerationTooLarge, InterpolationInfeasible, ParameterError
from .frs import CodeParams, Word, block_distance, encode, enumerate_codewords
from .linalg import DEFAULT_ENUMERATION_CAP, AffineSubspace, kernel, solve_affine
from .poly import Poly

logger = logging.getLogger(__name__)

Entry = tuple[Poly, Word]

ORACLE_FIELD_LIMIT = 2**10


def _message_key(p: CodeParams, f: Poly) -> tuple[int, ...]:
    return f.padded(p.k)


@dataclass(frozen=True)
class CandidateSpace:
    """Affine space of candidate messages plus its agreement guarantee.

    Every codeword agreeing with y on at least `min_agreement` blocks lies
    in `space`. `space` is None when the message system is inconsistent.
    """

    space: AffineSubspace | None
    s: int
    degree: int
    min_agreement: int
    n: int

    @property
    def guaranteed_radius(self) -> Fraction | None:
        if self.min_agreement > self.n:
            return None
        return Fraction(self.n - self.min_agreement, self.n)

    @property
    def dim(self) -> int:
        return -1 if self.space is None else self.space.dim


@dataclass(frozen=True)
class DecodeResult:
    """Codewords within `radius` of a received word, sorted by message."""

    radius: Fraction
    entries: tuple[Entry, ...]
    candidate_space: CandidateSpace | None = None

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def messages(self) -> tuple[Poly, ...]:
        return tuple(f for f, _ in self.entries)

    def message_keys(self, p: CodeParams) -> list[tuple[int, ...]]:
        return [_message_key(p, f) for f in self.messages]


def brute_force_list(
    p: CodeParams, y: Word, rho: Fraction, cap: int = DEFAULT_ENUMERATION_CAP
) -> DecodeResult:
    """Exact list {c : Δ(c, y) <= ρ} by exhaustive enumeration.

    Raises:
        EnumerationTooLarge: If q^k exceeds `cap`.
    """
    entries = tuple((f, c) for f, c in enumerate_codewords(p, cap) if block_distance(c, y) <= rho)
    return DecodeResult(Fraction(rho), entries)


def _default_degree(p: CodeParams, s: int) -> int:
    """Smallest D >= 0 leaving the interpolation system underdetermined."""
    constraints = p.n * (p.m - s + 1)
    d = 0
    while (d + p.k) + s * (d + 1) <= constraints:
        d += 1
    return d


def _windows(p: CodeParams, y: Word, s: int) -> list[tuple[int, tuple[int, ...]]]:
    """(x, (y at x, y at γx, ..., y at γ^(s-1)x)) for every length-s window."""
    out = []
    for block_pts, symbol in zip(p.evaluation_points, y.blocks):
        for j in range(p.m - s + 1):
            out.append((block_pts[j], symbol[j : j + s]))
    return out


def candidate_space(p: CodeParams, y: Word, s: int, degree: int | None = None) -> CandidateSpace:
    """Affine space of messages consistent with a window interpolant of y.

    Args:
        p: Code parameters.
        y: Received word.
        s: Window length, 1 <= s <= m.
        degree: Interpolant degree parameter D (deg A_0 <= D + k - 1,
            deg A_l <= D). Defaults to the smallest D with more unknowns
            than window constraints.

    Returns:
        The candidate space, of dimension at most s - 1.

    Raises:
        ParameterError: If s is outside [1, m] or D is negative.
        InterpolationInfeasible: If only the zero interpolant fits.
    """
    if not 1 <= s <= p.m:
        raise ParameterError(f"Window length s={s} must lie in [1, m={p.m}]")
    D = _default_degree(p, s) if degree is None else degree
    if D < 0:
        raise ParameterError(f"Degree parameter D={D} must be non-negative")
    q = p.q
    a0_len, al_len = D + p.k, D + 1
    ncols = a0_len + s * al_len

    rows = []
    for x, values in _windows(p, y, s):
        powers = [pow(x, e, q) for e in range(a0_len)]
        row = list(powers)
        for v in values:
            row.extend(v * powers[e] % q for e in range(al_len))
        rows.append(row)

    solutions = kernel(p.ctx, rows, ncols)
    if not solutions:
        raise InterpolationInfeasible(
            f"No nonzero interpolant with D={D}, s={s}: {len(rows)} constraints, {ncols} unknowns"
        )
    interpolant = solutions[0]
    a0 = interpolant[:a0_len]
    a_l = [interpolant[a0_len + l * al_len : a0_len + (l + 1) * al_len] for l in range(s)]

    # A_0(X) + Σ_l A_l(X)·f(γ^l X) ≡ 0, linear in the k coefficients of f.
    gamma_pows = [[p.ctx.gamma_power(l * e) for e in range(p.k)] for l in range(s)]
    system = []
    for t in range(a0_len):
        row = []
        for e in range(p.k):
            acc = 0
            if 0 <= t - e < al_len:
                for l in range(s):
                    acc += gamma_pows[l][e] * a_l[l][t - e]
            row.append(acc % q)
        system.append(row)
    rhs = [-c % q for c in a0]
    space = solve_affine(p.ctx, system, rhs, p.k)

    result = CandidateSpace(space, s, D, min_agreement(p, s, D), p.n)
    logger.debug(
        f"candidate_space(s={s}, D={D}): dim {result.dim}, "
        f"guaranteed radius {result.guaranteed_radius}"
    )
    return result


def prune(
    p: CodeParams,
    candidates: CandidateSpace | AffineSubspace | None,
    y: Word,
    rho: Fraction,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> DecodeResult:
    """Filter an affine candidate space to {f : Δ(encode(f), y) <= ρ}.

    Raises:
        EnumerationTooLarge: If q^dim exceeds `cap`.
    """
    source = candidates if isinstance(candidates, CandidateSpace) else None
    space = candidates.space if isinstance(candidates, CandidateSpace) else candidates
    if space is None:
        return DecodeResult(Fraction(rho), (), source)
    entries = []
    for coeffs in space.members(cap):
        f = Poly(p.ctx, coeffs)
        c = encode(p, f)
        if block_distance(c, y) <= rho:
            entries.append((f, c))
    entries.sort(key=lambda e: _message_key(p, e[0]))
    return DecodeResult(Fraction(rho), tuple(entries), source)


def min_agreement(p: CodeParams, s: int, degree: int | None = None) -> int:
    """Agreeing blocks that force a codeword into the candidate space.

    Such a codeword makes R(X) = A_0(X) + Σ_l A_l(X)·f(γ^l X), of degree
    at most D + k - 1, vanish on g·(m - s + 1) window points.
    """
    D = _default_degree(p, s) if degree is None else degree
    return (D + p.k - 1) // (p.m - s + 1) + 1


def guaranteed_radius(p: CodeParams, s: int) -> Fraction | None:
    """Largest block radius within which the decoder finds every codeword."""
    g = min_agreement(p, s)
    return Fraction(p.n - g, p.n) if g <= p.n else None


def best_window(p: CodeParams) -> int:
    """Window length with the largest guaranteed radius, preferring smaller s."""
    best_s, best_g = 1, None
    for s in range(1, p.m + 1):
        g = min_agreement(p, s)
        if best_g is None or g < best_g:
            best_s, best_g = s, g
    return best_s


def list_decode(
    p: CodeParams,
    y: Word,
    rho: Fraction,
    s: int | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> DecodeResult:
    """candidate_space followed by prune."""
    s = best_window(p) if s is None else s
    candidates = candidate_space(p, y, s)
    limit = candidates.guaranteed_radius
    if limit is None or rho > limit:
        logger.warning(
            f"Radius {rho} exceeds the decoder's agreement guarantee {limit}; list may be incomplete"
        )
    return prune(p, candidates, y, rho, cap)


class CodewordIndex:
    """Every codeword of a small code, bucketed by the symbol in each block.

    A codeword within block radius ρ of y disagrees with y on at most
    e = ⌊ρn⌋ blocks, so it shares a symbol with y on one of any e + 1 blocks.
    """

    def __init__(self, p: CodeParams, cap: int = DEFAULT_ENUMERATION_CAP):
        self.params = p
        self.entries: list[Entry] = list(enumerate_codewords(p, cap))
        self._buckets: list[dict[tuple[int, ...], list[int]]] = [{} for _ in range(p.n)]
        for idx, (_, c) in enumerate(self.entries):
            for i, symbol in enumerate(c.blocks):
                self._buckets[i].setdefault(symbol, []).append(idx)
        logger.debug(f"Indexed {len(self.entries)} codewords")

    def within(self, y: Word, rho: Fraction) -> list[tuple[Fraction, int]]:
        """(distance, enumeration index) of every codeword within ρ of y."""
        n = self.params.n
        e = int(rho * n)
        if e >= n:
            candidates = range(len(self.entries))
        else:
            seen: set[int] = set()
            for i in range(e + 1):
                seen.update(self._buckets[i].get(y.blocks[i], ()))
            candidates = sorted(seen)
        out = []
        for idx in candidates:
            differ = sum(1 for a, b in zip(self.entries[idx][1].blocks, y.blocks) if a != b)
            if differ <= e:
                out.append((Fraction(differ, n), idx))
        return out

    def near(self, y: Word, rho: Fraction) -> list[Entry]:
        return [self.entries[idx] for _, idx in self.within(y, rho)]

    def distance(self, y: Word) -> Fraction:
        """Block distance from y to the nearest codeword."""
        n = self.params.n
        for e in range(n + 1):
            hits = self.within(y, Fraction(e, n))
            if hits:
                return min(dist for dist, _ in hits)
        return Fraction(1)


def distance_to_code(p: CodeParams, y: Word, index: CodewordIndex | None = None) -> Fraction:
    """min over codewords c of Δ(y, c), by exhaustive search."""
    return (index or CodewordIndex(p)).distance(y)


ChoiceRule = Literal["nearest", "farthest"]


class NearCodewordFinder(ABC):
    """Answers near-codeword queries for one code."""

    def __init__(self, p: CodeParams):
        self.params = p

    @abstractmethod
    def near(self, y: Word, rho: Fraction) -> list[Entry]:
        """Codewords within block radius ρ of y (backend order)."""
        pass

    @abstractmethod
    def distance(self, y: Word) -> Fraction | None:
        """Distance from y to the code, or None if beyond the backend's reach."""
        pass

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    def choose(self, y: Word, rho: Fraction, rule: ChoiceRule = "nearest") -> Entry | None:
        """One codeword within ρ of y.

        "nearest" takes the minimal distance, "farthest" the maximal admissible
        one; ties go to the lexicographically least message.
        """
        found = self.near(y, rho)
        if not found:
            return None
        k = self.params.k

        def key(entry: Entry) -> tuple:
            dist = block_distance(entry[1], y)
            return (dist if rule == "nearest" else -dist, entry[0].padded(k))

        return min(found, key=key)

    def list_size(self, y: Word, rho: Fraction) -> int:
        return len(self.near(y, rho))


class OracleFinder(NearCodewordFinder):
    """Exhaustive backend over an indexed list of all codewords."""

    def __init__(self, p: CodeParams, cap: int = DEFAULT_ENUMERATION_CAP):
        super().__init__(p)
        self.index = CodewordIndex(p, cap)

    @property
    def name(self) -> str:
        return "oracle"

    def near(self, y: Word, rho: Fraction) -> list[Entry]:
        return self.index.near(y, rho)

    def distance(self, y: Word) -> Fraction:
        return self.index.distance(y)


class LinearAlgebraicFinder(NearCodewordFinder):
    """Candidate-space decoder plus enumeration pruning."""

    def __init__(self, p: CodeParams, s: int | None = None, cap: int = DEFAULT_ENUMERATION_CAP):
        super().__init__(p)
        self.s = best_window(p) if s is None else s
        self.cap = cap
        self.reach = guaranteed_radius(p, self.s)
        self._warned = False
        self._last: tuple[Word, CandidateSpace] | None = None

    @property
    def name(self) -> str:
        return "decoder"

    def _candidates(self, y: Word) -> CandidateSpace:
        # distance, choose and list_size usually query the same word in a row
        if self._last is None or self._last[0] != y:
            self._last = (y, candidate_space(self.params, y, self.s))
        return self._last[1]

    def near(self, y: Word, rho: Fraction) -> list[Entry]:
        if (self.reach is None or rho > self.reach) and not self._warned:
            logger.warning(
                f"Radius {rho} exceeds the decoder's agreement guarantee {self.reach}; "
                f"lists may be incomplete"
            )
            self._warned = True
        return list(prune(self.params, self._candidates(y), y, rho, self.cap).entries)

    def distance(self, y: Word) -> Fraction | None:
        if self.reach is None:
            return None
        found = prune(self.params, self._candidates(y), y, self.reach, self.cap).entries
        if not found:
            return None
        return min(block_distance(c, y) for _, c in found)


FinderMode = Literal["oracle", "decoder", "auto"]


def get_finder(
    p: CodeParams, mode: FinderMode = "auto", cap: int = DEFAULT_ENUMERATION_CAP, s: int | None = None
) -> NearCodewordFinder:
    """Build the near-codeword backend for `mode`.

    "auto" picks the oracle when q <= 2^10 and all q^k codewords fit the cap.

    Raises:
        ParameterError: On an unknown mode.
        EnumerationTooLarge: If the oracle is requested for too large a code.
    """
    if mode == "auto":
        mode = "oracle" if p.q <= ORACLE_FIELD_LIMIT and p.q ** p.k <= cap else "decoder"
    if mode == "oracle":
        if p.q ** p.k > cap:
            raise EnumerationTooLarge(f"Oracle mode needs q^k <= {cap}, got {p.q}^{p.k}")
        return OracleFinder(p, cap)
    if mode == "decoder":
        return LinearAlgebraicFinder(p, s, cap)
    raise ParameterError(f"Unknown decoding mode: {mode}")
