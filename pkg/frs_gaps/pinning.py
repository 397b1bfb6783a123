"""Pinning sets: weighted coordinate sampling that makes restriction injective.

Starting from K = H, each step draws a block index i with weight
dim(K_i) + ε (or 0 when K_i = K) and descends to K_i, until K = {0}. The
chosen indices S satisfy |S| <= dim H and H_S = {0}.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import DegenerateSubspace, InvariantViolation, ParameterError, PreconditionFailed
from .frs import Word, block_distance
from .linalg import LinearSubspace, coordinate_kernel, restriction_kernel
from .rng import SeededRNG

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PinStep:
    index: int
    dim_before: int
    dim_after: int


@dataclass(frozen=True)
class PinSet:
    """Chosen block indices in draw order, with the per-step dimension trace."""

    coords: tuple[int, ...]
    trace: tuple[PinStep, ...] = ()

    def __len__(self) -> int:
        return len(self.coords)

    def agrees(self, c: Word, y: Word) -> bool:
        return all(c.blocks[i] == y.blocks[i] for i in self.coords)


@lru_cache(maxsize=4096)
def _step_table(k: LinearSubspace, m: int) -> tuple[LinearSubspace | None, ...]:
    """Per block i, K_i, or None when K_i = K (the block cannot be chosen)."""
    n = k.ambient_dim // m
    out = []
    for i in range(n):
        k_i = coordinate_kernel(k, i, m)
        out.append(None if k_i == k else k_i)
    return tuple(out)


def _check_eps(eps: Fraction) -> Fraction:
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ParameterError(f"ε must lie in (0, 1), got {eps}")
    return eps


def _scaled_weights(table: Sequence[LinearSubspace | None], eps: Fraction) -> list[int]:
    """Weights dim(K_i) + ε scaled by the denominator of ε, so all are integers."""
    num, den = eps.numerator, eps.denominator
    return [0 if k_i is None else k_i.dim * den + num for k_i in table]


def pin_lower_bound(d: int, eps: Fraction) -> Fraction:
    """ε / (d + ε)."""
    eps = Fraction(eps)
    return eps / (d + eps)


def sample_pin(h: LinearSubspace, m: int, eps: Fraction, rng: SeededRNG) -> PinSet:
    """Draw S ~ Pin_ε(H).

    Args:
        h: Subspace of F_q^(m*n).
        m: Folding parameter (scalar coordinates per block).
        eps: Weight offset in (0, 1).
        rng: Random stream.

    Returns:
        The pin set; S = () when H = {0}.

    Raises:
        DegenerateSubspace: If every coordinate kernel equals a nonzero K.
        InvariantViolation: If |S| > dim H or H_S != {0}.
    """
    eps = _check_eps(eps)
    k = h
    coords: list[int] = []
    trace: list[PinStep] = []
    while not k.is_zero():
        table = _step_table(k, m)
        weights = _scaled_weights(table, eps)
        total = sum(weights)
        if total == 0:
            raise DegenerateSubspace(f"No block reduces a subspace of dim {k.dim}")
        draw = rng.randrange(total)
        for i, w in enumerate(weights):
            if draw < w:
                break
            draw -= w
        nxt = table[i]
        trace.append(PinStep(i, k.dim, nxt.dim))
        coords.append(i)
        k = nxt

    if len(coords) > h.dim or not restriction_kernel(h, coords, m).is_zero():
        raise InvariantViolation(f"Pin set {coords} is not injective on a dim-{h.dim} subspace")
    return PinSet(tuple(coords), tuple(trace))


def _check_member(h: LinearSubspace, c: Word, y: Word, threshold: Fraction | None) -> None:
    if not h.contains(c.flat()):
        raise PreconditionFailed("c is not a member of H")
    if threshold is not None and block_distance(c, y) > threshold:
        raise PreconditionFailed(
            f"Δ(c, y) = {block_distance(c, y)} exceeds the threshold {threshold}"
        )


def pin_success_estimate(
    h: LinearSubspace,
    m: int,
    c: Word,
    y: Word,
    eps: Fraction,
    trials: int,
    rng: SeededRNG,
    threshold: Fraction | None = None,
) -> Fraction:
    """Empirical frequency of c|_S = y|_S over `trials` draws of S.

    `threshold` is the caller's 1 - τ - ε; when given, Δ(c, y) must not
    exceed it. Draw t uses rng.derive("pin", t).
    """
    _check_member(h, c, y, threshold)
    if trials < 1:
        raise ParameterError(f"trials must be positive, got {trials}")
    hits = sum(
        1 for t in range(trials) if sample_pin(h, m, eps, rng.derive("pin", t)).agrees(c, y)
    )
    return Fraction(hits, trials)


def pin_success_exact(
    h: LinearSubspace, m: int, c: Word, y: Word, eps: Fraction
) -> Fraction:
    """Exact Pr[c|_S = y|_S] by recursion over the sampling chain."""
    eps = _check_eps(eps)
    _check_member(h, c, y, None)
    agree = [a == b for a, b in zip(c.blocks, y.blocks)]
    memo: dict[LinearSubspace, Fraction] = {}

    def prob(k: LinearSubspace) -> Fraction:
        if k.is_zero():
            return Fraction(1)
        if k in memo:
            return memo[k]
        table = _step_table(k, m)
        weights = _scaled_weights(table, eps)
        total = sum(weights)
        if total == 0:
            raise DegenerateSubspace(f"No block reduces a subspace of dim {k.dim}")
        acc = Fraction(0)
        for i, w in enumerate(weights):
            if w and agree[i]:
                acc += Fraction(w, total) * prob(table[i])
        memo[k] = acc
        return acc

    return prob(h)


def reachable_tau(h: LinearSubspace, m: int) -> Fraction:
    """Largest (1/(n·dim K)) Σ_i dim(K_i) over nonzero K the sampler can visit."""
    n = h.ambient_dim // m
    best = Fraction(0)
    seen: set[LinearSubspace] = set()
    stack = [h]
    while stack:
        k = stack.pop()
        if k.is_zero() or k in seen:
            continue
        seen.add(k)
        table = _step_table(k, m)
        total = sum(k.dim if k_i is None else k_i.dim for k_i in table)
        best = max(best, Fraction(total, n * k.dim))
        stack.extend(k_i for k_i in table if k_i is not None)
    logger.debug(f"reachable_tau over {len(seen)} subspaces = {best}")
    return best
