"""Line stitching, peeling and correlated-agreement extraction.

A received line u(α) = u0 + α·u1 is compared with the code one parameter
at a time. For every close α a nearby codeword f(α) is chosen (possibly
adversarially); stitching then finds a code-line c(α) = c0 + α·c1 that
reproduces many of those choices, and peeling repeats this on the
parameters left over.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .decoder import ChoiceRule, Entry, NearCodewordFinder
from .errors import (
    ClusterTooLarge,
    EnumerationTooLarge,
    InvariantViolation,
    NotACodeword,
    ParameterError,
    PreconditionFailed,
    ShapeError,
    StitchFailed,
)
from .frs import (
    CodeParams,
    Word,
    block_distance,
    encode,
    enumerate_codewords,
    message_of,
    word_axpy,
)
from .linalg import (
    DEFAULT_ENUMERATION_CAP,
    AffineSubspace,
    LinearSubspace,
    affine_span,
    span,
    vec_sub,
)
from .pinning import PinSet, sample_pin
from .poly import Poly
from .rng import SeededRNG

logger = logging.getLogger(__name__)

DEFAULT_SWEEP_CAP = 2**16


@dataclass(frozen=True)
class Line:
    """u(α) := u0 + α·u1."""

    u0: Word
    u1: Word

    def __post_init__(self) -> None:
        if (self.u0.n, self.u0.m) != (self.u1.n, self.u1.m):
            raise ShapeError("Line endpoints must share (n, m)")

    def at(self, p: CodeParams, alpha: int) -> Word:
        return word_axpy(p.ctx, self.u0, alpha % p.q, self.u1)


@dataclass(frozen=True, eq=False)
class PerturbedLine(Line):
    """A line whose value at some parameters is replaced outright."""

    overrides: Mapping[int, Word] = field(default_factory=dict)

    def at(self, p: CodeParams, alpha: int) -> Word:
        alpha %= p.q
        if alpha in self.overrides:
            return self.overrides[alpha]
        return super().at(p, alpha)


@dataclass(frozen=True)
class CodeLine:
    """c(α) := c0 + α·c1 with c0, c1 codewords of messages g0, g1."""

    c0: Word
    c1: Word
    g0: Poly
    g1: Poly
    provenance: tuple[int, int] | None = None

    @classmethod
    def from_messages(
        cls, p: CodeParams, g0: Poly, g1: Poly, provenance: tuple[int, int] | None = None
    ) -> "CodeLine":
        return cls(encode(p, g0), encode(p, g1), g0, g1, provenance)

    @classmethod
    def from_words(cls, p: CodeParams, c0: Word, c1: Word) -> "CodeLine":
        """Wrap two words, checking both are codewords.

        Raises:
            NotACodeword: If either word is outside the code.
        """
        g0, g1 = message_of(p, c0), message_of(p, c1)
        if g0 is None or g1 is None:
            raise NotACodeword("Code-line endpoints must be codewords")
        return cls(c0, c1, g0, g1)

    @classmethod
    def through(cls, p: CodeParams, first: tuple[int, Entry], second: tuple[int, Entry]) -> "CodeLine":
        """The code-line passing through f(α1) at α1 and f(α2) at α2."""
        (a1, (f1, _)), (a2, (f2, _)) = first, second
        step = p.ctx.inv(a2 - a1)
        g1 = (f2 - f1).scale(step)
        g0 = f1 - g1.scale(a1)
        return cls.from_messages(p, g0, g1, (a1, a2))

    def at(self, p: CodeParams, alpha: int) -> Word:
        return word_axpy(p.ctx, self.c0, alpha % p.q, self.c1)

    def as_line(self) -> Line:
        return Line(self.c0, self.c1)

    def key(self, k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (self.g0.padded(k), self.g1.padded(k))


@dataclass(frozen=True)
class StitchConfig:
    """Parameters of the stitching and peeling procedures."""

    eps: Fraction
    r: int
    a: int
    t1: int
    t2: int
    retries: int | None = None
    sweep_cap: int = DEFAULT_SWEEP_CAP

    @property
    def retry_budget(self) -> int:
        return 32 * self.r**2 if self.retries is None else self.retries

    def validate(self) -> None:
        if self.r < 1:
            raise ParameterError(f"r must be positive, got {self.r}")
        if not Fraction(2, self.r) < self.eps < 1:
            raise ParameterError(f"Need 2/r < ε < 1 (r={self.r}, ε={self.eps})")
        if self.a < 2:
            raise ParameterError(f"a must be at least 2, got {self.a}")
        if not 2 <= self.t1 <= self.t2:
            raise ParameterError(f"Need 2 <= t1 <= t2 (t1={self.t1}, t2={self.t2})")


@dataclass(frozen=True)
class StitchOutcome:
    """The stitched line, the parameters it reproduces and the pinned set B it was fit on."""

    code_line: CodeLine
    matched: frozenset[int]
    pinned: frozenset[int]
    pin_set: PinSet
    attempts: int
    anchor: int
    cluster_dim: int


@dataclass(frozen=True)
class PeeledLine:
    """One peeling stage: the stitched line, its matched set and closeness certificate."""

    outcome: StitchOutcome
    certificate: Fraction | None

    @property
    def code_line(self) -> CodeLine:
        return self.outcome.code_line

    @property
    def matched(self) -> frozenset[int]:
        return self.outcome.matched


@dataclass(frozen=True)
class Agreement:
    """A code-line jointly close to the received pair, with its agreement blocks."""

    code_line: CodeLine
    agreement: frozenset[int]
    matched: frozenset[int]


def polynomial_line_at(p: CodeParams, coeffs: Sequence[Word], alpha: int) -> Word:
    """Σ_j α^j·coeffs[j], evaluated block-wise by Horner's rule."""
    acc = coeffs[-1]
    for w in reversed(coeffs[:-1]):
        acc = word_axpy(p.ctx, w, alpha % p.q, acc)
    return acc


def interpolation_bound_check(
    p: CodeParams,
    u_coeffs: Sequence[Word],
    c_coeffs: Sequence[Word],
    params: Iterable[int],
    delta: Fraction,
    cap: int = DEFAULT_SWEEP_CAP,
) -> Fraction:
    """Max over all α of Δ(u(α), c(α)), checked against δ/(1 - ℓ/t).

    Args:
        p: Code parameters.
        u_coeffs: u_0..u_ℓ of the received degree-ℓ curve.
        c_coeffs: c_0..c_ℓ of the comparison curve.
        params: The set A of t > ℓ parameters where closeness is known.
        delta: Closeness radius on A.
        cap: Largest q swept exhaustively.

    Returns:
        The exhaustive maximum distance.

    Raises:
        PreconditionFailed: If t <= ℓ or some α in A is farther than δ.
        EnumerationTooLarge: If q exceeds `cap`.
        InvariantViolation: If the maximum exceeds δ/(1 - ℓ/t).
    """
    if len(u_coeffs) != len(c_coeffs) or not u_coeffs:
        raise ShapeError("u and c need the same, nonzero number of coefficients")
    ell = len(u_coeffs) - 1
    params = {a % p.q for a in params}
    t = len(params)
    if t <= ell:
        raise PreconditionFailed(f"Need |A| = {t} > ℓ = {ell}")
    for alpha in params:
        dist = block_distance(polynomial_line_at(p, u_coeffs, alpha), polynomial_line_at(p, c_coeffs, alpha))
        if dist > delta:
            raise PreconditionFailed(f"Δ(u({alpha}), c({alpha})) = {dist} exceeds δ = {delta}")
    if p.q > cap:
        raise EnumerationTooLarge(f"q={p.q} exceeds the parameter sweep cap {cap}")

    worst = max(
        block_distance(polynomial_line_at(p, u_coeffs, a), polynomial_line_at(p, c_coeffs, a))
        for a in range(p.q)
    )
    bound = Fraction(delta) * t / (t - ell)
    if worst > bound:
        raise InvariantViolation(f"Interpolation bound broken: {worst} > {bound}")
    return worst


def near_params(
    p: CodeParams,
    line: Line,
    delta: Fraction,
    finder: NearCodewordFinder,
    rule: ChoiceRule = "nearest",
    alphas: Iterable[int] | None = None,
) -> dict[int, Entry]:
    """A0 = {α : Δ(u(α), C) <= δ'} with one chosen codeword per α."""
    chosen = {}
    for alpha in range(p.q) if alphas is None else alphas:
        pick = finder.choose(line.at(p, alpha), delta, rule)
        if pick is not None:
            chosen[alpha % p.q] = pick
    return chosen


def ambient_cluster(p: CodeParams, chosen: Mapping[int, Entry | Word]) -> AffineSubspace:
    """Affine span of the chosen codewords, anchored at the least parameter."""
    if not chosen:
        raise PreconditionFailed("ambient_cluster needs at least one chosen codeword")
    words = [v[1] if isinstance(v, tuple) else v for _, v in sorted(chosen.items())]
    return affine_span(p.ctx, [w.flat() for w in words], p.m * p.n)


def product_span_cluster(
    p: CodeParams, line: Line, delta: Fraction, cap: int = DEFAULT_ENUMERATION_CAP
) -> LinearSubspace:
    """Span of the codewords δ-close to L = L_1 x ... x L_n, L_i = span(u0_i, u1_i).

    A codeword's distance to L counts the blocks i with c_i outside L_i.
    """
    block_spans = [
        span(p.ctx, (a, b), p.m) for a, b in zip(line.u0.blocks, line.u1.blocks)
    ]
    limit = Fraction(delta) * p.n
    members = []
    for _, c in enumerate_codewords(p, cap):
        outside = sum(1 for sym, l_i in zip(c.blocks, block_spans) if not l_i.contains(sym))
        if outside <= limit:
            members.append(c.flat())
    return span(p.ctx, members, p.m * p.n)


def stitch(
    p: CodeParams,
    line: Line,
    chosen: Mapping[int, Entry],
    config: StitchConfig,
    rng: SeededRNG,
    min_matched: int = 2,
) -> StitchOutcome:
    """Find a code-line reproducing many of the chosen codewords.

    H is the affine span of the chosen codewords, V = H - h0 with h0 the
    choice at the least parameter. Each attempt pins V with S ~ Pin_ε(V) and
    keeps B = {α : f(α)|_S = u(α)|_S}; two members of B fix the code-line.

    Raises:
        PreconditionFailed: If fewer than two parameters are chosen or ε <= 2/r.
        ClusterTooLarge: If dim H > r.
        StitchFailed: If the retry budget runs out.
    """
    if len(chosen) < 2:
        raise PreconditionFailed(f"stitch needs at least two chosen parameters, got {len(chosen)}")
    if not config.eps > Fraction(2, config.r):
        raise PreconditionFailed(f"Need ε > 2/r (ε={config.eps}, r={config.r})")

    order = sorted(chosen)
    anchor = order[0]
    cluster = ambient_cluster(p, chosen)
    if cluster.dim > config.r:
        raise ClusterTooLarge(f"Ambient cluster has dim {cluster.dim} > r={config.r}")
    directions = cluster.directions
    need = max(2, min_matched)

    for attempt in range(1, config.retry_budget + 1):
        pins = sample_pin(directions, p.m, config.eps, rng.derive("pin", attempt))
        b = [a for a in order if pins.agrees(chosen[a][1], line.at(p, a))]
        if len(b) < 2:
            continue
        code_line = CodeLine.through(p, (b[0], chosen[b[0]]), (b[1], chosen[b[1]]))
        if any(code_line.at(p, a) != chosen[a][1] for a in b):
            raise InvariantViolation(f"Chosen codewords on pinned set {b} are not collinear")
        matched = frozenset(a for a in order if code_line.at(p, a) == chosen[a][1])
        if len(matched) < need:
            continue
        logger.debug(
            f"Stitched line through {code_line.provenance} after {attempt} attempts: "
            f"|B|={len(b)}, matched {len(matched)}, S={pins.coords}"
        )
        return StitchOutcome(code_line, matched, frozenset(b), pins, attempt, anchor, cluster.dim)

    raise StitchFailed(
        f"No code-line matched {need} parameters after {config.retry_budget} pin samples"
    )


def peel(
    p: CodeParams,
    line: Line,
    chosen: Mapping[int, Entry],
    delta: Fraction,
    config: StitchConfig,
    rng: SeededRNG,
) -> list[PeeledLine]:
    """Stitch repeatedly on the unmatched residual while at least `a` remain.

    Each stage must match at least t1 parameters. Its line gets a global
    certificate max_α Δ(u(α), c(α)) <= δ'/(1 - 1/t1) when q is sweepable.
    """
    residual = set(chosen)
    peeled: list[PeeledLine] = []
    stage = 0
    while len(residual) >= config.a:
        outcome = stitch(
            p,
            line,
            {a: chosen[a] for a in residual},
            config,
            rng.derive("stage", stage),
            min_matched=config.t1,
        )
        certificate = None
        if p.q <= config.sweep_cap:
            certificate = interpolation_bound_check(
                p,
                [line.u0, line.u1],
                [outcome.code_line.c0, outcome.code_line.c1],
                outcome.matched,
                delta,
                config.sweep_cap,
            )
        peeled.append(PeeledLine(outcome, certificate))
        residual -= outcome.matched
        stage += 1
        logger.debug(f"Peel stage {stage}: matched {len(outcome.matched)}, {len(residual)} left")

    for i, j, betas in line_collisions(p, [pl.code_line for pl in peeled]):
        if len(betas) > 1:
            raise InvariantViolation(f"Peeled lines {i} and {j} collide at {betas}")
    return peeled


def line_collisions(
    p: CodeParams, lines: Sequence[CodeLine]
) -> list[tuple[int, int, list[int]]]:
    """For each pair of distinct lines, the parameters β where they meet."""
    out = []
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            a, b = lines[i], lines[j]
            if a.c0 == b.c0 and a.c1 == b.c1:
                continue
            d0 = vec_sub(p.ctx, b.c0.flat(), a.c0.flat())
            d1 = vec_sub(p.ctx, a.c1.flat(), b.c1.flat())
            # c0 + β·c1 = c0' + β·c1'  <=>  β·(c1 - c1') = c0' - c0
            if not any(d1):
                out.append((i, j, []))
                continue
            pivot = next(x for x, v in enumerate(d1) if v)
            beta = d0[pivot] * p.ctx.inv(d1[pivot]) % p.q
            hit = all((beta * v - w) % p.q == 0 for v, w in zip(d1, d0))
            out.append((i, j, [beta] if hit else []))
    return out


def correlated_agreement(
    p: CodeParams,
    line: Line,
    delta: Fraction,
    config: StitchConfig,
    finder: NearCodewordFinder,
    rng: SeededRNG,
    rule: ChoiceRule = "nearest",
    chosen: Mapping[int, Entry] | None = None,
    peeled: Sequence[PeeledLine] | None = None,
) -> Agreement | None:
    """A code-line with at least t2 matched parameters, or None.

    The returned agreement set S = {i : (u0_i, u1_i) = (c0_i, c1_i)} obeys
    |S| >= (1 - δ'·t2/(t2 - 1))·n.

    Raises:
        ParameterError: Unless 2 <= t1 <= t2.
        InvariantViolation: If the agreement set is smaller than the bound.
    """
    if not 2 <= config.t1 <= config.t2:
        raise ParameterError(f"Need 2 <= t1 <= t2 (t1={config.t1}, t2={config.t2})")
    if peeled is None:
        if chosen is None:
            chosen = near_params(p, line, delta, finder, rule)
        peeled = peel(p, line, chosen, delta, config, rng)

    for stage in peeled:
        if len(stage.matched) < config.t2:
            continue
        cl = stage.code_line
        agreement = frozenset(
            i
            for i in range(p.n)
            if line.u0.blocks[i] == cl.c0.blocks[i] and line.u1.blocks[i] == cl.c1.blocks[i]
        )
        required = (1 - Fraction(delta) * config.t2 / (config.t2 - 1)) * p.n
        if len(agreement) < required:
            raise InvariantViolation(
                f"Agreement set of size {len(agreement)} is below {required}"
            )
        return Agreement(cl, agreement, stage.matched)
    return None


def joint_distance(line: Line, code_line: CodeLine) -> Fraction:
    """Block distance between (u0, u1) and (c0, c1) over the pair alphabet."""
    n = line.u0.n
    differ = sum(
        1
        for i in range(n)
        if line.u0.blocks[i] != code_line.c0.blocks[i] or line.u1.blocks[i] != code_line.c1.blocks[i]
    )
    return Fraction(differ, n)

