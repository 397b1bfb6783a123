from fractions import Fraction

import pytest

from frs_gaps.decoder import OracleFinder, brute_force_list
from frs_gaps.errors import (
    ClusterTooLarge,
    EnumerationTooLarge,
    NotACodeword,
    ParameterError,
    PreconditionFailed,
    StitchFailed,
)
from frs_gaps.field import FieldContext
from frs_gaps.frs import CodeParams, Word, block_distance, encode_message
from frs_gaps.harness import plant_corrupted_line, random_word
from frs_gaps.pinning import sample_pin
from frs_gaps.poly import Poly
from frs_gaps.rng import SeededRNG
from frs_gaps.stitching import (
    CodeLine,
    Line,
    PerturbedLine,
    StitchConfig,
    ambient_cluster,
    correlated_agreement,
    interpolation_bound_check,
    joint_distance,
    line_collisions,
    near_params,
    peel,
    polynomial_line_at,
    product_span_cluster,
    stitch,
)

CTX = FieldContext(17, 3)
TINY = CodeParams.standard(CTX, 2, 4, 2)
TINY_CONFIG = StitchConfig(eps=Fraction(3, 4), r=3, a=2, t1=2, t2=4)
FINDER = OracleFinder(TINY)


def _planted(seed, delta=Fraction(1, 4)):
    rng = SeededRNG(seed)
    c0 = encode_message(TINY, rng.vector(17, 2))
    c1 = encode_message(TINY, rng.vector(17, 2))
    line = plant_corrupted_line(TINY, c0, c1, delta, "joint-block", rng)
    return c0, c1, line


def _entry(coeffs):
    return Poly(CTX, coeffs), encode_message(TINY, coeffs)


def _two_lines():
    """A line agreeing with code-line A on blocks 0, 1 and with code-line B on blocks 2, 3.

    A(α) has message (α, 0) and B(α) has message (2α, 1); they differ in every
    block, and a codeword is fixed by any one block, so {A(α), B(α)} is the
    whole list within two blocks of u(α).
    """
    a = CodeLine.from_messages(TINY, Poly(CTX, (0, 0)), Poly(CTX, (1, 0)))
    b = CodeLine.from_messages(TINY, Poly(CTX, (0, 1)), Poly(CTX, (2, 0)))
    u0 = Word(a.c0.blocks[:2] + b.c0.blocks[2:])
    u1 = Word(a.c1.blocks[:2] + b.c1.blocks[2:])
    return a, b, Line(u0, u1)


def _far_line(delta=Fraction(1, 4)):
    """A random line every point of which is farther than δ from the code."""
    for seed in range(50):
        rng = SeededRNG(f"far-{seed}")
        line = Line(random_word(TINY, rng), random_word(TINY, rng))
        if all(FINDER.distance(line.at(TINY, a)) > delta for a in range(17)):
            return line
    raise AssertionError("no far line among 50 seeds")


def test_stitch_config_validation():
    TINY_CONFIG.validate()
    assert TINY_CONFIG.retry_budget == 32 * 9
    assert StitchConfig(Fraction(3, 4), 3, 2, 2, 4, retries=5).retry_budget == 5
    with pytest.raises(ParameterError):
        StitchConfig(Fraction(1, 2), 3, 2, 2, 4).validate()
    with pytest.raises(ParameterError):
        StitchConfig(Fraction(3, 4), 3, 1, 2, 4).validate()
    with pytest.raises(ParameterError):
        StitchConfig(Fraction(3, 4), 3, 2, 5, 4).validate()


def test_code_line_through_two_points():
    g0, g1 = Poly(CTX, (1, 2)), Poly(CTX, (3, 4))
    line = CodeLine.from_messages(TINY, g0, g1)
    f = {a: (g0 + g1.scale(a), line.at(TINY, a)) for a in (2, 7)}
    through = CodeLine.through(TINY, (2, f[2]), (7, f[7]))
    assert through.key(2) == line.key(2)
    assert through.provenance == (2, 7)


def test_code_line_from_words_checks_membership():
    c = encode_message(TINY, (1, 1))
    with pytest.raises(NotACodeword):
        CodeLine.from_words(TINY, c, c.with_block(0, (0, 0)))
    assert CodeLine.from_words(TINY, c, c).g0 == Poly(CTX, (1, 1))


def test_perturbed_line_overrides():
    c = encode_message(TINY, (1, 1))
    z = Word.zero(4, 2)
    line = PerturbedLine(c, c, {3: z})
    assert line.at(TINY, 3) == z
    assert line.at(TINY, 20) == z
    assert line.at(TINY, 1) == Line(c, c).at(TINY, 1)


def test_polynomial_line_at():
    words = [encode_message(TINY, (1, 0)), encode_message(TINY, (0, 1)), encode_message(TINY, (2, 2))]
    alpha = 5
    expected = encode_message(TINY, ((1 + 2 * 25) % 17, (5 + 2 * 25) % 17))
    assert polynomial_line_at(TINY, words, alpha) == expected


def test_interpolation_bound():
    """Exhaustive-α maximum distance stays within δ/(1 - ℓ/t)."""
    root = SeededRNG("interpolation")
    for trial in range(1000):
        rng = root.derive(trial)
        ell = rng.randint(1, 2)
        c_coeffs = [encode_message(TINY, rng.vector(17, 2)) for _ in range(ell + 1)]
        bad = rng.sample(range(4), rng.randint(0, 2))
        u_coeffs = []
        for c in c_coeffs:
            for i in bad:
                c = c.with_block(i, rng.vector(17, 2))
            u_coeffs.append(c)
        t = rng.randint(ell + 1, 17)
        params = rng.sample(range(17), t)
        delta = max(
            block_distance(polynomial_line_at(TINY, u_coeffs, a), polynomial_line_at(TINY, c_coeffs, a))
            for a in params
        )
        worst = interpolation_bound_check(TINY, u_coeffs, c_coeffs, params, delta)
        assert worst <= delta * t / (t - ell)
        assert worst <= Fraction(len(bad), 4)


def test_interpolation_preconditions():
    c = encode_message(TINY, (1, 1))
    u = c.with_block(0, (0, 0))
    with pytest.raises(PreconditionFailed):
        interpolation_bound_check(TINY, [u, c], [c, c], [3], Fraction(1))
    with pytest.raises(PreconditionFailed):
        interpolation_bound_check(TINY, [u, c], [c, c], [1, 2], Fraction(0))
    with pytest.raises(EnumerationTooLarge):
        interpolation_bound_check(TINY, [u, c], [c, c], [1, 2], Fraction(1, 4), cap=10)


def test_stitch_recovers_planted_line():
    c0, c1, line = _planted("stitch")
    chosen = near_params(TINY, line, Fraction(1, 4), FINDER)
    assert len(chosen) == 17
    outcome = stitch(TINY, line, chosen, TINY_CONFIG, SeededRNG(1))
    assert (outcome.code_line.c0, outcome.code_line.c1) == (c0, c1)
    assert outcome.matched == frozenset(range(17))
    assert outcome.anchor == 0
    assert outcome.cluster_dim <= 1


def test_stitch_preconditions():
    c0, c1, line = _planted("pre")
    chosen = near_params(TINY, line, Fraction(1, 4), FINDER)
    with pytest.raises(PreconditionFailed):
        stitch(TINY, line, {0: chosen[0]}, TINY_CONFIG, SeededRNG(1))
    with pytest.raises(PreconditionFailed):
        stitch(TINY, line, chosen, StitchConfig(Fraction(1, 2), 3, 2, 2, 4), SeededRNG(1))


def test_stitch_cluster_too_large():
    # unit vectors: an affine span of dimension 4 > r = 3
    words = {0: Word.zero(4, 2)}
    for j in range(1, 5):
        flat = [0] * 8
        flat[j] = 1
        words[j] = Word.from_flat(flat, 2)
    chosen = {a: (Poly.zero(CTX), w) for a, w in words.items()}
    line = Line(Word.zero(4, 2), Word.zero(4, 2))
    with pytest.raises(ClusterTooLarge):
        stitch(TINY, line, chosen, TINY_CONFIG, SeededRNG(1))


def test_stitch_gives_up_after_budget():
    chosen = {0: _entry((0, 0)), 1: _entry((1, 0))}
    far = Word(((2, 2),) * 4)
    line = Line(far, Word.zero(4, 2))
    config = StitchConfig(Fraction(3, 4), 3, 2, 2, 4, retries=5)
    with pytest.raises(StitchFailed):
        stitch(TINY, line, chosen, config, SeededRNG(1))


def test_line_collisions():
    a = CodeLine.from_messages(TINY, Poly(CTX, (1, 2)), Poly(CTX, (3, 4)))
    beta = 6
    # b(β) = a(β) with a different slope
    g1 = Poly(CTX, (5, 0))
    g0 = a.g0 + (a.g1 - g1).scale(beta)
    b = CodeLine.from_messages(TINY, g0, g1)
    parallel = CodeLine.from_messages(TINY, Poly(CTX, (9, 9)), a.g1)
    hits = {(i, j): betas for i, j, betas in line_collisions(TINY, [a, b, parallel])}
    assert hits[(0, 1)] == [beta]
    assert hits[(0, 2)] == []


def test_product_span_cluster_contains_planted_endpoints():
    c0, c1, line = _planted("cluster")
    cluster = product_span_cluster(TINY, line, Fraction(1, 4))
    assert cluster.contains(c0.flat())
    assert cluster.contains(c1.flat())
    assert cluster.dim <= 2


def test_correlated_agreement_requires_ordered_thresholds():
    _, _, line = _planted("order")
    with pytest.raises(ParameterError):
        correlated_agreement(
            TINY, line, Fraction(1, 4), StitchConfig(Fraction(3, 4), 3, 2, 4, 2), FINDER, SeededRNG(0)
        )


def test_correlated_agreement_completeness():
    """Planted joint-corruption lines are recovered exactly, and every α stays close."""
    delta = Fraction(1, 4)
    relaxed = delta / (1 - Fraction(1, TINY_CONFIG.t2))
    for trial in range(200):
        c0, c1, line = _planted(f"complete-{trial}", delta)
        rng = SeededRNG(trial)
        peeled = peel(TINY, line, near_params(TINY, line, delta, FINDER), delta, TINY_CONFIG, rng)
        agreement = correlated_agreement(TINY, line, delta, TINY_CONFIG, FINDER, rng, peeled=peeled)
        assert agreement is not None
        assert (agreement.code_line.c0, agreement.code_line.c1) == (c0, c1)
        assert len(agreement.agreement) >= (1 - relaxed) * TINY.n
        assert joint_distance(line, agreement.code_line) <= relaxed
        assert all(FINDER.distance(line.at(TINY, a)) <= relaxed for a in range(17))
        assert all(stage.certificate is not None for stage in peeled)


def test_ambient_cluster_dimensions():
    a, _, _ = _two_lines()
    assert ambient_cluster(TINY, {5: a.at(TINY, 5)}).dim == 0
    assert ambient_cluster(TINY, {x: a.at(TINY, x) for x in range(17)}).dim <= 1
    assert ambient_cluster(TINY, {2: _entry((2, 0)), 9: _entry((9, 0))}).dim == 1
    with pytest.raises(PreconditionFailed):
        ambient_cluster(TINY, {})


@pytest.mark.parametrize("delta", [Fraction(0), Fraction(1, 16), Fraction(1, 8), Fraction(3, 16)])
def test_near_params_below_one_block_only_finds_codewords(delta):
    far = _far_line()
    assert near_params(TINY, far, delta, FINDER) == {}
    # u(α) = c + α·w is a codeword only at α = 0
    c = encode_message(TINY, (4, 7))
    line = Line(c, far.u0)
    chosen = near_params(TINY, line, delta, FINDER)
    assert list(chosen) == [0]
    assert chosen[0][1] == c


def test_correlated_agreement_absent_on_far_line():
    delta = Fraction(1, 4)
    far = _far_line(delta)
    assert near_params(TINY, far, delta, FINDER) == {}
    assert correlated_agreement(TINY, far, delta, TINY_CONFIG, FINDER, SeededRNG(0)) is None


def test_peel_two_close_code_lines():
    """Both code-lines are recovered, no more than the list size, colliding nowhere."""
    a, b, line = _two_lines()
    delta = Fraction(1, 2)
    config = StitchConfig(eps=Fraction(3, 4), r=3, a=2, t1=4, t2=4)
    chosen = near_params(TINY, line, delta, FINDER)
    assert len(chosen) == 17
    # ties go to the least message: (α, 0) for α <= 8, (2α - 17, 1) above
    assert {x for x, (_, c) in chosen.items() if c == a.at(TINY, x)} == set(range(9))

    peeled = peel(TINY, line, chosen, delta, config, SeededRNG("two-lines"))
    relaxed = delta * config.t1 / (config.t1 - 1)
    list_size = max(len(brute_force_list(TINY, line.at(TINY, x), relaxed)) for x in range(17))
    assert list_size == 2
    assert len(peeled) <= list_size
    assert {stage.code_line.key(2) for stage in peeled} == {a.key(2), b.key(2)}
    assert sorted(x for stage in peeled for x in stage.matched) == list(range(17))
    assert all(len(stage.matched) >= config.t1 for stage in peeled)
    assert all(stage.certificate == Fraction(1, 2) for stage in peeled)
    assert all(len(betas) <= 1 for _, _, betas in line_collisions(TINY, [s.code_line for s in peeled]))


def _alternating_choices(line, delta):
    """Farthest admissible codeword first, rotating through ties by parameter."""
    chosen = {}
    for x in range(17):
        y = line.at(TINY, x)
        entries = sorted(
            brute_force_list(TINY, y, delta).entries,
            key=lambda e: (-block_distance(e[1], y), e[0].padded(2)),
        )
        chosen[x] = entries[x % len(entries)]
    return chosen


def test_stitch_pinned_set_under_adversarial_choices():
    a, b, line = _two_lines()
    chosen = _alternating_choices(line, Fraction(1, 2))
    # ties sort A first up to α = 8 and B first above, so the second pick flips there
    assert {x for x, (_, c) in chosen.items() if c == b.at(TINY, x)} == {1, 3, 5, 7, 10, 12, 14, 16}
    bound = Fraction(len(chosen), TINY_CONFIG.r**2)

    sizes = []
    for s in range(30):
        outcome = stitch(TINY, line, chosen, TINY_CONFIG, SeededRNG(f"adversarial-{s}"))
        assert outcome.pinned <= outcome.matched
        assert outcome.code_line.key(2) in (a.key(2), b.key(2))
        sizes.append(len(outcome.pinned))
    assert Fraction(sum(sizes), len(sizes)) >= bound

    directions = ambient_cluster(TINY, chosen).directions
    draws = [sample_pin(directions, 2, TINY_CONFIG.eps, SeededRNG(f"draw-{s}")) for s in range(200)]
    pinned = [sum(1 for x in chosen if pins.agrees(chosen[x][1], line.at(TINY, x))) for pins in draws]
    assert Fraction(sum(pinned), len(pinned)) >= bound
