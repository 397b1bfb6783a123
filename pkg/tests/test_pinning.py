import math
from fractions import Fraction

import pytest

from frs_gaps.config import resolve_settings
from frs_gaps.errors import ParameterError, PreconditionFailed
from frs_gaps.field import FieldContext
from frs_gaps.frs import CodeParams, Word, code_subspace, encode_message
from frs_gaps.harness import ExperimentConfig, run_pin_test
from frs_gaps.linalg import LinearSubspace, restriction_kernel, span
from frs_gaps.pinning import (
    pin_lower_bound,
    pin_success_estimate,
    pin_success_exact,
    reachable_tau,
    sample_pin,
)
from frs_gaps.rng import SeededRNG

CTX = FieldContext(17, 3)
K3 = CodeParams.standard(CTX, 2, 4, 3)


def _line_of(p, coeffs):
    c = encode_message(p, coeffs)
    return c, span(CTX, [c.flat()])


def test_lower_bound():
    assert pin_lower_bound(1, Fraction(1, 2)) == Fraction(1, 3)
    assert pin_lower_bound(3, Fraction(1, 4)) == Fraction(1, 13)


def test_zero_subspace_pins_nothing(rng):
    pins = sample_pin(LinearSubspace.zero(CTX, 8), 2, Fraction(1, 2), rng)
    assert len(pins) == 0


def test_eps_must_lie_in_unit_interval(tiny, rng):
    _, h = _line_of(tiny, (1, 1))
    for eps in (Fraction(0), Fraction(1)):
        with pytest.raises(ParameterError):
            sample_pin(h, 2, eps, rng)


def test_one_dimensional_exact_probability(tiny):
    # f = 1 + x has no zero block, so one uniform block is pinned.
    c, h = _line_of(tiny, (1, 1))
    y = c.with_block(0, (0, 0))
    assert pin_success_exact(h, 2, c, y, Fraction(1, 2)) == Fraction(3, 4)
    assert pin_success_exact(h, 2, c, c, Fraction(1, 2)) == 1
    assert reachable_tau(h, 2) == 0


def test_reachable_tau_of_whole_code():
    # K = C has K_i of dim 1 on every block; K_i itself pins one zero block.
    assert reachable_tau(code_subspace(K3), 2) == Fraction(1, 3)


def test_samples_are_injective(rng):
    h = code_subspace(K3)
    for t in range(300):
        pins = sample_pin(h, 2, Fraction(1, 4), rng.derive(t))
        assert len(pins) <= h.dim
        assert restriction_kernel(h, pins.coords, 2).is_zero()
        assert [step.index for step in pins.trace] == list(pins.coords)
        assert all(step.dim_after < step.dim_before for step in pins.trace)


def test_estimate_preconditions(tiny, rng):
    c, h = _line_of(tiny, (1, 1))
    other = encode_message(tiny, (2, 5))
    with pytest.raises(PreconditionFailed):
        pin_success_estimate(h, 2, other, other, Fraction(1, 2), 10, rng)
    y = Word.zero(4, 2)
    with pytest.raises(PreconditionFailed):
        pin_success_estimate(h, 2, c, y, Fraction(1, 2), 10, rng, threshold=Fraction(1, 2))
    with pytest.raises(ParameterError):
        pin_success_estimate(h, 2, c, c, Fraction(1, 2), 0, rng)


def test_estimate_tracks_exact_probability():
    h = code_subspace(K3)
    c = encode_message(K3, (4, 0, 7))
    y = c.with_block(2, (1, 1))
    eps = Fraction(1, 2)
    exact = pin_success_exact(h, 2, c, y, eps)
    draws = 10_000
    estimate = pin_success_estimate(h, 2, c, y, eps, draws, SeededRNG("estimate"))
    sigma = math.sqrt(float(exact * (1 - exact)) / draws)
    assert abs(float(estimate) - float(exact)) <= 4 * sigma
    assert 1 - reachable_tau(h, 2) - eps == Fraction(1, 6)
    assert exact >= pin_lower_bound(h.dim, eps)


@pytest.mark.parametrize("eps", ["1/4", "1/2"])
def test_pinning_guarantee(eps):
    settings = resolve_settings(
        None, None, {"q": 17, "gamma": 3, "m": 2, "n": 6, "k": 5, "eps": eps, "trials": 25, "seed": "pin"}
    )
    config = ExperimentConfig.from_settings(settings, "pin-test")
    assert config.params.basepoints == (1, 9, 13, 15, 16, 8)
    report = run_pin_test(config, draws=10_000)
    tested = [r for r in report.records if r["verdict"] != "skipped"]
    assert tested
    assert report.violations == 0
    assert all(r["exact"] >= r["bound"] for r in tested)
    assert all(r["within_3_sigma"] for r in tested)
    assert {r["dim"] for r in report.records} <= {1, 2, 3}
