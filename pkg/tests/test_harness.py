from fractions import Fraction

import pytest

from frs_gaps.config import resolve_settings
from frs_gaps.errors import EnumerationTooLarge, NotACodeword, ParameterError
from frs_gaps.frs import block_distance, encode_message, word_axpy
import frs_gaps.harness as harness_module
from frs_gaps.harness import (
    VIOLATION,
    ExperimentConfig,
    multiplicity_identity,
    plant_corrupted_line,
    run_affine_gap,
    run_experiment,
    run_decoder_check,
    run_line_gap,
)
from frs_gaps.reports import report_lines
from frs_gaps.rng import SeededRNG
from frs_gaps.stitching import PerturbedLine


def _settings(**values):
    return resolve_settings(None, None, values)


def test_from_preset_echoes_code():
    config = ExperimentConfig.from_preset("tiny", "line-gap", trials=3, seed=5)
    echo = config.echo()
    assert echo["code"]["basepoints"] == [1, 9, 13, 15]
    assert echo["delta"] == Fraction(1, 4)
    assert (echo["r"], echo["t1"], echo["t2"], echo["a"]) == (3, 2, 4, 2)
    assert config.seed == 5


@pytest.mark.parametrize(
    "kind,overrides",
    [
        ("bogus", {}),
        ("line-gap", {"trials": 0}),
        ("line-gap", {"ell": 0}),
        ("line-gap", {"eps": "1/2"}),
        ("affine-gap", {"corruption": "per-alpha"}),
        ("decoder-check", {"s": 3}),
    ],
)
def test_config_validation(kind, overrides):
    with pytest.raises(ParameterError):
        ExperimentConfig.from_preset("tiny", kind, **overrides)


def test_plant_corrupted_line_models(tiny):
    rng = SeededRNG("plant")
    c0, c1 = encode_message(tiny, (1, 2)), encode_message(tiny, (3, 4))
    clean = plant_corrupted_line(tiny, c0, c1, Fraction(1, 4), "none", rng)
    assert (clean.u0, clean.u1) == (c0, c1)

    joint = plant_corrupted_line(tiny, c0, c1, Fraction(1, 4), "joint-block", rng)
    assert block_distance(joint.u0, c0) == block_distance(joint.u1, c1) == Fraction(1, 4)

    per_alpha = plant_corrupted_line(tiny, c0, c1, Fraction(1, 4), "per-alpha", rng)
    assert isinstance(per_alpha, PerturbedLine)
    for alpha in range(17):
        expected = word_axpy(tiny.ctx, c0, alpha, c1)
        assert block_distance(per_alpha.at(tiny, alpha), expected) == Fraction(1, 4)

    with pytest.raises(ParameterError):
        plant_corrupted_line(tiny, c0, c1, Fraction(1, 4), "scramble", rng)


def test_plant_corrupted_line_rejects_non_codewords(tiny):
    c = encode_message(tiny, (1, 2))
    with pytest.raises(NotACodeword):
        plant_corrupted_line(tiny, c.with_block(0, (0, 0)), c, Fraction(1, 4), "joint-block", SeededRNG(0))


def test_planted_lines_are_recovered():
    """Jointly corrupted lines are all-close and give back the planted pair."""
    report = run_line_gap(ExperimentConfig.from_preset("tiny", "line-gap", trials=200, seed="planted"))
    assert report.violations == 0
    assert report.aggregate["verdicts"] == {"all-close": 200}
    assert report.aggregate["recovered_planted"] == 200
    assert report.aggregate["stitch_errors"] == 0
    for record in report.records:
        assert record["max_distance"] <= Fraction(1, 3)
        assert record["recovered"]["matches_planted"]
        assert record["recovered"]["joint_distance"] <= Fraction(1, 4)
        assert len(record["recovered"]["agreement"]) >= 3


def test_per_alpha_corruption_recovers_endpoints():
    config = ExperimentConfig.from_preset(
        "tiny", "line-gap", trials=20, seed="per-alpha", corruption="per-alpha"
    )
    report = run_line_gap(config)
    assert report.violations == 0
    assert report.aggregate["recovered_planted"] == 20
    assert all(r["recovered"]["joint_distance"] == 0 for r in report.records)


@pytest.mark.parametrize("choice", ["nearest", "farthest"])
def test_random_lines_have_no_violations(choice):
    config = ExperimentConfig.from_preset(
        "tiny", "line-gap", trials=5000, seed=f"random-{choice}", planted=False, choice=choice
    )
    report = run_line_gap(config)
    assert report.violations == 0
    assert report.aggregate["backend"] == "oracle"
    assert report.aggregate["unique_radius"] == Fraction(1, 4)
    assert set(report.aggregate["verdicts"]) <= {"all-close", "sparse", "all-close-relaxed"}


def test_line_gap_reproducible():
    config = ExperimentConfig.from_preset("tiny", "line-gap", trials=10, seed=11, planted=False)
    first, second = run_line_gap(config), run_line_gap(config)
    assert report_lines(first) == report_lines(second)


@pytest.mark.parametrize("planted", [True, False])
def test_affine_gap_plane(planted):
    config = ExperimentConfig.from_preset(
        "tiny", "affine-gap", trials=20, seed=f"plane-{planted}", ell=2, planted=planted
    )
    report = run_affine_gap(config)
    assert report.violations == 0
    assert report.aggregate["identity_failures"] == 0
    for record in report.records:
        assert record["points"] == 289
        if planted:
            assert record["verdict"] == "all-close"
        else:
            assert record["density_excluding_far"] <= record["density_bound"]
            assert record["multiplicity_identity"]


def test_affine_gap_with_one_direction_matches_line_gap():
    common = {"trials": 30, "seed": "same", "planted": False, "ell": 1}
    affine = run_affine_gap(ExperimentConfig.from_preset("tiny", "affine-gap", **common))
    line = run_line_gap(ExperimentConfig.from_preset("tiny", "line-gap", **common))
    assert [r["close_count"] for r in affine.records] == [r["close_count"] for r in line.records]


def test_affine_gap_enumeration_cap():
    config = ExperimentConfig.from_settings(
        _settings(q=1009, m=2, n=4, k=2, ell=2, trials=1, r=3, eps="3/4", t1=2, t2=4, a=2),
        "affine-gap",
    )
    with pytest.raises(EnumerationTooLarge):
        run_affine_gap(config)


@pytest.mark.parametrize(
    "q,ell,far",
    [(3, 1, (0,)), (5, 2, (1, 3)), (7, 2, (0, 0)), (3, 3, (2, 1, 0))],
)
def test_multiplicity_identity(q, ell, far):
    assert multiplicity_identity(q, ell, far)


def test_decoder_check_agrees_with_brute_force():
    config = ExperimentConfig.from_settings(
        _settings(q=17, gamma=3, m=4, n=4, k=3, trials=60, seed="decode"), "decoder-check"
    )
    report = run_experiment(config)
    assert report.violations == 0
    assert report.aggregate["s"] == 2
    assert all(r["oracle_equal"] for r in report.records)
    assert all(r["candidate_dim"] <= 1 for r in report.records)


def test_decoder_check_without_brute_force(monkeypatch):
    monkeypatch.setattr(harness_module, "DEFAULT_ENUMERATION_CAP", 100)
    config = ExperimentConfig.from_settings(
        _settings(q=17, gamma=3, m=4, n=4, k=3, trials=40, seed="decode"), "decoder-check"
    )
    report = run_decoder_check(config)
    assert report.aggregate["oracle"] is False
    assert report.violations == 0
    assert all(r["oracle_equal"] is None for r in report.records)
    assert all(r["sent_listed"] for r in report.records if Fraction(r["corrupted"], 4) <= r["radius"])


def test_design_check_on_five_blocks():
    config = ExperimentConfig.from_settings(
        _settings(q=17, gamma=3, m=3, n=5, k=5, trials=25, seed="design", r=3), "design-check"
    )
    report = run_experiment(config)
    assert report.violations == 0
    assert report.aggregate["block_collision_max"] is None
    for record in report.records:
        assert record["sum_basepoints"] <= record["bound"]
        assert record["verdict"] in ("PASS", "overlap-exceeded")
        assert record["domain"] == "all"
        if record["verdict"] == "overlap-exceeded":
            assert record["overlapping_windows"]
    assert 0 <= report.aggregate["tau_estimate"] <= 1


def test_design_check_collisions_on_tiny():
    report = run_experiment(ExperimentConfig.from_preset("tiny", "design-check", trials=5, seed=1))
    assert report.violations == 0
    assert report.aggregate["block_collision_max"] <= report.aggregate["block_collision_bound"]
    assert report.aggregate["tau_r1_exact"] == 0


def test_pin_test_verdicts():
    report = run_experiment(ExperimentConfig.from_preset("tiny", "pin-test", trials=10, seed="pins"))
    assert report.violations == 0
    assert VIOLATION not in report.aggregate["verdicts"]
    assert all(r["verdict"] in ("PASS", "skipped") for r in report.records)


@pytest.mark.slow
@pytest.mark.parametrize("planted,verdict", [(True, "all-close"), (False, "sparse")])
def test_line_gap_small_preset(planted, verdict):
    config = ExperimentConfig.from_preset(
        "small", "line-gap", trials=2, alpha_samples=3, planted=planted, seed="smoke"
    )
    report = run_line_gap(config)
    assert report.aggregate["backend"] == "decoder"
    assert report.violations == 0
    assert [r["verdict"] for r in report.records] == [verdict, verdict]
    assert all(r["alphas"] == 3 for r in report.records)
    assert all(r["stitch_error"] is None for r in report.records)
    if planted:
        assert all(r["close_count"] == 3 for r in report.records)


@pytest.mark.slow
def test_decoder_check_small_preset():
    config = ExperimentConfig.from_preset("small", "decoder-check", trials=2, seed="smoke")
    report = run_decoder_check(config)
    assert report.aggregate["oracle"] is False
    assert report.violations == 0
    assert all(r["oracle_equal"] is None for r in report.records)
    assert all(r["candidate_dim"] <= report.aggregate["s"] - 1 for r in report.records)
