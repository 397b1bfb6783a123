"""Parameter-grid campaigns and the close-fraction trend fit."""

import itertools
import logging
import signal
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .config import DERIVED_KEYS, PRESETS, resolve_settings
from .harness import ExperimentConfig, ExperimentReport, run_experiment

logger = logging.getLogger(__name__)


def expand_grid(base: Mapping[str, Any], grid: Mapping[str, Sequence[Any]]) -> list[dict[str, Any]]:
    """Cartesian product of grid values layered over `base`.

    The first grid key varies slowest. An empty grid yields `[base]`; a key
    with no values yields no points at all.
    """
    keys = list(grid)
    points = []
    for values in itertools.product(*(grid[key] for key in keys)):
        point = dict(base)
        point.update(zip(keys, values))
        points.append(point)
    return points


def grid_points(
    settings: Mapping[str, Any], fixed: Iterable[str], grid: Mapping[str, Sequence[Any]]
) -> list[dict[str, Any]]:
    """Grid points over resolved settings, re-deriving what the base only derived.

    Stitching constants that neither the preset nor a key in `fixed` set are
    dropped, so each point derives them from its own δ' and code. When the
    grid varies q, γ is dropped too unless it is in `fixed`, and each point
    uses the least primitive root of its field.

    Args:
        settings: Resolved base settings.
        fixed: Keys given explicitly by the config file or flags.
        grid: Values per swept key.
    """
    fixed = set(fixed)
    kept = fixed | set(PRESETS.get(settings.get("preset"), {}))
    base = {key: value for key, value in settings.items() if key not in DERIVED_KEYS or key in kept}
    base["preset"] = None
    if "q" in grid and "gamma" not in fixed:
        base.pop("gamma", None)
    return expand_grid(base, grid)


def _error_report(kind: str, echo: Mapping[str, Any], seed: Any, error: Exception) -> ExperimentReport:
    return ExperimentReport(
        kind=kind,
        config_echo=dict(echo),
        seed=seed,
        aggregate={"error": f"{type(error).__name__}: {error}"},
    )


class SweepRunner:
    """Runs experiments one configuration at a time until done or stopped."""

    def __init__(self) -> None:
        self.running = False
        self.completed = 0
        self.failed = 0

    def _run_one(
        self, kind: str, build: Callable[[], ExperimentConfig], echo: Mapping[str, Any], seed: Any
    ) -> ExperimentReport:
        try:
            config = build()
            report = run_experiment(config)
        except Exception as e:
            logger.exception(f"Error running {kind} config {dict(echo)}: {e}")
            self.failed += 1
            return _error_report(kind, echo, seed, e)
        self.completed += 1
        return report

    def _loop(
        self, jobs: Iterable[tuple[str, Callable[[], ExperimentConfig], Mapping[str, Any], Any]]
    ) -> Iterator[ExperimentReport]:
        self.running = True
        for index, (kind, build, echo, seed) in enumerate(jobs):
            if not self.running:
                logger.info(f"Sweep stopped before configuration {index}")
                break
            logger.info(f"Sweep configuration {index}: {kind}")
            yield self._run_one(kind, build, echo, seed)
        self.running = False
        logger.info(f"Sweep finished: {self.completed} completed, {self.failed} failed")

    def run(self, configs: Iterable[ExperimentConfig]) -> Iterator[ExperimentReport]:
        """Run prebuilt configurations in order."""
        return self._loop(
            (config.kind, (lambda c=config: c), config.echo(), config.seed) for config in configs
        )

    def run_settings(self, kind: str, points: Iterable[Mapping[str, Any]]) -> Iterator[ExperimentReport]:
        """Build and run one configuration per raw settings mapping.

        Settings are resolved inside the loop so a bad grid point becomes an
        error report instead of ending the campaign.
        """

        def build(point: Mapping[str, Any]) -> ExperimentConfig:
            return ExperimentConfig.from_settings(resolve_settings(None, None, point), kind)

        return self._loop(
            (kind, (lambda p=point: build(p)), point, point.get("seed")) for point in points
        )

    def stop(self) -> None:
        """Stop after the configuration in progress."""
        self.running = False


def sweep(configs: Iterable[ExperimentConfig]) -> Iterator[ExperimentReport]:
    """Stream one report per configuration; failures become error reports."""
    return SweepRunner().run(configs)


def run_sweep(kind: str, points: Iterable[Mapping[str, Any]]) -> Iterator[ExperimentReport]:
    """Run a grid campaign, stopping cleanly between configurations on SIGINT/SIGTERM.

    Reports are yielded as each configuration finishes, so a caller writing
    them out keeps every finished point if the campaign is cut short. The
    signal handlers are in place while the stream is being consumed and are
    restored when it ends or is closed.

    Args:
        kind: Experiment kind for every grid point.
        points: Raw settings mappings, e.g. from grid_points.

    Yields:
        One report per configuration that ran.
    """
    runner = SweepRunner()

    def handle_sigterm(signum: int, frame: Any) -> None:
        logger.info("Received SIGTERM, stopping sweep...")
        runner.stop()

    def handle_sigint(signum: int, frame: Any) -> None:
        logger.info("Received SIGINT, stopping sweep...")
        runner.stop()

    previous = {
        signal.SIGTERM: signal.signal(signal.SIGTERM, handle_sigterm),
        signal.SIGINT: signal.signal(signal.SIGINT, handle_sigint),
    }
    try:
        yield from runner.run_settings(kind, points)
    finally:
        for signum, handler in previous.items():
            signal.signal(signum, handler)


def fit_exponent(qs: Sequence[int], fractions: Sequence[Fraction | float]) -> float | None:
    """Fit fraction ∝ q^(-e) on a log-log scale and return e.

    Zero fractions carry no slope information and are skipped. Returns None
    with fewer than two distinct usable q.
    """
    points = [(q, float(f)) for q, f in zip(qs, fractions) if f > 0]
    if len({q for q, _ in points}) < 2:
        return None
    x = np.log([q for q, _ in points])
    y = np.log([f for _, f in points])
    slope, _ = np.polyfit(x, y, 1)
    return float(-slope)


@dataclass
class TrendResult:
    rows: list[dict[str, Any]] = field(default_factory=list)
    exponents: dict[Fraction, float | None] = field(default_factory=dict)


def run_trend(
    settings: Mapping[str, Any],
    qs: Sequence[int],
    deltas: Sequence[Fraction] | None = None,
) -> TrendResult:
    """Measure the random-line close-fraction over primes q at fixed (m, n, k).

    One line-gap experiment runs per (δ', q); γ is the least primitive root of
    each q unless q equals the configured field. The fitted exponent per δ'
    should sit near 1 when ε ∝ 1/q.

    Args:
        settings: Resolved base settings (see config.resolve_settings).
        qs: Primes to sweep.
        deltas: Radii to sweep; defaults to the configured δ'.

    Returns:
        Plot-ready rows and the fitted exponent per δ'.
    """
    deltas = list(deltas) if deltas else [settings["delta"]]
    rate = Fraction(settings["k"], settings["m"] * settings["n"])
    points = []
    for delta in deltas:
        for q in qs:
            point = dict(settings)
            point.update(q=q, delta=delta, planted=False, preset=None)
            if q != settings["q"]:
                point["gamma"] = None
            points.append(point)

    reports = list(run_sweep("line-gap", points))
    result = TrendResult()
    for point, report in zip(points, reports):
        if "error" in report.aggregate:
            logger.warning(f"Trend point q={point['q']} δ'={point['delta']} failed")
            continue
        result.rows.append({
            "q": point["q"],
            "delta": point["delta"],
            "eta": 1 - rate - point["delta"],
            "close_fraction": report.aggregate["close_fraction_mean"],
            "violations": report.violations,
            "trials": len(report.records),
        })
    for delta in deltas:
        rows = [row for row in result.rows if row["delta"] == delta]
        exponent = fit_exponent([row["q"] for row in rows], [row["close_fraction"] for row in rows])
        result.exponents[delta] = exponent
        logger.info(f"Trend δ'={delta}: fitted exponent {exponent}")
    return result
