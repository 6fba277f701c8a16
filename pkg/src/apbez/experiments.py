"""
Refinement studies and the scripted reproductions built on them, plus their CSV/JSON reports.
"""
import csv
import enum
import io
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from apbez.config import Settings, get_settings
from apbez.errors import DomainError, InfeasibleSegmentError, InsufficientDataError, NeedsRefinementError, StudyError
from apbez.interpolator import (HermiteBaseline, Mode, OptimizedAP, Segment, StandardAP, interpolate_hermite,
                                interpolate_optimized, interpolate_piecewise, interpolate_standard, mode_from_dict,
                                mode_to_dict)
from apbez.metrics import ErrorRecord, estimate_order, last_interval_order
from apbez.targets import Target, make_builtin

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ("level", "n_subintervals", "h_max", "linf", "hausdorff", "area_residual_max",
                  "fitted_order_cumulative")
SEGMENT_COLUMNS = ("s0", "s1", "method", "r1", "r2", "h", "linf", "hausdorff", "area_residual")

TABLE1_LEVELS = (2, 4, 8, 16)
TABLE2_SPLITS = (0.3678, 0.48)

# published reference values, printed next to the computed ones by the table commands
PUBLISHED_TABLE1 = {
    "curvature_matching": (1.4e-3, 2.1e-5, 3.2e-7, 4.9e-9),
    "standard": (2.9e-3, 5.7e-5, 1.0e-6, 1.6e-8),
    "optimized": (2.6e-4, 4.5e-6, 8.2e-8, 3.3e-9),
}
PUBLISHED_TABLE2 = {0.3678: 6.9e-4, 0.48: 2.4e-3}


class Metric(enum.Enum):
    LINF = "linf"
    HAUSDORFF = "hausdorff"


class Layout(enum.Enum):
    UNIFORM = "uniform"
    """n equal pieces over the whole domain."""
    LEADING = "leading"
    """The single piece `[lo, lo + (hi - lo) / n]`, shrinking towards the start of the domain."""


@dataclass(frozen=True)
class StudyConfig:
    target: str
    mode: Mode = StandardAP()
    levels: tuple[int, ...] = (4, 8, 16, 32, 64)
    metric: Metric = Metric.LINF
    area_perturbation: float = 0.0
    layout: Layout = Layout.UNIFORM

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(n) for n in self.levels))
        object.__setattr__(self, "metric", Metric(self.metric))
        object.__setattr__(self, "layout", Layout(self.layout))
        if any(n < 1 for n in self.levels):
            raise DomainError(f"levels must be positive partition sizes, got {self.levels}")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise DomainError(f"levels must be strictly increasing, got {self.levels}")
        if not math.isfinite(self.area_perturbation):
            raise DomainError(f"area perturbation must be finite, got {self.area_perturbation!r}")
        make_builtin(self.target)

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "mode": mode_to_dict(self.mode),
            "levels": list(self.levels),
            "metric": self.metric.value,
            "area_perturbation": self.area_perturbation,
            "layout": self.layout.value,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "StudyConfig":
        return cls(payload["target"], mode_from_dict(payload["mode"]), tuple(payload["levels"]),
                   Metric(payload["metric"]), float(payload["area_perturbation"]), Layout(payload["layout"]))


@dataclass(frozen=True)
class StudyResult:
    config: StudyConfig
    records: tuple[ErrorRecord, ...] = field(default_factory=tuple)
    fitted_order: Optional[float] = None
    last_interval_order: Optional[float] = None

    def errors(self) -> list[Optional[float]]:
        return [record.metric(self.config.metric.value) for record in self.records]

    @classmethod
    def from_json(cls, raw: bytes) -> "StudyResult":
        """
        Rebuilds a result from the output of :func:`emit_report` in JSON format.
        """
        payload = json.loads(raw)
        records = tuple(
            ErrorRecord(row["h_max"], row["linf"], row["hausdorff"], row["area_residual_max"], row["n_segments"])
            for row in payload["levels"]
        )
        return cls(StudyConfig.from_dict(payload["config"]), records, payload["fitted_order"],
                   payload["last_interval_order"])


def breakpoints(target: Target, n: int, layout: Layout = Layout.UNIFORM) -> np.ndarray:
    lo, hi = target.domain
    if layout is Layout.LEADING:
        return np.array([lo, lo + (hi - lo) / n])
    points = np.linspace(lo, hi, n + 1)
    points[-1] = hi
    return points


def level_record(segments: Sequence[Segment]) -> ErrorRecord:
    """
    Worst errors over the segments of one level.
    """
    diagnostics = [segment.diagnostics for segment in segments]
    linfs = [d.linf for d in diagnostics]
    return ErrorRecord(
        h=max(d.h for d in diagnostics),
        linf=None if None in linfs else max(linfs),
        hausdorff=max(d.hausdorff for d in diagnostics),
        area_residual=max(abs(d.area_residual) for d in diagnostics),
        n_segments=len(diagnostics),
    )


def _order_or_none(fit: Callable, records: Sequence[ErrorRecord], metric: Metric) -> Optional[float]:
    try:
        return fit(records, metric.value)
    except InsufficientDataError as exc:
        logger.debug("no convergence order: %s", exc)
        return None


def run_study(cfg: StudyConfig, settings: Settings = None) -> StudyResult:
    """
    Interpolates the target at every refinement level and fits convergence orders to the worst errors.

    :param cfg: The study.
    :param settings: Tunables.
    :return: One record per level and the fitted orders (None when a fit is impossible).
    :raises StudyError: When a level has no feasible interpolant.
    """
    settings = settings or get_settings()
    target = make_builtin(cfg.target)
    records = []
    for index, n in enumerate(cfg.levels):
        try:
            segments = interpolate_piecewise(target, breakpoints(target, n, cfg.layout), cfg.mode,
                                             area_perturbation=cfg.area_perturbation, objective=cfg.metric.value,
                                             settings=settings)
        except (InfeasibleSegmentError, NeedsRefinementError, DomainError) as exc:
            raise StudyError(f"{cfg.target} level {index} (n={n}) failed: {exc}", level=index) from exc
        records.append(level_record(segments))
        logger.info("%s n=%d: %s", cfg.target, n, records[-1])

    return StudyResult(cfg, tuple(records), _order_or_none(estimate_order, records, cfg.metric),
                       _order_or_none(last_interval_order, records, cfg.metric))


def run_perturbed_area_study(cfg: StudyConfig, settings: Settings = None) -> StudyResult:
    """
    :func:`run_study` with the prescribed areas off by `M h^5`; the scheme still meets the perturbed areas.
    With `M = 0` the result is exactly that of :func:`run_study`.
    """
    if cfg.area_perturbation == 0.0:
        logger.debug("zero area perturbation, running the plain study for %s", cfg.target)
    return run_study(cfg, settings)


def _cell(value) -> str:
    if value is None:
        return ""
    return repr(float(value)) if isinstance(value, float) else str(value)


def _cumulative_orders(result: StudyResult) -> list[Optional[float]]:
    return [_order_or_none(estimate_order, result.records[:i + 1], result.config.metric)
            for i in range(len(result.records))]


def csv_preamble(cfg: StudyConfig) -> str:
    """
    The `#` comment line opening a CSV report: target, mode with its tunables (the optimizer's `grid_n`
    included), metric, layout and area perturbation.
    """
    mode = mode_to_dict(cfg.mode)
    fields = [f"target={cfg.target}", f"mode={mode['kind']}"]
    fields += [f"{key}={_cell(value) or 'default'}" for key, value in mode.items() if key != "kind"]
    fields += [f"metric={cfg.metric.value}", f"layout={cfg.layout.value}",
               f"area_perturbation={_cell(float(cfg.area_perturbation))}"]
    return "# " + " ".join(fields) + "\n"


def read_csv_report(raw: bytes) -> list[dict[str, str]]:
    """
    Rows of a CSV report from :func:`emit_report`, skipping its preamble.
    """
    lines = [line for line in raw.decode("utf-8").splitlines() if not line.startswith("#")]
    return list(csv.DictReader(lines))


def emit_report(result: StudyResult, fmt: str = "csv") -> bytes:
    """
    Serializes a study. Reals are written as shortest round-trip decimals so the output is byte-stable. CSV
    output opens with the :func:`csv_preamble` line.

    :param result: The study result.
    :param fmt: `csv` or `json`.
    :return: The encoded report.
    """
    cumulative = _cumulative_orders(result)
    levels = result.config.levels
    if fmt == "csv":
        buffer = io.StringIO()
        buffer.write(csv_preamble(result.config))
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for index, (record, order) in enumerate(zip(result.records, cumulative)):
            writer.writerow([_cell(v) for v in (index, levels[index], record.h, record.linf, record.hausdorff,
                                                record.area_residual, order)])
        return buffer.getvalue().encode("utf-8")
    if fmt == "json":
        payload = {
            "config": result.config.to_dict(),
            "fitted_order": result.fitted_order,
            "last_interval_order": result.last_interval_order,
            "levels": [
                {
                    "level": index,
                    "n_subintervals": levels[index],
                    "h_max": record.h,
                    "linf": record.linf,
                    "hausdorff": record.hausdorff,
                    "area_residual_max": record.area_residual,
                    "n_segments": record.n_segments,
                    "fitted_order_cumulative": order,
                }
                for index, (record, order) in enumerate(zip(result.records, cumulative))
            ],
        }
        return (json.dumps(payload, indent=2) + "\n").encode("utf-8")
    raise DomainError(f"unknown report format \"{fmt}\", expected csv or json")


def emit_segments(segments: Sequence[Segment], fmt: str = "csv") -> bytes:
    """
    Serializes per-segment magnitudes and diagnostics.
    """
    rows = [
        {
            "s0": s.s0, "s1": s.s1, "method": s.method, "r1": s.r1, "r2": s.r2, "h": s.h,
            "linf": s.diagnostics.linf, "hausdorff": s.diagnostics.hausdorff, "area_residual": s.area_residual,
        }
        for s in segments
    ]
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(SEGMENT_COLUMNS)
        for row in rows:
            writer.writerow([_cell(row[column]) for column in SEGMENT_COLUMNS])
        return buffer.getvalue().encode("utf-8")
    if fmt == "json":
        return (json.dumps({"segments": rows}, indent=2) + "\n").encode("utf-8")
    raise DomainError(f"unknown report format \"{fmt}\", expected csv or json")


def emit_curves(curves: dict[str, Sequence[Segment]], target: Target, s0: float, s1: float,
                n: int = 512) -> bytes:
    """
    CSV of sampled curves (`curve,index,x,y`): the target over `[s0, s1]` and each named interpolant.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("curve", "index", "x", "y"))
    samples = {"target": target.position(np.linspace(s0, s1, n))}
    for name, segments in curves.items():
        samples[name] = np.concatenate([s.bezier.points(np.linspace(0.0, 1.0, n)) for s in segments])
    for name, points in samples.items():
        for index, (x, y) in enumerate(points):
            writer.writerow((name, index, repr(float(x)), repr(float(y))))
    return buffer.getvalue().encode("utf-8")


def table1(settings: Settings = None, grid_n: int = None) -> tuple[StudyResult, StudyResult]:
    """
    Semicircle errors with 2, 4, 8 and 16 subintervals, standard and optimized.
    """
    settings = settings or get_settings()
    standard = run_study(StudyConfig("circle", StandardAP(), TABLE1_LEVELS, Metric.LINF), settings)
    optimized = run_study(
        StudyConfig("circle", OptimizedAP(grid_n or settings.grid_n, settings.optimizer_samples), TABLE1_LEVELS,
                    Metric.LINF),
        settings,
    )
    return standard, optimized


def table2(settings: Settings = None) -> list[tuple[float, float]]:
    """
    Worst Hausdorff error of the standard interpolant of the comparison curve split once at each of the two
    published split points: exactly the two segments `[lo, split]` and `[split, hi]`, never refined.

    :raises StudyError: When either segment has no feasible interpolant.
    """
    settings = settings or get_settings()
    target = make_builtin("cve")
    lo, hi = target.domain
    rows = []
    for split in TABLE2_SPLITS:
        try:
            segments = [interpolate_standard(target, lo, split, settings=settings),
                        interpolate_standard(target, split, hi, settings=settings)]
        except (NeedsRefinementError, DomainError) as exc:
            raise StudyError(f"cve split at {split!r} has no feasible interpolant: {exc}") from exc
        rows.append((split, level_record(segments).hausdorff))
    return rows


def figure_data(target: Target, s0: float, s1: float, settings: Settings = None) -> dict[str, Segment]:
    """
    The hermite, standard (`P = 0`) and optimized interpolants of one interval. A method without a feasible
    segment is left out.
    """
    settings = settings or get_settings()
    builders = {
        HermiteBaseline.name: lambda: interpolate_hermite(target, s0, s1, settings=settings),
        StandardAP.name: lambda: interpolate_standard(target, s0, s1, 0.0, settings=settings),
        OptimizedAP.name: lambda: interpolate_optimized(target, s0, s1, settings=settings),
    }
    curves = {}
    for name, build in builders.items():
        try:
            curves[name] = build()
        except (NeedsRefinementError, DomainError) as exc:
            logger.warning("skipping %s interpolant of %s on [%r, %r]: %s", name, target.name, s0, s1, exc)
    return curves
