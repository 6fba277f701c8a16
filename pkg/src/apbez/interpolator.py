"""
Segment construction: the standard area-preserving interpolant, its grid-optimized variant, the classical cubic
Hermite baseline, and the piecewise driver that bisects intervals where no area-preserving segment exists.

Every segment is built in its chord frame, where `D = (h, 0)` and `r1`, `r2` are speeds along the unit
tangents. The standard family is `r1 = h + P h^3` with `r2` from the area constraint.
"""
import functools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from apbez.area import (AreaSpec, Classification, FeasibilityReport, area_residual, classify_feasibility, p_avg,
                        solve_denominators, solve_r1, solve_r2)
from apbez.config import Settings, get_settings
from apbez.errors import (DegenerateDenominatorError, DomainError, InfeasibleMagnitudeError, InfeasibleSegmentError,
                          NeedsRefinementError)
from apbez.geometry import CubicBezier, Frame, bezier_from_hermite, monotone_x
from apbez.metrics import METRICS, ErrorRecord, bezier_samples, hausdorff_discrete, linf_error
from apbez.targets import (Target, TargetKind, hermite_segment_data, measurement_view, near_vertical,
                           target_samples)

logger = logging.getLogger(__name__)

SEARCH_WIDTH = 3.0
# a solve whose denominator is this much smaller than the other one is not trusted
CONDITIONING_RATIO = 0.25


@dataclass(frozen=True)
class StandardAP:
    """
    `r1 = h + P h^3` with `r2` from the area constraint. `p=None` selects the averaged parameter, which falls
    back to `P = 0` on whichever side keeps both solves well conditioned when the curvature changes sign inside
    the segment.
    """

    p: Optional[float] = None
    name = "standard"


@dataclass(frozen=True)
class OptimizedAP:
    """
    Grid search of `r1` over `(0, 3h / alpha.x]` for the admissible pair closest to the target.
    """

    grid_n: int = 256
    samples: int = 2_000
    name = "optimized"

    def __post_init__(self):
        if self.grid_n < 8:
            raise DomainError(f"optimizer grid needs at least 8 points, got {self.grid_n}")
        if self.samples < 100:
            raise DomainError(f"optimizer needs at least 100 samples, got {self.samples}")


@dataclass(frozen=True)
class HermiteBaseline:
    name = "hermite"


Mode = Union[StandardAP, OptimizedAP, HermiteBaseline]
MODE_NAMES = ("standard", "optimized", "hermite")


def mode_from_name(name: str, p: float = None, grid_n: int = None, samples: int = None) -> Mode:
    if name == "standard":
        return StandardAP(p)
    if name == "optimized":
        settings = get_settings()
        return OptimizedAP(grid_n or settings.grid_n, samples or settings.optimizer_samples)
    if name == "hermite":
        return HermiteBaseline()
    raise DomainError(f"unknown mode \"{name}\", expected one of {', '.join(MODE_NAMES)}")


def mode_to_dict(mode: Mode) -> dict:
    if isinstance(mode, StandardAP):
        return {"kind": mode.name, "p": mode.p}
    if isinstance(mode, OptimizedAP):
        return {"kind": mode.name, "grid_n": mode.grid_n, "samples": mode.samples}
    return {"kind": mode.name}


def mode_from_dict(payload: dict) -> Mode:
    kind = payload["kind"]
    if kind == "standard":
        return StandardAP(payload.get("p"))
    if kind == "optimized":
        return OptimizedAP(payload["grid_n"], payload["samples"])
    return mode_from_name(kind)


@dataclass(frozen=True)
class Segment:
    """
    A finished interpolant. `bezier` is in the target's coordinates with its end points snapped to the target's;
    `local` is the same curve in the working frame, where `r1` and `r2` are measured.
    """

    bezier: CubicBezier
    local: CubicBezier
    frame: Frame
    r1: float
    r2: float
    s0: float
    s1: float
    method: str
    diagnostics: ErrorRecord
    report: Optional[FeasibilityReport] = None

    @property
    def h(self) -> float:
        return self.diagnostics.h

    @property
    def area_residual(self) -> float:
        return self.diagnostics.area_residual


class _SegmentContext:
    """
    Per-interval state shared by candidate evaluations: the problem, its measurement view and target samples.
    """

    def __init__(self, target: Target, s0: float, s1: float, area_perturbation: float, settings: Settings):
        problem = hermite_segment_data(target, s0, s1)
        if area_perturbation:
            problem = problem.perturbed(area_perturbation * problem.h ** 5)
        self.target = target
        self.problem = problem
        self.settings = settings
        self._samples: dict[int, np.ndarray] = {}

    @property
    def data(self):
        return self.problem.data

    @property
    def spec(self) -> AreaSpec:
        return self.problem.area

    @property
    def h(self) -> float:
        return self.problem.h

    @functools.cached_property
    def view(self):
        try:
            return measurement_view(self.target, self.problem)
        except DomainError as exc:
            logger.debug("no graph view for [%r, %r]: %s", self.problem.s0, self.problem.s1, exc)
            return None

    def samples(self, n: int) -> np.ndarray:
        if n not in self._samples:
            self._samples[n] = target_samples(self.target, self.problem, n)
        return self._samples[n]

    def linf(self, local: CubicBezier, n: int) -> Optional[float]:
        if self.view is None:
            return None
        frame, graph = self.view
        if frame is not self.problem.frame:
            local = local.map(self.problem.frame.to_world).map(frame.to_local)
        return linf_error(local, graph, n)

    def measure(self, local: CubicBezier, metric: str, n: int) -> float:
        """
        Distance between `local` and the target segment; `linf` falls back to `hausdorff` without a graph view.
        """
        if metric == "linf" and self.view is not None:
            return self.linf(local, n)
        return hausdorff_discrete(bezier_samples(local, n), self.samples(n))

    def segment(self, r1: float, r2: float, method: str, report: FeasibilityReport = None) -> Segment:
        local = bezier_from_hermite(self.data, r1, r2)
        frame = self.problem.frame
        world = local.map(frame.to_world)
        world = CubicBezier(self.target.point(self.problem.s0), world.c1, world.c2,
                            self.target.point(self.problem.s1))

        linf = self.linf(local, self.settings.linf_samples)
        n = self.settings.hausdorff_samples
        hausdorff = hausdorff_discrete(bezier_samples(local, n), self.samples(n))
        diagnostics = ErrorRecord(self.h, linf, hausdorff, area_residual(self.data, self.spec, r1, r2))
        return Segment(world, local, frame, r1, r2, self.problem.s0, self.problem.s1, method, diagnostics, report)


def _family_r1(h: float, big_p: float) -> float:
    r1 = h + big_p * h ** 3
    if not r1 > 0.0:
        raise InfeasibleMagnitudeError(f"family parameter P={big_p!r} gives non-positive r1={r1!r}")
    return r1


def _standard_magnitudes(ctx: _SegmentContext, p: Optional[float]) -> tuple[float, float, FeasibilityReport]:
    data, spec, h = ctx.data, ctx.spec, ctx.h
    report = classify_feasibility(data, spec)
    if not report.compatible:
        raise NeedsRefinementError(f"area prescription is incompatible with the end tangents: {report.describe()}",
                                   report)
    if not (data.alpha.x > 0.0 and data.beta.x > 0.0):
        raise NeedsRefinementError("end tangents turn back against the chord", report)

    if report.classification is Classification.ALL_ZERO:
        # collinear data: the straight line
        return h, h, report

    try:
        if p is not None:
            r1 = _family_r1(h, p)
            return r1, solve_r2(data, spec, r1), report
        forward, backward = solve_denominators(data, h)
        if abs(forward) < CONDITIONING_RATIO * abs(backward):
            logger.debug("r2 solve is ill-conditioned on [%r, %r], fixing r2 = h", ctx.problem.s0, ctx.problem.s1)
            return solve_r1(data, spec, h), h, report
        if abs(backward) < CONDITIONING_RATIO * abs(forward):
            logger.debug("averaged parameter is ill-conditioned on [%r, %r], using P = 0",
                         ctx.problem.s0, ctx.problem.s1)
            return h, solve_r2(data, spec, h), report
        r1 = _family_r1(h, p_avg(data, spec, h))
        return r1, solve_r2(data, spec, r1), report
    except (DegenerateDenominatorError, InfeasibleMagnitudeError) as exc:
        raise NeedsRefinementError(str(exc), report) from exc


def interpolate_standard(target: Target, s0: float, s1: float, p: float = None, *, area_perturbation: float = 0.0,
                         settings: Settings = None) -> Segment:
    """
    The standard area-preserving interpolant of one interval.

    :param target: The curve.
    :param s0: Start parameter.
    :param s1: End parameter.
    :param p: Family parameter, None for the averaged choice.
    :param area_perturbation: `M`, adds `M h^5` to the prescribed area.
    :param settings: Sampling tunables.
    :return: The segment.
    :raises NeedsRefinementError: When no positive magnitudes meet the area on this interval.
    """
    ctx = _SegmentContext(target, s0, s1, area_perturbation, settings or get_settings())
    r1, r2, report = _standard_magnitudes(ctx, p)
    return ctx.segment(r1, r2, StandardAP.name, report)


def interpolate_optimized(target: Target, s0: float, s1: float, grid_n: int = None, samples: int = None, *,
                          objective: str = None, area_perturbation: float = 0.0,
                          settings: Settings = None) -> Segment:
    """
    Scans `r1` over `grid_n` uniform points of `(0, 3h / alpha.x]`, solves `r2` from the area, keeps pairs with
    `0 < r2 <= 3h / beta.x` whose first component is monotone, and returns the pair closest to the target. The
    standard pair joins the candidates; ties go to the smaller `|r1 - h|`. The winner is re-measured against the standard
    pair with the diagnostic sampling so that the result never loses to the standard interpolant.

    :param objective: `linf` or `hausdorff`; defaults by target kind.
    """
    settings = settings or get_settings()
    grid_n = grid_n or settings.grid_n
    samples = samples or settings.optimizer_samples
    objective = objective or ("linf" if target.kind is TargetKind.GRAPH else "hausdorff")
    if objective not in METRICS:
        raise DomainError(f"unknown objective \"{objective}\", expected one of {', '.join(METRICS)}")

    ctx = _SegmentContext(target, s0, s1, area_perturbation, settings)
    data, spec, h = ctx.data, ctx.spec, ctx.h
    if not (data.alpha.x > 0.0 and data.beta.x > 0.0):
        raise NeedsRefinementError("end tangents turn back against the chord", classify_feasibility(data, spec))

    standard = None
    try:
        r1, r2, report = _standard_magnitudes(ctx, None)
        standard = (r1, r2)
    except NeedsRefinementError as exc:
        report = exc.report
        logger.debug("standard candidate unavailable on [%r, %r]: %s", s0, s1, exc)

    def key(r1: float, r2: float) -> tuple[float, float]:
        return ctx.measure(bezier_from_hermite(data, r1, r2), objective, samples), abs(r1 - h)

    best = None
    for k in range(1, grid_n + 1):
        r1 = SEARCH_WIDTH * h * k / grid_n / data.alpha.x
        try:
            r2 = solve_r2(data, spec, r1)
        except (DegenerateDenominatorError, InfeasibleMagnitudeError):
            continue
        if r2 * data.beta.x > SEARCH_WIDTH * h or not monotone_x(data, r1, r2):
            continue
        candidate = (key(r1, r2), r1, r2)
        if best is None or candidate[0] < best[0]:
            best = candidate
    if standard is not None:
        candidate = (key(*standard), *standard)
        if best is None or candidate[0] < best[0]:
            best = candidate
    if best is None:
        raise NeedsRefinementError(f"no admissible magnitudes on the search grid of [{s0!r}, {s1!r}]", report)

    _, r1, r2 = best
    logger.debug("optimized [%r, %r]: r1=%r r2=%r", s0, s1, r1, r2)
    segment = ctx.segment(r1, r2, OptimizedAP.name, report)
    if standard is not None and standard != (r1, r2):
        fallback = ctx.segment(*standard, OptimizedAP.name, report)
        if _diagnostic(fallback, objective) < _diagnostic(segment, objective):
            segment = fallback
    return segment


def _diagnostic(segment: Segment, objective: str) -> float:
    value = segment.diagnostics.metric(objective)
    return segment.diagnostics.hausdorff if value is None else value


def interpolate_hermite(target: Target, s0: float, s1: float, *, settings: Settings = None) -> Segment:
    """
    Classical cubic Hermite interpolation, linear in the curve parameter along the x-axis of the target for
    graphs and along the chord for parametric curves. The area is not preserved.

    :raises DomainError: For near-vertical graph slopes or tangents perpendicular to the chord.
    """
    settings = settings or get_settings()
    if near_vertical(target, s0, s1, settings.near_vertical_slope):
        raise DomainError(f"hermite baseline needs a graph frame, [{s0!r}, {s1!r}] has near-vertical tangents")
    ctx = _SegmentContext(target, s0, s1, 0.0, settings)
    if target.kind is TargetKind.GRAPH:
        width, alpha, beta = s1 - s0, target.tangent(s0), target.tangent(s1)
    else:
        width, alpha, beta = ctx.h, ctx.data.alpha, ctx.data.beta
    tolerance = 1.0 / settings.near_vertical_slope
    if not (alpha.x > tolerance and beta.x > tolerance):
        raise DomainError(f"hermite baseline needs tangents transversal to the chord on [{s0!r}, {s1!r}]")
    return ctx.segment(width / alpha.x, width / beta.x, HermiteBaseline.name)


def interpolate_segment(target: Target, s0: float, s1: float, mode: Mode = StandardAP(), *,
                        area_perturbation: float = 0.0, objective: str = None,
                        settings: Settings = None) -> Segment:
    if isinstance(mode, StandardAP):
        return interpolate_standard(target, s0, s1, mode.p, area_perturbation=area_perturbation,
                                    settings=settings)
    if isinstance(mode, OptimizedAP):
        return interpolate_optimized(target, s0, s1, mode.grid_n, mode.samples, objective=objective,
                                     area_perturbation=area_perturbation, settings=settings)
    if isinstance(mode, HermiteBaseline):
        return interpolate_hermite(target, s0, s1, settings=settings)
    raise DomainError(f"unsupported mode {mode!r}")


def _refine(target: Target, s0: float, s1: float, mode: Mode, depth: int, max_depth: int,
            **options) -> list[Segment]:
    try:
        return [interpolate_segment(target, s0, s1, mode, **options)]
    except NeedsRefinementError as exc:
        if depth >= max_depth:
            raise InfeasibleSegmentError(f"no feasible segment on [{s0!r}, {s1!r}] after {depth} bisections: {exc}",
                                         s0, s1, exc.report) from exc
        mid = 0.5 * (s0 + s1)
        logger.info("bisecting [%r, %r] at depth %d: %s", s0, s1, depth, exc)
        return (_refine(target, s0, mid, mode, depth + 1, max_depth, **options)
                + _refine(target, mid, s1, mode, depth + 1, max_depth, **options))


def interpolate_piecewise(target: Target, breakpoints: Sequence[float], mode: Mode = StandardAP(), *,
                          area_perturbation: float = 0.0, objective: str = None, max_depth: int = None,
                          settings: Settings = None) -> list[Segment]:
    """
    One segment per interval between consecutive breakpoints, bisecting intervals that need refinement.
    Intervals are built concurrently; the result is in breakpoint order.

    :param target: The curve.
    :param breakpoints: Strictly increasing parameters inside the target's domain.
    :param mode: Segment construction.
    :param area_perturbation: `M` of the perturbed-area study.
    :param objective: Optimizer objective, see :func:`interpolate_optimized`.
    :param max_depth: Bisection limit per interval.
    :param settings: Tunables; `threads` caps the worker count.
    :return: The segments.
    :raises InfeasibleSegmentError: When bisection runs out of depth.
    """
    settings = settings or get_settings()
    points = [float(b) for b in breakpoints]
    if len(points) < 2:
        raise DomainError(f"need at least two breakpoints, got {len(points)}")
    if any(b <= a for a, b in zip(points, points[1:])):
        raise DomainError("breakpoints must be strictly increasing")
    if not target.contains(points[0], points[-1]):
        raise DomainError(f"breakpoints leave the domain {target.domain} of {target.name}")
    max_depth = settings.max_refinement_depth if max_depth is None else max_depth
    options = dict(area_perturbation=area_perturbation, objective=objective, settings=settings)

    def build(interval: tuple[float, float]) -> list[Segment]:
        return _refine(target, interval[0], interval[1], mode, 0, max_depth, **options)

    with ThreadPoolExecutor(max_workers=settings.max_workers) as pool:
        parts = list(pool.map(build, zip(points, points[1:])))
    return [segment for part in parts for segment in part]
