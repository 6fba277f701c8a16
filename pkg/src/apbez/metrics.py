"""
Error measures between an interpolant and its target, and convergence orders fitted from them.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.spatial.distance import directed_hausdorff

from apbez.errors import DomainError, InsufficientDataError
from apbez.geometry import CubicBezier

logger = logging.getLogger(__name__)

METRICS = ("linf", "hausdorff")


@dataclass(frozen=True)
class ErrorRecord:
    """
    Errors measured at one mesh size. `linf` is None when the curve has no graph view over its working frame.
    """

    h: float
    linf: Optional[float]
    hausdorff: Optional[float] = None
    area_residual: float = 0.0
    n_segments: int = 1

    def __post_init__(self):
        if not self.h > 0.0:
            raise DomainError(f"mesh size must be positive, got {self.h!r}")
        for name in METRICS:
            value = getattr(self, name)
            if value is not None and value < 0.0:
                raise DomainError(f"{name} error cannot be negative, got {value!r}")

    def metric(self, name: str) -> Optional[float]:
        if name not in METRICS:
            raise DomainError(f"unknown metric \"{name}\", expected one of {', '.join(METRICS)}")
        return getattr(self, name)


def chebyshev_parameters(n: int) -> np.ndarray:
    """
    Chebyshev-Lobatto points mapped to [0, 1], endpoints included exactly.
    """
    if n < 2:
        raise DomainError(f"need at least two sample points, got {n}")
    k = np.arange(n)
    return 0.5 * (1.0 - np.cos(np.pi * k / (n - 1)))


def linf_error(b: CubicBezier, f: Callable[[np.ndarray], np.ndarray], n_samples: int = 10_000) -> float:
    """
    Sup-norm distance `max |B2(t) - f(B1(t))|` sampled at Chebyshev-Lobatto parameters.

    :param b: The interpolant in the frame where the target is the graph of `f`.
    :param f: Vectorised graph function of the target.
    :param n_samples: Number of samples.
    :return: The sampled maximum.
    """
    pts = b.points(chebyshev_parameters(n_samples))
    with np.errstate(invalid="ignore", over="ignore"):
        deviation = np.abs(pts[:, 1] - f(pts[:, 0]))
    if not np.all(np.isfinite(deviation)):
        raise DomainError("graph function is not finite along the interpolant")
    return float(deviation.max())


def resample_by_arclength(curve: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, n: int,
                          oversample: int = 8) -> np.ndarray:
    """
    Points of a parametric curve spaced (approximately) evenly in arclength. The arclength is tabulated on a
    dense uniform grid of parameters and inverted by linear interpolation.

    :param curve: Vectorised map from parameters to points of shape `(..., 2)`.
    :param lo: First parameter.
    :param hi: Last parameter.
    :param n: Number of points.
    :param oversample: Density of the arclength table relative to `n`.
    :return: Array of shape `(n, 2)`.
    """
    if n < 2:
        raise DomainError(f"need at least two sample points, got {n}")
    params = np.linspace(lo, hi, n * oversample)
    pts = curve(params)
    steps = np.hypot(*np.diff(pts, axis=0).T)
    cumulative = np.concatenate(([0.0], np.cumsum(steps)))
    if cumulative[-1] == 0.0:
        return np.repeat(pts[:1], n, axis=0)
    wanted = np.linspace(0.0, cumulative[-1], n)
    return curve(np.interp(wanted, cumulative, params))


def bezier_samples(b: CubicBezier, n: int) -> np.ndarray:
    return resample_by_arclength(b.points, 0.0, 1.0, n)


def hausdorff_discrete(a: np.ndarray, b: np.ndarray) -> float:
    """
    Symmetric Hausdorff distance between two finite point sets.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) == 0 or len(b) == 0:
        raise DomainError("hausdorff distance needs two non-empty point sets")
    return float(max(directed_hausdorff(a, b)[0], directed_hausdorff(b, a)[0]))


def _log_pairs(records: Sequence[ErrorRecord], metric: str) -> tuple[np.ndarray, np.ndarray]:
    if len(records) < 2:
        raise InsufficientDataError(f"need at least two records to fit an order, got {len(records)}")
    hs, errs = [], []
    for record in records:
        value = record.metric(metric)
        if value is None or not value > 0.0:
            raise InsufficientDataError(f"{metric} error at h={record.h!r} is not positive ({value!r})")
        hs.append(record.h)
        errs.append(value)
    if len(set(hs)) < 2:
        raise InsufficientDataError("records need at least two distinct mesh sizes")
    return np.log(hs), np.log(errs)


def estimate_order(records: Sequence[ErrorRecord], metric: str = "linf") -> float:
    """
    Least-squares slope of `log(error)` against `log(h)`.

    :param records: Error records of a refinement study.
    :param metric: `linf` or `hausdorff`.
    :return: The fitted convergence order.
    """
    log_h, log_e = _log_pairs(records, metric)
    slope, _ = np.polyfit(log_h, log_e, 1)
    return float(slope)


def last_interval_order(records: Sequence[ErrorRecord], metric: str = "linf") -> float:
    """
    Slope between the two finest levels.
    """
    log_h, log_e = _log_pairs(records[-2:], metric)
    return float((log_e[1] - log_e[0]) / (log_h[1] - log_h[0]))
