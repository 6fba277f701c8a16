"""
Reference curves with exact endpoint, tangent and area data, and the reduction of one segment of a curve to
an interpolation problem in its working frame.

A target is the curve `s -> (gamma(s), xi(s))`. Graph targets use `s = x`, so `gamma(x) = x` and `xi = f`.
All callables are vectorised over numpy arrays and return points with shape `(..., 2)`.
"""
import enum
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import Polynomial

from apbez.area import AreaSpec, shift_area
from apbez.errors import CatalogError, DegenerateSegmentError, DomainError
from apbez.geometry import Frame, HermiteData, Vec2, rotate_frame
from apbez.metrics import resample_by_arclength
from apbez.quadrature import adaptive_gauss_legendre

logger = logging.getLogger(__name__)

GRAPH_TABLE_SIZE = 257
NEWTON_STEPS = 4

ScalarFn = Callable[[np.ndarray], np.ndarray]
PointFn = Callable[[np.ndarray], np.ndarray]


class TargetKind(enum.Enum):
    GRAPH = "graph"
    PARAMETRIC = "parametric"


@dataclass(frozen=True)
class Target:
    """
    An immutable reference curve.

    `area_fn(s0, s1)` returns the exact parametric area `integral xi gamma' ds` over `[s0, s1]`; when it is None
    the area comes from adaptive Gauss-Legendre quadrature. Graph targets also carry `f` and its first two
    derivatives.
    """

    name: str
    kind: TargetKind
    position_fn: PointFn
    velocity_fn: PointFn
    domain: tuple[float, float]
    area_fn: Optional[Callable[[float, float], float]] = None
    f: Optional[ScalarFn] = None
    df: Optional[ScalarFn] = None
    d2f: Optional[ScalarFn] = None
    description: str = field(default="", compare=False)

    def position(self, s) -> np.ndarray:
        return self.position_fn(np.asarray(s, dtype=float))

    def velocity(self, s) -> np.ndarray:
        return self.velocity_fn(np.asarray(s, dtype=float))

    def point(self, s: float) -> Vec2:
        return Vec2.of(self.position(s))

    def tangents(self, s) -> np.ndarray:
        v = self.velocity(s)
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    def tangent(self, s: float) -> Vec2:
        """Unit tangent at `s`."""
        return Vec2.of(self.velocity(s)).unit()

    def segment_area(self, s0: float, s1: float) -> float:
        if self.area_fn is not None:
            return float(self.area_fn(s0, s1))

        def integrand(s):
            return self.position(s)[..., 1] * self.velocity(s)[..., 0]

        return adaptive_gauss_legendre(integrand, s0, s1)

    def contains(self, s0: float, s1: float) -> bool:
        lo, hi = self.domain
        slack = 1e-12 * max(1.0, hi - lo)
        return lo - slack <= s0 and s1 <= hi + slack


def graph_target(name: str, f: ScalarFn, df: ScalarFn, d2f: ScalarFn, antiderivative: Optional[ScalarFn],
                 domain=(0.0, 1.0), description: str = "") -> Target:
    """
    Target for the graph of `f` over `domain`. With an antiderivative `F` of `f` the segment area is
    `F(s1) - F(s0)`.
    """
    def position(x):
        return np.stack((x, f(x)), axis=-1)

    def velocity(x):
        return np.stack((np.ones_like(x), df(x)), axis=-1)

    area = None
    if antiderivative is not None:
        def area(s0, s1):
            return float(antiderivative(s1) - antiderivative(s0))

    return Target(name, TargetKind.GRAPH, position, velocity, (float(domain[0]), float(domain[1])), area,
                  f, df, d2f, description)


def parametric_target(name: str, gamma: ScalarFn, xi: ScalarFn, dgamma: ScalarFn, dxi: ScalarFn, domain,
                      antiderivative: Optional[ScalarFn] = None, description: str = "") -> Target:
    """
    Target for `(gamma(s), xi(s))`. `antiderivative` is a primitive of `xi * gamma'`, if known.
    """
    def position(s):
        return np.stack((gamma(s), xi(s)), axis=-1)

    def velocity(s):
        return np.stack((dgamma(s), dxi(s)), axis=-1)

    area = None
    if antiderivative is not None:
        def area(s0, s1):
            return float(antiderivative(s1) - antiderivative(s0))

    return Target(name, TargetKind.PARAMETRIC, position, velocity, (float(domain[0]), float(domain[1])), area,
                  description=description)


def poly_exp_target(name: str, p_coef, q_coef=(0.0,), domain=(0.0, 1.0), description: str = "") -> Target:
    """
    Graph target `f(x) = p(x) e^x + q(x)` with polynomial `p` and `q` (coefficients lowest degree first). The
    k-th derivative is `e^x sum_j C(k, j) p^(j) + q^(k)` and an antiderivative is
    `e^x sum_k (-1)^k p^(k) + Q`.
    """
    p = Polynomial(p_coef)
    q = Polynomial(q_coef)
    dp, d2p = p.deriv(1), p.deriv(2)
    dq, d2q = q.deriv(1), q.deriv(2)

    primitive = Polynomial([0.0])
    term = p
    for k in range(p.degree() + 1):
        primitive = primitive + term * (-1) ** k
        term = term.deriv()
    big_q = q.integ()

    return graph_target(
        name,
        f=lambda x: p(x) * np.exp(x) + q(x),
        df=lambda x: (p(x) + dp(x)) * np.exp(x) + dq(x),
        d2f=lambda x: (p(x) + 2.0 * dp(x) + d2p(x)) * np.exp(x) + d2q(x),
        antiderivative=lambda x: primitive(x) * np.exp(x) + big_q(x),
        domain=domain,
        description=description,
    )


def _circle() -> Target:
    return parametric_target(
        "circle", np.cos, np.sin, lambda s: -np.sin(s), np.cos, (0.0, math.pi),
        antiderivative=lambda s: np.sin(2.0 * s) / 4.0 - s / 2.0,
        description="upper unit semicircle (cos s, sin s), s in [0, pi]",
    )


def _vanishing() -> Target:
    return graph_target(
        "vanishing",
        f=lambda x: np.sin(x) + 3.0 * x ** 4 - 4.0 * x ** 3 + x,
        df=lambda x: np.cos(x) + 12.0 * x ** 3 - 12.0 * x ** 2 + 1.0,
        d2f=lambda x: -np.sin(x) + 36.0 * x ** 2 - 24.0 * x,
        antiderivative=lambda x: -np.cos(x) + 0.6 * x ** 5 - x ** 4 + 0.5 * x ** 2,
        description="sin x + 3x^4 - 4x^3 + x, zero curvature at x = 0",
    )


def _exp2i_primitive(g: Polynomial, s) -> np.ndarray:
    """
    Primitive of `g(s) e^(2is)` by repeated integration by parts: `e^(2is) sum_k (-1)^k g^(k)(s) / (2i)^(k+1)`.
    """
    s = np.asarray(s, dtype=float)
    total = np.zeros(s.shape, dtype=complex)
    term = g
    for k in range(g.degree() + 1):
        total = total + (-1) ** k * term(s) / (2j) ** (k + 1)
        term = term.deriv()
    return np.exp(2j * s) * total


def _cve() -> Target:
    # xi gamma' = p(t) sin 2t + q(t) (1 + cos 2t)
    p = Polynomial([0.0, -0.5, 0.0, 1.5])
    q = Polynomial([0.0, 0.5, -0.5, 0.0, 0.5])
    big_q = q.integ()
    return parametric_target(
        "cve",
        gamma=lambda t: (t ** 3 - t + 1.0) * np.sin(t),
        xi=lambda t: t * np.cos(t),
        dgamma=lambda t: (3.0 * t ** 2 - 1.0) * np.sin(t) + (t ** 3 - t + 1.0) * np.cos(t),
        dxi=lambda t: np.cos(t) - t * np.sin(t),
        domain=(0.0, 1.0),
        antiderivative=lambda t: big_q(t) + _exp2i_primitive(p, t).imag + _exp2i_primitive(q, t).real,
        description="((t^3 - t + 1) sin t, t cos t), t in [0, 1]",
    )


def _monomial(name: str, degree: int) -> Target:
    return graph_target(
        name,
        f=lambda x: x ** degree,
        df=lambda x: degree * x ** (degree - 1) if degree > 1 else np.ones_like(x),
        d2f=lambda x: degree * (degree - 1) * x ** (degree - 2) if degree > 1 else np.zeros_like(x),
        antiderivative=lambda x: x ** (degree + 1) / (degree + 1),
        description=f"x^{degree}" if degree > 1 else "x",
    )


_CATALOG: dict[str, Callable[[], Target]] = {
    "circle": _circle,
    "vanishing": _vanishing,
    "cve": _cve,
    "optimized": lambda: poly_exp_target("optimized", (0.0, 2.0, -6.0, 4.0),
                                         description="4x(x - 0.5)(x - 1) e^x"),
    "piecewise1": lambda: poly_exp_target("piecewise1", (1.0, 1.0), (-1.0,), description="(x + 1) e^x - 1"),
    "piecewise2": lambda: poly_exp_target("piecewise2", (0.0, 0.0, 1.0, -1.0), description="x^2 (1 - x) e^x"),
    "parabola": lambda: _monomial("parabola", 2),
    "line": lambda: _monomial("line", 1),
    "cubic": lambda: _monomial("cubic", 3),
}


def catalog_names() -> list[str]:
    return list(_CATALOG)


def make_builtin(name: str) -> Target:
    """
    Builds a catalog target by name (case-insensitive).

    :param name: One of :func:`catalog_names`.
    :return: The target.
    """
    try:
        return _CATALOG[name.strip().lower()]()
    except KeyError:
        raise CatalogError(f"unknown target \"{name}\", expected one of {', '.join(_CATALOG)}") from None


def rotate_target(target: Target, theta: float) -> Target:
    """
    The target rotated about the origin by `theta`, as a parametric curve with quadrature areas.
    """
    return Target(
        f"{target.name}@{theta!r}",
        TargetKind.PARAMETRIC,
        lambda s: rotate_frame(target.position(s), theta),
        lambda s: rotate_frame(target.velocity(s), theta),
        target.domain,
        description=f"{target.description} rotated by {theta!r}",
    )


@dataclass(frozen=True)
class SegmentProblem:
    """
    One segment of a target reduced to its chord frame. `data` is in local coordinates, `frame` maps them back.
    """

    data: HermiteData
    area: AreaSpec
    frame: Frame
    s0: float
    s1: float

    @property
    def h(self) -> float:
        return self.data.d.x

    def perturbed(self, amount: float) -> "SegmentProblem":
        return replace(self, area=self.area.perturbed(amount, self.data.d))


def near_vertical(target: Target, s0: float, s1: float, threshold: float) -> bool:
    """
    Whether a graph target has an end slope steeper than `threshold` on `[s0, s1]`.
    """
    if target.kind is not TargetKind.GRAPH:
        return False
    slopes = np.abs(target.df(np.array([s0, s1])))
    return bool(np.any(slopes > threshold))


def hermite_segment_data(target: Target, s0: float, s1: float) -> SegmentProblem:
    """
    Shifts the left endpoint of `[s0, s1]` to the origin and rotates the secant onto the positive x-axis, so the
    chord is `(h, 0)` with `h` its length whatever the kind or orientation of the target.

    :param target: The curve.
    :param s0: Start parameter.
    :param s1: End parameter.
    :return: The problem in its chord frame.
    """
    if not s0 < s1:
        raise DegenerateSegmentError(f"segment needs s0 < s1, got [{s0!r}, {s1!r}]")
    if not target.contains(s0, s1):
        raise DomainError(f"segment [{s0!r}, {s1!r}] leaves the domain {target.domain} of {target.name}")

    a = target.point(s0)
    end = target.point(s1)
    chord = end - a
    length = chord.norm()
    if length == 0.0:
        raise DegenerateSegmentError(f"segment [{s0!r}, {s1!r}] of {target.name} has a zero chord")

    c_total = shift_area(target.segment_area(s0, s1), a.y, a.x, end.x)
    c_secant = AreaSpec.from_total(c_total, chord).c_secant

    frame = Frame(a, -math.atan2(chord.y, chord.x))
    d = Vec2(length, 0.0)
    spec = AreaSpec.from_secant(c_secant, d)
    data = HermiteData(d, frame.vector_to_local(target.tangent(s0)), frame.vector_to_local(target.tangent(s1)),
                       spec.c_total)
    logger.debug("segment [%r, %r] of %s: h=%r, C_R=%r", s0, s1, target.name, length, c_secant)
    return SegmentProblem(data, spec, frame, float(s0), float(s1))


def frame_graph(target: Target, problem: SegmentProblem) -> ScalarFn:
    """
    The segment of the target as the graph of a function over the local x-axis of its chord frame. The local
    abscissa is inverted with a tabulated initial guess refined by Newton steps on the target's velocity.

    :raises DomainError: When the segment folds back over its chord.
    """
    frame = problem.frame
    s0, s1 = problem.s0, problem.s1
    table = np.linspace(s0, s1, GRAPH_TABLE_SIZE)
    xs = frame.array_to_local(target.position(table))[:, 0]
    if np.any(np.diff(xs) <= 0.0):
        raise DomainError(f"segment [{s0!r}, {s1!r}] of {target.name} is not a graph over its chord")

    def graph(x):
        x = np.asarray(x, dtype=float)
        s = np.interp(x, xs, table)
        with np.errstate(divide="ignore", invalid="ignore"):
            for _ in range(NEWTON_STEPS):
                local_x = frame.array_to_local(target.position(s))[..., 0]
                speed = rotate_frame(target.velocity(s), frame.theta)[..., 0]
                step = np.where(speed > 0.0, (local_x - x) / speed, 0.0)
                s = np.clip(s - step, s0, s1)
        return frame.array_to_local(target.position(s))[..., 1]

    return graph


def measurement_view(target: Target, problem: SegmentProblem) -> tuple[Frame, ScalarFn]:
    """
    Frame and graph function for L-infinity errors: graph targets are measured against `f` in their own axes
    (shifted to the segment start), parametric targets over the chord.

    :raises DomainError: When a parametric segment folds back over its chord.
    """
    if target.kind is TargetKind.GRAPH:
        frame = Frame(problem.frame.origin, 0.0)
        ox, oy = frame.origin
        f = target.f
        return frame, lambda x: f(np.asarray(x, dtype=float) + ox) - oy
    return problem.frame, frame_graph(target, problem)


def target_samples(target: Target, problem: SegmentProblem, n: int) -> np.ndarray:
    """
    `n` points of the segment in its chord frame, evenly spaced in arclength.
    """
    return problem.frame.array_to_local(resample_by_arclength(target.position, problem.s0, problem.s1, n))
