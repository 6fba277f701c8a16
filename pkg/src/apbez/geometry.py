"""
Planar vectors, cubic Bezier curves and the Hermite data they are built from.

Evaluation uses de Casteljau's algorithm written with the `(1 - t) * a + t * b` form of the interpolation step,
so `eval(0)` and `eval(1)` return the end control points bit for bit. Derivatives use the hodograph in power form.
"""
import functools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from apbez.errors import DomainError, InvalidMagnitudeError, NearVerticalTangentError

UNIT_TOLERANCE = 1e-12
VERTICAL_TOLERANCE = 1e-12


class Vec2(NamedTuple):
    """
    Immutable planar point or vector.
    """

    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other[0], self.y + other[1])

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other[0], self.y - other[1])

    def __mul__(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k: float) -> "Vec2":
        return Vec2(self.x / k, self.y / k)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other[0] + self.y * other[1]

    def cross(self, other: "Vec2") -> float:
        """
        Planar vector product `self.x * other.y - other.x * self.y`, twice the signed area of the spanned triangle.
        """
        return self.x * other[1] - other[0] * self.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def unit(self) -> "Vec2":
        n = self.norm()
        if n == 0.0:
            raise DomainError("cannot normalize the zero vector")
        return Vec2(self.x / n, self.y / n)

    def rotate(self, theta: float) -> "Vec2":
        """
        Rotates about the origin by `theta` radians (counterclockwise).
        """
        c, s = math.cos(theta), math.sin(theta)
        return Vec2(c * self.x - s * self.y, s * self.x + c * self.y)

    @staticmethod
    def of(values) -> "Vec2":
        """
        Builds a vector from any 2-sequence (numpy rows included), coercing to python floats.
        """
        return Vec2(float(values[0]), float(values[1]))


ORIGIN = Vec2(0.0, 0.0)


def cross(a: Vec2, b: Vec2) -> float:
    return a.x * b.y - b.x * a.y


def _lerp(a: Vec2, b: Vec2, t: float) -> Vec2:
    s = 1.0 - t
    return Vec2(s * a.x + t * b.x, s * a.y + t * b.y)


def _check_parameter(t: float):
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"curve parameter must lie in [0, 1], got {t}")


class CubicBezier(NamedTuple):
    """
    Cubic Bezier curve given by its four control points `A, C1, C2, D`.
    """

    p0: Vec2
    c1: Vec2
    c2: Vec2
    p3: Vec2

    def eval(self, t: float) -> Vec2:
        """
        Evaluates the curve with de Casteljau's algorithm.

        :param t: Curve parameter in [0, 1].
        :return: The point on the curve.
        """
        _check_parameter(t)
        a = _lerp(self.p0, self.c1, t)
        b = _lerp(self.c1, self.c2, t)
        c = _lerp(self.c2, self.p3, t)
        return _lerp(_lerp(a, b, t), _lerp(b, c, t), t)

    def points(self, ts) -> np.ndarray:
        """
        Vectorised :meth:`eval`.

        :param ts: Array of parameters in [0, 1].
        :return: Array of shape `(len(ts), 2)`.
        """
        ts = np.asarray(ts, dtype=float)
        if ts.size and (ts.min() < 0.0 or ts.max() > 1.0):
            raise DomainError("curve parameters must lie in [0, 1]")
        t = ts[:, None]
        s = 1.0 - t
        p = self.control_array()
        a = s * p[0] + t * p[1]
        b = s * p[1] + t * p[2]
        c = s * p[2] + t * p[3]
        ab = s * a + t * b
        bc = s * b + t * c
        return s * ab + t * bc

    def derivative(self, t: float, order: int = 1) -> Vec2:
        """
        Exact derivative of the given order.

        :param t: Curve parameter in [0, 1].
        :param order: 1, 2 or 3.
        :return: The derivative vector.
        """
        _check_parameter(t)
        p0, c1, c2, p3 = self
        if order == 1:
            s = 1.0 - t
            return (c1 - p0) * (3.0 * s * s) + (c2 - c1) * (6.0 * s * t) + (p3 - c2) * (3.0 * t * t)
        if order == 2:
            return (c2 - c1 * 2.0 + p0) * (6.0 * (1.0 - t)) + (p3 - c2 * 2.0 + c1) * (6.0 * t)
        if order == 3:
            return (p3 - c2 * 3.0 + c1 * 3.0 - p0) * 6.0
        raise DomainError(f"derivative order must be 1, 2 or 3, got {order}")

    def control_array(self) -> np.ndarray:
        return np.array(self, dtype=float)

    def map(self, func) -> "CubicBezier":
        """
        Applies a point map to every control point (valid for affine maps).
        """
        return CubicBezier(*(func(p) for p in self))


@dataclass(frozen=True)
class HermiteData:
    """
    An interpolation problem in the canonical shifted frame: the left endpoint sits at the origin, the tangent
    directions are unit vectors and `area` is the prescribed parametric area after the shift.
    """

    d: Vec2
    alpha: Vec2
    beta: Vec2
    area: float
    a: Vec2 = ORIGIN

    def __post_init__(self):
        if self.a != ORIGIN:
            raise DomainError(f"hermite data must be shifted so that A is the origin, got A={self.a}")
        for name in ("alpha", "beta"):
            n = getattr(self, name).norm()
            if abs(n - 1.0) > UNIT_TOLERANCE:
                raise DomainError(f"{name} must be a unit vector, got norm {n!r}")

    @classmethod
    def from_directions(cls, d: Vec2, alpha: Vec2, beta: Vec2, area: float) -> "HermiteData":
        """
        Normalizes the tangent directions before building the data.
        """
        return cls(Vec2.of(d), Vec2.of(alpha).unit(), Vec2.of(beta).unit(), float(area))

    @property
    def secant_area(self) -> float:
        """Signed area about the secant, `area - D1*D2/2`."""
        return self.area - self.d.x * self.d.y / 2.0


@dataclass(frozen=True)
class Frame:
    """
    Working frame of a segment: translate by `-origin`, then rotate by `theta`.
    """

    origin: Vec2 = ORIGIN
    theta: float = 0.0

    @property
    def rotated(self) -> bool:
        return self.theta != 0.0

    def to_local(self, p: Vec2) -> Vec2:
        return (p - self.origin).rotate(self.theta)

    def to_world(self, p: Vec2) -> Vec2:
        return p.rotate(-self.theta) + self.origin

    def vector_to_local(self, v: Vec2) -> Vec2:
        return v.rotate(self.theta)

    def vector_to_world(self, v: Vec2) -> Vec2:
        return v.rotate(-self.theta)

    def array_to_local(self, pts: np.ndarray) -> np.ndarray:
        return rotate_frame(np.asarray(pts, dtype=float) - np.asarray(self.origin), self.theta)

    def array_to_world(self, pts: np.ndarray) -> np.ndarray:
        return rotate_frame(np.asarray(pts, dtype=float), -self.theta) + np.asarray(self.origin)


def bezier_from_hermite(data: HermiteData, r1: float, r2: float) -> CubicBezier:
    """
    Builds the cubic with `B'(0) = r1 * alpha` and `B'(1) = r2 * beta` interpolating `A` and `D`.

    :param data: The interpolation problem.
    :param r1: Left tangent magnitude, strictly positive.
    :param r2: Right tangent magnitude, strictly positive.
    :return: The Bezier curve in the frame of `data`.
    """
    if not r1 > 0.0 or not r2 > 0.0:
        raise InvalidMagnitudeError(f"tangent magnitudes must be positive, got r1={r1!r}, r2={r2!r}")
    a, d = data.a, data.d
    return CubicBezier(a, a + data.alpha * (r1 / 3.0), d - data.beta * (r2 / 3.0), d)


def fourth_spatial_derivative(b: CubicBezier, t: float) -> float:
    """
    Fourth derivative of `y` with respect to `x` along the curve, i.e. the recursive spatial derivative
    `D^n = (d/dt D^(n-1)) / x'` evaluated in closed form for cubic components.

    :param b: The curve.
    :param t: Curve parameter in [0, 1].
    :return: The value of `d^4 y / dx^4` at `b(t)`.
    """
    x1, y1 = b.derivative(t, 1)
    x2, y2 = b.derivative(t, 2)
    x3, y3 = b.derivative(t, 3)

    scale = (b.p3 - b.p0).norm() or 1.0
    if abs(x1) <= VERTICAL_TOLERANCE * scale:
        raise NearVerticalTangentError(f"x'(t) vanishes at t={t} (x'={x1!r})")

    numerator = (x1 * (15.0 * x2 * x2 * y2 - 4.0 * x1 * x3 * y2 - 6.0 * y3 * x1 * x2)
                 - y1 * (15.0 * x2 ** 3 - 10.0 * x3 * x1 * x2))
    return numerator / x1 ** 7


def monotone_x(data: HermiteData, r1: float, r2: float) -> bool:
    """
    Checks that the first component of the interpolant is strictly increasing on [0, 1], i.e. that the curve is
    the graph of a function of x. The derivative of the first component is the quadratic
    `g(t) = t^2 (3R1 + 3R2 - 6h) + t (-4R1 - 2R2 + 6h) + R1` with `R1 = r1 * alpha.x`, `R2 = r2 * beta.x` and
    `h = D.x`; its minimum over [0, 1] is found in closed form.
    """
    h = data.d.x
    if not h > 0.0:
        return False
    r1_hat = r1 * data.alpha.x
    r2_hat = r2 * data.beta.x

    qa = 3.0 * r1_hat + 3.0 * r2_hat - 6.0 * h
    qb = -4.0 * r1_hat - 2.0 * r2_hat + 6.0 * h
    lowest = min(r1_hat, r2_hat)
    if qa > 0.0:
        vertex = -qb / (2.0 * qa)
        if 0.0 < vertex < 1.0:
            lowest = min(lowest, r1_hat - qb * qb / (4.0 * qa))
    return lowest > 0.0


@functools.singledispatch
def rotate_frame(item, theta: float):
    """
    Rigid rotation about the origin, applied to points, vectors, curves or whole interpolation problems.
    Hermite data keeps its signed area about the secant; the total area is recomputed for the rotated chord.
    """
    raise TypeError(f"cannot rotate {type(item).__name__}")


@rotate_frame.register
def _(item: Vec2, theta: float) -> Vec2:
    return item.rotate(theta)


@rotate_frame.register
def _(item: CubicBezier, theta: float) -> CubicBezier:
    return item.map(lambda p: p.rotate(theta))


@rotate_frame.register
def _(item: HermiteData, theta: float) -> HermiteData:
    d = item.d.rotate(theta)
    return HermiteData(d, item.alpha.rotate(theta), item.beta.rotate(theta), item.secant_area + d.x * d.y / 2.0)


@rotate_frame.register
def _(item: np.ndarray, theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    x, y = item[..., 0], item[..., 1]
    return np.stack((c * x - s * y, s * x + c * y), axis=-1)
