"""
Signed area of the Hermite family and the closed-form solves that enforce it.

For data shifted so that A is the origin the parametric area of the cubic is

    r1 r2 / 60 (alpha x beta) + r1 / 10 (D x alpha) + r2 / 10 (beta x D) + D1 D2 / 2

which is bilinear in the magnitudes, so fixing one of them leaves a linear equation for the other.
"""
import enum
import logging
from dataclasses import dataclass

from apbez.errors import DegenerateDenominatorError, InfeasibleMagnitudeError
from apbez.geometry import HermiteData, Vec2, cross

logger = logging.getLogger(__name__)

DENOMINATOR_TOLERANCE = 1e-12
SIGN_TOLERANCE = 1e-14
ZERO_AREA_TOLERANCE = 1e-10


@dataclass(frozen=True)
class AreaSpec:
    """
    Prescribed area of a segment: `c_total` is the parametric area in the shifted frame and `c_secant` the
    signed area about the chord.
    """

    c_total: float
    c_secant: float

    @classmethod
    def from_total(cls, c_total: float, d: Vec2) -> "AreaSpec":
        return cls(c_total, c_total - d.x * d.y / 2.0)

    @classmethod
    def from_secant(cls, c_secant: float, d: Vec2) -> "AreaSpec":
        return cls(c_secant + d.x * d.y / 2.0, c_secant)

    @classmethod
    def for_data(cls, data: HermiteData) -> "AreaSpec":
        return cls.from_total(data.area, data.d)

    def perturbed(self, amount: float, d: Vec2) -> "AreaSpec":
        """
        The same prescription with `amount` added to the total area.
        """
        return AreaSpec.from_total(self.c_total + amount, d)


class Classification(enum.Enum):
    MIXED_SIGNS = "MixedSigns"
    ALL_NON_NEGATIVE = "AllNonNegative"
    ALL_NON_POSITIVE = "AllNonPositive"
    ALL_ZERO = "AllZero"


@dataclass(frozen=True)
class FeasibilityReport:
    """
    Signs of the three area coefficients and whether the prescribed secant area can be met with positive
    magnitudes.
    """

    coef_ab: float
    coef_da: float
    coef_bd: float
    classification: Classification
    compatible: bool
    c_secant: float

    def describe(self) -> str:
        state = "compatible" if self.compatible else "incompatible"
        return (f"alpha x beta = {self.coef_ab!r}, D x alpha = {self.coef_da!r}, beta x D = {self.coef_bd!r}: "
                f"{self.classification.value}, {state} with C_R = {self.c_secant!r}")


def coefficients(data: HermiteData) -> tuple[float, float, float]:
    """
    :return: `(alpha x beta, D x alpha, beta x D)`.
    """
    return cross(data.alpha, data.beta), cross(data.d, data.alpha), cross(data.beta, data.d)


def bezier_signed_area(data: HermiteData, r1: float, r2: float) -> float:
    """
    Closed form of `integral_0^1 B2(t) B1'(t) dt` for the interpolant with magnitudes `r1`, `r2`.
    """
    ab, da, bd = coefficients(data)
    d = data.d
    return r1 * r2 / 60.0 * ab + r1 / 10.0 * da + r2 / 10.0 * bd + d.x * d.y / 2.0


def shift_area(raw_area: float, y0: float, gamma_s0: float, gamma_s1: float) -> float:
    """
    Area after moving the left endpoint to the origin. Horizontal shifts leave the area unchanged, a vertical
    shift by `y0` removes the rectangle `y0 * (gamma(s1) - gamma(s0))`.
    """
    return raw_area - y0 * (gamma_s1 - gamma_s0)


def _denominator_tolerance(data: HermiteData) -> float:
    # both denominators are linear in length once the tangents are unit vectors
    return DENOMINATOR_TOLERANCE * data.d.norm()


def _checked_magnitude(name: str, numerator: float, denominator: float, data: HermiteData) -> float:
    if not abs(denominator) > _denominator_tolerance(data):
        raise DegenerateDenominatorError(f"area solve for {name} has a vanishing denominator ({denominator!r})")
    value = numerator / denominator
    if not value > 0.0:
        raise InfeasibleMagnitudeError(f"area solve gives non-positive {name}={value!r}")
    return value


def solve_r2(data: HermiteData, spec: AreaSpec, r1: float) -> float:
    """
    Right magnitude meeting the area prescription for a given left magnitude:
    `r2 = 6 (10 C_R - r1 (D x alpha)) / (r1 (alpha x beta) + 6 (beta x D))`.
    """
    ab, da, bd = coefficients(data)
    return _checked_magnitude("r2", 6.0 * (10.0 * spec.c_secant - r1 * da), r1 * ab + 6.0 * bd, data)


def solve_r1(data: HermiteData, spec: AreaSpec, r2: float) -> float:
    """
    Left magnitude meeting the area prescription for a given right magnitude:
    `r1 = 6 (10 C_R - r2 (beta x D)) / (r2 (alpha x beta) + 6 (D x alpha))`.
    """
    ab, da, bd = coefficients(data)
    return _checked_magnitude("r1", 6.0 * (10.0 * spec.c_secant - r2 * bd), r2 * ab + 6.0 * da, data)


def p_avg(data: HermiteData, spec: AreaSpec, h: float) -> float:
    """
    Default family parameter: the average of `r1 = h` and the `r1` solving the area equation with `r2 = h`,
    expressed as `P` in `r1 = h + P h^3`.

    :param data: The interpolation problem in its chord frame.
    :param spec: The prescribed area.
    :param h: Chord length.
    :return: The parameter `P`.
    """
    r1_hat = solve_r1(data, spec, h)
    return (0.5 * (h + r1_hat) - h) / h ** 3


def solve_denominators(data: HermiteData, h: float) -> tuple[float, float]:
    """
    Denominators of :func:`solve_r2` and :func:`solve_r1` with the given magnitude set to `h`. When the
    curvature changes sign a quarter of the way from one end, the matching denominator vanishes together with
    its numerator.

    :return: `(h (alpha x beta) + 6 (beta x D), h (alpha x beta) + 6 (D x alpha))`.
    """
    ab, da, bd = coefficients(data)
    return h * ab + 6.0 * bd, h * ab + 6.0 * da


def _sign(value: float, tolerance: float) -> int:
    if abs(value) <= tolerance:
        return 0
    return 1 if value > 0.0 else -1


def classify_feasibility(data: HermiteData, spec: AreaSpec) -> FeasibilityReport:
    """
    Decides whether positive magnitudes can produce the prescribed secant area. The left side of the area
    constraint tends to zero with the magnitudes and only takes the signs of its coefficients, so a positive
    area needs a positive coefficient, a negative one a negative coefficient, and a zero area mixed signs (or
    no coefficients at all).
    """
    ab, da, bd = coefficients(data)
    length = data.d.norm()
    signs = [_sign(ab, SIGN_TOLERANCE), _sign(da, SIGN_TOLERANCE * length), _sign(bd, SIGN_TOLERANCE * length)]
    c_r = spec.c_secant
    area_sign = _sign(c_r, ZERO_AREA_TOLERANCE * length * length)

    if 1 in signs and -1 in signs:
        classification, compatible = Classification.MIXED_SIGNS, True
    elif 1 in signs:
        classification, compatible = Classification.ALL_NON_NEGATIVE, area_sign > 0
    elif -1 in signs:
        classification, compatible = Classification.ALL_NON_POSITIVE, area_sign < 0
    else:
        classification, compatible = Classification.ALL_ZERO, area_sign == 0

    report = FeasibilityReport(ab, da, bd, classification, compatible, c_r)
    if not compatible:
        logger.debug("infeasible area data: %s", report.describe())
    return report


def area_residual(data: HermiteData, spec: AreaSpec, r1: float, r2: float) -> float:
    """
    Signed difference between the interpolant's area and the prescription.
    """
    return bezier_signed_area(data, r1, r2) - spec.c_total


def relative_area_error(data: HermiteData, spec: AreaSpec, r1: float, r2: float) -> float:
    return abs(area_residual(data, spec, r1, r2)) / max(1.0, abs(spec.c_total))
