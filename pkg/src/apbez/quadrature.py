"""
Gauss-Legendre quadrature, fixed and adaptive. Integrands are vectorised callables taking a numpy array of
abscissae.
"""
import functools
import logging
from typing import Callable

import numpy as np
from scipy.special import roots_legendre

from apbez.errors import DomainError

logger = logging.getLogger(__name__)

PANEL_NODES = 15


@functools.lru_cache(maxsize=None)
def legendre_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Nodes and weights of the n-point rule on [-1, 1] (read-only arrays).
    """
    if n < 1:
        raise DomainError(f"a Gauss-Legendre rule needs at least one node, got {n}")
    nodes, weights = roots_legendre(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, n: int = 10) -> float:
    """
    Fixed n-node rule, exact for polynomials up to degree 2n - 1.
    """
    nodes, weights = legendre_rule(n)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return float(half * np.dot(weights, f(mid + half * nodes)))


def adaptive_gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                            rtol: float = 1e-14, max_depth: int = 50) -> float:
    """
    Integrates with 15-node panels. A panel is accepted once its value agrees with the sum of its two halves to
    `rtol` relative to the magnitude of the whole integral (measured on `|f|` so that cancelling integrands are
    not driven below round-off); otherwise both halves are refined further.

    :param f: Vectorised integrand.
    :param a: Lower bound.
    :param b: Upper bound.
    :param rtol: Relative tolerance.
    :param max_depth: Maximum number of bisections of any panel.
    :return: The integral.
    """
    if a == b:
        return 0.0

    whole = gauss_legendre(f, a, b, PANEL_NODES)
    magnitude = abs(gauss_legendre(lambda x: np.abs(f(x)), a, b, PANEL_NODES))
    threshold = rtol * max(magnitude, np.finfo(float).tiny)

    total = 0.0
    exhausted = 0
    stack = [(a, b, whole, 0)]
    while stack:
        lo, hi, estimate, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = gauss_legendre(f, lo, mid, PANEL_NODES)
        right = gauss_legendre(f, mid, hi, PANEL_NODES)
        refined = left + right
        if abs(refined - estimate) <= threshold or depth >= max_depth:
            exhausted += depth >= max_depth
            total += refined
        else:
            stack.append((mid, hi, right, depth + 1))
            stack.append((lo, mid, left, depth + 1))

    if exhausted:
        logger.warning("adaptive quadrature on [%r, %r] hit depth %d on %d panels", a, b, max_depth, exhausted)
    return total
