"""Adaptive composite Gauss–Legendre quadrature.

Intervals are bisected until the two-half estimate agrees with the
whole-interval estimate, either relative to the panel itself or within
an equal share of the coarse global estimate. The share does not shrink
with the panel, so integrable endpoint singularities converge.
"""
import logging
import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from config import config
from errors import NumericError

logger = logging.getLogger(__name__)


def gauss_rule(func: Callable[[float], float], a: float, b: float,
               nodes: np.ndarray, weights: np.ndarray) -> float:
    """Single Gauss–Legendre panel on [a, b]."""
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * math.fsum(w * func(mid + half * x) for x, w in zip(nodes, weights))


def adaptive_gauss(func: Callable[[float], float], lo: float, hi: float,
                   rel_tol: Optional[float] = None, max_levels: Optional[int] = None,
                   order: Optional[int] = None) -> float:
    """
    Integrate func over [lo, hi] by adaptive bisection.

    Args:
        func: Scalar integrand, evaluated only at interior Gauss nodes
        lo, hi: Finite interval, lo ≤ hi
        rel_tol: Target relative error (config.quadrature_rel_tol by default)
        max_levels: Maximum bisection depth (config.quadrature_max_levels)
        order: Points per panel (config.gauss_order)

    Returns:
        Integral estimate

    Raises:
        NumericError: If some panel still fails the test at max_levels
    """
    rel_tol = config.quadrature_rel_tol if rel_tol is None else rel_tol
    max_levels = config.quadrature_max_levels if max_levels is None else max_levels
    order = config.gauss_order if order is None else order
    if hi <= lo:
        return 0.0

    nodes, weights = leggauss(order)
    width = hi - lo

    # coarse global estimate sets the absolute scale
    panels = 16
    edges = [lo + width * k / panels for k in range(panels + 1)]
    pieces = [gauss_rule(func, a, b, nodes, weights) for a, b in zip(edges, edges[1:])]
    scale = abs(math.fsum(pieces))
    if scale == 0.0:
        scale = math.fsum(abs(v) for v in pieces)
    floor = rel_tol * scale / panels

    accepted: List[float] = []
    stack: List[Tuple[float, float, float, int]] = [
        (a, b, v, 0) for a, b, v in zip(edges, edges[1:], pieces)
    ]
    deepest = 0
    while stack:
        a, b, whole, level = stack.pop()
        m = 0.5 * (a + b)
        left = gauss_rule(func, a, m, nodes, weights)
        right = gauss_rule(func, m, b, nodes, weights)
        pair = left + right
        err = abs(pair - whole)
        if err <= max(rel_tol * abs(pair), floor) or scale == 0.0:
            accepted.append(pair)
            deepest = max(deepest, level)
            continue
        if level + 1 >= max_levels:
            raise NumericError(
                "adaptive quadrature did not converge",
                {"interval": (a, b), "level": level + 1, "error": err, "estimate": pair},
            )
        stack.append((a, m, left, level + 1))
        stack.append((m, b, right, level + 1))

    total = math.fsum(accepted)
    logger.debug("adaptive_gauss on [%g, %g]: %d panels, depth %d", lo, hi, len(accepted), deepest)
    return total
