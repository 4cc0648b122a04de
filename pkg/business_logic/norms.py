"""Lorentz quasi-norms, fundamental functions and Λ_φ norms of step functions.

Every norm here is evaluated in closed form: on each step of f* (or of f_*)
the defining integral is a power integral, so no quadrature is involved.
+∞ is a legitimate return value, although it cannot occur for step inputs
with p < ∞.
"""
import logging
import math
from typing import Sequence, Tuple

import numpy as np
from scipy import optimize

from business_logic.core_measure import distribution_function, layer_cake, rearrange
from errors import ParameterError
from models import LorentzIndex, PhiFunction, StepFunction

logger = logging.getLogger(__name__)


def _as_index(idx) -> LorentzIndex:
    if isinstance(idx, LorentzIndex):
        return idx
    p, q = idx
    return LorentzIndex(p, q)


def lorentz_norm_dist(f: StepFunction, idx: LorentzIndex) -> float:
    """
    Lorentz functional in distribution-function form.

    ‖f‖_{p,q} = (p ∫₀^∞ [s f_*(s)^{1/p}]^q ds/s)^{1/q}, with the usual sup
    for q = ∞ and ‖f‖_{∞,∞} = sup f. f_* equals M_k on [v_{k+1}, v_k), so
    each step contributes M_k^{q/p} (v_k^q − v_{k+1}^q) / q.

    Args:
        f: Step function
        idx: Lorentz index (a (p, q) tuple is accepted too)

    Returns:
        The quasi-norm, 0 for the zero function

    Example:
        >>> f = StepFunction.from_pairs([(1, 2), (3, 1)])
        >>> round(lorentz_norm_dist(f, LorentzIndex(2, 2)) ** 2, 12)
        7.0
    """
    idx = _as_index(idx)
    dist = distribution_function(f)
    v, m = dist.thresholds, dist.measures
    if not v:
        return 0.0
    p, q = idx.p, idx.q
    if math.isinf(p):
        return v[0]
    if math.isinf(q):
        return max(vk * mk ** (1.0 / p) for vk, mk in zip(v, m))
    lower = list(v[1:]) + [0.0]
    total = math.fsum(mk ** (q / p) * (vk ** q - vn ** q) for vk, vn, mk in zip(v, lower, m))
    return (p / q * total) ** (1.0 / q)


def lorentz_norm_rearr(f: StepFunction, idx: LorentzIndex) -> float:
    """
    Lorentz functional in rearrangement form ‖t^{1/p − 1/q} f*(t)‖_{L^q(0,∞)}.

    On the k-th step of f*, [t_{k−1}, t_k) with value v_k, the integral of
    t^{q/p − 1} v_k^q is v_k^q (p/q)(t_k^{q/p} − t_{k−1}^{q/p}). For q = ∞
    the supremum on a half-open step is the limit at its right end,
    v_k t_k^{1/p}.
    """
    idx = _as_index(idx)
    r = rearrange(f)
    return nonincreasing_norm(r.values, r.ends, idx)


def nonincreasing_norm(values: Sequence[float], ends: Sequence[float], idx: LorentzIndex) -> float:
    """Rearrangement-form norm of Σ v_k χ_[t_{k−1}, t_k) with v nonincreasing."""
    if not values:
        return 0.0
    p, q = idx.p, idx.q
    if math.isinf(p):
        return float(values[0])
    if math.isinf(q):
        return max(v * t ** (1.0 / p) for v, t in zip(values, ends))
    e = q / p
    starts = [0.0] + list(ends[:-1])
    total = math.fsum(v ** q * (t1 ** e - t0 ** e) for v, t0, t1 in zip(values, starts, ends))
    return (p / q * total) ** (1.0 / q)


def fundamental_constant(idx: LorentzIndex) -> float:
    """Constant c in φ_{L^{p,q}}(t) = c·t^{1/p}: (p/q)^{1/q}, or 1 when q = ∞."""
    idx = _as_index(idx)
    if math.isinf(idx.q):
        return 1.0
    return (idx.p / idx.q) ** (1.0 / idx.q)


def fundamental_function(idx: LorentzIndex, t: float) -> float:
    """
    Fundamental function φ(t) = ‖χ_E‖_{p,q} for μ(E) = t.

    Computed through the rearrangement form, which yields
    (p/q)^{1/q} t^{1/p} (t^{1/p} for q = ∞).

    Raises:
        ParameterError: If t is negative
    """
    idx = _as_index(idx)
    if not t >= 0:
        raise ParameterError(f"fundamental function needs t ≥ 0, got {t}")
    return lorentz_norm_rearr(StepFunction.indicator(t), idx)


def lambda_phi_norm(f: StepFunction, phi: PhiFunction) -> float:
    """
    Norm in the endpoint space Λ_φ, ∫ f* dφ.

    For a step function this Stieltjes integral is the layer sum
    Σ α_k φ(μ(E_k)) over layer_cake(f).

    Example:
        >>> f = StepFunction.from_pairs([(2, 3), (3, 1)])
        >>> lambda_phi_norm(f, PhiFunction.power(1.0))
        9.0
    """
    layers = layer_cake(f)
    return math.fsum(a * phi(c) for a, c in zip(layers.alphas, layers.cum_measures))


def lambda_lorentz_ratio(f: StepFunction, p: float) -> float:
    """
    Ratio ‖f‖_{p,1} / ‖f‖_{Λ_φ} for φ(t) = t^{1/p}.

    The layer form of ‖f‖_{p,1} is p Σ α_k μ(E_k)^{1/p}, so the ratio is
    exactly p for every nonzero step function and p ≥ 1.

    Raises:
        ParameterError: For the zero function or p < 1
    """
    if not p >= 1:
        raise ParameterError(f"t^(1/p) is concave only for p ≥ 1, got {p}")
    denominator = lambda_phi_norm(f, PhiFunction.power(1.0 / p))
    if denominator == 0:
        raise ParameterError("ratio undefined for the zero function")
    return lorentz_norm_rearr(f, LorentzIndex(p, 1.0)) / denominator


def embedding_ratio(f: StepFunction, p: float, q: float, r: float) -> float:
    """
    Embedding ratio ‖f‖_{p,r} / ‖f‖_{p,q} for q ≤ r.

    The ratio is invariant under scaling and dilation of f; 0/0 gives 0.

    Raises:
        ParameterError: If q > r or an index is invalid
    """
    if q > r:
        raise ParameterError(f"embedding needs q ≤ r, got q={q}, r={r}")
    top = lorentz_norm_rearr(f, LorentzIndex(p, r))
    if top == 0:
        return 0.0
    return top / lorentz_norm_rearr(f, LorentzIndex(p, q))


def two_piece_embedding_bound(p: float, q: float, r: float,
                              h_points: int = 41, length_points: int = 81) -> Tuple[float, StepFunction]:
    """
    Maximize embedding_ratio over two-piece nonincreasing step functions.

    By scaling and dilation invariance it is enough to look at
    χ_[0,1) + h·χ_[1, 1+ℓ) with h in [0, 1] and ℓ > 0. A grid over
    (h, log ℓ) picks a start, then Nelder–Mead refines it.

    Args:
        p, q, r: Lorentz parameters with q ≤ r
        h_points: Grid points for the second height
        length_points: Grid points for log10 ℓ in [-4, 4]

    Returns:
        (best ratio, maximizing step function)
    """
    if q > r:
        raise ParameterError(f"embedding needs q ≤ r, got q={q}, r={r}")

    def build(h: float, log_len: float) -> StepFunction:
        h = min(max(h, 0.0), 1.0)
        return StepFunction.from_pairs([(1.0, 1.0), (10.0 ** log_len, h)])

    def objective(x: np.ndarray) -> float:
        return -embedding_ratio(build(float(x[0]), float(np.clip(x[1], -6, 6))), p, q, r)

    best_val, best_x = -math.inf, (0.0, 0.0)
    for h in np.linspace(0.0, 1.0, h_points):
        for log_len in np.linspace(-4.0, 4.0, length_points):
            val = -objective(np.array([h, log_len]))
            if val > best_val:
                best_val, best_x = val, (float(h), float(log_len))

    result = optimize.minimize(objective, np.array(best_x), method="Nelder-Mead",
                               options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000})
    refined = -float(result.fun)
    logger.debug("two-piece embedding (p=%s, q=%s, r=%s): grid %.15g, refined %.15g",
                 p, q, r, best_val, refined)
    if refined > best_val:
        x = result.x
        return refined, build(float(x[0]), float(np.clip(x[1], -6, 6)))
    return best_val, build(*best_x)
