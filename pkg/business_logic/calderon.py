"""Calderón-type operators R_σ, S⁰_σ, H_σ, S^∞_σ on step functions.

For σ = [p, q, m] and t > 0, with T = t^m:

    R_σ g(t)   = t^{-1/q} ∫_0^T g(s) s^{1/p - 1} ds
    S⁰_σ g(t)  = t^{-1/q} sup_{0 < s ≤ T} g(s) s^{1/p}
    H_σ g(t)   = t^{-1/q} ∫_T^∞ g(s) s^{1/p - 1} ds
    S^∞_σ g(t) = t^{-1/q} sup_{T ≤ s} g(s) s^{1/p}

R and S⁰ need p < ∞. For p = ∞ the conventions s^{1/p} = 1 and
s^{1/p - 1} = 1/s apply. Suprema over half-open pieces are right-end
limits. Everything is evaluated at the literal argument t; any dilation
constant c is the caller's business.
"""
import math
from typing import Callable, Dict

from errors import ParameterError
from models import SigmaTriple, StepFunction

OPERATORS = ("R", "S0", "H", "Sinf")

# Which end of (0, ∞) each operator models.
OPERATOR_SIDE: Dict[str, str] = {"R": "zero", "S0": "zero", "H": "infinity", "Sinf": "infinity"}


def _check_t(t: float):
    if not (0 < t < math.inf):
        raise ParameterError(f"operators are evaluated at t in (0, inf), got {t}")


def _check_finite_p(sigma: SigmaTriple, name: str):
    if math.isinf(sigma.p):
        raise ParameterError(f"{name} requires p < inf")


def _scale(sigma: SigmaTriple, t: float) -> float:
    return 1.0 if math.isinf(sigma.q) else t ** (-1.0 / sigma.q)


def _power(s: float, sigma: SigmaTriple) -> float:
    """s^{1/p}, equal to 1 when p = ∞."""
    return 1.0 if math.isinf(sigma.p) else s ** (1.0 / sigma.p)


def _segments(g: StepFunction):
    if g.domain_origin < 0:
        raise ParameterError("Calderón operators act on functions on (0, inf)")
    origin = g.domain_origin
    for start, end, piece in zip(g.starts, g.ends, g.pieces):
        if piece.value > 0:
            yield origin + start, origin + end, piece.value


def eval_R(sigma: SigmaTriple, g: StepFunction, t: float) -> float:
    """
    R_σ g(t) via the antiderivative p·s^{1/p} on each piece.

    Raises:
        ParameterError: If p = ∞ or t is not in (0, ∞)

    Example:
        >>> eval_R(SigmaTriple(1, 1, 1), StepFunction.indicator(1.0), 2.0)
        0.5
    """
    _check_finite_p(sigma, "R")
    _check_t(t)
    top = t ** sigma.m
    p = sigma.p
    terms = [v * p * (_power(min(b, top), sigma) - _power(a, sigma))
             for a, b, v in _segments(g) if a < top]
    return _scale(sigma, t) * math.fsum(terms)


def eval_S0(sigma: SigmaTriple, g: StepFunction, t: float) -> float:
    """S⁰_σ g(t); a piece starting at or below t^m contributes v·min(b, t^m)^{1/p}."""
    _check_finite_p(sigma, "S0")
    _check_t(t)
    top = t ** sigma.m
    best = max((v * _power(min(b, top), sigma) for a, b, v in _segments(g) if a <= top), default=0.0)
    return _scale(sigma, t) * best


def eval_H(sigma: SigmaTriple, g: StepFunction, t: float) -> float:
    """
    H_σ g(t); logarithmic antiderivative when p = ∞.

    g has bounded support, so the integral is always finite.
    """
    _check_t(t)
    bottom = t ** sigma.m
    terms = []
    for a, b, v in _segments(g):
        if b <= bottom:
            continue
        lo = max(a, bottom)
        if math.isinf(sigma.p):
            terms.append(v * math.log(b / lo))
        else:
            terms.append(v * sigma.p * (_power(b, sigma) - _power(lo, sigma)))
    return _scale(sigma, t) * math.fsum(terms)


def eval_Sinf(sigma: SigmaTriple, g: StepFunction, t: float) -> float:
    """S^∞_σ g(t); the supremum on a piece reaching past t^m is v·b^{1/p}."""
    _check_t(t)
    bottom = t ** sigma.m
    best = max((v * _power(b, sigma) for a, b, v in _segments(g) if b > bottom), default=0.0)
    return _scale(sigma, t) * best


EVALUATORS: Dict[str, Callable[[SigmaTriple, StepFunction, float], float]] = {
    "R": eval_R,
    "S0": eval_S0,
    "H": eval_H,
    "Sinf": eval_Sinf,
}


def evaluate(op: str, sigma: SigmaTriple, g: StepFunction, t: float) -> float:
    """Dispatch to the generic evaluator named by op."""
    try:
        evaluator = EVALUATORS[op]
    except KeyError as e:
        raise ParameterError(f"unknown Calderón operator {op!r}; use one of {', '.join(OPERATORS)}") from e
    return evaluator(sigma, g, t)


def char_closed_form(op: str, sigma: SigmaTriple, a: float, t: float) -> float:
    """
    Closed forms of T_σ(χ_(0,a))(t).

    R    → t^{-1/q}·p·min(a, t^m)^{1/p}
    S0   → t^{-1/q}·min(a, t^m)^{1/p}
    H    → t^{-1/q}·p·(a^{1/p} − min(a, t^m)^{1/p}),  or t^{-1/q}·ln(a / min(a, t^m)) for p = ∞
    Sinf → t^{-1/q}·a^{1/p}·[t^m < a]

    The arithmetic mirrors the generic evaluators so that both agree to
    the last bit on characteristic functions.

    Raises:
        ParameterError: For an unknown op, a ≤ 0, t ≤ 0, or p = ∞ with R/S0
    """
    if op not in OPERATORS:
        raise ParameterError(f"unknown Calderón operator {op!r}; use one of {', '.join(OPERATORS)}")
    if not (0 < a < math.inf):
        raise ParameterError(f"set measure must be positive and finite, got {a}")
    _check_t(t)
    scale = _scale(sigma, t)
    cut = min(a, t ** sigma.m)

    if op == "R":
        _check_finite_p(sigma, "R")
        return scale * (sigma.p * _power(cut, sigma))
    if op == "S0":
        _check_finite_p(sigma, "S0")
        return scale * _power(cut, sigma)
    if op == "H":
        if cut >= a:
            return scale * 0.0
        if math.isinf(sigma.p):
            return scale * math.log(a / cut)
        return scale * (sigma.p * (_power(a, sigma) - _power(cut, sigma)))
    return scale * (_power(a, sigma) if cut < a else 0.0)


def char_cell_upper_bound(op: str, sigma: SigmaTriple, a: float, c: float,
                          t_lo: float, t_hi: float) -> float:
    """
    Upper bound of t ↦ T_σ(χ_(0,a))(c·t) over the cell [t_lo, t_hi].

    Each closed form is a product of monotone factors: for R and S0 the
    factor t^{-1/q} decreases while min(a, (ct)^m)^{1/p} increases, so the
    bound pairs the first at t_lo with the second at t_hi. H and Sinf are
    nonincreasing in t and peak at t_lo.
    """
    if not (0 < t_lo <= t_hi):
        raise ParameterError(f"invalid cell [{t_lo}, {t_hi}]")
    if op in ("H", "Sinf"):
        return char_closed_form(op, sigma, a, c * t_lo)
    lo_value = char_closed_form(op, sigma, a, c * t_lo)
    if t_hi == t_lo:
        return lo_value
    # value at t_hi times the ratio of the decreasing factors
    hi_value = char_closed_form(op, sigma, a, c * t_hi)
    return hi_value * (_scale(sigma, c * t_lo) / _scale(sigma, c * t_hi))
