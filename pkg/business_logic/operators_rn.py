"""Concrete operators on ℝⁿ: Riesz potential, maximal operators, Hilbert transform.

Inputs are radial step profiles (n = 1, 2, 3) or, for the one-dimensional
operators, finite interval unions. Outputs are rearranged through
``rearrange_radial`` or, for radially nonincreasing outputs, through the
substitution t = ω_n r^n, and measured with ``target_norm``.

Conventions:
    riesz    I_γ f(x) = ∫ f(y) |x − y|^{γ−n} dy  (times c_γ behind a flag)
    maximal  M_α f(x) = sup_r r^{α−1} ∫_{x−r}^{x+r} |f|     (n = 1)
    hl       (2r)^{-1} ∫_{x−r}^{x+r} |f|, i.e. M_0 / 2       (n = 1)
    hilbert  H f(x) = (1/π) p.v. ∫ f(y) / (x − y) dy        (n = 1)
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate, optimize, special

from business_logic.core_measure import rearrange
from business_logic.quadrature import adaptive_gauss
from config import config
from errors import ConfigurationError, ParameterError, SingularPointError
from models import UNIT_BALL_VOLUME, IntervalUnion, LorentzIndex, Piece, RadialFunction, StepFunction

logger = logging.getLogger(__name__)

OPERATOR_KINDS = ("riesz", "maximal", "hl", "hilbert")


def riesz_constant(n: int, gamma: float) -> float:
    """c_γ = π^{n/2} 2^γ Γ(γ/2) / Γ((n−γ)/2)."""
    return math.pi ** (n / 2) * 2.0 ** gamma * special.gamma(gamma / 2) / special.gamma((n - gamma) / 2)


def _odd_power(u: float, gamma: float) -> float:
    """Antiderivative of |u|^{γ−1}: sign(u)|u|^γ / γ."""
    return math.copysign(abs(u) ** gamma, u) / gamma


def _sphere_average(r: float, rho: float, d: float, gamma: float) -> float:
    """Mean of |x − y|^{γ−3} over the sphere |y| = rho, |x| = r, with d = |r − rho| given exactly."""
    big, small = max(r, rho), min(r, rho)
    if small == 0:
        return big ** (gamma - 3)
    s = small / big
    kappa = gamma - 1
    if kappa == 0:
        shape = math.atanh(s) / s if s < 0.5 else 0.5 * math.log((big + small) / d) / s
    elif s < 0.5:
        shape = (math.expm1(kappa * math.log1p(s)) - math.expm1(kappa * math.log1p(-s))) / (2 * s * kappa)
    else:
        shape = ((1 + s) ** kappa - (d / big) ** kappa) / (2 * s * kappa)
    return big ** (kappa - 2) * shape


def _circle_average(r: float, rho: float, d: float, gamma: float) -> float:
    """Mean of |x − y|^{γ−2} over the circle |y| = rho, |x| = r, with d = |r − rho| given exactly."""
    big, small = max(r, rho), min(r, rho)
    beta = 2 - gamma
    if small == 0:
        return big ** (-beta)
    lam = beta / 2
    s = small / big
    if s * s <= 0.5:
        return big ** (-beta) * float(special.hyp2f1(lam, lam, 1.0, s * s))
    # connection formula around z = 1, in w = 1 − s²
    w = (d / big) * (2 - d / big)
    if gamma == 1.0:
        return (2 / math.pi) * float(special.ellipkm1(w)) / big
    kappa = gamma - 1
    regular = special.gamma(kappa) / special.gamma(1 - lam) ** 2 * special.hyp2f1(lam, lam, 1 - kappa, w)
    singular = (w ** kappa * special.gamma(-kappa) / special.gamma(lam) ** 2
                * special.hyp2f1(1 - lam, 1 - lam, 1 + kappa, w))
    return big ** (-beta) * float(regular + singular)


def _shell_integral(n: int, gamma: float, r: float, lo: float, hi: float) -> float:
    """∫_{lo}^{hi} A_n(r, ρ) n ω_n ρ^{n−1} dρ for an interval not straddling r."""
    average = _circle_average if n == 2 else _sphere_average
    area = n * UNIT_BALL_VOLUME[n]
    k = max(2, math.ceil(2 / gamma))
    if r <= lo:
        gap, sign, anchor = lo - r, 1.0, lo
    else:
        gap, sign, anchor = r - hi, -1.0, hi

    def integrand(u: float) -> float:
        offset = u ** k
        rho = anchor + sign * offset
        return average(r, rho, gap + offset, gamma) * area * rho ** (n - 1) * k * u ** (k - 1)

    return adaptive_gauss(integrand, 0.0, (hi - lo) ** (1.0 / k))


def riesz_radial(gamma: float, f: RadialFunction, x_radius: float,
                 normalized: bool = False) -> float:
    """
    Riesz potential I_γ f(x) of a radial step function at |x| = x_radius.

    n = 1 is integrated in closed form. At the origin every dimension has
    the closed form Σ v n ω_n (b^γ − a^γ) / γ. Otherwise the angular integral
    is elementary (n = 3) or hypergeometric (n = 2), and the radial integral
    runs through ``adaptive_gauss`` after the substitution
    |ρ − r| = u^k, k = max(2, ⌈2/γ⌉), which makes the integrand bounded
    at the kernel singularity.

    Args:
        gamma: Order, 0 < γ < n
        f: Radial input
        x_radius: |x| ≥ 0
        normalized: Multiply by c_γ

    Returns:
        I_γ f(x)

    Raises:
        ParameterError: If γ is out of range or x_radius is invalid
        NumericError: If the radial quadrature does not converge
    """
    n = f.n
    if not (0 < gamma < n):
        raise ParameterError(f"Riesz order must lie in (0, {n}), got {gamma}")
    if not (0 <= x_radius < math.inf):
        raise ParameterError(f"radius must be finite and ≥ 0, got {x_radius}")
    profile = f.profile
    segments = [(a, b, p.value) for a, b, p in zip(profile.starts, profile.ends, profile.pieces) if p.value > 0]
    if not segments:
        return 0.0

    x = x_radius
    terms: List[float] = []
    if n == 1:
        for a, b, v in segments:
            terms.append(v * (_odd_power(b - x, gamma) - _odd_power(a - x, gamma)
                              + _odd_power(b + x, gamma) - _odd_power(a + x, gamma)))
    elif x == 0:
        area = n * UNIT_BALL_VOLUME[n]
        for a, b, v in segments:
            terms.append(v * area * (b ** gamma - a ** gamma) / gamma)
    else:
        for a, b, v in segments:
            if a < x < b:
                terms.append(v * (_shell_integral(n, gamma, x, a, x) + _shell_integral(n, gamma, x, x, b)))
            else:
                terms.append(v * _shell_integral(n, gamma, x, a, b))

    value = math.fsum(terms)
    if normalized:
        value *= riesz_constant(n, gamma)
    return value


def _as_intervals(f: Union[IntervalUnion, RadialFunction]) -> IntervalUnion:
    if isinstance(f, RadialFunction):
        return IntervalUnion.from_radial(f)
    return f


def maximal_1d(alpha: float, f: Union[IntervalUnion, RadialFunction], x: float) -> float:
    """
    Fractional maximal function sup_{r>0} r^{α−1} ∫_{x−r}^{x+r} |f| on ℝ.

    F(r) = ∫_{x−r}^{x+r} |f| is piecewise linear with breakpoints at the
    distances from x to the interval endpoints. On a linear stretch
    F = A + Br the objective r^{α−1}(A + Br) has derivative of the sign of
    (α−1)A + αBr, which turns from negative to positive at most once, so
    each stretch peaks at an end. The candidates are the breakpoints and the
    r → 0 limit (|f|(x−) + |f|(x+) when α = 0, zero otherwise).

    Raises:
        ParameterError: If α is not in [0, 1)
    """
    if not (0 <= alpha < 1):
        raise ParameterError(f"maximal order must lie in [0, 1), got {alpha}")
    u = _as_intervals(f)
    pieces = [(a, b, abs(c)) for a, b, c in u.intervals if c != 0]
    if not pieces:
        return 0.0

    def mass(r: float) -> float:
        return math.fsum(c * max(0.0, min(b, x + r) - max(a, x - r)) for a, b, c in pieces)

    best = 0.0
    if alpha == 0:
        right = sum(c for a, b, c in pieces if a <= x < b)
        left = sum(c for a, b, c in pieces if a < x <= b)
        best = right + left
    radii = sorted({abs(x - e) for a, b, _ in pieces for e in (a, b)} - {0.0})
    for r in radii:
        best = max(best, r ** (alpha - 1) * mass(r))
    return best


def hl_maximal_1d(f: Union[IntervalUnion, RadialFunction], x: float) -> float:
    """Hardy–Littlewood maximal function with the (2r)^{-1} normalization."""
    return maximal_1d(0.0, f, x) / 2


def hilbert_char(u: Union[IntervalUnion, RadialFunction], x: float) -> float:
    """
    Hilbert transform (1/π) Σ c_i ln|(x − a_i)/(x − b_i)| of an interval union.

    Raises:
        SingularPointError: If x is an interval endpoint

    Example:
        >>> round(hilbert_char(IntervalUnion.single(-1, 1), 2.0) * math.pi, 12) == round(math.log(3), 12)
        True
    """
    u = _as_intervals(u)
    for a, b, _ in u.intervals:
        if x == a or x == b:
            raise SingularPointError(f"Hilbert transform is singular at the endpoint {x}")
    return math.fsum(c * math.log(abs((x - a) / (x - b))) for a, b, c in u.intervals) / math.pi


def hilbert_quadrature(u: IntervalUnion, x: float) -> float:
    """Principal-value quadrature of H u(x) with QUADPACK's Cauchy weight."""
    total = []
    for a, b, c in u.intervals:
        if x == a or x == b:
            raise SingularPointError(f"Hilbert transform is singular at the endpoint {x}")
        pv, _ = integrate.quad(lambda y, c=c: c, a, b, weight="cauchy", wvar=x,
                               epsabs=1e-13, epsrel=1e-12)
        total.append(-pv)
    return math.fsum(total) / math.pi


def hilbert_ball_rearranged(measure: float, t: float, height: float = 1.0) -> float:
    """(|H χ_I|)*(t) = asinh(2|I|/t)/π for a centered interval I of the given length."""
    if t <= 0:
        raise ParameterError(f"rearrangement argument must be positive, got {t}")
    return height * math.asinh(2 * measure / t) / math.pi


def rearrange_radial(f: RadialFunction) -> StepFunction:
    """
    Nonincreasing rearrangement of a radial step function on ℝⁿ.

    Each profile piece [r0, r1) is a shell of measure ω_n (r1^n − r0^n).
    For a nonincreasing profile the shells are already in order and the
    result is the substitution t = ω_n r^n; otherwise the shells are
    sorted by value, which is exact for step profiles.
    """
    omega, n = f.omega, f.n
    profile = f.profile
    shells = tuple(
        Piece(omega * (r1 ** n - r0 ** n), p.value)
        for r0, r1, p in zip(profile.starts, profile.ends, profile.pieces)
    )
    if not profile.is_nonincreasing():
        logger.debug("rearranging a non-monotone radial profile with %d shells", len(shells))
    return rearrange(StepFunction(shells))


@dataclass(frozen=True)
class RearrangedOutput:
    """(|T f|)* as a callable of t, plus what target_norm needs to integrate it.

    Attributes:
        value: t ↦ (|T f|)*(t)
        scale: Measure of the input's support
        breakpoints: t-values where the output has kinks
        method: "monotone", "closed-form", "sampled" or "zero"
    """
    value: Callable[[float], float]
    scale: float
    breakpoints: Tuple[float, ...]
    method: str

    def __call__(self, t: float) -> float:
        return self.value(t)


@dataclass(frozen=True)
class RadialOperator:
    """Operator selection: kind plus its order and dimension.

    Attributes:
        kind: "riesz", "maximal", "hl" or "hilbert"
        n: Dimension; the maximal operators and the Hilbert transform need n = 1
        order: γ for riesz, α for maximal, ignored otherwise
        normalized: Multiply the Riesz kernel by c_γ
    """
    kind: str
    n: int = 1
    order: float = 0.5
    normalized: bool = False

    def __post_init__(self):
        if self.kind not in OPERATOR_KINDS:
            raise ParameterError(f"unknown operator {self.kind!r}; use one of {', '.join(OPERATOR_KINDS)}")
        if self.n not in UNIT_BALL_VOLUME:
            raise ConfigurationError(f"dimension {self.n} not supported (use 1, 2 or 3)")
        if self.kind != "riesz" and self.n != 1:
            raise ConfigurationError(f"operator {self.kind!r} is implemented for n = 1 only")
        if self.kind == "riesz" and not (0 < self.order < self.n):
            raise ParameterError(f"Riesz order must lie in (0, {self.n}), got {self.order}")
        if self.kind == "maximal" and not (0 <= self.order < 1):
            raise ParameterError(f"maximal order must lie in [0, 1), got {self.order}")

    def apply(self, f: RadialFunction, x_radius: float) -> float:
        """T f at a point with |x| = x_radius (signed for the Hilbert transform)."""
        if f.n != self.n:
            raise ConfigurationError(f"input dimension {f.n} does not match operator dimension {self.n}")
        if self.kind == "riesz":
            return riesz_radial(self.order, f, x_radius, self.normalized)
        if self.kind == "maximal":
            return maximal_1d(self.order, f, x_radius)
        if self.kind == "hl":
            return hl_maximal_1d(f, x_radius)
        return hilbert_char(f, x_radius)

    def rearranged(self, f: RadialFunction) -> RearrangedOutput:
        """
        (|T f|)* for a radial input.

        Riesz and maximal outputs of radially nonincreasing inputs are
        radially nonincreasing, so (T f)*(t) = T f(r) with t = ω_n r^n. The
        Hilbert transform of a single centered interval has a closed-form
        rearrangement. Anything else is sampled on a geometric radius grid
        and rearranged as a step function.
        """
        if f.n != self.n:
            raise ConfigurationError(f"input dimension {f.n} does not match operator dimension {self.n}")
        profile = f.profile
        if profile.is_zero():
            return RearrangedOutput(lambda t: 0.0, 0.0, (), "zero")
        scale = f.ball_measure(profile.total_length)
        edges = tuple(f.ball_measure(r) for r in profile.ends)

        if self.kind == "hilbert" and len(profile.pieces) == 1:
            height = profile.pieces[0].value
            return RearrangedOutput(lambda t: hilbert_ball_rearranged(scale, t, height),
                                    scale, (), "closed-form")

        if self.kind != "hilbert" and profile.is_nonincreasing():
            omega, n = f.omega, f.n
            return RearrangedOutput(lambda t: abs(self.apply(f, (t / omega) ** (1.0 / n))),
                                    scale, edges, "monotone")

        sampled = self._sampled_rearrangement(f)
        logger.warning("using sampled rearrangement for %s on a %d-piece profile",
                       self.kind, len(profile.pieces))
        return RearrangedOutput(sampled, scale, tuple(sampled.ends), "sampled")

    def _sampled_rearrangement(self, f: RadialFunction, per_decade: int = 64) -> StepFunction:
        radius = f.profile.total_length
        decades = config.tail_decades // 2
        edges = np.concatenate([[0.0], radius * np.logspace(-decades, decades, 2 * decades * per_decade + 1)])
        pieces = []
        for r0, r1 in zip(edges[:-1], edges[1:]):
            mid = 0.5 * (r0 + r1)
            try:
                value = abs(self.apply(f, mid))
            except SingularPointError:
                value = abs(self.apply(f, mid * (1 + 1e-9)))
            pieces.append((float(r1 - r0), value))
        return rearrange_radial(RadialFunction(f.n, StepFunction.from_pairs(pieces)))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n": self.n, "order": self.order,
                "normalized": self.normalized}


def _log_grid(lo: float, hi: float, per_decade: int) -> np.ndarray:
    count = max(2, int(math.ceil(per_decade * math.log10(hi / lo))) + 1)
    return np.geomspace(lo, hi, count)


def _log_slope(g: Callable[[float], float], t0: float, t1: float) -> float:
    """d log G / d log t between t0 and t1."""
    g0, g1 = g(t0), g(t1)
    if g0 <= 0 and g1 <= 0:
        return 0.0
    if g1 <= 0:
        return -math.inf
    if g0 <= 0:
        return math.inf
    return math.log(g1 / g0) / math.log(t1 / t0)


def target_norm(out: RearrangedOutput, idx: LorentzIndex, window: Optional[float] = None,
                breakpoints: Sequence[float] = ()) -> float:
    """
    Lorentz quasi-norm of a rearranged output, ‖t^{1/p} F(t)‖_{L^q(dt/t)}.

    The integral (or supremum for q = ∞) runs over [scale·10^{-D}, upper]
    with D = config.tail_decades and upper = window or scale·10^{D}. Outside
    that range G(t) = t^{1/p} F(t) is continued as a power law with the
    log-slope measured over the last decade; a slope that does not decay
    makes the norm +∞. With a window the norm is that of F·χ_(0, window),
    so there is no upper tail.

    Args:
        out: Rearranged output of an operator
        idx: Target Lorentz index
        window: Optional upper measure limit
        breakpoints: Extra kink locations for the integrator

    Returns:
        The quasi-norm, possibly +∞
    """
    if out.scale == 0:
        return 0.0
    p, q = idx.p, idx.q
    inv_p = 0.0 if math.isinf(p) else 1.0 / p

    def g(t: float) -> float:
        return t ** inv_p * out(t)

    decades = config.tail_decades
    tol = config.tail_slope_tol
    lo = out.scale * 10.0 ** (-decades)
    hi = window if window is not None else out.scale * 10.0 ** decades
    if hi <= lo:
        raise ParameterError(f"target window {window} is below the sampled range")
    kinks = sorted({b for b in (*out.breakpoints, *breakpoints) if lo < b < hi})

    low_slope = _log_slope(g, lo, lo * 10)
    high_slope = None if window is not None else _log_slope(g, hi / 10, hi)

    if math.isinf(q):
        grid = sorted(set(_log_grid(lo, hi, config.t_points_per_decade).tolist()) | set(kinks))
        values = [g(t) for t in grid]
        k = int(np.argmax(values))
        best = values[k]
        if 0 < k < len(grid) - 1:
            res = optimize.minimize_scalar(lambda u: -g(math.exp(u)), method="bounded",
                                           bounds=(math.log(grid[k - 1]), math.log(grid[k + 1])),
                                           options={"xatol": 1e-12})
            best = max(best, -float(res.fun))
        if low_slope < -tol or (high_slope is not None and high_slope > tol):
            logger.warning("weak target norm diverges (end slopes %s, %s)", low_slope, high_slope)
            return math.inf
        return best

    if low_slope <= tol or (high_slope is not None and high_slope >= -tol):
        logger.warning("target norm (p=%s, q=%s) diverges: end slopes %s, %s", p, q, low_slope, high_slope)
        return math.inf

    cuts = sorted({math.log(lo), math.log(hi)}
                  | {math.log(t) for t in _log_grid(lo, hi, 1)[1:-1]}
                  | {math.log(t) for t in kinks})
    chunks = []
    for u0, u1 in zip(cuts, cuts[1:]):
        val, _ = integrate.quad(lambda u: g(math.exp(u)) ** q, u0, u1,
                                epsabs=0.0, epsrel=1e-11, limit=200)
        chunks.append(val)
    chunks.append(g(lo) ** q / (q * low_slope))
    if high_slope is not None:
        chunks.append(g(hi) ** q / (q * -high_slope))
    return math.fsum(chunks) ** (1.0 / q)
