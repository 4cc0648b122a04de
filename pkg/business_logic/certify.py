"""Numerical certificates for endpoint lower bounds and nonimprovability.

This module ties the exact layers (norms, Calderón closed forms) to the
operators on ℝⁿ:

- certify_lower_bound: search constants (C, c) with
  (Tχ_{E_j})*(t) ≥ C·T_σ(χ_(0,a_j))(ct) on a nested log grid
- weak_type_sweep: ‖Tf‖_target / ‖f‖_domain over a corpus
- nonimprove_experiment: extremal sequences for the Riesz potential
- membership_divergence: truncations of t^{-1/q} in Lorentz spaces
- weak_fatou_probe: monotone-limit check of the weak Fatou property
- fundamental_hypothesis / phi_comparability: growth of fundamental functions

Every report is a dataclass with ``to_dict`` (JSON) and ``rows`` (CSV).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize

from business_logic.calderon import OPERATOR_SIDE, OPERATORS, char_cell_upper_bound
from business_logic.core_measure import pointwise_le
from business_logic.norms import fundamental_function, lorentz_norm_rearr
from business_logic.operators_rn import RadialOperator, rearrange_radial, target_norm
from config import config
from errors import ConfigurationError, ParameterError
from models import UNIT_BALL_VOLUME, LorentzIndex, PhiFunction, RadialFunction, SigmaTriple, StepFunction
from utils.number_utils import format_number

logger = logging.getLogger(__name__)

FAMILY_KINDS = ("shrinking", "growing", "single")


def nested_log_grid(t_min: float, t_max: float, per_decade: int) -> List[float]:
    """
    Points 10^{k/per_decade} inside [t_min, t_max].

    The lattice is absolute, so a grid with 10× the density contains every
    point of the coarser one bit for bit.
    """
    if not (0 < t_min <= t_max < math.inf):
        raise ParameterError(f"invalid t-range [{t_min}, {t_max}]")
    if per_decade < 1:
        raise ParameterError(f"grid density must be ≥ 1, got {per_decade}")
    k_lo = math.ceil(per_decade * math.log10(t_min) - 1e-9)
    k_hi = math.floor(per_decade * math.log10(t_max) + 1e-9)
    return [10.0 ** (k / per_decade) for k in range(k_lo, k_hi + 1)]


@dataclass(frozen=True)
class ExtremalSequence:
    """Balls E_j = B(0, ρ_j) and the normalized functions f_j = a_j^{-1/p} χ_{E_j}.

    Attributes:
        p: Exponent in the normalization (∞ allowed)
        n: Dimension
        radii: ρ_j
        kind: "shrinking" (ρ_j = 1/j), "growing" (ρ_j = j) or "single"
        t0: End of the admissible t-range for a single finite-measure set
    """
    p: float
    n: int
    radii: Tuple[float, ...]
    kind: str
    t0: Optional[float] = None

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ConfigurationError(f"unknown family {self.kind!r}; use one of {', '.join(FAMILY_KINDS)}")
        if self.n not in UNIT_BALL_VOLUME:
            raise ConfigurationError(f"dimension {self.n} not supported (use 1, 2 or 3)")
        if not self.radii or any(not (0 < r < math.inf) for r in self.radii):
            raise ParameterError("family radii must be positive and finite")
        if self.kind == "single" and (self.t0 is None or not self.t0 > 0):
            raise ConfigurationError("a single-set family needs a positive cut point t0")

    @classmethod
    def shrinking(cls, n: int, j_max: int, p: float = 1.0) -> 'ExtremalSequence':
        return cls(p, n, tuple(1.0 / j for j in range(1, j_max + 1)), "shrinking")

    @classmethod
    def growing(cls, n: int, j_max: int, p: float = 1.0) -> 'ExtremalSequence':
        return cls(p, n, tuple(float(j) for j in range(1, j_max + 1)), "growing")

    @classmethod
    def single(cls, n: int, radius: float, t0: float, p: float = 1.0) -> 'ExtremalSequence':
        return cls(p, n, (float(radius),), "single", float(t0))

    @property
    def side(self) -> str:
        return "zero" if self.kind == "shrinking" else "infinity"

    @property
    def measures(self) -> List[float]:
        omega = UNIT_BALL_VOLUME[self.n]
        return [omega * r ** self.n for r in self.radii]

    def heights(self) -> List[float]:
        return [1.0 if math.isinf(self.p) else a ** (-1.0 / self.p) for a in self.measures]

    def functions(self) -> List[StepFunction]:
        """f_j* = a_j^{-1/p} χ_[0, a_j)."""
        return [StepFunction.indicator(a, h) for a, h in zip(self.measures, self.heights())]

    def radial_functions(self) -> List[RadialFunction]:
        return [RadialFunction.ball(self.n, r, h) for r, h in zip(self.radii, self.heights())]

    def to_dict(self) -> dict:
        data = {"kind": self.kind, "n": self.n, "p": format_number(self.p),
                "radii": [format_number(r) for r in self.radii]}
        if self.t0 is not None:
            data["t0"] = format_number(self.t0)
        return data


@dataclass
class BoundCertificate:
    """Result of a lower-bound search.

    Attributes:
        operator: Operator description
        tsigma: Calderón operator id (R, S0, H, Sinf)
        sigma: σ = [p, q, m]
        C, c: Certified constants
        margin: Minimum over members and cells of (Tχ_E)*(t_{i+1}) − C·sup_cell T_σ(χ_(0,a))(c·)
        verdict: "VALID" or "INVALID"
        t_grid: Evaluation lattice
        family: Family description
        worst: Per-member worst cell
        witness: Overall worst cell
        c_scan: (c, best C for that c) pairs from the search
        cells: Per-cell table (member, t_lo, t_hi, lower, upper, margin)
        cut_point: min{t0, (a/2)^{1/m}/c} for single-set families
        c_bracketed: The best c of the search lies strictly inside the c grid;
            False for a fixed c or when C(c) still grows at a grid edge
    """
    operator: dict
    tsigma: str
    sigma: SigmaTriple
    C: float
    c: float
    margin: float
    verdict: str
    t_grid: List[float]
    family: dict
    worst: List[dict] = field(default_factory=list)
    witness: Optional[dict] = None
    c_scan: List[Tuple[float, float]] = field(default_factory=list)
    cells: List[Tuple[int, float, float, float, float, float]] = field(default_factory=list)
    cut_point: Optional[float] = None
    c_bracketed: bool = False

    @property
    def failed(self) -> bool:
        return self.verdict != "VALID"

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        data = {
            "kind": "certificate",
            "verdict": self.verdict,
            "constants": {"C": format_number(self.C), "c": format_number(self.c)},
            "margin": format_number(self.margin),
            "operator": self.operator,
            "tsigma": self.tsigma,
            "sigma": self.sigma.to_dict(),
            "family": self.family,
            "grid": {"t_min": format_number(self.t_grid[0]), "t_max": format_number(self.t_grid[-1]),
                     "points": len(self.t_grid)},
            "worst": self.worst,
            "witness": self.witness,
            "c_scan": [{"c": format_number(cv), "C": format_number(Cv)} for cv, Cv in self.c_scan],
            "c_bracketed": self.c_bracketed,
        }
        if self.cut_point is not None:
            data["cut_point"] = format_number(self.cut_point)
        return data

    header = ("j", "t_lo", "t_hi", "lower", "upper", "margin")

    def rows(self) -> List[tuple]:
        return list(self.cells)


def _cell_table(members, tsigma: str, sigma: SigmaTriple, c: float, grid: Sequence[float]):
    """For each member: list of (t_lo, t_hi, lower, upper)."""
    table = []
    for j, a, lower in members:
        cells = []
        for (t_lo, t_hi), low in zip(zip(grid, grid[1:]), lower):
            cells.append((t_lo, t_hi, low, char_cell_upper_bound(tsigma, sigma, a, c, t_lo, t_hi)))
        table.append((j, a, cells))
    return table


def _best_constant(members, tsigma: str, sigma: SigmaTriple, c: float, grid: Sequence[float]) -> float:
    """Largest C with lower ≥ C·upper on every active cell; 0 when no cell is active."""
    best = math.inf
    for _, _, cells in _cell_table(members, tsigma, sigma, c, grid):
        for _, _, low, up in cells:
            if up > 0:
                best = min(best, low / up)
    return 0.0 if math.isinf(best) else best


def certify_lower_bound(op: RadialOperator, tsigma: str, sigma: SigmaTriple, family: ExtremalSequence,
                        t_range: Tuple[float, float] = (1e-3, 1e3), density: Optional[int] = None,
                        C: Optional[float] = None, c: Optional[float] = None) -> BoundCertificate:
    """
    Certify (Tχ_{E_j})*(t) ≥ C·T_σ(χ_(0,a_j))(ct) for every family member.

    The check is cell-wise on the nested lattice: (Tχ_E)* is nonincreasing,
    so its value at the right end of a cell bounds it from below on the
    cell, and ``char_cell_upper_bound`` bounds the Calderón side from above.
    A VALID certificate therefore stays VALID on any refinement of the
    lattice.

    Without fixed constants, c runs over a log grid, C(c) is the smallest
    cell ratio, the best c is refined by a bounded golden-section search in
    log c when it is bracketed, and C is shaded by config.certificate_slack.

    Args:
        op: Operator on ℝⁿ
        tsigma: Calderón operator id; R/S0 need a shrinking family, H/Sinf a
            growing or single-set family
        sigma: σ = [p, q, m]
        family: Extremal sets
        t_range: (t_min, t_max)
        density: Lattice points per decade (config.t_points_per_decade)
        C, c: Optional fixed constants (either or both)

    Returns:
        BoundCertificate

    Raises:
        ConfigurationError: On an operator/family mismatch
        ParameterError: On invalid numeric input
    """
    if tsigma not in OPERATORS:
        raise ParameterError(f"unknown Calderón operator {tsigma!r}; use one of {', '.join(OPERATORS)}")
    if family.side != OPERATOR_SIDE[tsigma]:
        raise ConfigurationError(
            f"{tsigma} models behaviour near {OPERATOR_SIDE[tsigma]} and needs a "
            f"{'shrinking' if OPERATOR_SIDE[tsigma] == 'zero' else 'growing or single'} family, "
            f"got {family.kind!r}")
    if tsigma in ("R", "S0") and math.isinf(sigma.p):
        raise ParameterError(f"{tsigma} requires p < inf")
    if family.n != op.n:
        raise ConfigurationError(f"family dimension {family.n} does not match operator dimension {op.n}")
    if C is not None and not C > 0:
        raise ParameterError(f"C must be positive, got {C}")
    if c is not None and not c > 0:
        raise ParameterError(f"c must be positive, got {c}")

    density = density or config.t_points_per_decade
    t_min, t_max = t_range
    if family.kind == "single":
        t_max = min(t_max, family.t0)
    grid = nested_log_grid(t_min, t_max, density)
    if len(grid) < 2:
        raise ParameterError(f"t-range [{t_min}, {t_max}] holds fewer than two lattice points")

    members = []
    for j, (radius, a) in enumerate(zip(family.radii, family.measures), start=1):
        out = op.rearranged(RadialFunction.ball(family.n, radius))
        members.append((j, a, [out(t) for t in grid[1:]]))
    logger.debug("certify %s/%s: %d members, %d cells", op.kind, tsigma, len(members), len(grid) - 1)

    c_scan: List[Tuple[float, float]] = []
    bracketed = False
    if c is None:
        c_grid = np.geomspace(config.c_grid_min, config.c_grid_max, config.c_grid_points)
        c_scan = [(float(cv), _best_constant(members, tsigma, sigma, float(cv), grid)) for cv in c_grid]
        k = max(range(len(c_scan)), key=lambda i: c_scan[i][1])
        c_best, C_best = c_scan[k]
        if 0 < k < len(c_scan) - 1:
            bracketed = True
            res = optimize.minimize_scalar(
                lambda u: -_best_constant(members, tsigma, sigma, math.exp(u), grid),
                bounds=(math.log(c_scan[k - 1][0]), math.log(c_scan[k + 1][0])),
                method="bounded", options={"xatol": 1e-6})
            if -res.fun > C_best:
                c_best, C_best = math.exp(float(res.x)), -float(res.fun)
        c = c_best
        if not bracketed:
            logger.debug("best c=%g sits at the edge of the c grid", c_best)
    else:
        C_best = _best_constant(members, tsigma, sigma, c, grid)
        c_scan = [(c, C_best)]
    if C is None:
        C = C_best * (1 - config.certificate_slack)

    cells_out = []
    worst = []
    witness = None
    margin = math.inf
    for j, a, cells in _cell_table(members, tsigma, sigma, c, grid):
        member_worst = None
        for t_lo, t_hi, low, up in cells:
            m = low - C * up
            cells_out.append((j, t_lo, t_hi, low, up, m))
            if member_worst is None or m < member_worst[4]:
                member_worst = (t_lo, t_hi, low, up, m)
        entry = {"j": j, "measure": format_number(a), "t_lo": format_number(member_worst[0]),
                 "t_hi": format_number(member_worst[1]), "margin": format_number(member_worst[4])}
        worst.append(entry)
        if member_worst[4] < margin:
            margin, witness = member_worst[4], entry

    verdict = "VALID" if margin >= 0 and C > 0 else "INVALID"
    cut = None
    if family.kind == "single":
        a = family.measures[0]
        cut = min(family.t0, (a / 2) ** (1.0 / sigma.m) / c)
    logger.debug("certificate %s: C=%.6g c=%.6g margin=%.3g", verdict, C, c, margin)
    return BoundCertificate(
        operator=op.to_dict(), tsigma=tsigma, sigma=sigma, C=C, c=c, margin=margin,
        verdict=verdict, t_grid=grid, family=family.to_dict(), worst=worst, witness=witness,
        c_scan=c_scan, cells=cells_out, cut_point=cut, c_bracketed=bracketed,
    )


def ball_corpus(n: int, count: int, seed: Optional[int] = None) -> List[RadialFunction]:
    """Seeded dilates of the unit ball with random heights."""
    rng = np.random.default_rng(config.seed if seed is None else seed)
    radii = 10.0 ** rng.uniform(-1.5, 1.5, count)
    heights = 10.0 ** rng.uniform(-1.0, 1.0, count)
    return [RadialFunction.ball(n, float(r), float(h)) for r, h in zip(radii, heights)]


def shrinking_ball_corpus(n: int, count: int) -> List[RadialFunction]:
    """L¹-normalized balls of radius 1/j, j = 1..count."""
    return ExtremalSequence.shrinking(n, count, 1.0).radial_functions()


def two_step_corpus(n: int, count: int, seed: Optional[int] = None) -> List[RadialFunction]:
    """Seeded radially nonincreasing two-step profiles."""
    rng = np.random.default_rng(config.seed if seed is None else seed)
    out = []
    for _ in range(count):
        r1, extra = 10.0 ** rng.uniform(-1.0, 1.0, 2)
        h1, h2 = 10.0 ** rng.uniform(-1.0, 1.0, 2)
        out.append(RadialFunction(n, StepFunction.from_pairs([(r1, h1 + h2), (r1 * extra, h2)])))
    return out


def _ratio(top: float, bottom: float) -> float:
    if top == 0:
        return 0.0
    if bottom == 0:
        return math.inf
    return top / bottom


@dataclass
class SweepReport:
    """Ratios ‖Tf‖_target / ‖f‖_domain over a corpus."""
    operator: dict
    domain: LorentzIndex
    target: LorentzIndex
    table: List[Tuple[int, float, float, float]]
    sup: float
    verdict: str

    @property
    def failed(self) -> bool:
        return self.verdict != "BOUNDED"

    def to_dict(self) -> dict:
        return {
            "kind": "sweep",
            "verdict": self.verdict,
            "operator": self.operator,
            "domain": self.domain.to_dict(),
            "target": self.target.to_dict(),
            "sup": format_number(self.sup),
            "table": [{"index": i, "domain_norm": format_number(d), "target_norm": format_number(t),
                       "ratio": format_number(r)} for i, d, t, r in self.table],
        }

    header = ("index", "domain_norm", "target_norm", "ratio")

    def rows(self) -> List[tuple]:
        return list(self.table)

    @property
    def ratios(self) -> List[float]:
        return [r for _, _, _, r in self.table]


def weak_type_sweep(op: RadialOperator, domain_index: LorentzIndex, target_index: LorentzIndex,
                    corpus: Sequence[RadialFunction], window: Optional[float] = None) -> SweepReport:
    """
    ‖Tf‖_{target} / ‖f‖_{domain} for every corpus element and the supremum.

    Divergent target norms are +∞ and make the verdict UNBOUNDED; 0/0 is 0.

    Raises:
        ParameterError: If the corpus is empty
    """
    if not corpus:
        raise ParameterError("weak-type sweep needs a nonempty corpus")
    table = []
    for i, f in enumerate(corpus):
        domain_norm = lorentz_norm_rearr(rearrange_radial(f), domain_index)
        target = target_norm(op.rearranged(f), target_index, window)
        table.append((i, domain_norm, target, _ratio(target, domain_norm)))
    sup = max(r for _, _, _, r in table)
    verdict = "BOUNDED" if math.isfinite(sup) else "UNBOUNDED"
    logger.debug("sweep %s: sup ratio %s over %d functions", op.kind, sup, len(corpus))
    return SweepReport(op.to_dict(), domain_index, target_index, table, sup, verdict)


@dataclass
class ExperimentReport:
    """Nonimprovability experiment for the Riesz potential."""
    parameters: dict
    table: List[Tuple[int, float, float, float, float]]
    checks: Dict[str, object]
    verdict: str

    @property
    def failed(self) -> bool:
        return self.verdict == "FAIL"

    def to_dict(self) -> dict:
        return {
            "kind": "experiment",
            "verdict": self.verdict,
            "parameters": self.parameters,
            "checks": {k: format_number(v) if isinstance(v, float) else v for k, v in self.checks.items()},
            "table": [{"j": j, "measure": format_number(a), "domain_norm": format_number(d),
                       "target_norm": format_number(t), "weak_norm": format_number(w)}
                      for j, a, d, t, w in self.table],
        }

    header = ("j", "measure", "domain_norm", "target_norm", "weak_norm")

    def rows(self) -> List[tuple]:
        return list(self.table)


def nonimprove_experiment(gamma: float, q_domain: float, r_target: float, j_max: int,
                          n: int = 1, window_radius: Optional[float] = None) -> ExperimentReport:
    """
    Extremal sequence f_j = a_j^{-1} χ_{B(0,1/j)} for the Riesz potential I_γ.

    Reports (i) ‖f_j‖_{1,q_domain}, (ii) ‖I_γ f_j‖_{n/(n−γ), r_target} on the
    window B(0, window_radius), and (iii) ‖I_γ f_j‖_{n/(n−γ), ∞}. The
    verdict is PASS when (i) is constant to 1e-8, (ii) strictly increases
    from j = 4 on with a least-squares slope against ln(1/a_j) above
    config.max_log_slope_floor over the last decade of j, and (iii) has
    max/min ≤ config.weak_ratio_limit. j_max = 1 gives a DEGENERATE report.

    Raises:
        ConfigurationError: If r_target = ∞ (no divergence to observe)
        ParameterError: On out-of-range parameters
    """
    if math.isinf(r_target):
        raise ConfigurationError("the divergent target needs r_target < inf")
    if not (0 < q_domain <= 1):
        raise ParameterError(f"q_domain must lie in (0, 1], got {q_domain}")
    if not r_target > 0:
        raise ParameterError(f"r_target must be positive, got {r_target}")
    if j_max < 1:
        raise ParameterError(f"j_max must be ≥ 1, got {j_max}")

    op = RadialOperator("riesz", n, gamma)
    p_target = n / (n - gamma)
    radius = config.target_window_radius if window_radius is None else window_radius
    window = UNIT_BALL_VOLUME[n] * radius ** n
    family = ExtremalSequence.shrinking(n, j_max, 1.0)
    domain_idx = LorentzIndex(1.0, q_domain)
    target_idx = LorentzIndex(p_target, r_target)
    weak_idx = LorentzIndex(p_target, math.inf)

    table = []
    for j, (f, a) in enumerate(zip(family.radial_functions(), family.measures), start=1):
        out = op.rearranged(f)
        table.append((
            j, a,
            lorentz_norm_rearr(rearrange_radial(f), domain_idx),
            target_norm(out, target_idx, window),
            target_norm(out, weak_idx),
        ))

    params = {"gamma": format_number(gamma), "q_domain": format_number(q_domain),
              "r_target": format_number(r_target), "j_max": j_max, "n": n,
              "window_radius": format_number(radius)}
    domain = [d for _, _, d, _, _ in table]
    target = [t for _, _, _, t, _ in table]
    weak = [w for _, _, _, _, w in table]
    spread = max(domain) / min(domain) - 1
    checks: Dict[str, object] = {"domain_spread": spread, "weak_ratio": max(weak) / min(weak)}
    if j_max == 1:
        return ExperimentReport(params, table, checks, "DEGENERATE")

    increasing = all(target[i] < target[i + 1] for i in range(3, j_max - 1))
    first = max(1, math.ceil(j_max / 10))
    tail = [(math.log(1 / a), t) for j, a, _, t, _ in table if j >= first]
    slope = math.nan
    if len(tail) >= 2:
        xs, ys = zip(*tail)
        slope = float(np.polyfit(xs, ys, 1)[0])
    checks.update({"target_increasing": increasing, "log_slope": slope})

    ok = (spread <= 1e-8 and increasing and slope > config.max_log_slope_floor
          and checks["weak_ratio"] <= config.weak_ratio_limit)
    verdict = "PASS" if ok else "FAIL"
    logger.debug("nonimprove experiment: %s (slope %.4g, weak ratio %.4g)", verdict, slope, checks["weak_ratio"])
    return ExperimentReport(params, table, checks, verdict)


def truncation(q: float, eps: float, t_cut: float, per_decade: Optional[int] = None) -> StepFunction:
    """
    Step discretization of t^{-1/q} χ_(ε, T).

    Breakpoints are ε, T and the lattice points 10^{k/per_decade} between
    them; each piece takes the value of t^{-1/q} at its right end, so the
    step function lies below the truncation.
    """
    if not (0 < eps <= t_cut < math.inf):
        raise ParameterError(f"truncation needs 0 < eps ≤ T < inf, got eps={eps}, T={t_cut}")
    if not q > 0:
        raise ParameterError(f"q must be positive, got {q}")
    if eps == t_cut:
        return StepFunction()
    per_decade = per_decade or config.membership_pieces_per_decade
    k_lo = math.floor(per_decade * math.log10(eps)) + 1
    k_hi = math.ceil(per_decade * math.log10(t_cut)) - 1
    marks = [eps] + [10.0 ** (k / per_decade) for k in range(k_lo, k_hi + 1)] + [t_cut]
    marks = sorted(m for m in set(marks) if eps <= m <= t_cut)
    pieces = [(b - a, b ** (-1.0 / q)) for a, b in zip(marks, marks[1:]) if b > a]
    return StepFunction.from_pairs(pieces, domain_origin=eps)


def truncation_norm_oracle(q: float, r: float, eps: float, t_cut: float) -> float:
    """‖(t + ε)^{-1/q} χ_(0, T−ε)‖_{q,r}, the rearranged exact truncation, by quadrature."""
    if eps == t_cut:
        return 0.0
    length = t_cut - eps
    if math.isinf(r):
        return (length / t_cut) ** (1.0 / q)
    val, _ = integrate.quad(lambda t: (t + eps) ** (-r / q), 0.0, length,
                            weight="alg", wvar=(r / q - 1, 0.0), epsabs=0.0, epsrel=1e-12, limit=200)
    return val ** (1.0 / r)


@dataclass
class MembershipReport:
    """Lorentz norms of truncations of t^{-1/q}."""
    q: float
    r: float
    table: List[Tuple[float, float, float, float]]
    slopes: List[dict]
    verdict: str

    @property
    def failed(self) -> bool:
        return self.verdict in ("INCONCLUSIVE", "UNBOUNDED")

    def to_dict(self) -> dict:
        return {
            "kind": "membership",
            "verdict": self.verdict,
            "q": format_number(self.q),
            "r": format_number(self.r),
            "slopes": self.slopes,
            "table": [{"eps": format_number(e), "T": format_number(t), "norm": format_number(v),
                       "oracle": format_number(o)} for e, t, v, o in self.table],
        }

    header = ("eps", "T", "norm", "oracle")

    def rows(self) -> List[tuple]:
        return list(self.table)


def membership_divergence(q: float, r: float, eps: Sequence[float], t_cut: Sequence[float]) -> MembershipReport:
    """
    Norms in L^{q,r} of the truncations t^{-1/q} χ_(ε, T) for all pairs ε ≤ T.

    For r = ∞ every norm stays ≤ 1 (verdict BOUNDED); for r < ∞ they grow
    without bound as ε → 0 or T → ∞ (verdict DIVERGENT). ``slopes`` holds,
    per ε, the least-squares slope of the norm against ln T and the same
    slope for the quadrature oracle.
    """
    index = LorentzIndex(q, r)
    table = []
    for e in eps:
        for t in t_cut:
            if e > t:
                continue
            table.append((e, t, lorentz_norm_rearr(truncation(q, e, t), index), truncation_norm_oracle(q, r, e, t)))
    if not table:
        raise ParameterError("no admissible (eps, T) pair with eps ≤ T")

    slopes = []
    for e in eps:
        pts = [(math.log(t), v, o) for ee, t, v, o in table if ee == e and t > e]
        if len(pts) >= 2:
            xs, vs, os_ = zip(*pts)
            slopes.append({"eps": format_number(e),
                           "slope": format_number(float(np.polyfit(xs, vs, 1)[0])),
                           "oracle_slope": format_number(float(np.polyfit(xs, os_, 1)[0]))})

    norms = [v for _, _, v, _ in table]
    if math.isinf(r):
        verdict = "BOUNDED" if max(norms) <= 1 + 1e-6 else "UNBOUNDED"
    else:
        by_t = all(a[2] < b[2] for a, b in zip(table, table[1:]) if a[0] == b[0])
        verdict = "DIVERGENT" if len(table) > 1 and by_t else "INCONCLUSIVE"
    return MembershipReport(q, r, table, slopes, verdict)


@dataclass
class FatouReport:
    """Empirical constant in ‖lim f_n‖ ≤ C sup ‖f_n‖."""
    index: LorentzIndex
    norms: List[float]
    limit_norm: float
    C: float
    verdict: str

    @property
    def failed(self) -> bool:
        return self.verdict != "HOLDS"

    def to_dict(self) -> dict:
        return {
            "kind": "fatou",
            "verdict": self.verdict,
            "index": self.index.to_dict(),
            "C": format_number(self.C),
            "limit_norm": format_number(self.limit_norm),
            "norms": [format_number(v) for v in self.norms],
        }

    header = ("n", "norm")

    def rows(self) -> List[tuple]:
        return list(enumerate(self.norms, start=1))


def weak_fatou_probe(space_index: LorentzIndex, monotone_family: Sequence[StepFunction],
                     limit: Optional[StepFunction] = None, limit_norm: Optional[float] = None,
                     tolerance: Optional[float] = None) -> FatouReport:
    """
    Check the weak Fatou property along a pointwise nondecreasing family.

    The limit norm comes from ``limit`` if given, else ``limit_norm``, else
    the last member. C = limit_norm / sup_n ‖f_n‖ (1 for an all-zero
    family); the verdict is HOLDS when C ≤ 1 + tolerance.

    Raises:
        ParameterError: If the family is empty or not pointwise nondecreasing
    """
    if not monotone_family:
        raise ParameterError("weak Fatou probe needs a nonempty family")
    for k, (f, g) in enumerate(zip(monotone_family, monotone_family[1:]), start=1):
        if not pointwise_le(f, g):
            raise ParameterError(f"family is not pointwise nondecreasing at member {k}")
    norms = [lorentz_norm_rearr(f, space_index) for f in monotone_family]
    if limit is not None:
        lim = lorentz_norm_rearr(limit, space_index)
    elif limit_norm is not None:
        lim = float(limit_norm)
    else:
        lim = norms[-1]
    sup = max(norms)
    C = 1.0 if sup == 0 and lim == 0 else _ratio(lim, sup)
    tolerance = config.fatou_tol if tolerance is None else tolerance
    verdict = "HOLDS" if C <= 1 + tolerance else "FAILS"
    return FatouReport(space_index, norms, lim, C, verdict)


def step_family(count: int) -> Tuple[List[StepFunction], StepFunction]:
    """χ_[0, n/(n+1)) for n = 1..count and their limit χ_[0, 1)."""
    return [StepFunction.indicator(k / (k + 1)) for k in range(1, count + 1)], StepFunction.indicator(1.0)


def truncation_family(q: float, count: int) -> List[StepFunction]:
    """Truncations of t^{-1/q} to (10^{-k}, 10^{k}), k = 1..count."""
    return [truncation(q, 10.0 ** (-k), 10.0 ** k) for k in range(1, count + 1)]


@dataclass
class HypothesisReport:
    """Growth of a ratio of fundamental functions on a log grid."""
    description: str
    sup: float
    end_slope: float
    verdict: str

    @property
    def failed(self) -> bool:
        return self.verdict != "BOUNDED"

    def to_dict(self) -> dict:
        return {"kind": "hypothesis", "description": self.description, "verdict": self.verdict,
                "sup": format_number(self.sup), "end_slope": format_number(self.end_slope)}

    header = ("description", "sup", "end_slope", "verdict")

    def rows(self) -> List[tuple]:
        return [(self.description, self.sup, self.end_slope, self.verdict)]


def _growth(values: Callable[[float], float], ts: Sequence[float], towards: str, label: str) -> HypothesisReport:
    vals = [values(t) for t in ts]
    if towards == "zero":
        t0, t1 = ts[0], ts[0] * 10
    else:
        t0, t1 = ts[-1] / 10, ts[-1]
    v0, v1 = values(t0), values(t1)
    slope = math.log(v1 / v0) / math.log(t1 / t0) if v0 > 0 and v1 > 0 else 0.0
    tol = config.tail_slope_tol
    growing = slope < -tol if towards == "zero" else slope > tol
    return HypothesisReport(label, max(vals), slope, "UNBOUNDED" if growing else "BOUNDED")


def fundamental_hypothesis(space: LorentzIndex, p: float, side: str, decades: int = 8) -> HypothesisReport:
    """
    Boundedness of t^{-1/p} φ_X(t) near 0 (side "zero") or near ∞ ("infinity").

    φ_X is the fundamental function of X = L^{space}. The verdict reads the
    log-slope over the decade closest to the end.
    """
    if side not in ("zero", "infinity"):
        raise ParameterError(f"side must be 'zero' or 'infinity', got {side!r}")
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    ts = _log_range(side, decades)
    return _growth(lambda t: t ** (-inv_p) * fundamental_function(space, t), ts, side,
                   f"t^(-1/p) phi_X(t), p={format_number(p)}, X=L^({format_number(space.p)},"
                   f"{format_number(space.q)}), t->{'0' if side == 'zero' else 'inf'}")


def phi_comparability(phi_w: PhiFunction, phi: PhiFunction, decades: int = 8) -> Tuple[HypothesisReport, HypothesisReport]:
    """sup φ_W/φ near 0 and near ∞."""
    ratio = lambda t: phi_w(t) / phi(t)  # noqa: E731
    return (_growth(ratio, _log_range("zero", decades), "zero", "phi_W/phi, t->0"),
            _growth(ratio, _log_range("infinity", decades), "infinity", "phi_W/phi, t->inf"))


def _log_range(side: str, decades: int) -> List[float]:
    if side == "zero":
        return list(np.logspace(-decades, 0, decades * 8 + 1))
    return list(np.logspace(0, decades, decades * 8 + 1))
