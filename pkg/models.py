"""Data models for rearrangement-invariant computations.

All models are immutable. Sets never appear as geometric objects here except
in ``RadialFunction`` and ``IntervalUnion``; everything else only needs
measures, because every quantity computed downstream depends on f* alone.
"""
import bisect
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import accumulate, groupby
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from errors import ConfigurationError, ParameterError
from utils.number_utils import format_number, parse_number

# Volume of the unit ball in dimensions 1, 2, 3.
UNIT_BALL_VOLUME: Dict[int, float] = {1: 2.0, 2: math.pi, 3: 4.0 * math.pi / 3.0}


def _finite(x: float, what: str) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ParameterError(f"{what} must be finite, got {x}")
    return x


@dataclass(frozen=True)
class Piece:
    """One constant stretch of a step function."""
    length: float
    value: float

    def to_dict(self) -> dict:
        return {"len": format_number(self.length), "value": format_number(self.value)}


@dataclass(frozen=True)
class StepFunction:
    """Nonnegative piecewise-constant function on a half-line.

    The pieces are laid end to end starting at ``domain_origin``; the
    function is 0 before the origin and beyond the last piece. Evaluation is
    right-continuous: at a breakpoint the value of the piece starting there
    is returned.

    The representation is canonical. Adjacent pieces with equal values are
    merged and trailing zero pieces are dropped, so two StepFunctions compare
    equal exactly when they describe the same function.

    Example:
        >>> f = StepFunction.from_pairs([(2, 3.0), (3, 1.0)])
        >>> f(1.5), f(2.0), f(10.0)
        (3.0, 1.0, 0.0)
    """
    pieces: Tuple[Piece, ...] = ()
    domain_origin: float = 0.0

    def __post_init__(self):
        raw = []
        for piece in self.pieces:
            if not isinstance(piece, Piece):
                piece = Piece(*piece)
            length = _finite(piece.length, "piece length")
            value = _finite(piece.value, "piece value")
            if length <= 0:
                raise ParameterError(f"piece lengths must be positive, got {length}")
            if value < 0:
                raise ParameterError(f"piece values must be nonnegative, got {value}")
            raw.append((length, value))

        merged = []
        for value, group in groupby(raw, key=lambda lv: lv[1]):
            lengths = [lv[0] for lv in group]
            merged.append(Piece(lengths[0] if len(lengths) == 1 else math.fsum(lengths), value))
        while merged and merged[-1].value == 0.0:
            merged.pop()

        object.__setattr__(self, "pieces", tuple(merged))
        object.__setattr__(self, "domain_origin", _finite(self.domain_origin, "domain origin"))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]], domain_origin: float = 0.0) -> 'StepFunction':
        """Build from (length, value) pairs."""
        return cls(tuple(Piece(float(length), float(value)) for length, value in pairs), domain_origin)

    @classmethod
    def indicator(cls, measure: float, height: float = 1.0) -> 'StepFunction':
        """height·χ_[0, measure); measure 0 gives the zero function."""
        if measure < 0:
            raise ParameterError(f"measure must be nonnegative, got {measure}")
        if measure == 0 or height == 0:
            return cls()
        return cls((Piece(float(measure), float(height)),))

    @classmethod
    def zero(cls) -> 'StepFunction':
        return cls()

    @property
    def lengths(self) -> List[float]:
        return [p.length for p in self.pieces]

    @property
    def values(self) -> List[float]:
        return [p.value for p in self.pieces]

    @cached_property
    def ends(self) -> Tuple[float, ...]:
        """Right endpoints of the pieces, measured from the origin."""
        return tuple(accumulate(self.lengths))

    @property
    def starts(self) -> Tuple[float, ...]:
        return (0.0,) + self.ends[:-1] if self.pieces else ()

    @property
    def total_length(self) -> float:
        return math.fsum(self.lengths)

    @property
    def sup(self) -> float:
        return max(self.values, default=0.0)

    def is_zero(self) -> bool:
        return not self.pieces

    def is_nonincreasing(self) -> bool:
        vals = self.values
        return all(a >= b for a, b in zip(vals, vals[1:]))

    def __call__(self, x: float) -> float:
        s = x - self.domain_origin
        if s < 0 or not self.pieces:
            return 0.0
        k = bisect.bisect_right(self.ends, s)
        if k >= len(self.pieces):
            return 0.0
        return self.pieces[k].value

    def scaled(self, factor: float) -> 'StepFunction':
        """Pointwise multiple factor·f, factor ≥ 0."""
        if factor < 0:
            raise ParameterError(f"scale factor must be nonnegative, got {factor}")
        if factor == 0:
            return StepFunction((), self.domain_origin)
        return StepFunction(
            tuple(Piece(p.length, p.value * factor) for p in self.pieces),
            self.domain_origin,
        )

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        data: Dict[str, Any] = {"pieces": [p.to_dict() for p in self.pieces]}
        if self.domain_origin != 0.0:
            data["origin"] = format_number(self.domain_origin)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'StepFunction':
        """Create from dictionary (JSON deserialization).

        Raises:
            ParameterError: If the structure or a number is malformed
        """
        try:
            pieces = tuple(
                Piece(parse_number(item["len"]), parse_number(item["value"]))
                for item in data["pieces"]
            )
            origin = parse_number(data.get("origin", 0.0))
        except (KeyError, TypeError) as e:
            raise ParameterError(f"malformed step function: {e}") from e
        return cls(pieces, origin)


@dataclass(frozen=True)
class LayerDecomposition:
    """Simple function written as Σ α_k χ_[0, μ(E_k)) over nested sets.

    Attributes:
        alphas: Positive layer heights α_k
        cum_measures: Strictly increasing measures μ(E_1) < ... < μ(E_N)
    """
    alphas: Tuple[float, ...]
    cum_measures: Tuple[float, ...]

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        cums = tuple(float(c) for c in self.cum_measures)
        if len(alphas) != len(cums):
            raise ParameterError("alphas and cum_measures must have equal length")
        if any(a <= 0 or not math.isfinite(a) for a in alphas):
            raise ParameterError("layer heights must be positive and finite")
        if any(c <= 0 or not math.isfinite(c) for c in cums):
            raise ParameterError("layer measures must be positive and finite")
        if any(b <= a for a, b in zip(cums, cums[1:])):
            raise ParameterError("layer measures must be strictly increasing")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "cum_measures", cums)

    def __len__(self) -> int:
        return len(self.alphas)

    def to_dict(self) -> dict:
        return {
            "alphas": [format_number(a) for a in self.alphas],
            "cum": [format_number(c) for c in self.cum_measures],
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'LayerDecomposition':
        try:
            return cls(
                tuple(parse_number(a) for a in data["alphas"]),
                tuple(parse_number(c) for c in data["cum"]),
            )
        except (KeyError, TypeError) as e:
            raise ParameterError(f"malformed layer decomposition: {e}") from e


@dataclass(frozen=True)
class DistributionFunction:
    """Right-continuous step representation of λ ↦ f_*(λ).

    thresholds holds the distinct positive values v_1 > ... > v_N of f and
    measures the increasing M_1 < ... < M_N, where f_*(λ) = M_k for
    v_{k+1} ≤ λ < v_k (v_{N+1} = 0) and f_*(λ) = 0 for λ ≥ v_1.
    """
    thresholds: Tuple[float, ...]
    measures: Tuple[float, ...]

    def __post_init__(self):
        if len(self.thresholds) != len(self.measures):
            raise ParameterError("thresholds and measures must have equal length")
        if any(b >= a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ParameterError("thresholds must be strictly decreasing")
        if any(b <= a for a, b in zip(self.measures, self.measures[1:])):
            raise ParameterError("measures must be strictly increasing")

    def __call__(self, lam: float) -> float:
        if lam < 0:
            raise ParameterError(f"distribution function needs λ ≥ 0, got {lam}")
        # number of thresholds strictly greater than lam
        neg = [-v for v in self.thresholds]
        k = bisect.bisect_left(neg, -lam)
        return self.measures[k - 1] if k > 0 else 0.0

    def to_dict(self) -> dict:
        return {
            "thresholds": [format_number(v) for v in self.thresholds],
            "measures": [format_number(m) for m in self.measures],
        }


@dataclass(frozen=True)
class LorentzIndex:
    """Lorentz space parameters (p, q), each in (0, ∞].

    p = ∞ is only allowed together with q = ∞.
    """
    p: float
    q: float

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if math.isnan(p) or math.isnan(q) or p <= 0 or q <= 0:
            raise ParameterError(f"Lorentz index needs p, q in (0, inf], got ({p}, {q})")
        if math.isinf(p) and not math.isinf(q):
            raise ParameterError("p = inf requires q = inf")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def weak(self) -> bool:
        return math.isinf(self.q)

    def to_dict(self) -> dict:
        return {"p": format_number(self.p), "q": format_number(self.q)}

    @classmethod
    def from_dict(cls, data: dict) -> 'LorentzIndex':
        try:
            return cls(parse_number(data["p"]), parse_number(data["q"]))
        except (KeyError, TypeError) as e:
            raise ParameterError(f"malformed Lorentz index: {e}") from e


@dataclass(frozen=True)
class PhiFunction:
    """Concave nondecreasing φ with φ(0) = 0, defining the space Λ_φ.

    Two kinds:
    - power: φ(t) = t^exponent with exponent in (0, 1]
    - tabulated: piecewise-linear through (breakpoints[i], values[i]),
      breakpoints starting at 0 with value 0, extended beyond the last
      breakpoint with the last slope.

    Use ``PhiFunction.power`` / ``PhiFunction.tabulated`` to build one.
    """
    kind: str
    exponent: float = 1.0
    breakpoints: Tuple[float, ...] = ()
    table: Tuple[float, ...] = ()
    _slopes: Tuple[float, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if self.kind == "power":
            e = float(self.exponent)
            if not (0 < e <= 1):
                raise ParameterError(f"power φ needs exponent in (0, 1], got {e}")
            return
        if self.kind != "tabulated":
            raise ParameterError(f"unknown φ kind {self.kind!r}")

        ts = tuple(float(t) for t in self.breakpoints)
        vs = tuple(float(v) for v in self.table)
        if len(ts) != len(vs) or len(ts) < 2:
            raise ParameterError("tabulated φ needs at least two (t, φ(t)) points")
        if ts[0] != 0.0 or vs[0] != 0.0:
            raise ParameterError("tabulated φ must start at (0, 0)")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ParameterError("tabulated φ breakpoints must be strictly increasing")
        slopes = tuple((v1 - v0) / (t1 - t0) for t0, t1, v0, v1 in zip(ts, ts[1:], vs, vs[1:]))
        if any(s < 0 for s in slopes):
            raise ParameterError("tabulated φ must be nondecreasing")
        scale = max(abs(s) for s in slopes)
        if scale == 0:
            raise ParameterError("tabulated φ must not vanish identically")
        if any(b > a + 1e-12 * scale for a, b in zip(slopes, slopes[1:])):
            raise ParameterError("tabulated φ must be concave")
        object.__setattr__(self, "breakpoints", ts)
        object.__setattr__(self, "table", vs)
        object.__setattr__(self, "_slopes", slopes)

    @classmethod
    def power(cls, exponent: float) -> 'PhiFunction':
        return cls("power", exponent=float(exponent))

    @classmethod
    def tabulated(cls, breakpoints: Sequence[float], values: Sequence[float]) -> 'PhiFunction':
        return cls("tabulated", breakpoints=tuple(breakpoints), table=tuple(values))

    def __call__(self, t: float) -> float:
        if t < 0:
            raise ParameterError(f"φ is defined for t ≥ 0, got {t}")
        if self.kind == "power":
            return 0.0 if t == 0 else t ** self.exponent
        k = bisect.bisect_right(self.breakpoints, t) - 1
        k = min(k, len(self._slopes) - 1)
        return self.table[k] + self._slopes[k] * (t - self.breakpoints[k])

    def to_dict(self) -> dict:
        if self.kind == "power":
            return {"kind": "power", "exponent": format_number(self.exponent)}
        return {
            "kind": "tabulated",
            "t": [format_number(t) for t in self.breakpoints],
            "phi": [format_number(v) for v in self.table],
        }


@dataclass(frozen=True)
class SigmaTriple:
    """Calderón operator parameters σ = [p, q, m].

    p, q in (0, ∞] and m in (0, ∞). R and S0 additionally need p < ∞;
    that check belongs to the operators, not to the triple.
    """
    p: float
    q: float
    m: float

    def __post_init__(self):
        p, q, m = float(self.p), float(self.q), float(self.m)
        if math.isnan(p) or math.isnan(q) or p <= 0 or q <= 0:
            raise ParameterError(f"σ needs p, q in (0, inf], got p={p}, q={q}")
        if not (0 < m < math.inf):
            raise ParameterError(f"σ needs m in (0, inf), got m={m}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "m", m)

    @property
    def inv_p(self) -> float:
        return 0.0 if math.isinf(self.p) else 1.0 / self.p

    @property
    def inv_q(self) -> float:
        return 0.0 if math.isinf(self.q) else 1.0 / self.q

    def to_dict(self) -> dict:
        return {"p": format_number(self.p), "q": format_number(self.q), "m": format_number(self.m)}


@dataclass(frozen=True)
class RadialFunction:
    """Radial function on ℝⁿ given by a step profile in r = |x|.

    Attributes:
        n: Dimension, one of 1, 2, 3
        profile: StepFunction in the radius variable
    """
    n: int
    profile: StepFunction

    def __post_init__(self):
        if self.n not in UNIT_BALL_VOLUME:
            raise ConfigurationError(f"dimension {self.n} not supported (use 1, 2 or 3)")
        if self.profile.domain_origin != 0.0:
            raise ParameterError("radial profiles start at r = 0")

    @classmethod
    def ball(cls, n: int, radius: float, height: float = 1.0) -> 'RadialFunction':
        """height·χ_B(0, radius)."""
        return cls(n, StepFunction.indicator(radius, height))

    @property
    def omega(self) -> float:
        return UNIT_BALL_VOLUME[self.n]

    def ball_measure(self, radius: float) -> float:
        return self.omega * radius ** self.n

    def scaled(self, factor: float) -> 'RadialFunction':
        return RadialFunction(self.n, self.profile.scaled(factor))

    def to_dict(self) -> dict:
        return {"n": self.n, "profile": self.profile.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> 'RadialFunction':
        try:
            return cls(int(data["n"]), StepFunction.from_dict(data["profile"]))
        except (KeyError, TypeError) as e:
            raise ParameterError(f"malformed radial function: {e}") from e


@dataclass(frozen=True)
class IntervalUnion:
    """Finite combination Σ c_i χ_[a_i, b_i] of disjoint sorted intervals on ℝ.

    Coefficients may be signed; intervals may touch but not overlap.
    """
    intervals: Tuple[Tuple[float, float, float], ...]

    def __post_init__(self):
        cleaned = []
        for item in self.intervals:
            a, b, c = (_finite(v, "interval data") for v in item)
            if b <= a:
                raise ParameterError(f"interval [{a}, {b}] is empty")
            cleaned.append((a, b, c))
        if any(nxt[0] < cur[1] for cur, nxt in zip(cleaned, cleaned[1:])):
            raise ParameterError("intervals must be sorted and disjoint")
        object.__setattr__(self, "intervals", tuple(cleaned))

    @classmethod
    def single(cls, a: float, b: float, c: float = 1.0) -> 'IntervalUnion':
        return cls(((a, b, c),))

    @classmethod
    def from_radial(cls, f: RadialFunction) -> 'IntervalUnion':
        """Symmetric interval union for a one-dimensional radial profile."""
        if f.n != 1:
            raise ConfigurationError("only one-dimensional radial functions map to intervals")
        right = [(r0, r1, p.value) for r0, r1, p in zip(f.profile.starts, f.profile.ends, f.profile.pieces)
                 if p.value != 0]
        if not right:
            return cls(())
        left = [(-r1, -r0, v) for r0, r1, v in reversed(right)]
        if right[0][0] == 0.0:
            # the two innermost pieces meet at 0
            r1, v = right[0][1], right[0][2]
            middle = [(-r1, r1, v)]
            return cls(tuple(left[:-1] + middle + right[1:]))
        return cls(tuple(left + right))

    @property
    def endpoints(self) -> List[float]:
        return sorted({e for a, b, _ in self.intervals for e in (a, b)})

    def mass(self) -> float:
        """Signed integral Σ c_i (b_i − a_i)."""
        return math.fsum(c * (b - a) for a, b, c in self.intervals)

    def abs_mass(self) -> float:
        return math.fsum(abs(c) * (b - a) for a, b, c in self.intervals)

    def __call__(self, x: float) -> float:
        for a, b, c in self.intervals:
            if a <= x < b:
                return c
        return 0.0

    def to_dict(self) -> dict:
        return {"intervals": [
            {"a": format_number(a), "b": format_number(b), "c": format_number(c)}
            for a, b, c in self.intervals
        ]}

    @classmethod
    def from_dict(cls, data: dict) -> 'IntervalUnion':
        try:
            return cls(tuple(
                (parse_number(i["a"]), parse_number(i["b"]), parse_number(i.get("c", 1.0)))
                for i in data["intervals"]
            ))
        except (KeyError, TypeError) as e:
            raise ParameterError(f"malformed interval union: {e}") from e

