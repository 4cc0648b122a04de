"""Exact operations on step functions: distribution, rearrangement, layers.

Sets enter only through their measures here. Every function is pure and
works on the canonical ``StepFunction`` representation, so results can be
compared structurally.

Functions:
    distribution: f_*(λ), the measure of {f > λ}
    distribution_function: the whole step function λ ↦ f_*(λ)
    rearrange: the nonincreasing rearrangement f*
    nonincreasing_rearrangement_at: f*(t) from the infimum definition
    layer_cake: nested-set decomposition Σ α_k χ_[0, μ(E_k))
    reconstruct: inverse of layer_cake
    dilate: stretch the domain by λ
    pointwise_le: f ≤ g everywhere
"""
import math
from typing import List

from config import config
from errors import ParameterError
from models import DistributionFunction, LayerDecomposition, Piece, StepFunction


def distribution(f: StepFunction, lam: float) -> float:
    """Measure of {f > lam}. See MeasureOperations.distribution."""
    return MeasureOperations.distribution(f, lam)


def distribution_function(f: StepFunction) -> DistributionFunction:
    """Step representation of f_*. See MeasureOperations.distribution_function."""
    return MeasureOperations.distribution_function(f)


def rearrange(f: StepFunction) -> StepFunction:
    """Nonincreasing rearrangement f*. See MeasureOperations.rearrange."""
    return MeasureOperations.rearrange(f)


def nonincreasing_rearrangement_at(f: StepFunction, t: float) -> float:
    """f*(t) = inf{λ ≥ 0 : f_*(λ) ≤ t}."""
    return MeasureOperations.rearrangement_at(f, t)


def layer_cake(f: StepFunction) -> LayerDecomposition:
    """Layer decomposition of f*. See MeasureOperations.layer_cake."""
    return MeasureOperations.layer_cake(f)


def reconstruct(layers: LayerDecomposition) -> StepFunction:
    """Σ α_k χ_[0, μ(E_k)) as a StepFunction."""
    return MeasureOperations.reconstruct(layers)


def dilate(f: StepFunction, lam: float) -> StepFunction:
    """x ↦ f(x / lam). See MeasureOperations.dilate."""
    return MeasureOperations.dilate(f, lam)


def pointwise_le(f: StepFunction, g: StepFunction) -> bool:
    """True when f(x) ≤ g(x) for every x."""
    return MeasureOperations.pointwise_le(f, g)


class MeasureOperations:
    """Rearrangement-invariant primitives on step functions.

    All methods are static and side-effect free.
    """

    @staticmethod
    def distribution(f: StepFunction, lam: float) -> float:
        """
        Distribution function f_*(λ) = μ{f > λ}.

        The inequality is strict, so λ equal to the top value gives 0.

        Args:
            f: Step function
            lam: Level λ ≥ 0

        Returns:
            Total length of the pieces whose value exceeds lam

        Raises:
            ParameterError: If lam is negative or NaN

        Example:
            >>> f = StepFunction.from_pairs([(2, 3), (3, 1)])
            >>> MeasureOperations.distribution(f, 0.5), MeasureOperations.distribution(f, 3)
            (5.0, 0.0)
        """
        if not lam >= 0:
            raise ParameterError(f"distribution level must be ≥ 0, got {lam}")
        return math.fsum(p.length for p in f.pieces if p.value > lam)

    @staticmethod
    def distribution_function(f: StepFunction) -> DistributionFunction:
        """Thresholds are the distinct positive values of f, measures the matching f_*."""
        r = MeasureOperations.rearrange(f)
        return DistributionFunction(tuple(r.values), tuple(r.ends))

    @staticmethod
    def rearrange(f: StepFunction) -> StepFunction:
        """
        Nonincreasing rearrangement f*.

        Values are sorted in descending order keeping their lengths; zero
        pieces carry no mass above any level and are dropped. Equal values
        are merged by the StepFunction canonical form, which makes the
        operation idempotent bit for bit.

        Args:
            f: Step function (the domain origin is irrelevant)

        Returns:
            Canonical nonincreasing StepFunction on [0, ∞) equimeasurable with f
        """
        positive = [p for p in f.pieces if p.value > 0]
        positive.sort(key=lambda p: p.value, reverse=True)
        return StepFunction(tuple(positive))

    @staticmethod
    def rearrangement_at(f: StepFunction, t: float) -> float:
        """
        Evaluate f*(t) directly from the infimum over levels.

        f_* is a right-continuous step function whose jumps sit at the values
        of f, so the infimum is attained at 0 or at one of those values.

        Raises:
            ParameterError: If t is negative
        """
        if not t >= 0:
            raise ParameterError(f"rearrangement argument must be ≥ 0, got {t}")
        candidates = sorted({0.0, *(p.value for p in f.pieces)})
        for lam in candidates:
            if MeasureOperations.distribution(f, lam) <= t:
                return lam
        return candidates[-1]

    @staticmethod
    def layer_cake(f: StepFunction) -> LayerDecomposition:
        """
        Layer-cake decomposition of f.

        With v_1 > ... > v_N the distinct positive values of f and
        v_{N+1} = 0, the layers are α_k = v_k − v_{k+1} and
        μ(E_k) = f_*(v_{k+1}).

        Args:
            f: Step function

        Returns:
            LayerDecomposition; empty for the zero function

        Example:
            >>> f = StepFunction.from_pairs([(2, 3), (3, 1)])
            >>> MeasureOperations.layer_cake(f)
            LayerDecomposition(alphas=(2.0, 1.0), cum_measures=(2.0, 5.0))
        """
        r = MeasureOperations.rearrange(f)
        values = r.values + [0.0]
        alphas = tuple(values[k] - values[k + 1] for k in range(len(r.pieces)))
        return LayerDecomposition(alphas, r.ends)

    @staticmethod
    def reconstruct(layers: LayerDecomposition) -> StepFunction:
        """Rebuild the nonincreasing step function Σ α_k χ_[0, μ(E_k))."""
        pieces: List[Piece] = []
        previous = 0.0
        for k, cum in enumerate(layers.cum_measures):
            pieces.append(Piece(cum - previous, math.fsum(layers.alphas[k:])))
            previous = cum
        return StepFunction(tuple(pieces))

    @staticmethod
    def dilate(f: StepFunction, lam: float) -> StepFunction:
        """
        Domain dilation x ↦ f(x / λ).

        Every piece length (and the origin) is multiplied by λ; values are
        unchanged, so f_* is multiplied by λ.

        Raises:
            ParameterError: If λ is not a positive finite number
        """
        if not (0 < lam < math.inf):
            raise ParameterError(f"dilation factor must be positive and finite, got {lam}")
        if lam == 1:
            return f
        return StepFunction(
            tuple(Piece(p.length * lam, p.value) for p in f.pieces),
            f.domain_origin * lam,
        )

    @staticmethod
    def pointwise_le(f: StepFunction, g: StepFunction) -> bool:
        """
        Pointwise (almost everywhere) comparison after aligning breakpoints.

        Both functions are constant on each cell of the merged breakpoint
        set, so one evaluation per cell decides the inequality. Cells are
        probed at their midpoints and breakpoints closer than rel_tol are
        identified, so a one-ulp disagreement between two constructions of
        the same lattice does not count as a cell.
        """
        marks = sorted({f.domain_origin, g.domain_origin,
                        *(f.domain_origin + e for e in f.ends),
                        *(g.domain_origin + e for e in g.ends)})
        merged = marks[:1]
        for x in marks[1:]:
            if x - merged[-1] > config.rel_tol * max(abs(x), 1.0):
                merged.append(x)
        return all(f(0.5 * (a + b)) <= g(0.5 * (a + b)) for a, b in zip(merged, merged[1:]))
