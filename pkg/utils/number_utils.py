"""Number parsing and formatting utilities for lcert."""

import math
import re
from typing import List, Tuple, Union

from errors import ParameterError

INF_TOKENS = {"inf", "+inf", "infinity", "+infinity", "∞"}

JsonNumber = Union[float, int, str]


def parse_number(text: Union[str, float, int]) -> float:
    """
    Parse a numeric flag value, accepting the "inf" token for infinity.

    Supports formats:
    - Decimal / scientific: "0.5", "1e-3"
    - Infinity: "inf", "Infinity", "∞"
    - Simple fractions: "1/2" -> 0.5

    Args:
        text: String (or number) to parse

    Returns:
        The parsed float

    Raises:
        ParameterError: If the text is not a number, or is NaN
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        value = float(text)
    else:
        s = str(text).strip().lower()
        if not s:
            raise ParameterError("empty numeric value")
        if s in INF_TOKENS:
            return math.inf
        frac = re.fullmatch(r'([+-]?\d+(?:\.\d+)?)/(\d+(?:\.\d+)?)', s)
        try:
            if frac:
                value = float(frac.group(1)) / float(frac.group(2))
            else:
                value = float(s)
        except (ValueError, ZeroDivisionError) as e:
            raise ParameterError(f"not a number: {text!r}") from e
    if math.isnan(value):
        raise ParameterError("NaN is not an accepted parameter value")
    return value


def parse_number_list(text: str) -> List[float]:
    """Parse a comma separated list such as "1,2,inf"."""
    parts = [p for p in str(text).split(",") if p.strip()]
    if not parts:
        raise ParameterError(f"expected a comma separated list, got {text!r}")
    return [parse_number(p) for p in parts]


def parse_triple(text: str) -> Tuple[float, float, float]:
    """
    Parse an operator triple written as "p,q,m".

    Args:
        text: e.g. "1,2,1" or "inf,1,1"

    Returns:
        (p, q, m)

    Raises:
        ParameterError: If there are not exactly three entries
    """
    values = parse_number_list(text)
    if len(values) != 3:
        raise ParameterError(f"expected three values p,q,m, got {text!r}")
    return values[0], values[1], values[2]


def parse_pair(text: str) -> Tuple[float, float]:
    """Parse a Lorentz index written as "p,q"."""
    values = parse_number_list(text)
    if len(values) != 2:
        raise ParameterError(f"expected two values p,q, got {text!r}")
    return values[0], values[1]


def format_number(value: float, digits: int = 15) -> JsonNumber:
    """
    Format a float for machine-readable reports.

    Finite values are rounded to ``digits`` significant digits and returned
    as floats (so JSON keeps them numeric); infinities and NaN become the
    strings "inf", "-inf" and "nan".

    Args:
        value: Number to format
        digits: Significant digits to keep

    Returns:
        Rounded float, or a string token for non-finite values

    Example:
        >>> format_number(1 / 3)
        0.333333333333333
        >>> format_number(float("inf"))
        'inf'
    """
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return value
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return float(f"{value:.{digits}g}")


def format_number_text(value: float, digits: int = 15) -> str:
    """Text form of ``format_number`` for CSV cells."""
    out = format_number(value, digits)
    if isinstance(out, str):
        return out
    return f"{out:.{digits}g}" if isinstance(out, float) else str(out)
