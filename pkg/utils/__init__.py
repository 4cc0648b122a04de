"""Utility modules for lcert.

This package provides number parsing and formatting helpers shared by the
command line and the report writer.

Modules:
    number_utils: "inf"-aware parsing and fixed-precision formatting
"""
from utils.number_utils import (
    format_number,
    format_number_text,
    parse_number,
    parse_number_list,
    parse_pair,
    parse_triple,
)

__all__ = [
    "format_number",
    "format_number_text",
    "parse_number",
    "parse_number_list",
    "parse_pair",
    "parse_triple",
]
