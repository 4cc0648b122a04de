"""Read inputs from and write reports to JSON and CSV."""
import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, TextIO

from config import config
from errors import ParameterError
from utils.number_utils import format_number, format_number_text


def _canonical(value: Any) -> Any:
    """Recursively replace floats by their fixed-precision report form."""
    if isinstance(value, float):
        return format_number(value, config.significant_digits)
    if isinstance(value, dict):
        return {str(k): _canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_canonical(v) for v in value]
    return value


def _csv_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_number_text(value, config.significant_digits)
    return str(value)


class ReportHandler:
    """Load JSON inputs and write JSON/CSV reports."""

    def __init__(self, base_dir: Optional[str] = None):
        """
        Initialize ReportHandler.

        Args:
            base_dir: Directory that relative output paths are resolved
                against. If None, uses config.output_dir.
        """
        if base_dir is None:
            self.base_dir = config.output_dir
        else:
            self.base_dir = Path(base_dir).expanduser()

    def resolve(self, path: str) -> Path:
        """Absolute paths are kept; relative ones land under base_dir."""
        p = Path(path).expanduser()
        return p if p.is_absolute() else self.base_dir / p

    def load_source(self, source: str) -> dict:
        """Parse a JSON document given inline or as ``@path``.

        Args:
            source: JSON text, or "@" followed by a file path

        Returns:
            The decoded JSON object

        Raises:
            ParameterError: If the file cannot be read or the JSON is malformed
        """
        where = "inline input"
        text = source
        if source.startswith("@"):
            path = Path(source[1:]).expanduser()
            where = str(path)
            try:
                text = path.read_text(encoding="utf-8")
            except (OSError, UnicodeDecodeError) as e:
                raise ParameterError(f"cannot read {path}: {e}") from e
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParameterError(f"malformed JSON in {where}: {e}") from e
        if not isinstance(data, dict):
            raise ParameterError(f"expected a JSON object in {where}")
        return data

    @staticmethod
    def dumps(data: dict) -> str:
        """
        Canonical JSON: sorted keys, two-space indent, 15 significant digits.

        Identical reports give byte-identical text.
        """
        return json.dumps(_canonical(data), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"

    @staticmethod
    def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        """One line per row, numbers in report form."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(v) for v in row])
        return buffer.getvalue()

    def emit(self, text: str, out: Optional[str], stream: TextIO) -> Optional[Path]:
        """Write text to ``out`` (under base_dir when relative) or to stream.

        Returns:
            The file written, or None for stream output

        Raises:
            ParameterError: If the file cannot be written
        """
        if out is None:
            stream.write(text)
            return None
        path = self.resolve(out)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        except OSError as e:
            raise ParameterError(f"failed to write report to {path}: {e}") from e
        return path

    def write_report(self, report: Any, out: Optional[str], as_csv: bool, stream: TextIO) -> Optional[Path]:
        """Serialize a report object (``to_dict``, ``header``, ``rows``) and emit it."""
        if as_csv:
            text = self.csv_text(report.header, report.rows())
        else:
            text = self.dumps(report.to_dict())
        return self.emit(text, out, stream)
