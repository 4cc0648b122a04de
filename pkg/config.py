"""Configuration settings for the lcert toolkit."""
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Mapping, Optional

from errors import ConfigurationError


@dataclass
class Config:
    """Toolkit configuration settings.

    Centralized tolerances and grid densities so that no numeric constant is
    hardcoded in the business logic. A handful of fields can be overridden
    from the environment (see ``load``).
    """
    # File system / process
    output_dir: Path = Path(".")
    log_level: str = "WARNING"
    seed: int = 20240611

    # Exactness tolerances
    rel_tol: float = 1e-12
    dual_form_tol: float = 1e-10
    significant_digits: int = 15

    # Radial quadrature
    quadrature_rel_tol: float = 1e-8
    quadrature_max_levels: int = 20
    gauss_order: int = 10

    # Certificate search
    t_points_per_decade: int = 32
    c_grid_min: float = 1e-3
    c_grid_max: float = 1e3
    c_grid_points: int = 25
    certificate_slack: float = 1e-9

    # Truncation families and target norms
    membership_pieces_per_decade: int = 64
    target_window_radius: float = 1e3
    tail_decades: int = 8
    tail_slope_tol: float = 1e-3

    # Experiment verdicts
    max_log_slope_floor: float = 0.1
    weak_ratio_limit: float = 1.5
    fatou_tol: float = 1e-3

    @classmethod
    def load(cls, environ: Optional[Mapping[str, str]] = None) -> 'Config':
        """
        Load configuration, applying environment overrides.

        Recognised variables: LCERT_OUTPUT_DIR, LCERT_LOG_LEVEL, LCERT_SEED.

        Args:
            environ: Mapping to read instead of ``os.environ`` (used by tests)

        Returns:
            Config instance with default or overridden values

        Raises:
            ConfigurationError: If an override cannot be parsed
        """
        env = os.environ if environ is None else environ
        cfg = cls()

        out = env.get("LCERT_OUTPUT_DIR")
        if out:
            cfg.output_dir = Path(out).expanduser()

        level = env.get("LCERT_LOG_LEVEL")
        if level:
            level = level.strip().upper()
            if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
                raise ConfigurationError(f"LCERT_LOG_LEVEL: unknown level {level!r}")
            cfg.log_level = level

        seed = env.get("LCERT_SEED")
        if seed:
            try:
                cfg.seed = int(seed)
            except ValueError as e:
                raise ConfigurationError(f"LCERT_SEED must be an integer, got {seed!r}") from e

        return cfg

    def as_dict(self) -> dict:
        """Plain-dict view, used when a report records the settings it ran with."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = str(value) if isinstance(value, Path) else value
        return out


# Global config instance
config = Config.load()
