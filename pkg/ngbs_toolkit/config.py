"""
Config - Numerical defaults and the optional .ngbs-toolkit.json override file
"""

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional

from .errors import ParameterError

SETTINGS_FILE = '.ngbs-toolkit.json'


@dataclass(frozen=True)
class ToolkitConfig:
    """Defaults used when a run specification leaves a knob unset"""

    window_margin: float = 6.0          # phase-space radius = sqrt(2N) + margin
    line_margin: float = 8.0            # half-width of line integrals = sqrt(2N) + margin
    line_step: float = 0.02
    resolution: int = 201
    volume_tolerance: float = 1e-5
    max_refinements: int = 4
    kink_subdivisions: int = 8
    series_tolerance: float = 1e-12
    indeterminate_threshold: float = 1e-14
    significant_digits: int = 12
    theta_count: int = 64
    workers: int = 1

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_CONFIG = ToolkitConfig()


def load_config(path: Optional[Path] = None) -> ToolkitConfig:
    """
    Load toolkit defaults, applying a JSON override file when present

    Args:
        path: Explicit settings file; falls back to ./.ngbs-toolkit.json

    Returns:
        ToolkitConfig with overrides applied
    """
    explicit = path is not None
    settings_path = Path(path) if explicit else Path.cwd() / SETTINGS_FILE

    if not settings_path.exists():
        if explicit:
            raise ParameterError(f"settings file not found: {settings_path}")
        return DEFAULT_CONFIG

    try:
        overrides = json.loads(settings_path.read_text())
    except json.JSONDecodeError as e:
        raise ParameterError(f"{settings_path}: invalid JSON ({e})")

    known = {f.name: f.type for f in fields(ToolkitConfig)}
    unknown = sorted(set(overrides) - set(known))
    if unknown:
        raise ParameterError(f"{settings_path}: unknown settings {', '.join(unknown)}")

    coerced = {}
    for key, value in overrides.items():
        default = getattr(DEFAULT_CONFIG, key)
        coerced[key] = type(default)(value)

    return replace(DEFAULT_CONFIG, **coerced)
