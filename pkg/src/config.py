"""Limits loader.

Reads the versioned YAML file of size caps and CLI defaults and returns it
as a validated, frozen :class:`Limits`.  Command-line flags override single
fields with :func:`dataclasses.replace`.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

import yaml

DEFAULT_LIMITS_PATH = Path(__file__).resolve().parent.parent / "config" / "limits_v1.yaml"

_EXPECTED_CAPS = {
    "max_qubits",
    "max_nullity",
    "max_spins",
    "verify_nullity",
    "minor_budget",
    "enum_max_edges",
    "enum_max_vertices",
    "general_search_max_edges",
}
_EXPECTED_DEFAULTS = {"lambda", "seed", "count"}


@dataclass(frozen=True)
class Limits:
    max_qubits: int = 20
    max_nullity: int = 24
    max_spins: int = 24
    verify_nullity: int = 20
    minor_budget: int = 1_000_000
    enum_max_edges: int = 8
    enum_max_vertices: int = 6
    general_search_max_edges: int = 6
    default_lambda: float = 0.5
    default_seed: int = 7
    default_count: int = 20

    def caps(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name in _EXPECTED_CAPS}


def load_limits(path: str | Path = DEFAULT_LIMITS_PATH) -> Limits:
    """Parse *path* and return validated limits.

    Parameters
    ----------
    path : str | Path
        Filesystem path to the YAML limits file.

    Returns
    -------
    Limits
        Caps and CLI defaults.

    Raises
    ------
    FileNotFoundError
        If *path* does not exist.
    ValueError
        If the YAML content is missing ``version``, ``caps`` or
        ``defaults``, has unknown or missing keys, or non-positive caps.
    """
    limits_path = Path(path)
    if not limits_path.exists():
        raise FileNotFoundError(f"Limits file not found: {limits_path}")

    with open(limits_path, "r") as fh:
        data = yaml.safe_load(fh)

    if not isinstance(data, dict):
        raise ValueError(f"Limits root must be a mapping, got {type(data).__name__}")

    # --- top-level keys ---
    for key in ("version", "caps", "defaults"):
        if key not in data:
            raise ValueError(f"Limits file is missing required key '{key}'")
    if data["version"] != 1:
        raise ValueError(f"Unsupported limits version {data['version']!r}")

    caps = data["caps"]
    defaults = data["defaults"]
    if not isinstance(caps, dict) or not isinstance(defaults, dict):
        raise ValueError("'caps' and 'defaults' must be mappings")

    # --- caps ---
    missing = _EXPECTED_CAPS - caps.keys()
    if missing:
        raise ValueError(f"Limits file is missing caps: {sorted(missing)}")
    unknown = caps.keys() - _EXPECTED_CAPS
    if unknown:
        raise ValueError(f"Limits file has unknown caps: {sorted(unknown)}")
    for name, value in caps.items():
        if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
            raise ValueError(f"Cap '{name}' must be a positive integer, got {value!r}")

    # --- defaults ---
    missing = _EXPECTED_DEFAULTS - defaults.keys()
    if missing:
        raise ValueError(f"Limits file is missing defaults: {sorted(missing)}")
    if not float(defaults["lambda"]) > 0:
        raise ValueError(f"Default lambda must be positive, got {defaults['lambda']!r}")

    return Limits(
        **caps,
        default_lambda=float(defaults["lambda"]),
        default_seed=int(defaults["seed"]),
        default_count=int(defaults["count"]),
    )
