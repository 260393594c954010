"""Search budgets for the combinatorial procedures.

Two knobs: how many vertices the ideal-lattice enumeration will visit, and
how large a candidate witness set the adhesiveness search will try. Both can
be raised through the environment variable KFORGE_BUDGET, either as a single
integer applied to witness size or as comma-separated key=value pairs, e.g.

    KFORGE_BUDGET="lattice_vertices=16,witness_size=8"
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import InputFormatError

_ENV_VAR = "KFORGE_BUDGET"

DEFAULT_LATTICE_VERTICES = 12
DEFAULT_WITNESS_SIZE = 6


@dataclass(frozen=True)
class Budget:
    """Caps for exponential searches."""

    lattice_vertices: int = DEFAULT_LATTICE_VERTICES
    witness_size: int = DEFAULT_WITNESS_SIZE

    def __post_init__(self) -> None:
        if self.lattice_vertices < 0 or self.witness_size < 0:
            raise InputFormatError("budget values must be nonnegative")


def from_env(env: dict[str, str] | None = None) -> Budget:
    """Build a Budget from KFORGE_BUDGET, falling back to the defaults."""
    source = os.environ if env is None else env
    raw = source.get(_ENV_VAR, "").strip()
    if not raw:
        return Budget()
    if "=" not in raw:
        try:
            return Budget(witness_size=int(raw))
        except ValueError as exc:
            raise InputFormatError(f"cannot parse {_ENV_VAR}={raw!r}") from exc
    values: dict[str, int] = {}
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in ("lattice_vertices", "witness_size"):
            raise InputFormatError(f"unknown {_ENV_VAR} key {key!r}")
        try:
            values[key] = int(val.strip())
        except ValueError as exc:
            raise InputFormatError(f"cannot parse {_ENV_VAR} entry {part!r}") from exc
    return Budget(**values)
