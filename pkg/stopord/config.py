"""Solver settings read from an optional YAML file.

Example ``stopord.yaml``::

    tie_tol: 1.0e-9
    workers: 4
    timeout: 60
    eps: 0.1

Command-line flags override file values.
"""

from pathlib import Path
from typing import Any

import pydantic
import yaml

from stopord.types.context import DEFAULT_TIE_TOL


class SolverSettings(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    tie_tol: float = pydantic.Field(default=DEFAULT_TIE_TOL, ge=0)
    workers: int = pydantic.Field(default=1, ge=1)
    timeout: float | None = pydantic.Field(default=None, gt=0)
    eps: float | None = pydantic.Field(default=None, gt=0, lt=1)

    @classmethod
    def load(cls, path: str | Path | None) -> "SolverSettings":
        """Reads settings from ``path``; defaults when ``path`` is None.

        Raises:
            pydantic.ValidationError: On unknown keys or out-of-range values
            ValueError: If the file is not a YAML mapping
        """
        if path is None:
            return cls()
        data = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        if not isinstance(data, dict):
            raise ValueError(f"{path}: expected a mapping of settings")
        return cls.model_validate(data)

    def merged(self, **overrides: Any) -> "SolverSettings":
        """Returns a copy with every non-None override applied."""
        updates = {k: v for k, v in overrides.items() if v is not None}
        return self.model_validate({**self.model_dump(), **updates})
