"""Instance files and reports exchanged by the command-line front end.

An instance file is JSON::

    {"version": 1,
     "variables": [{"type": "finite", "atoms": [0, 1], "masses": [0.9, 0.1]},
                   {"type": "two_point", "a": 0.1, "b": 0.1, "p": 1.0}],
     "metadata": {}}

Variables use the distribution encoding: ``finite`` and ``uniform`` are the
distribution models themselves, ``two_point`` and ``three_point`` are
parameter forms that build a finite distribution.
"""

import hashlib
from pathlib import Path
from typing import Annotated, Any, Literal

import pydantic

from stopord.types.dist import FiniteDist, UniformDist, three_point, two_point


class TwoPointSpec(pydantic.BaseModel):
    """``a`` w.p. ``1 - p``, ``b`` w.p. ``p``."""

    model_config = pydantic.ConfigDict(frozen=True)

    type: Literal["two_point"] = "two_point"
    a: float
    b: float
    p: float

    def to_dist(self) -> FiniteDist:
        return two_point(self.a, self.b, self.p)


class ThreePointSpec(pydantic.BaseModel):
    """``a`` w.p. ``1 - p - q``, ``m`` w.p. ``p``, ``b`` w.p. ``q``."""

    model_config = pydantic.ConfigDict(frozen=True)

    type: Literal["three_point"] = "three_point"
    a: float
    m: float
    b: float
    p: float
    q: float

    def to_dist(self) -> FiniteDist:
        return three_point(self.a, self.m, self.b, self.p, self.q)


VariableSpec = Annotated[
    FiniteDist | UniformDist | TwoPointSpec | ThreePointSpec,
    pydantic.Field(discriminator="type"),
]


def to_dist(spec: FiniteDist | UniformDist | TwoPointSpec | ThreePointSpec) -> FiniteDist | UniformDist:
    if isinstance(spec, TwoPointSpec | ThreePointSpec):
        return spec.to_dist()
    return spec


class InstanceFile(pydantic.BaseModel):
    """A versioned list of variables with free-form metadata."""

    model_config = pydantic.ConfigDict(frozen=True)

    version: Literal[1] = 1
    variables: tuple[VariableSpec, ...]
    metadata: dict[str, Any] = pydantic.Field(default_factory=dict)

    @pydantic.field_validator("variables")  # type: ignore[misc]
    def _nonempty(cls, v: tuple[Any, ...]) -> tuple[Any, ...]:
        if not v:
            raise ValueError("an instance needs at least one variable")
        return v

    @classmethod
    def read(cls, path: str | Path) -> "InstanceFile":
        """Parses an instance file.

        Raises:
            pydantic.ValidationError: On malformed JSON or invalid variables
        """
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def from_dists(cls, dists: list[FiniteDist] | list[UniformDist], **metadata: Any) -> "InstanceFile":
        return cls(variables=tuple(dists), metadata=metadata)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.model_dump_json(indent=2) + "\n", encoding="utf-8")

    def dists(self) -> list[FiniteDist | UniformDist]:
        return [to_dist(v) for v in self.variables]

    def digest(self) -> str:
        """sha256 of the canonical JSON encoding."""
        return hashlib.sha256(self.model_dump_json().encode("utf-8")).hexdigest()


class Report(pydantic.BaseModel):
    """Machine-readable result of one CLI command."""

    command: str
    args: dict[str, Any] = pydantic.Field(default_factory=dict)
    instance_digest: str | None = None
    result: dict[str, Any] = pydantic.Field(default_factory=dict)
    wall_time: float = 0.0

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)
