"""Base model for validated domain objects."""

from typing import Any

import pydantic

from stopord.types.errors import StopordError


def domain_error(err: pydantic.ValidationError) -> StopordError | None:
    """Returns the first :class:`StopordError` a validator raised, if any."""
    for detail in err.errors():
        exc = detail.get("ctx", {}).get("error")
        if isinstance(exc, StopordError):
            return exc
    return None


class DomainModel(pydantic.BaseModel):
    """Frozen model whose constructor raises the validator's own error.

    pydantic wraps every ``ValueError`` raised during validation in a
    ``ValidationError``. Keyword construction unwraps it so callers see the
    :class:`StopordError` subclass. Parsing through ``model_validate_json``
    or a ``TypeAdapter`` keeps pydantic's error.

    Example:
        FiniteDist(atoms=[0, 1], masses=[0.5, 0.6])  # raises ConstructionError
    """

    model_config = pydantic.ConfigDict(frozen=True)

    def __init__(self, **data: Any) -> None:
        try:
            super().__init__(**data)
        except pydantic.ValidationError as e:
            exc = domain_error(e)
            if exc is None:
                raise
            raise exc from e
