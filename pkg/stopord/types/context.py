"""Solve-scoped context: deadlines, tie tolerance and tracing.

A :class:`SolveContext` travels implicitly with a solver call through
``contextvars``. Long enumerations (the permutation oracle, the partition
search) poll :meth:`SolveContext.check_deadline` so a CLI ``--timeout`` or a
``Module.with_(timeout=...)`` can stop them. Solver modules also read
``tie_tol`` from the current context when no explicit tolerance is given.
"""

import time
import uuid
from contextvars import ContextVar, Token
from typing import Any, ClassVar

import pydantic

from stopord.types.errors import DeadlineExceeded

DEFAULT_TIE_TOL = 1e-9


def _is_wall_clock_time(t: float) -> bool:
    """Detects a ``time.time()`` timestamp passed where ``time.monotonic()`` is expected.

    Anything more than ten years away from the monotonic clock is taken to
    be wall-clock time.
    """
    ten_years = 10 * 365 * 24 * 60 * 60
    return abs(t - time.monotonic()) > ten_years


class SolveContext(pydantic.BaseModel):
    """Carrier for the deadline, tie tolerance and span of one solve.

    Example:
        with SolveContext.with_(timeout=5, tie_tol=1e-10):
            result = brute_force_order(seq)

        # from inside a long loop
        SolveContext.current().check_deadline()
    """

    model_config = pydantic.ConfigDict(extra="ignore")

    __current_ctx: ClassVar[ContextVar["SolveContext"]] = ContextVar("__current_solve_ctx")

    # ------------------------------------------------------------------
    # Core fields
    # ------------------------------------------------------------------
    deadline: float | None = None  # time.monotonic() seconds
    tie_tol: float = DEFAULT_TIE_TOL
    metadata: dict[str, Any] = pydantic.Field(default_factory=dict)
    step_id: str = pydantic.Field(default_factory=lambda: uuid.uuid4().hex)
    span: Any | None = None  # OpenTelemetry span of the enclosing solver call

    _token: Token | None = None

    def __enter__(self) -> "SolveContext":
        self._token = self.__current_ctx.set(self)
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        if self._token is not None:
            self.__current_ctx.reset(self._token)
            self._token = None

    # ------------------------------------------------------------------
    # Validation
    # ------------------------------------------------------------------
    @pydantic.field_validator("deadline")  # type: ignore[misc]
    def validate_deadline(cls, v: float | None) -> float | None:
        """Rejects wall-clock deadlines.

        Raises:
            ValueError: If the deadline looks like ``time.time()`` output
        """
        if v is not None and _is_wall_clock_time(v):
            raise ValueError("'deadline' must be monotonic time")
        return v

    @pydantic.field_validator("tie_tol")  # type: ignore[misc]
    def validate_tie_tol(cls, v: float) -> float:
        if not v >= 0:
            raise ValueError("'tie_tol' must be non-negative")
        return v

    # ------------------------------------------------------------------
    # Deadline handling
    # ------------------------------------------------------------------
    def check_deadline(self) -> None:
        """Raises DeadlineExceeded once the deadline has passed."""
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise DeadlineExceeded(f"solve deadline exceeded (step {self.step_id})")

    # ------------------------------------------------------------------
    # Construction helpers
    # ------------------------------------------------------------------
    @staticmethod
    def from_kwargs(src: dict[str, Any] | None) -> "SolveContext":
        """Builds a SolveContext from a kwargs dict, consuming the keys it uses.

        ``ctx`` supplies a base context, ``timeout`` (seconds) becomes an
        absolute monotonic ``deadline``, model fields override the base and
        any other public key lands in ``metadata``.

        Raises:
            TypeError: If ``src`` is not a dict or ``ctx`` is not a SolveContext
            ValueError: If both ``deadline`` and ``timeout`` are given
        """
        if src is None:
            return SolveContext()
        if not isinstance(src, dict):
            raise TypeError("from_kwargs expects a dict or None")
        if "deadline" in src and "timeout" in src:
            raise ValueError("'deadline' and 'timeout' cannot be set at the same time")

        base = src.pop("ctx", None)
        if base is None:
            base = SolveContext()
        if not isinstance(base, SolveContext):
            raise TypeError("'ctx' must be a SolveContext object")

        fields = base.model_dump()
        fields["metadata"] = dict(base.metadata)
        fields["span"] = base.span
        for key in SolveContext.model_fields:
            if key in src:
                fields[key] = src.pop(key)
        ctx = SolveContext.model_validate(fields)

        if (timeout := src.pop("timeout", None)) is not None:
            ctx.deadline = time.monotonic() + timeout

        meta = {k: v for k, v in list(src.items()) if not k.startswith("_")}
        ctx.metadata.update(meta)
        for k in meta:
            src.pop(k, None)
        return ctx

    # ------------------------------------------------------------------
    # Context management
    # ------------------------------------------------------------------
    @classmethod
    def current(cls) -> "SolveContext":
        return cls.get()

    @classmethod
    def get(cls) -> "SolveContext":
        """Returns the current context, installing a default one if none exists."""
        try:
            return cls.__current_ctx.get()
        except LookupError:
            ctx = SolveContext()
            cls.__current_ctx.set(ctx)
            return ctx

    @classmethod
    def set(cls, **kwargs: Any) -> Token:
        """Installs a context built from ``kwargs`` and returns the reset token."""
        return cls.__current_ctx.set(SolveContext.from_kwargs(kwargs))

    @classmethod
    def reset(cls, token: Token) -> None:
        cls.__current_ctx.reset(token)

    @classmethod
    def with_(cls, **kwargs: Any) -> "SolveContext":
        """Derives a context from the current one, for use in a ``with`` block.

        Example:
            with SolveContext.with_(timeout=30):
                ...
        """
        kwargs["ctx"] = cls.get()
        return cls.from_kwargs(kwargs)
