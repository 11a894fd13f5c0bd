"""Module: the unit of execution for solver calls.

A :class:`Module` wraps one solver entry point. Calling it is always
``await``-able: an ``async def forward`` is awaited directly, a plain
``forward`` runs on a worker thread so several solvers can run side by side
under :class:`stopord.layers.Parallel`. Each call runs inside a derived
:class:`SolveContext` and its own OpenTelemetry span.
"""

import inspect
from typing import Any

try:
    from typing import Self
except ImportError:  # Python < 3.11
    from typing_extensions import Self

import anyio
from opentelemetry import trace

from stopord.types.context import SolveContext

tracer = trace.get_tracer(__name__)

CONTEXT_KEYS = frozenset({"timeout", "deadline", "ctx", "tie_tol", "step_id", "span"})


class Module:
    """Base class for solver modules.

    Subclasses implement ``forward``, sync or async. Static configuration
    attached with :meth:`with_` is merged into every call; context keys
    (``timeout``, ``deadline``, ``tie_tol``, ...) go to the SolveContext and
    everything else to ``forward``.

    Example:
        class Evaluate(Module):
            def forward(self, dists, order):
                return evaluate_order(dists, order)

        res = await Evaluate().with_(timeout=10)(dists, [1, 0])
    """

    def __new__(cls, *args: Any, **kwargs: Any) -> Self:
        instance = super().__new__(cls)
        instance._static_cfg = {}
        return instance

    def __init__(self, *args: Any, **kwargs: Any):
        self._static_cfg: dict[str, Any] = {}

    def with_(self, **cfg: Any) -> Self:
        """Attaches configuration applied to every future call."""
        self._static_cfg |= cfg
        return self

    @property
    def span_name(self) -> str:
        return f"stopord.{type(self).__name__}"

    async def __call__(self, *args: Any, **kwargs: Any) -> Any:
        """Runs ``forward`` inside a derived SolveContext and a span.

        Raises:
            NotImplementedError: If ``forward`` is not implemented
            Exception: Whatever ``forward`` raises
        """
        all_kwargs = {**self._static_cfg, **kwargs}
        context_kwargs = {k: v for k, v in all_kwargs.items() if k in CONTEXT_KEYS}
        forward_kwargs = {k: v for k, v in all_kwargs.items() if k not in CONTEXT_KEYS}

        with SolveContext.with_(**context_kwargs) as ctx, tracer.start_as_current_span(self.span_name) as span:
            ctx.span = span
            span.set_attribute("step_id", ctx.step_id)
            fn = inspect.unwrap(self.forward)
            if inspect.iscoroutinefunction(fn):
                return await fn(*args, **forward_kwargs)

            def run_forward() -> Any:
                return fn(*args, **forward_kwargs)

            return await anyio.to_thread.run_sync(run_forward)

    def forward(self, *args: Any, **kwargs: Any) -> Any:
        """Solver logic; implemented by subclasses."""
        raise NotImplementedError
