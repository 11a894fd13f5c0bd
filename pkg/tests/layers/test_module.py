import asyncio
import time

import pytest

from stopord.layers.module import Module
from stopord.types.context import DEFAULT_TIE_TOL, SolveContext
from stopord.types.errors import DeadlineExceeded


class ScaleModule(Module):
    """Multiplies the input by a fixed factor."""

    def __init__(self, factor: float = 2.0):
        super().__init__()
        self.factor = factor

    def forward(self, x: float) -> float:
        return x * self.factor


class AsyncModule(Module):
    """Sleeps, then adds one."""

    def __init__(self, delay: float = 0.01):
        super().__init__()
        self.delay = delay

    async def forward(self, x: float) -> float:
        await asyncio.sleep(self.delay)
        return x + 1


class ContextProbe(Module):
    """Reports what the current SolveContext looks like inside forward."""

    def forward(self, **kwargs) -> dict:
        ctx = SolveContext.current()
        return {"tie_tol": ctx.tie_tol, "deadline": ctx.deadline, "step_id": ctx.step_id, "kwargs": kwargs}


class DeadlineModule(Module):
    """Polls the deadline like a long enumeration would."""

    def forward(self) -> str:
        SolveContext.current().check_deadline()
        return "done"


class TestModuleInitialization:
    """Test cases for Module initialization."""

    def test_static_config_starts_empty(self):
        """A fresh module has no static configuration."""
        module = ScaleModule(factor=3)
        assert module.factor == 3
        assert module._static_cfg == {}

    def test_forward_required(self):
        """forward() must be implemented by subclasses."""
        with pytest.raises(NotImplementedError):
            Module().forward(42)

    def test_span_name(self):
        """Spans are named after the module class."""
        assert ScaleModule().span_name == "stopord.ScaleModule"


class TestModuleExecution:
    """Test cases for sync and async forward through __call__."""

    @pytest.mark.asyncio
    async def test_sync_forward_runs_in_thread(self):
        """A plain forward is awaited through a worker thread."""
        assert await ScaleModule(factor=3)(5) == 15

    @pytest.mark.asyncio
    async def test_async_forward(self):
        """An async forward is awaited directly."""
        assert await AsyncModule(delay=0.001)(5) == 6

    @pytest.mark.asyncio
    async def test_not_implemented_through_call(self):
        """The base class fails when called."""
        with pytest.raises(NotImplementedError):
            await Module()(42)

    @pytest.mark.asyncio
    async def test_exceptions_propagate(self):
        """Errors raised in the worker thread reach the caller."""
        with pytest.raises(DeadlineExceeded):
            await DeadlineModule().with_(deadline=time.monotonic() - 1)()


class TestModuleConfiguration:
    """Test cases for with_()."""

    def test_with_returns_self(self):
        """with_() chains."""
        module = ScaleModule()
        assert module.with_(timeout=30) is module

    def test_override(self):
        """Later values override earlier ones."""
        module = ScaleModule().with_(timeout=30).with_(timeout=60, tie_tol=1e-6)
        assert module._static_cfg == {"timeout": 60, "tie_tol": 1e-6}

    @pytest.mark.asyncio
    async def test_context_keys_split_from_forward_kwargs(self):
        """Context keys go to the SolveContext; the rest to forward."""
        result = await ContextProbe().with_(tie_tol=1e-6, timeout=30)(label="run")
        assert result["tie_tol"] == 1e-6
        assert result["deadline"] is not None
        assert result["kwargs"] == {"label": "run"}

    @pytest.mark.asyncio
    async def test_call_kwargs_override_static(self):
        """Per-call values win over with_() values."""
        result = await ContextProbe().with_(tie_tol=1e-6)(tie_tol=1e-3)
        assert result["tie_tol"] == 1e-3


class TestModuleContextIntegration:
    """Test cases for SolveContext propagation."""

    @pytest.mark.asyncio
    async def test_enclosing_context_reaches_thread(self):
        """The worker thread sees the caller's context."""
        with SolveContext.with_(tie_tol=1e-4):
            result = await ContextProbe()()
        assert result["tie_tol"] == 1e-4

    @pytest.mark.asyncio
    async def test_context_restored_after_call(self):
        """The derived context does not leak out of the call."""
        await ContextProbe().with_(tie_tol=0.5)()
        assert SolveContext.current().tie_tol == DEFAULT_TIE_TOL

    @pytest.mark.asyncio
    async def test_generous_timeout_passes(self):
        """A long timeout lets the call finish."""
        assert await DeadlineModule().with_(timeout=60)() == "done"

    @pytest.mark.asyncio
    async def test_emits_span(self, span_exporter):
        """Each call is traced with its step id."""
        await ScaleModule()(1)
        spans = [s for s in span_exporter.get_finished_spans() if s.name == "stopord.ScaleModule"]
        assert len(spans) == 1
        assert spans[0].attributes["step_id"]
