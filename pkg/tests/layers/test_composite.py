"""Tests for the Parallel composite."""

import asyncio
import time

import pytest

from stopord.layers import Module, Parallel
from stopord.types.context import SolveContext
from stopord.types.errors import PreconditionError, SizeLimitError


class ScaleModule(Module):
    def __init__(self, factor: int = 1):
        super().__init__()
        self.factor = factor

    def forward(self, x: int) -> int:
        return x * self.factor


class SleepModule(Module):
    def __init__(self, delay: float):
        super().__init__()
        self.delay = delay

    async def forward(self, x: int) -> int:
        await asyncio.sleep(self.delay)
        return x * 2


class RaisingModule(Module):
    def __init__(self, exc: Exception):
        super().__init__()
        self.exc = exc

    def forward(self, x: int) -> int:
        raise self.exc


class TieTolModule(Module):
    def forward(self, x: int) -> float:
        return SolveContext.current().tie_tol


class TestParallel:
    """Test cases for Parallel."""

    @pytest.mark.asyncio
    async def test_results_in_module_order(self):
        """Results come back in the order the modules were given."""
        assert await Parallel(ScaleModule(2), ScaleModule(3), ScaleModule(4))(5) == (10, 15, 20)

    @pytest.mark.asyncio
    async def test_runs_concurrently(self):
        """Two 0.1s sleeps finish well under 0.2s."""
        start = time.monotonic()
        result = await Parallel(SleepModule(0.1), ScaleModule(3), SleepModule(0.1))(5)
        assert result == (10, 15, 10)
        assert time.monotonic() - start < 0.19

    @pytest.mark.asyncio
    async def test_empty(self):
        """No modules, no results."""
        assert await Parallel()(1) == ()

    @pytest.mark.asyncio
    async def test_first_error_in_module_order(self):
        """The first failing module's exception is re-raised."""
        pipeline = Parallel(
            ScaleModule(2),
            RaisingModule(SizeLimitError("too big")),
            RaisingModule(PreconditionError("bad input")),
        )
        with pytest.raises(SizeLimitError, match="too big"):
            await pipeline(1)

    @pytest.mark.asyncio
    async def test_context_shared_by_children(self):
        """Children derive from the caller's context."""
        with SolveContext.with_(tie_tol=1e-5):
            result = await Parallel(TieTolModule(), TieTolModule())(0)
        assert result == (1e-5, 1e-5)

    @pytest.mark.asyncio
    async def test_child_config_isolated(self):
        """A child's own with_() settings do not leak to its siblings."""
        result = await Parallel(TieTolModule().with_(tie_tol=0.5), TieTolModule())(0)
        assert result == (0.5, SolveContext.current().tie_tol)

    @pytest.mark.asyncio
    async def test_nested(self):
        """Parallel modules compose."""
        inner = Parallel(ScaleModule(2), ScaleModule(3))
        assert await Parallel(inner, ScaleModule(10))(1) == ((2, 3), 10)
