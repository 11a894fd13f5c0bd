"""Composite modules."""

import asyncio
from typing import Any

from stopord.layers.module import Module


class Parallel(Module):
    """Runs several modules concurrently on the same inputs.

    Each module gets its own derived SolveContext. Results come back in
    module order; the first exception (in module order) is re-raised after
    all modules have finished.

    Example:
        shards = Parallel(OracleShard(lasts=[0, 2]), OracleShard(lasts=[1]))
        parts = await shards(dists)
    """

    def __init__(self, *modules: Module):
        super().__init__()
        self.modules = modules

    async def forward(self, *args: Any, **kwargs: Any) -> tuple[Any, ...]:
        results = await asyncio.gather(*(module(*args, **kwargs) for module in self.modules), return_exceptions=True)
        for result in results:
            if isinstance(result, BaseException):
                raise result
        return tuple(results)
