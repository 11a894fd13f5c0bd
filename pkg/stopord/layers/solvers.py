"""Solver modules used by the command-line front end.

Each module wraps one core entry point. :class:`BruteForce` and
:class:`Fptas` split their work into independent shards that run through
:class:`Parallel`; the merged answer does not depend on the shard count.
"""

from collections.abc import Sequence
from typing import Any

from stopord.core import fptas, oracle, prophet, two_point
from stopord.core.ordering_rules import solve_nested_uniform
from stopord.core.stopping import AnyDist, ExcessProfile, OrderingResult, evaluate_order, makespan_value
from stopord.layers.composite import Parallel
from stopord.layers.module import Module
from stopord.types.dist import FiniteDist, UniformDist
from stopord.types.errors import InstanceShapeError, PreconditionError, SizeLimitError


def shard(indices: Sequence[int], workers: int) -> list[list[int]]:
    """Deals ``indices`` round-robin into at most ``workers`` non-empty groups."""
    if workers < 1:
        raise PreconditionError(f"workers must be at least 1 (got {workers})")
    groups: list[list[int]] = [[] for _ in range(min(workers, len(indices)))]
    for k, i in enumerate(indices):
        groups[k % len(groups)].append(i)
    return groups


class Evaluate(Module):
    """Value, thresholds and excess decomposition of a given order."""

    def forward(self, dists: Sequence[AnyDist], order: Sequence[int]) -> tuple[OrderingResult, ExcessProfile]:
        res = evaluate_order(dists, order)
        return res, makespan_value([dists[i] for i in res.order])


class OracleShard(Module):
    """Permutation search restricted to orders ending in ``lasts``."""

    def __init__(self, lasts: Sequence[int]):
        super().__init__()
        self.lasts = tuple(lasts)

    def forward(self, dists: Sequence[AnyDist]) -> oracle.OracleResult:
        return oracle.brute_force_order(dists, lasts=self.lasts)


class BruteForce(Module):
    """Exhaustive permutation search split over ``workers`` shards."""

    def __init__(self, workers: int = 1):
        super().__init__()
        self.workers = workers

    async def forward(self, dists: Sequence[AnyDist]) -> oracle.OracleResult:
        if not dists:
            raise PreconditionError("the oracle needs at least one variable")
        if len(dists) > oracle.MAX_ORDER_N:
            raise SizeLimitError(f"brute force supports at most {oracle.MAX_ORDER_N} variables (got {len(dists)})")
        shards = [OracleShard(group) for group in shard(range(len(dists)), self.workers)]
        parts = await Parallel(*shards)(dists)
        return oracle.merge_oracle_results(dists, parts)


class TwoPointSolve(Module):
    def forward(self, inst: two_point.TwoPointInstance) -> OrderingResult:
        return two_point.solve(inst)


class PinnedFptas(Module):
    """FPTAS candidates for a group of pinned last variables."""

    def __init__(self, lasts: Sequence[int]):
        super().__init__()
        self.lasts = tuple(lasts)

    def forward(self, dists: Sequence[FiniteDist], epsilon: float) -> list[fptas.FptasResult]:
        return [fptas.solve_pinned(dists, i, epsilon) for i in self.lasts]


class Fptas(Module):
    """Three-point approximation scheme.

    Instances on ``{0, m, 1}`` go to the common-endpoint search directly;
    otherwise the pinned runs are spread over ``workers`` shards.
    """

    def __init__(self, workers: int = 1):
        super().__init__()
        self.workers = workers

    async def forward(self, dists: Sequence[AnyDist], epsilon: float) -> fptas.FptasResult:
        if any(not isinstance(d, FiniteDist) for d in dists):
            raise InstanceShapeError("the approximation scheme needs finite three-point variables")
        if not 0 < epsilon < 1:
            raise PreconditionError(f"epsilon must lie in (0, 1) (got {epsilon})")
        if not dists:
            raise PreconditionError("need at least one variable")
        if all(d.min_atom == 0 for d in dists):
            return await _CommonEndpoints()(dists, epsilon)
        for d in dists:
            fptas.three_point_parts(d)
        shards = [PinnedFptas(group) for group in shard(range(len(dists)), self.workers)]
        groups = await Parallel(*shards)(dists, epsilon)
        return fptas.best_candidate([c for group in groups for c in group])


class _CommonEndpoints(Module):
    def forward(self, dists: Sequence[FiniteDist], epsilon: float) -> fptas.FptasResult:
        return fptas.solve_common_endpoints(dists, epsilon)


class NestedUniform(Module):
    def forward(self, dists: Sequence[UniformDist]) -> OrderingResult:
        return solve_nested_uniform(dists)


class Prophet(Module):
    def forward(self, inst: two_point.TwoPointInstance) -> prophet.ProphetReport:
        return prophet.prophet_ratio(inst)


SOLVERS: dict[str, type[Module]] = {
    "brute": BruteForce,
    "two-point": TwoPointSolve,
    "fptas": Fptas,
    "nested-uniform": NestedUniform,
}


def build_solver(method: str, **options: Any) -> Module:
    """Instantiates the solver module registered under ``method``."""
    try:
        cls = SOLVERS[method]
    except KeyError:
        raise PreconditionError(f"unknown method {method!r}; choose from {sorted(SOLVERS)}") from None
    if cls in (BruteForce, Fptas):
        return cls(**options)
    return cls()
