"""Brute-force ground truth.

:func:`brute_force_order` evaluates every permutation and
:func:`brute_force_partition` every ordered partition of a {0, m, 1}
instance. Both are deliberately exhaustive; they are what the fast solvers
are checked against.
"""

import itertools
import logging
import math
from collections.abc import Iterable, Sequence

import pydantic
from opentelemetry import trace

from stopord.core.ordering_rules import classify_st, common_endpoint_parts, sort_by_positive_mean
from stopord.core.stopping import AnyDist, evaluate_order, sequence_value
from stopord.types.context import SolveContext
from stopord.types.dist import FiniteDist
from stopord.types.errors import PreconditionError, SizeLimitError

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

MAX_ORDER_N = 10
MAX_PARTITION_N = 20
DEADLINE_POLL = 4096  # leaves between deadline checks


class OracleResult(pydantic.BaseModel):
    """Exhaustive search result over all probe orders.

    ``best_orderings`` lists every order within the tie tolerance of
    ``best_value``, sorted lexicographically. ``worst_value`` and
    ``worst_ordering`` describe the worst order (lexicographically smallest
    among exact ties).
    """

    model_config = pydantic.ConfigDict(frozen=True)

    best_value: float
    best_orderings: tuple[tuple[int, ...], ...]
    evaluated_count: int
    worst_value: float
    worst_ordering: tuple[int, ...]

    @pydantic.model_validator(mode="after")
    def _check_nonempty(self) -> "OracleResult":
        if not self.best_orderings:
            raise ValueError("an oracle result lists at least one best ordering")
        return self

    @property
    def best_ordering(self) -> tuple[int, ...]:
        return self.best_orderings[0]


class PartitionResult(pydantic.BaseModel):
    """Best ordered partition of a {0, m, 1} instance and the order realizing it."""

    model_config = pydantic.ConfigDict(frozen=True)

    s_indices: tuple[int, ...]
    t_indices: tuple[int, ...]
    value: float
    order: tuple[int, ...]


class _Tracker:
    """Running best/worst bookkeeping for the permutation walk."""

    def __init__(self, tie_tol: float, ctx: SolveContext):
        self.tie_tol = tie_tol
        self.ctx = ctx
        self.count = 0
        self.best = -math.inf
        self.worst = math.inf
        self.worst_ordering: tuple[int, ...] = ()
        self.candidates: list[tuple[float, tuple[int, ...]]] = []

    def add(self, value: float, ordering: tuple[int, ...]) -> None:
        self.count += 1
        if self.count % DEADLINE_POLL == 0:
            self.ctx.check_deadline()
        if value > self.best:
            self.best = value
            if len(self.candidates) > 1024:
                self.candidates = [c for c in self.candidates if c[0] >= self.best - self.tie_tol]
        if value >= self.best - self.tie_tol:
            self.candidates.append((value, ordering))
        if value < self.worst or (value == self.worst and ordering < self.worst_ordering):
            self.worst = value
            self.worst_ordering = ordering

    def result(self) -> OracleResult:
        best = sorted(o for v, o in self.candidates if v >= self.best - self.tie_tol)
        return OracleResult(
            best_value=self.best,
            best_orderings=tuple(best),
            evaluated_count=self.count,
            worst_value=self.worst,
            worst_ordering=self.worst_ordering,
        )


def _walk(seq: Sequence[AnyDist], lasts: frozenset[int], tracker: _Tracker) -> None:
    """Enumerates orders back to front, sharing suffix values.

    The float operations per order are exactly those of ``sequence_value``,
    so values are bit-identical to evaluating each order on its own.
    """
    n = len(seq)
    slots = [0] * n

    def fill(remaining: list[int], pos: int, cont: float) -> None:
        for k, i in enumerate(remaining):
            if pos == n - 1 and i not in lasts:
                continue
            v = seq[i].expect_max(cont)
            slots[pos] = i
            if pos == 0:
                tracker.add(v, tuple(slots))
            else:
                fill(remaining[:k] + remaining[k + 1 :], pos - 1, v)

    fill(list(range(n)), n - 1, 0.0)


def brute_force_order(
    seq: Sequence[AnyDist],
    tie_tol: float | None = None,
    lasts: Iterable[int] | None = None,
) -> OracleResult:
    """Evaluates all n! probe orders.

    Args:
        seq: The variables
        tie_tol: Orders within this distance of the best are reported as
            co-optimal; defaults to the current SolveContext's ``tie_tol``
        lasts: Restrict the walk to orders ending in one of these indices.
            Used to split the search across workers; see
            :func:`merge_oracle_results`.

    Raises:
        PreconditionError: If ``seq`` is empty
        SizeLimitError: If there are more than 10 variables
        DeadlineExceeded: If the current SolveContext deadline passes
    """
    n = len(seq)
    if n == 0:
        raise PreconditionError("the oracle needs at least one variable")
    if n > MAX_ORDER_N:
        raise SizeLimitError(f"brute_force_order supports at most {MAX_ORDER_N} variables (got {n})")
    ctx = SolveContext.current()
    tol = ctx.tie_tol if tie_tol is None else tie_tol
    last_set = frozenset(range(n)) if lasts is None else frozenset(lasts)
    if not last_set or not last_set <= set(range(n)):
        raise PreconditionError(f"invalid last-variable restriction {sorted(last_set)}")

    with tracer.start_as_current_span("stopord.brute_force_order") as span:
        span.set_attribute("n", n)
        tracker = _Tracker(tol, ctx)
        _walk(seq, last_set, tracker)
        res = tracker.result()
        span.set_attribute("evaluated_count", res.evaluated_count)
        span.set_attribute("best_value", res.best_value)
        logger.debug("oracle n=%d evaluated=%d best=%.12g", n, res.evaluated_count, res.best_value)
        return res


def merge_oracle_results(
    seq: Sequence[AnyDist], parts: Sequence[OracleResult], tie_tol: float | None = None
) -> OracleResult:
    """Combines oracle runs over disjoint last-variable groups.

    The merged result equals a single run over the union of the groups.
    """
    if not parts:
        raise PreconditionError("nothing to merge")
    tol = SolveContext.current().tie_tol if tie_tol is None else tie_tol
    best = max(p.best_value for p in parts)
    candidates = [o for p in parts if p.best_value >= best - tol for o in p.best_orderings]
    kept = sorted(o for o in candidates if evaluate_order(seq, o).value >= best - tol)
    worst = min(parts, key=lambda p: (p.worst_value, p.worst_ordering))
    return OracleResult(
        best_value=best,
        best_orderings=tuple(kept),
        evaluated_count=sum(p.evaluated_count for p in parts),
        worst_value=worst.worst_value,
        worst_ordering=worst.worst_ordering,
    )


def brute_force_partition(dists: Sequence[FiniteDist]) -> PartitionResult:
    """Finds the best ordered partition (S, T) of a {0, m, 1} instance.

    Every non-empty T is tried with T in decreasing E[X | X > 0] (ties by
    index) after S in index order; the first strict maximum wins. The
    reported (S, T) is the split the optimal policy actually uses on the
    winning order when that split is itself an ordered partition, so that
    variables which behave as T members are reported in T.

    Raises:
        InstanceShapeError: If a support is not of the form {0, m, 1}
        SizeLimitError: If there are more than 20 variables
        DeadlineExceeded: If the current SolveContext deadline passes
    """
    n = len(dists)
    if n == 0:
        raise PreconditionError("need at least one variable")
    if n > MAX_PARTITION_N:
        raise SizeLimitError(f"brute_force_partition supports at most {MAX_PARTITION_N} variables (got {n})")
    for d in dists:
        common_endpoint_parts(d)

    ctx = SolveContext.current()
    by_mean = sort_by_positive_mean(dists, range(n))
    with tracer.start_as_current_span("stopord.brute_force_partition") as span:
        span.set_attribute("n", n)
        best_value = -math.inf
        best: tuple[tuple[int, ...], tuple[int, ...]] = ((), ())
        for mask in range(1, 1 << n):
            if mask % DEADLINE_POLL == 0:
                ctx.check_deadline()
            t_block = tuple(i for i in by_mean if mask >> i & 1)
            s_block = tuple(i for i in range(n) if not mask >> i & 1)
            value = sequence_value([dists[i] for i in itertools.chain(s_block, t_block)]).value
            if value > best_value:
                best_value = value
                best = (s_block, t_block)

        order = best[0] + best[1]
        report = classify_st(evaluate_order(dists, order), dists)
        s_block, t_block = (report.s_indices, report.t_indices) if report.satisfies_claim else best
        span.set_attribute("value", best_value)
        logger.debug("partition search n=%d S=%s T=%s value=%.12g", n, s_block, t_block, best_value)
        return PartitionResult(s_indices=s_block, t_indices=t_block, value=best_value, order=order)
