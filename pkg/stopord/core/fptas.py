"""Approximation scheme for three-point variables.

For variables on ``{0, m_i, 1}`` an optimal order is an ordered partition
(S, T). The search grows partitions one variable at a time, in increasing
E[X | X > 0], prepending each variable either to S or to T. After every round
:func:`trim` keeps one partition per bucket of a geometric grid on V(T),
the one with the largest V(S), so the lists stay polynomial in ``n`` and
``1/epsilon``. The best full partition is within ``1 - epsilon`` of optimal.

Variables on ``{a_i, m_i, 1}`` are handled by pinning each variable last in
turn, replacing it with its mean and the others' left endpoints with 0, and
scoring every candidate order on the original variables.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np
import pydantic
from opentelemetry import trace

from stopord.core.ordering_rules import common_endpoint_parts, sort_by_positive_mean
from stopord.core.stopping import evaluate_order, hindsight_max, sequence_value
from stopord.types.dist import FiniteDist, point_mass, three_point
from stopord.types.errors import InstanceShapeError, PreconditionError
from stopord.types.model import DomainModel

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)


class OrderedPartition(pydantic.BaseModel):
    """A partial ordered partition with cached stopping values of its blocks.

    ``v_s`` and ``v_t`` are the stopping values of the S and T blocks each
    evaluated on its own (followed by the search's terminal value).
    """

    model_config = pydantic.ConfigDict(frozen=True)

    s_indices: tuple[int, ...] = ()
    t_indices: tuple[int, ...] = ()
    v_s: float = 0.0
    v_t: float = 0.0

    @pydantic.model_validator(mode="after")
    def _check(self) -> "OrderedPartition":
        if set(self.s_indices) & set(self.t_indices):
            raise ValueError("S and T must be disjoint")
        if self.v_s < 0 or self.v_t < 0:
            raise ValueError("block values must be non-negative")
        return self

    @property
    def order(self) -> tuple[int, ...]:
        return self.s_indices + self.t_indices


class FptasConfig(DomainModel):
    """Grid parameters of one partition search over ``n`` variables."""

    epsilon: float
    max_param: float
    n: int
    trim: bool = True

    @pydantic.field_validator("epsilon")  # type: ignore[misc]
    def _check_epsilon(cls, v: float) -> float:
        if not 0 < v < 1:
            raise PreconditionError(f"epsilon must lie in (0, 1) (got {v})")
        return v

    @pydantic.field_validator("max_param")  # type: ignore[misc]
    def _check_max(cls, v: float) -> float:
        if not v > 0:
            raise PreconditionError(f"max_param must be positive (got {v})")
        return v

    @pydantic.field_validator("n")  # type: ignore[misc]
    def _check_n(cls, v: int) -> int:
        if v < 1:
            raise PreconditionError("the grid needs n >= 1")
        return v

    @property
    def rho(self) -> float:
        """Bucket ratio 1 - epsilon / 2n."""
        return 1 - self.epsilon / (2 * self.n)

    @property
    def floor(self) -> float:
        """Smallest V(T) worth keeping, (epsilon / 2n) * MAX."""
        return self.epsilon / (2 * self.n) * self.max_param

    def grid_depth(self, top: float) -> int:
        """Largest ``j >= 0`` with ``rho**j * top >= floor``, or -1 if there is none."""
        if top < self.floor:
            return -1
        j = max(0, int(math.floor(math.log(self.floor / top) / math.log(self.rho))))
        while self.rho ** (j + 1) * top >= self.floor:
            j += 1
        while j > 0 and self.rho**j * top < self.floor:
            j -= 1
        return j

    def depth_bound(self) -> int:
        """Bucket count bound ``ceil(log_{1/rho}(4n / epsilon)) + 1`` for MAX >= OPT / 2."""
        return math.ceil(math.log(4 * self.n / self.epsilon) / -math.log(self.rho)) + 1


class FptasResult(pydantic.BaseModel):
    """Order found by the search, scored on the original variables."""

    model_config = pydantic.ConfigDict(frozen=True)

    ordering: tuple[int, ...]
    value: float
    s_indices: tuple[int, ...]
    t_indices: tuple[int, ...]
    partitions_kept: tuple[int, ...]
    partitions_generated: tuple[int, ...]
    epsilon: float
    max_param: float
    pinned: int | None = None


# ----------------------------------------------------------------------
# TRIM
# ----------------------------------------------------------------------
def _argmax_s(bucket: list[OrderedPartition]) -> OrderedPartition:
    return min(bucket, key=lambda part: (-part.v_s, part.s_indices))


def trim(partitions: Sequence[OrderedPartition], cfg: FptasConfig) -> list[OrderedPartition]:
    """Keeps the largest-V(S) partition of every V(T) bucket.

    Bucket 0 holds the partitions with empty T. With ``top`` the largest
    V(T) and ``J`` from :meth:`FptasConfig.grid_depth`, bucket ``j`` for
    ``1 <= j <= J`` holds ``rho**j * top < V(T) <= rho**(j-1) * top``.
    Partitions with non-empty T below the last bucket are dropped. Ties in
    V(S) go to the lexicographically smallest S.

    Args:
        partitions: Candidate partitions of the same variables
        cfg: Grid parameters

    Returns:
        The survivors: bucket 0 first, then buckets by increasing ``j``

    Raises:
        PreconditionError: If ``partitions`` is empty
    """
    if not partitions:
        raise PreconditionError("trim needs at least one partition")
    empty_t = [part for part in partitions if not part.t_indices]
    rest = [part for part in partitions if part.t_indices]

    kept: list[OrderedPartition] = []
    if empty_t:
        kept.append(_argmax_s(empty_t))
    if not rest:
        return kept

    top = max(part.v_t for part in rest)
    if top <= 0:
        # every T is worth nothing; they all share one bucket
        kept.append(_argmax_s(rest))
        return kept

    depth = cfg.grid_depth(top)
    if depth < 1:
        return kept
    edges = top * cfg.rho ** np.arange(depth + 1)
    slots = np.searchsorted(-edges, -np.array([part.v_t for part in rest]), side="right")
    buckets: dict[int, list[OrderedPartition]] = {}
    for part, slot in zip(rest, slots.tolist(), strict=True):
        if slot <= depth:
            buckets.setdefault(slot, []).append(part)
    kept.extend(_argmax_s(buckets[j]) for j in sorted(buckets))
    return kept


# ----------------------------------------------------------------------
# Partition search
# ----------------------------------------------------------------------
def _search(
    dists: Sequence[FiniteDist],
    indices: Sequence[int],
    cfg: FptasConfig,
    tail: float = 0.0,
) -> tuple[OrderedPartition, list[int], list[int]]:
    """Grows ordered partitions of ``indices`` and returns the best full one.

    Variables are added in increasing E[X | X > 0] and prepended, so both
    blocks stay in decreasing E. ``tail`` is the terminal value that follows
    T.
    """
    ascending = sort_by_positive_mean(dists, indices, descending=False)
    frontier = [OrderedPartition.model_construct(s_indices=(), t_indices=(), v_s=tail, v_t=tail)]
    kept_sizes: list[int] = []
    generated_sizes: list[int] = []
    for k in ascending:
        d = dists[k]
        grown: list[OrderedPartition] = []
        for part in frontier:
            grown.append(
                OrderedPartition.model_construct(
                    s_indices=(k,) + part.s_indices,
                    t_indices=part.t_indices,
                    v_s=d.expect_max(part.v_s),
                    v_t=part.v_t,
                )
            )
            grown.append(
                OrderedPartition.model_construct(
                    s_indices=part.s_indices,
                    t_indices=(k,) + part.t_indices,
                    v_s=part.v_s,
                    v_t=d.expect_max(part.v_t),
                )
            )
        generated_sizes.append(len(grown))
        frontier = trim(grown, cfg) if cfg.trim else grown
        kept_sizes.append(len(frontier))

    best: OrderedPartition | None = None
    best_value = -math.inf
    for part in frontier:
        if not part.t_indices:
            continue
        value = sequence_value([dists[i] for i in part.order], tail=tail).value
        if value > best_value:
            best, best_value = part, value
    if best is None:
        t_block = tuple(sort_by_positive_mean(dists, indices))
        logger.debug("no partition with non-empty T survived; falling back to T = %s", t_block)
        best = OrderedPartition(t_indices=t_block)
    return best, kept_sizes, generated_sizes


def solve_common_endpoints(
    dists: Sequence[FiniteDist],
    epsilon: float,
    *,
    max_param: float | None = None,
    trim: bool = True,
) -> FptasResult:
    """Approximately optimal order for variables on ``{0, m_i, 1}``.

    Args:
        dists: The variables
        epsilon: Accuracy in (0, 1); the value is at least ``(1 - epsilon) * OPT``
        max_param: Grid scale; half the prophet's value when omitted
        trim: Disable to run the exhaustive (untrimmed) search

    Returns:
        The order, its exact value on ``dists``, the (S, T) split and the
        per-round list sizes

    Raises:
        InstanceShapeError: If a support is not of the form {0, m, 1}
        PreconditionError: If ``epsilon`` is outside (0, 1)
    """
    if not 0 < epsilon < 1:
        raise PreconditionError(f"epsilon must lie in (0, 1) (got {epsilon})")
    if not dists:
        raise PreconditionError("need at least one variable")
    for d in dists:
        common_endpoint_parts(d)

    n = len(dists)
    with tracer.start_as_current_span("stopord.fptas.solve_common_endpoints") as span:
        span.set_attribute("n", n)
        span.set_attribute("epsilon", epsilon)
        scale = 0.5 * hindsight_max(dists) if max_param is None else max_param
        if scale <= 0:
            # every variable is identically 0
            order = tuple(range(n))
            res = evaluate_order(dists, order)
            return FptasResult(
                ordering=order,
                value=res.value,
                s_indices=(),
                t_indices=order,
                partitions_kept=(),
                partitions_generated=(),
                epsilon=epsilon,
                max_param=0.0,
            )
        cfg = FptasConfig(epsilon=epsilon, max_param=scale, n=n, trim=trim)
        best, kept, generated = _search(dists, range(n), cfg)
        res = evaluate_order(dists, best.order)
        span.set_attribute("value", res.value)
        span.set_attribute("max_kept", max(kept))
        logger.debug("fptas n=%d eps=%g kept=%s value=%.12g", n, epsilon, kept, res.value)
        return FptasResult(
            ordering=res.order,
            value=res.value,
            s_indices=best.s_indices,
            t_indices=best.t_indices,
            partitions_kept=tuple(kept),
            partitions_generated=tuple(generated),
            epsilon=epsilon,
            max_param=scale,
        )


# ----------------------------------------------------------------------
# Nonzero left endpoints
# ----------------------------------------------------------------------
def three_point_parts(d: FiniteDist) -> tuple[float, float, float, float]:
    """Splits a variable on ``{a, m, 1}`` into ``(a, m, p, q)``.

    ``p`` is the mass at ``m`` and ``q`` the mass at 1. With a single atom
    below 1 that atom is ``a`` and ``p = 0``.

    Raises:
        InstanceShapeError: If the support is not of that form
    """
    if not isinstance(d, FiniteDist):
        raise InstanceShapeError("expected a finite-support variable on {a, m, 1}")
    below = [(x, p) for x, p in zip(d.atoms, d.masses, strict=True) if x < 1]
    if any(x > 1 for x in d.atoms) or len(below) > 2:
        raise InstanceShapeError(f"support {list(d.atoms)} is not of the form {{a, m, 1}}")
    q = d.masses[-1] if d.atoms[-1] == 1.0 else 0.0
    if len(below) == 2:
        (a, _), (m, p) = below
        return a, m, p, q
    if len(below) == 1:
        return below[0][0], below[0][0], 0.0, q
    return 1.0, 1.0, 0.0, q


def zero_left(d: FiniteDist) -> FiniteDist:
    """Moves the left endpoint of an {a, m, 1} variable to 0.

    The masses stay where they are, so the mass at ``a`` becomes the mass at 0.
    """
    _, m, p, q = three_point_parts(d)
    return three_point(0.0, m if p > 0 else 0.0, 1.0, p, q)


def solve_pinned(dists: Sequence[FiniteDist], last: int, epsilon: float, *, trim: bool = True) -> FptasResult:
    """Candidate order with variable ``last`` pinned to the end.

    The pinned variable is replaced by its mean, the others by their
    zero-left versions, and the partition search runs on the others with the
    mean as terminal value. The candidate is scored on the original variables.

    Args:
        dists: The variables, each on ``{a_i, m_i, 1}``
        last: Index of the variable placed last
        epsilon: Accuracy passed to the partition search
        trim: Disable to run the exhaustive search

    Returns:
        The candidate, with ``pinned`` set to ``last``

    Raises:
        PreconditionError: If ``last`` is out of range
    """
    n = len(dists)
    if not 0 <= last < n:
        raise PreconditionError(f"pinned index {last} out of range")
    tail = dists[last].mean()
    others = [j for j in range(n) if j != last]
    if not others:
        res = evaluate_order(dists, (last,))
        return FptasResult(
            ordering=res.order,
            value=res.value,
            s_indices=(),
            t_indices=(),
            partitions_kept=(),
            partitions_generated=(),
            epsilon=epsilon,
            max_param=0.5 * tail,
            pinned=last,
        )

    primed: dict[int, FiniteDist] = {j: zero_left(dists[j]) for j in others}
    scale = 0.5 * hindsight_max([*primed.values(), point_mass(tail)])
    if scale <= 0:
        best = OrderedPartition(t_indices=tuple(others))
        kept: list[int] = []
        generated: list[int] = []
    else:
        cfg = FptasConfig(epsilon=epsilon, max_param=scale, n=len(others), trim=trim)
        # _search indexes by original position; unused slots are never read
        padded = [primed.get(j, dists[j]) for j in range(n)]
        best, kept, generated = _search(padded, others, cfg, tail=tail)
    res = evaluate_order(dists, best.order + (last,))
    return FptasResult(
        ordering=res.order,
        value=res.value,
        s_indices=best.s_indices,
        t_indices=best.t_indices,
        partitions_kept=tuple(kept),
        partitions_generated=tuple(generated),
        epsilon=epsilon,
        max_param=scale,
        pinned=last,
    )


def best_candidate(candidates: Sequence[FptasResult]) -> FptasResult:
    """Highest value wins; ties go to the smallest pinned index."""
    return max(candidates, key=lambda c: (c.value, -(c.pinned if c.pinned is not None else -1)))


def solve_general_left(dists: Sequence[FiniteDist], epsilon: float, *, trim: bool = True) -> FptasResult:
    """Approximately optimal order for variables on ``{a_i, m_i, 1}``.

    Runs :func:`solve_pinned` once per choice of the last variable and keeps
    the best candidate.

    Args:
        dists: The variables
        epsilon: Accuracy in (0, 1)
        trim: Disable to run the exhaustive search in every candidate

    Returns:
        The best of the ``n`` pinned candidates

    Raises:
        InstanceShapeError: If a support is not of the form {a, m, 1}
        PreconditionError: If ``epsilon`` is outside (0, 1)
    """
    if not 0 < epsilon < 1:
        raise PreconditionError(f"epsilon must lie in (0, 1) (got {epsilon})")
    if not dists:
        raise PreconditionError("need at least one variable")
    for d in dists:
        three_point_parts(d)

    with tracer.start_as_current_span("stopord.fptas.solve_general_left") as span:
        span.set_attribute("n", len(dists))
        span.set_attribute("epsilon", epsilon)
        candidates = [solve_pinned(dists, i, epsilon, trim=trim) for i in range(len(dists))]
        best = best_candidate(candidates)
        span.set_attribute("value", best.value)
        logger.debug(
            "general-left candidates %s, best pinned %s",
            [round(c.value, 12) for c in candidates],
            best.pinned,
        )
        return best

