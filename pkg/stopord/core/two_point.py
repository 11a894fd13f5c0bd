"""Optimal ordering of two-point variables in O(n^2).

Each variable takes value ``a_i`` with probability ``1 - p_i`` and ``b_i``
with probability ``p_i``. With all ``a_i = 0`` probing in decreasing ``b_i``
attains the prophet's value. In general some optimal order puts one
variable last and the rest in decreasing ``b_i``, so trying all n choices of
the last variable is enough.
"""

import logging
from collections.abc import Sequence

import pydantic
from opentelemetry import trace

from stopord.core.stopping import AnyDist, OrderingResult, evaluate_order
from stopord.types.dist import FiniteDist, two_point
from stopord.types.errors import ConstructionError, InstanceShapeError, PreconditionError
from stopord.types.model import DomainModel

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

PROPERTY_TOL = 1e-12


class TwoPointInstance(DomainModel):
    """Parameters ``(a_i, b_i, p_i)`` of n two-point variables.

    Example:
        inst = TwoPointInstance.from_triples([(0.5, 5.0, 0.1), (0.0, 1.0, 0.5)])
        solve(inst).value  # 0.975
    """

    a: tuple[float, ...]
    b: tuple[float, ...]
    p: tuple[float, ...]

    @pydantic.model_validator(mode="after")
    def _check_params(self) -> "TwoPointInstance":
        if not len(self.a) == len(self.b) == len(self.p):
            raise ConstructionError("a, b and p must have the same length")
        for i, (a, b, p) in enumerate(zip(self.a, self.b, self.p, strict=True)):
            if not 0 <= a <= b:
                raise ConstructionError(f"variable {i}: need 0 <= a <= b (got a={a}, b={b})")
            if not 0 <= p <= 1:
                raise ConstructionError(f"variable {i}: p must lie in [0, 1] (got {p})")
        return self

    @classmethod
    def from_triples(cls, triples: Sequence[tuple[float, float, float]]) -> "TwoPointInstance":
        a, b, p = zip(*triples, strict=True) if triples else ((), (), ())
        return cls(a=a, b=b, p=p)

    @classmethod
    def from_dists(cls, dists: Sequence[AnyDist]) -> "TwoPointInstance":
        """Reads two-point parameters off finite variables with at most two atoms.

        Raises:
            InstanceShapeError: If a variable is uniform or has three or more atoms
        """
        triples = []
        for i, d in enumerate(dists):
            if not isinstance(d, FiniteDist) or len(d.atoms) > 2:
                raise InstanceShapeError(f"variable {i} is not a two-point distribution")
            if len(d.atoms) == 1:
                triples.append((d.atoms[0], d.atoms[0], 1.0))
            else:
                triples.append((d.atoms[0], d.atoms[1], d.masses[1]))
        return cls.from_triples(triples)

    @property
    def n(self) -> int:
        return len(self.a)

    def dists(self) -> list[FiniteDist]:
        return [two_point(a, b, p) for a, b, p in zip(self.a, self.b, self.p, strict=True)]


def by_right_endpoint(inst: TwoPointInstance) -> list[int]:
    """Indices by ``b`` descending, ties by index ascending."""
    return sorted(range(inst.n), key=lambda i: (-inst.b[i], i))


def candidate_orderings(inst: TwoPointInstance) -> list[tuple[int, ...]]:
    """The n candidate orders: order ``i`` puts variable ``i`` last and the
    rest in decreasing ``b``."""
    base = by_right_endpoint(inst)
    return [tuple(j for j in base if j != i) + (i,) for i in range(inst.n)]


def solve_zero_left(inst: TwoPointInstance) -> OrderingResult:
    """Orders variables with ``a_i = 0`` by decreasing ``b_i``.

    The resulting value equals E[max_i X_i].

    Raises:
        PreconditionError: If some ``a_i > 0``
    """
    if any(a > 0 for a in inst.a):
        raise PreconditionError("solve_zero_left requires every left endpoint to be 0")
    if inst.n == 0:
        raise PreconditionError("need at least one variable")
    return evaluate_order(inst.dists(), by_right_endpoint(inst))


def solve(inst: TwoPointInstance) -> OrderingResult:
    """Finds an optimal order by evaluating the n candidate orders.

    The best candidate wins; among equal values the one whose last variable
    has the smallest index.
    """
    if inst.n == 0:
        raise PreconditionError("need at least one variable")
    with tracer.start_as_current_span("stopord.two_point.solve") as span:
        span.set_attribute("n", inst.n)
        dists = inst.dists()
        best: OrderingResult | None = None
        for order in candidate_orderings(inst):
            res = evaluate_order(dists, order)
            if best is None or res.value > best.value:
                best = res
        assert best is not None
        span.set_attribute("value", best.value)
        logger.debug("two-point n=%d best order %s value %.12g", inst.n, best.order, best.value)
        return best


def check_lep(res: OrderingResult, inst: TwoPointInstance) -> bool:
    """Left endpoint property: every non-final ``a`` is at most the value of continuing."""
    return all(inst.a[idx] <= res.continuation(pos) + PROPERTY_TOL for pos, idx in enumerate(res.order[:-1]))


def check_lsp(res: OrderingResult, dists: Sequence[AnyDist]) -> bool:
    """Left support property: every non-final variable has positive mass at or
    below the value of continuing."""
    return all(
        dists[idx].prob_at_most(res.continuation(pos) + PROPERTY_TOL) > 0 for pos, idx in enumerate(res.order[:-1])
    )
