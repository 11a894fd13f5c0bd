"""Structural ordering rules.

Two characterizations live here:

* For variables supported on ``{0, m_i, 1}`` an optimal order is an ordered
  partition (S, T): the S variables come first and are accepted only at 1,
  the T variables follow in weakly decreasing E[X | X > 0] and are accepted
  at any positive value. :func:`classify_st` reads (S, T) off an evaluated
  order and reports whether it has that shape.
* For uniform variables whose supports form a nested chain, probing from the
  widest to the narrowest support is optimal (:func:`solve_nested_uniform`).
"""

import logging
from collections.abc import Sequence

import pydantic
from opentelemetry import trace

from stopord.core.stopping import OrderingResult, evaluate_order
from stopord.types.dist import FiniteDist, UniformDist, conditional_mean_positive
from stopord.types.errors import InstanceShapeError, NotNestedError, PreconditionError

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

CLASSIFY_TOL = 1e-12


class StructureReport(pydantic.BaseModel):
    """S/T split of an evaluated order and whether it is an ordered partition."""

    model_config = pydantic.ConfigDict(frozen=True)

    s_indices: tuple[int, ...]
    t_indices: tuple[int, ...]
    satisfies_claim: bool
    violations: tuple[tuple[int, str], ...] = ()

    @pydantic.model_validator(mode="after")
    def _check_cover(self) -> "StructureReport":
        if not self.t_indices:
            raise ValueError("the T block always holds at least the last variable")
        if set(self.s_indices) & set(self.t_indices):
            raise ValueError("S and T must be disjoint")
        return self


# ----------------------------------------------------------------------
# Shape helpers for {0, m, 1} variables
# ----------------------------------------------------------------------
def common_endpoint_parts(d: FiniteDist) -> tuple[float, float, float]:
    """Splits a variable supported on {0, m, 1} into ``(m, p, q)``.

    ``p`` is the mass of the middle atom and ``q`` the mass at 1. Without a
    middle atom ``m`` is 1 when 1 is an atom and 0 otherwise, with ``p = 0``.

    Raises:
        InstanceShapeError: If the support is not of that form
    """
    if not isinstance(d, FiniteDist):
        raise InstanceShapeError("expected a finite-support variable on {0, m, 1}")
    inner = [(x, p) for x, p in zip(d.atoms, d.masses, strict=True) if 0 < x < 1]
    if any(x > 1 for x in d.atoms) or len(inner) > 1:
        raise InstanceShapeError(f"support {list(d.atoms)} is not of the form {{0, m, 1}}")
    q = d.masses[-1] if d.atoms[-1] == 1.0 else 0.0
    if inner:
        m, p = inner[0]
        return m, p, q
    return (1.0 if q > 0 else 0.0), 0.0, q


def positive_mean(d: FiniteDist) -> float:
    """E[X | X > 0], or 0 for a variable that is identically 0."""
    if d.prob_positive() <= 0:
        return 0.0
    return conditional_mean_positive(d)


def sort_by_positive_mean(dists: Sequence[FiniteDist], indices: Sequence[int], descending: bool = True) -> list[int]:
    """Orders ``indices`` by E[X | X > 0], ties by index ascending.

    Means are compared after rounding to 12 decimals so that values equal in
    exact arithmetic tie regardless of float noise.
    """
    sign = -1.0 if descending else 1.0
    return sorted(indices, key=lambda i: (sign * round(positive_mean(dists[i]), 12), i))


# ----------------------------------------------------------------------
# Operations
# ----------------------------------------------------------------------
def classify_st(res: OrderingResult, dists: Sequence[FiniteDist]) -> StructureReport:
    """Splits an evaluated order into its S and T blocks.

    Position ``i`` belongs to S iff the value of continuing after it exceeds
    the variable's middle atom, i.e. the policy rejects ``m`` there. The last
    position is always in T. The order satisfies the claim when every S
    position precedes every T position and E[X | X > 0] is weakly decreasing
    along T.

    Raises:
        InstanceShapeError: If a variable is not supported on {0, m, 1}
    """
    if not res.order:
        raise PreconditionError("cannot classify an empty order")
    middles = [common_endpoint_parts(dists[i])[0] for i in res.order]

    s_indices: list[int] = []
    t_indices: list[int] = []
    violations: list[tuple[int, str]] = []
    last = res.n - 1
    for pos, idx in enumerate(res.order):
        in_s = pos < last and res.continuation(pos) > middles[pos] + CLASSIFY_TOL
        if in_s:
            if t_indices:
                violations.append((pos, "S variable after a T variable"))
            s_indices.append(idx)
        else:
            t_indices.append(idx)

    t_set = set(t_indices)
    t_positions = [pos for pos, idx in enumerate(res.order) if idx in t_set]
    means = [positive_mean(dists[i]) for i in t_indices]
    for k in range(1, len(means)):
        if means[k] > means[k - 1] + CLASSIFY_TOL:
            violations.append((t_positions[k], "E[X | X > 0] increases within T"))

    return StructureReport(
        s_indices=tuple(s_indices),
        t_indices=tuple(t_indices),
        satisfies_claim=not violations,
        violations=tuple(violations),
    )


def nesting_order(dists: Sequence[UniformDist]) -> list[int]:
    """Orders uniform supports from widest to narrowest (ties by index).

    Raises:
        InstanceShapeError: If a variable is not uniform
        NotNestedError: If the supports do not form a nested chain
    """
    if any(not isinstance(d, UniformDist) for d in dists):
        raise InstanceShapeError("the nested rule applies to uniform variables only")
    order = sorted(range(len(dists)), key=lambda i: (-dists[i].width, i))
    for outer, inner in zip(order, order[1:], strict=False):
        if not dists[outer].contains(dists[inner]):
            raise NotNestedError(
                f"[{dists[inner].lo}, {dists[inner].hi}] is not contained in [{dists[outer].lo}, {dists[outer].hi}]"
            )
    return order


def solve_nested_uniform(dists: Sequence[UniformDist]) -> OrderingResult:
    """Optimal order for uniform variables with nested supports.

    Probing the widest support first is optimal when every support contains
    all narrower ones.

    Raises:
        InstanceShapeError: If a variable is not uniform
        NotNestedError: If the supports do not form a nested chain
    """
    if not dists:
        raise PreconditionError("need at least one variable")
    with tracer.start_as_current_span("stopord.solve_nested_uniform") as span:
        span.set_attribute("n", len(dists))
        order = nesting_order(dists)
        res = evaluate_order(dists, order)
        span.set_attribute("value", res.value)
        logger.debug("nested uniform order %s value %.12g", order, res.value)
        return res
