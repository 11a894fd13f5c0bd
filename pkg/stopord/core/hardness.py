"""Subset-product instances for the ordering problem.

Integers ``a_1..a_n > 1`` and a target ``B`` become three-point variables on
``{0, m_i, 1}`` with

    m_i = (B^2 - a_i) / (B^2 + 1),
    P(0) = 1 / a_i^2,  P(m_i) = (a_i - 1) / a_i^2,  P(1) = (a_i - 1) / a_i.

Every variable then has E[X | X > 0] = B^2 / (B^2 + 1), and the value of an
ordered partition depends only on the product ``g`` of the T integers:

    f(g) = 1 - g / G + (g / G) * (1 - 1 / g^2) * B^2 / (B^2 + 1),

with ``G`` the product of all integers. ``f`` is strictly concave and peaks
at ``g = B``, so the optimal order reveals whether some subset multiplies to
exactly ``B``.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from fractions import Fraction

import pydantic
from opentelemetry import trace

from stopord.core.oracle import MAX_PARTITION_N, brute_force_partition
from stopord.types.dist import FiniteDist
from stopord.types.errors import ConstructionError, PreconditionError, SizeLimitError
from stopord.types.model import DomainModel

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)


def _table_row(a: int, target: int) -> tuple[Fraction, Fraction, Fraction]:
    """Exact ``(m, p, q)`` for integer ``a`` and target ``B``."""
    b2 = target * target
    return Fraction(b2 - a, b2 + 1), Fraction(a - 1, a * a), Fraction(a - 1, a)


class HardnessInstance(DomainModel):
    """Integers, target and the induced {0, m, 1} variables."""

    integers: tuple[int, ...]
    target: int
    dists: tuple[FiniteDist, ...]

    @pydantic.model_validator(mode="after")
    def _check_rows(self) -> "HardnessInstance":
        if len(self.integers) != len(self.dists):
            raise ConstructionError("one variable per integer")
        for a, d in zip(self.integers, self.dists, strict=True):
            if len(d.atoms) != 3 or not 0 < d.atoms[1] < 1:
                raise ConstructionError(f"variable for a={a} is not a proper {{0, m, 1}} variable")
        return self

    @property
    def gamma(self) -> int:
        """Product of all integers."""
        return math.prod(self.integers)

    @property
    def middles(self) -> tuple[float, ...]:
        return tuple(d.atoms[1] for d in self.dists)

    def product(self, indices: Iterable[int]) -> int:
        return math.prod(self.integers[i] for i in indices)


class SubsetProductDecision(pydantic.BaseModel):
    """Outcome of deciding subset product through the optimal partition."""

    model_config = pydantic.ConfigDict(frozen=True)

    answer: bool
    gamma_t: int
    witness: tuple[int, ...]
    value: float


def generate(integers: Sequence[int], target: int) -> HardnessInstance:
    """Builds the variables for integers ``a_i >= 2`` and target ``B``.

    Probabilities are computed as exact fractions and converted once.

    Args:
        integers: The subset-product integers ``a_i``
        target: The target product ``B``

    Returns:
        One variable per integer, on ``{0, (B^2 - a_i) / (B^2 + 1), 1}``

    Raises:
        ConstructionError: If some ``a_i < 2``, ``B < 1`` or ``B^2 <= a_i``
    """
    ints = tuple(int(a) for a in integers)
    if not ints:
        raise ConstructionError("need at least one integer")
    if any(a < 2 for a in ints):
        raise ConstructionError(f"every integer must be at least 2 (got {list(ints)})")
    if target < 1:
        raise ConstructionError(f"target must be at least 1 (got {target})")
    if target * target <= max(ints):
        raise ConstructionError(f"target^2 = {target * target} must exceed every integer (max {max(ints)})")

    dists = []
    for a in ints:
        m, p, q = _table_row(a, target)
        dists.append(FiniteDist(atoms=(0.0, float(m), 1.0), masses=(float(1 - p - q), float(p), float(q))))
    return HardnessInstance(integers=ints, target=target, dists=tuple(dists))


def value_function(inst: HardnessInstance, gamma_t: float) -> float:
    """Value ``f(g)`` of an ordered partition whose T integers multiply to ``g``.

    ``f`` is evaluated exactly and rounded once. Over ``g >= 1`` it peaks at
    ``g = B``.

    Args:
        inst: The instance
        gamma_t: Product of the T integers

    Raises:
        PreconditionError: If ``gamma_t < 1``
    """
    if gamma_t < 1:
        raise PreconditionError(f"gamma_t must be at least 1 (got {gamma_t})")
    g = Fraction(gamma_t)
    share = g / inst.gamma
    b2 = inst.target * inst.target
    return float(1 - share + share * (1 - 1 / (g * g)) * Fraction(b2, b2 + 1))


def partition_closed_form(inst: HardnessInstance, t_indices: Iterable[int]) -> float:
    """Product form of the partition value.

    ``1 - P_S + P_S * (1 - Z_T) * B^2 / (B^2 + 1)`` with ``P_S`` the
    probability that no S variable hits 1 and ``Z_T`` the probability that
    every T variable is 0. This is the exact value of the policy in which S
    accepts only 1 and T accepts any positive value.

    Args:
        inst: The instance
        t_indices: Indices of the T block; the rest form S

    Returns:
        The policy value, evaluated exactly and rounded once
    """
    t_set = set(t_indices)
    miss_s = Fraction(1)
    zero_t = Fraction(1)
    for i, a in enumerate(inst.integers):
        _, p, q = _table_row(a, inst.target)
        if i in t_set:
            zero_t *= 1 - p - q
        else:
            miss_s *= 1 - q
    b2 = inst.target * inst.target
    return float(1 - miss_s + miss_s * (1 - zero_t) * Fraction(b2, b2 + 1))


def reachable_products(inst: HardnessInstance) -> tuple[int, ...]:
    """All subset products, the empty product 1 included, in increasing order."""
    products = {1}
    for a in inst.integers:
        products |= {x * a for x in products}
    return tuple(sorted(products))


def decide_subset_product(inst: HardnessInstance) -> SubsetProductDecision:
    """Decides whether some subset multiplies to ``B`` from the optimal partition.

    The product of the optimal T is compared with ``B`` in exact integer
    arithmetic.

    Args:
        inst: The instance

    Returns:
        The answer, the product of the optimal T, T itself and the optimal value

    Raises:
        SizeLimitError: If there are more than 20 integers
    """
    n = len(inst.integers)
    if n > MAX_PARTITION_N:
        raise SizeLimitError(f"decide_subset_product supports at most {MAX_PARTITION_N} integers (got {n})")
    with tracer.start_as_current_span("stopord.decide_subset_product") as span:
        span.set_attribute("n", n)
        best = brute_force_partition(inst.dists)
        gamma_t = inst.product(best.t_indices)
        answer = gamma_t == inst.target
        span.set_attribute("answer", answer)
        logger.debug("subset product %s target %d: T=%s product %d", inst.integers, inst.target, best.t_indices, gamma_t)
        return SubsetProductDecision(
            answer=answer,
            gamma_t=gamma_t,
            witness=tuple(sorted(best.t_indices)),
            value=best.value,
        )
