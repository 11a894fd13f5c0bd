"""Exact stopping values for a fixed probe order.

For an ordering of independent rewards X_1..X_n the optimal stopping rule
accepts X_j iff its realization is at least the value of continuing, and the
values satisfy the backward recursion

    V(j) = E[max(X_j, V(j+1))],    V(n+1) = tail (0 by default).

Everything here is exact; there is no sampling.
"""

import math
from collections.abc import Sequence

import numpy as np
import pydantic

from stopord.types.dist import FiniteDist, UniformDist
from stopord.types.errors import InvariantViolation, PreconditionError, UnsupportedDistributionError

AnyDist = FiniteDist | UniformDist

MAKESPAN_TOL = 1e-12


class OrderingResult(pydantic.BaseModel):
    """A probe order together with its value and continuation thresholds.

    ``thresholds[j]`` is the value of the suffix starting at position ``j``;
    the last entry is the terminal value (0 unless a tail was given), so the
    policy accepts the variable at position ``j`` iff its realization is at
    least ``thresholds[j + 1]``.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    order: tuple[int, ...]
    value: float
    thresholds: tuple[float, ...]

    @pydantic.model_validator(mode="after")
    def _check_shape(self) -> "OrderingResult":
        if not self.order:
            return self
        if len(self.thresholds) != len(self.order) + 1:
            raise ValueError("thresholds must have one entry per position plus the terminal value")
        if self.value != self.thresholds[0]:
            raise ValueError("value must equal the first threshold")
        return self

    @property
    def n(self) -> int:
        return len(self.order)

    def continuation(self, position: int) -> float:
        """Value of continuing past ``position``."""
        return self.thresholds[position + 1]


class ExcessProfile(pydantic.BaseModel):
    """Excess decomposition of a stopping value.

    Position ``i`` contributes ``excesses[i] = E[(X_i - c_i)+]`` where
    ``continuations[i] = c_i`` is the value of the suffix after ``i``. The
    contributions add up to the stopping value.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    excesses: tuple[float, ...]
    continuations: tuple[float, ...]
    value: float

    @pydantic.model_validator(mode="after")
    def _check_identity(self) -> "ExcessProfile":
        total = math.fsum(self.excesses)
        if abs(total - self.value) > MAKESPAN_TOL * max(1.0, abs(self.value)):
            raise InvariantViolation(f"excesses sum to {total!r}, stopping value is {self.value!r}")
        return self

    @property
    def makespan(self) -> float:
        return math.fsum(self.excesses)


def emax(d: AnyDist, c: float) -> float:
    """Returns E[max(X, c)].

    Raises:
        PreconditionError: If ``c`` is negative or not finite
    """
    if not (c >= 0 and math.isfinite(c)):
        raise PreconditionError(f"continuation value must be a finite non-negative number (got {c!r})")
    return d.expect_max(c)


def excess(d: AnyDist, c: float) -> float:
    """Returns E[(X - c)+] = E[max(X, c)] - c."""
    return emax(d, c) - c


def _backward(seq: Sequence[AnyDist], tail: float) -> tuple[float, ...]:
    thresholds = [0.0] * (len(seq) + 1)
    thresholds[-1] = v = tail
    for j in range(len(seq) - 1, -1, -1):
        v = seq[j].expect_max(v)
        thresholds[j] = v
    return tuple(thresholds)


def sequence_value(seq: Sequence[AnyDist], tail: float = 0.0) -> OrderingResult:
    """Evaluates the sequence in the given order by backward induction.

    Args:
        seq: Variables in probe order
        tail: Terminal continuation value, a guaranteed reward available
            after the last variable

    Returns:
        OrderingResult with the identity order over ``seq``. An empty
        sequence has value ``tail`` and no thresholds.
    """
    if not (tail >= 0 and math.isfinite(tail)):
        raise PreconditionError(f"tail must be a finite non-negative number (got {tail!r})")
    if not seq:
        return OrderingResult(order=(), value=tail, thresholds=())
    thresholds = _backward(seq, tail)
    return OrderingResult(order=tuple(range(len(seq))), value=thresholds[0], thresholds=thresholds)


def evaluate_order(dists: Sequence[AnyDist], order: Sequence[int], tail: float = 0.0) -> OrderingResult:
    """Evaluates ``dists`` probed in ``order`` (a permutation of their indices).

    Raises:
        PreconditionError: If ``order`` is not a permutation of ``range(len(dists))``
    """
    order = tuple(int(i) for i in order)
    if sorted(order) != list(range(len(dists))):
        raise PreconditionError(f"order {list(order)} is not a permutation of 0..{len(dists) - 1}")
    res = sequence_value([dists[i] for i in order], tail=tail)
    return res.model_copy(update={"order": order})


def hindsight_max(seq: Sequence[AnyDist]) -> float:
    """Returns the prophet's value E[max_i X_i] for finite-support variables.

    Computed on the sorted union of atoms as sum_v v * (P(max <= v) - P(max < v)).

    Raises:
        UnsupportedDistributionError: If a uniform variable is present
    """
    if any(not isinstance(d, FiniteDist) for d in seq):
        raise UnsupportedDistributionError("hindsight_max supports finite-support distributions only")
    if not seq:
        return 0.0

    grid = np.unique(np.concatenate([np.asarray(d.atoms) for d in seq]))
    joint = np.ones_like(grid)
    for d in seq:
        cdf = np.concatenate(([0.0], np.minimum(np.cumsum(d.masses), 1.0)))
        joint *= cdf[np.searchsorted(np.asarray(d.atoms), grid, side="right")]
    below = np.concatenate(([0.0], joint[:-1]))
    return float(np.dot(grid, joint - below))


def makespan_value(seq: Sequence[AnyDist]) -> ExcessProfile:
    """Decomposes the stopping value of ``seq`` into per-position excesses.

    With ``c_i`` the value of the suffix after position ``i`` (``c_n = 0``),
    the value equals the sum of ``E[(X_i - c_i)+]``.

    Raises:
        InvariantViolation: If the decomposition does not add up
    """
    res = sequence_value(seq)
    continuations = res.thresholds[1:]
    excesses = tuple(d.expect_max(c) - c for d, c in zip(seq, continuations, strict=True))
    return ExcessProfile(excesses=excesses, continuations=continuations, value=res.value)


def _policy_step(d: AnyDist, threshold: float, cont: float) -> float:
    """E[X; X >= threshold] + P(X < threshold) * cont."""
    if isinstance(d, UniformDist):
        t = min(max(threshold, d.lo), d.hi)
        accept = (d.hi - t) / d.width
        gain = (d.hi * d.hi - t * t) / (2 * d.width)
        return gain + (1 - accept) * cont
    gain = 0.0
    reject = 0.0
    for x, p in zip(d.atoms, d.masses, strict=True):
        if x >= threshold:
            gain += p * x
        else:
            reject += p
    return gain + reject * cont


def threshold_policy_value(seq: Sequence[AnyDist], thresholds: Sequence[float], tail: float = 0.0) -> float:
    """Exact value of a static threshold policy.

    The policy accepts the variable at position ``j`` iff its realization is
    at least ``thresholds[j]``; if nothing is accepted it receives ``tail``.
    Passing the optimal continuation values reproduces :func:`sequence_value`.

    Raises:
        PreconditionError: If the threshold count does not match the sequence
    """
    if len(thresholds) != len(seq):
        raise PreconditionError(f"expected {len(seq)} thresholds, got {len(thresholds)}")
    w = tail
    for d, t in zip(reversed(seq), reversed(thresholds), strict=True):
        w = _policy_step(d, t, w)
    return w
