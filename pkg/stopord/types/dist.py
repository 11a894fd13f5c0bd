"""Distribution models shared by every solver.

Two variants exist: :class:`FiniteDist` (finite support, atoms and masses) and
:class:`UniformDist` (continuous uniform on ``[lo, hi]``). Both are frozen
pydantic models tagged by a ``type`` literal so that :data:`Dist` is a
discriminated union whose JSON form is the instance-file encoding.

All rewards are non-negative: a player who rejects everything receives 0.
"""

import math
from typing import Annotated, Literal

import numpy as np
import pydantic

from stopord.types.errors import ConstructionError, UndefinedConditionalError
from stopord.types.model import DomainModel

MASS_TOL = 1e-12  # allowed deviation of the mass total from 1
DROP_TOL = 1e-15  # atoms lighter than this are removed


def _merge_support(atoms: object, masses: object) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Validates raw atoms/masses and returns the canonical merged support.

    Coincident atoms are merged (masses summed), atoms lighter than
    ``DROP_TOL`` are dropped and the remaining masses are renormalized.

    Raises:
        ConstructionError: On shape, sign or mass-total violations
    """
    try:
        x = np.asarray(atoms, dtype=np.float64)
        w = np.asarray(masses, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise ConstructionError(f"atoms and masses must be real sequences: {e}") from e

    if x.ndim != 1 or w.ndim != 1 or x.shape != w.shape:
        raise ConstructionError("atoms and masses must be 1-D sequences of equal length")
    if x.size == 0:
        raise ConstructionError("a distribution needs at least one atom")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))):
        raise ConstructionError("atoms and masses must be finite")
    if np.any(x < 0):
        raise ConstructionError("atoms must be non-negative")
    if np.any(w < -MASS_TOL):
        raise ConstructionError("masses must be non-negative")
    w = np.clip(w, 0.0, None)

    total = float(w.sum())
    if abs(total - 1.0) > MASS_TOL:
        raise ConstructionError(f"masses must sum to 1 (got {total!r})")

    support, inverse = np.unique(x, return_inverse=True)
    merged = np.bincount(inverse.ravel(), weights=w, minlength=support.size)
    keep = merged >= DROP_TOL
    support, merged = support[keep], merged[keep]
    merged = merged / merged.sum()
    return tuple(float(v) for v in support), tuple(float(p) for p in merged)


class FiniteDist(DomainModel):
    """Finite-support distribution with strictly increasing atoms.

    Two-point and three-point distributions are special cases built with
    :func:`two_point` and :func:`three_point`.

    Example:
        d = FiniteDist(atoms=[0.0, 1.0], masses=[0.9, 0.1])
        d.expect_max(0.1)  # 0.19
    """

    type: Literal["finite"] = "finite"
    atoms: tuple[float, ...]
    masses: tuple[float, ...]

    @pydantic.model_validator(mode="before")
    @classmethod
    def _canonicalize(cls, data: object) -> object:
        if isinstance(data, dict) and "atoms" in data and "masses" in data:
            atoms, masses = _merge_support(data["atoms"], data["masses"])
            data = {**data, "atoms": atoms, "masses": masses}
        return data

    @pydantic.model_validator(mode="after")
    def _check_invariants(self) -> "FiniteDist":
        if any(b <= a for a, b in zip(self.atoms, self.atoms[1:], strict=False)):
            raise ConstructionError("atoms must be strictly increasing")
        if abs(math.fsum(self.masses) - 1.0) > MASS_TOL:
            raise ConstructionError("masses must sum to 1")
        return self

    @property
    def min_atom(self) -> float:
        return self.atoms[0]

    def mean(self) -> float:
        return math.fsum(x * p for x, p in zip(self.atoms, self.masses, strict=True))

    def expect_max(self, c: float) -> float:
        """Returns E[max(X, c)] exactly."""
        return sum(p * (x if x > c else c) for x, p in zip(self.atoms, self.masses, strict=True))

    def prob_at_most(self, v: float) -> float:
        """Returns P(X <= v)."""
        return sum(p for x, p in zip(self.atoms, self.masses, strict=True) if x <= v)

    def prob_positive(self) -> float:
        return sum(p for x, p in zip(self.atoms, self.masses, strict=True) if x > 0)


class UniformDist(DomainModel):
    """Continuous uniform distribution on ``[lo, hi]`` with ``0 <= lo < hi``."""

    type: Literal["uniform"] = "uniform"
    lo: float
    hi: float

    @pydantic.model_validator(mode="after")
    def _check_bounds(self) -> "UniformDist":
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ConstructionError("uniform bounds must be finite")
        if not 0 <= self.lo < self.hi:
            raise ConstructionError(f"uniform bounds need 0 <= lo < hi (got lo={self.lo}, hi={self.hi})")
        return self

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def mean(self) -> float:
        return (self.lo + self.hi) / 2

    def expect_max(self, c: float) -> float:
        """Returns E[max(X, c)] from the closed form of the uniform law."""
        lo, hi = self.lo, self.hi
        if c >= hi:
            return c
        if c <= lo:
            return (lo + hi) / 2
        return c * (c - lo) / (hi - lo) + ((hi + c) / 2) * ((hi - c) / (hi - lo))

    def prob_at_most(self, v: float) -> float:
        return min(1.0, max(0.0, (v - self.lo) / (self.hi - self.lo)))

    def contains(self, other: "UniformDist") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


Dist = Annotated[FiniteDist | UniformDist, pydantic.Field(discriminator="type")]
DistAdapter: pydantic.TypeAdapter[FiniteDist | UniformDist] = pydantic.TypeAdapter(Dist)


def two_point(a: float, b: float, p: float) -> FiniteDist:
    """Builds X = a w.p. 1-p, b w.p. p.

    Collapses to a single atom when ``a == b`` or ``p`` is 0 or 1.

    Raises:
        ConstructionError: If ``a < 0``, ``a > b`` or ``p`` is outside [0, 1]
    """
    if a < 0 or a > b:
        raise ConstructionError(f"two-point endpoints need 0 <= a <= b (got a={a}, b={b})")
    if not 0 <= p <= 1:
        raise ConstructionError(f"two-point probability must lie in [0, 1] (got {p})")
    return FiniteDist(atoms=(a, b), masses=(1 - p, p))


def three_point(a: float, m: float, b: float, p: float, q: float) -> FiniteDist:
    """Builds X = a w.p. 1-p-q, m w.p. p, b w.p. q.

    Raises:
        ConstructionError: On ordering or probability violations
    """
    if not 0 <= a <= m <= b:
        raise ConstructionError(f"three-point support needs 0 <= a <= m <= b (got {a}, {m}, {b})")
    if p < 0 or q < 0 or p + q > 1 + MASS_TOL:
        raise ConstructionError(f"three-point probabilities need p, q >= 0 and p + q <= 1 (got {p}, {q})")
    return FiniteDist(atoms=(a, m, b), masses=(max(0.0, 1 - p - q), p, q))


def point_mass(x: float) -> FiniteDist:
    return FiniteDist(atoms=(x,), masses=(1.0,))


def mean(d: FiniteDist | UniformDist) -> float:
    """Returns E[X]."""
    return d.mean()


def conditional_mean_positive(d: FiniteDist) -> float:
    """Returns E[X | X > 0].

    Raises:
        UndefinedConditionalError: If P(X > 0) = 0
    """
    positive = [(x, p) for x, p in zip(d.atoms, d.masses, strict=True) if x > 0]
    mass = math.fsum(p for _, p in positive)
    if mass <= 0:
        raise UndefinedConditionalError("E[X | X > 0] is undefined when P(X > 0) = 0")
    return math.fsum(x * p for x, p in positive) / mass


def shift(d: FiniteDist | UniformDist, k: float) -> FiniteDist | UniformDist:
    """Returns the law of X + k; the shifted support must stay non-negative."""
    if isinstance(d, UniformDist):
        return UniformDist(lo=d.lo + k, hi=d.hi + k)
    return FiniteDist(atoms=[x + k for x in d.atoms], masses=d.masses)


def scale(d: FiniteDist | UniformDist, alpha: float) -> FiniteDist | UniformDist:
    """Returns the law of alpha * X for alpha > 0."""
    if alpha <= 0:
        raise ConstructionError(f"scale factor must be positive (got {alpha})")
    if isinstance(d, UniformDist):
        return UniformDist(lo=d.lo * alpha, hi=d.hi * alpha)
    return FiniteDist(atoms=[x * alpha for x in d.atoms], masses=d.masses)
