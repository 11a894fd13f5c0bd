"""Random instance builders for the oracle sweeps."""

import numpy as np

from stopord.core.two_point import TwoPointInstance
from stopord.types.dist import FiniteDist, three_point, two_point


def random_two_point(rng: np.random.Generator, n: int, zero_left: bool = False) -> TwoPointInstance:
    """Two-point instance with some deterministic and some degenerate variables mixed in."""
    a, b, p = [], [], []
    for _ in range(n):
        lo = 0.0 if zero_left else float(rng.choice([0.0, rng.uniform(0, 1)]))
        hi = lo + float(rng.uniform(0, 2))
        prob = float(rng.choice([rng.uniform(0, 1), 0.0, 1.0], p=[0.8, 0.1, 0.1]))
        a.append(round(lo, 6))
        b.append(round(hi, 6))
        p.append(round(prob, 6))
    return TwoPointInstance(a=tuple(a), b=tuple(b), p=tuple(p))


def random_common_endpoints(rng: np.random.Generator, n: int) -> list[FiniteDist]:
    """Variables on {0, m_i, 1}."""
    dists = []
    for _ in range(n):
        m = float(rng.uniform(0.05, 0.95))
        p, q = rng.dirichlet([1.0, 1.0, 1.0])[1:]
        dists.append(three_point(0.0, m, 1.0, float(p), float(q)))
    return dists


def random_general_left(rng: np.random.Generator, n: int) -> list[FiniteDist]:
    """Variables on {a_i, m_i, 1} with a_i >= 0."""
    dists = []
    for _ in range(n):
        a = float(rng.choice([0.0, rng.uniform(0, 0.4)]))
        m = float(rng.uniform(a, 1.0))
        p, q = rng.dirichlet([1.0, 1.0, 1.0])[1:]
        dists.append(three_point(a, m, 1.0, float(p), float(q)))
    return dists


def random_finite(rng: np.random.Generator, n: int, max_atoms: int = 4) -> list[FiniteDist]:
    """Arbitrary finite-support variables on [0, 3]."""
    dists = []
    for _ in range(n):
        k = int(rng.integers(1, max_atoms + 1))
        atoms = np.round(rng.uniform(0, 3, size=k), 4)
        masses = rng.dirichlet(np.ones(k))
        dists.append(FiniteDist(atoms=atoms.tolist(), masses=masses.tolist()))
    return dists


def intro_pair(eps: float = 0.1) -> list[FiniteDist]:
    """Bernoulli(eps) followed by the constant eps."""
    return [two_point(0.0, 1.0, eps), two_point(eps, eps, 1.0)]


def tightness_pair(eps: float = 0.1) -> list[FiniteDist]:
    """0.5 or 1/(2 eps) w.p. eps, followed by a fair coin on {0, 1}."""
    return [two_point(0.5, 1 / (2 * eps), eps), two_point(0.0, 1.0, 0.5)]
