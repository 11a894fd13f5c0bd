"""Module abstraction and the solver modules built on it.

Every solver call is ``await``-able and runs inside a derived SolveContext
and its own span. :class:`Parallel` runs independent shards side by side;
sharded solvers merge their parts so the answer does not depend on the
worker count.

Example:
    from stopord.layers import BruteForce

    found = await BruteForce(workers=4)(dists, timeout=30)
"""

from .composite import Parallel
from .module import Module
from .solvers import SOLVERS, BruteForce, Evaluate, Fptas, NestedUniform, Prophet, TwoPointSolve, build_solver

__all__ = [
    "Module",
    "Parallel",
    "SOLVERS",
    "BruteForce",
    "Evaluate",
    "Fptas",
    "NestedUniform",
    "Prophet",
    "TwoPointSolve",
    "build_solver",
]
