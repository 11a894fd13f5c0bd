"""stopord: optimal probe orders for optimal stopping.

A gambler sees independent non-negative random variables one at a time, in
an order they choose up front, and may stop at any point to keep the value
just seen. This package evaluates a fixed order exactly, searches all
orders for small instances and implements the polynomial-time and
approximation algorithms for the structured families:

- two-point variables (``stopord.core.two_point``)
- three-point variables with a common top value (``stopord.core.fptas``)
- nested uniform intervals (``stopord.core.ordering_rules``)
- the prophet comparison with its certificate (``stopord.core.prophet``)
- the subset-product reduction (``stopord.core.hardness``)

Solvers are wrapped as :class:`stopord.layers.Module` objects so that they
run under a :class:`stopord.types.SolveContext` with a deadline, a tie
tolerance and an OpenTelemetry span.

Example:
    from stopord.core.stopping import evaluate_order
    from stopord.types.dist import point_mass, two_point

    res = evaluate_order([two_point(0, 1, 0.5), point_mass(0.5)], [0, 1])
    res.value  # 0.75
"""

__version__ = "0.1.0"
