"""Distributions, solve context, instance files and errors.

Key components:
- FiniteDist / UniformDist: validated, immutable distributions
- SolveContext: request-scoped deadline, tie tolerance and span
- InstanceFile / Report: JSON instance files and command reports
- DomainModel: frozen base whose constructor raises StopordError subclasses
- StopordError and its subclasses
"""

from .context import SolveContext
from .dist import Dist, FiniteDist, UniformDist, point_mass, three_point, two_point
from .errors import (
    ConstructionError,
    DeadlineExceeded,
    InstanceShapeError,
    InvariantViolation,
    NotNestedError,
    PreconditionError,
    SizeLimitError,
    StopordError,
    UndefinedConditionalError,
    UnsupportedDistributionError,
)
from .instance import InstanceFile, Report
from .model import DomainModel

__all__ = [
    "SolveContext",
    "Dist",
    "FiniteDist",
    "UniformDist",
    "point_mass",
    "three_point",
    "two_point",
    "InstanceFile",
    "Report",
    "DomainModel",
    "StopordError",
    "ConstructionError",
    "DeadlineExceeded",
    "InstanceShapeError",
    "InvariantViolation",
    "NotNestedError",
    "PreconditionError",
    "SizeLimitError",
    "UndefinedConditionalError",
    "UnsupportedDistributionError",
]
