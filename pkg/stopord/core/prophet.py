"""Prophet comparison for two-point variables.

The best probe order of two-point variables earns at least 4/5 of the
prophet's E[max]. :func:`build_certificate` makes that constructive: it
builds two concrete orders from the instance and lower bounds whose best
is at least 0.8 of an upper bound on the prophet's value.
"""

import itertools
import logging
import math

import pydantic
from opentelemetry import trace

from stopord.core import two_point
from stopord.core.stopping import hindsight_max, sequence_value
from stopord.core.two_point import TwoPointInstance
from stopord.types.errors import InvariantViolation, PreconditionError, SizeLimitError

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

PROPHET_FACTOR = 1.25
MAX_W = 20
CERT_TOL = 1e-9


class ProphetCertificate(pydantic.BaseModel):
    """Constructive evidence that the best order earns at least 0.8 * MAX.

    ``i_star`` has the largest left endpoint ``a*``. ``U`` holds the other
    variables with ``b_i >= b*`` and ``W`` those with ``b* > b_i >= a*``,
    both in decreasing ``b``. ``sigma1 = (U, W, i*)`` and
    ``sigma2 = (U, i*, W)``.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    i_star: int
    U: tuple[int, ...]
    W: tuple[int, ...]
    b_w: float
    p_w: float
    mu_star: float
    T1: float
    T2: float
    T3: float
    MAX: float
    sigma1: tuple[int, ...]
    sigma2: tuple[int, ...]
    sigma1_value: float
    sigma2_value: float
    degenerate: bool = False

    @pydantic.model_validator(mode="after")
    def _check_bounds(self) -> "ProphetCertificate":
        lower = max(self.T1, self.T2, self.T3)
        # Relative: the bounds and the order values round along different paths.
        slack = CERT_TOL * max(1.0, abs(lower), abs(self.MAX))
        if max(self.sigma1_value, self.sigma2_value) < lower - slack:
            raise InvariantViolation(
                f"orders earn {max(self.sigma1_value, self.sigma2_value)!r}, below the bound {lower!r}"
            )
        if lower < 0.8 * self.MAX - slack:
            raise InvariantViolation(f"max(T1, T2, T3) = {lower!r} is below 0.8 * MAX = {0.8 * self.MAX!r}")
        return self

    @property
    def best_bound(self) -> float:
        return max(self.T1, self.T2, self.T3)


class ProphetReport(pydantic.BaseModel):
    """Prophet value against the best order value."""

    model_config = pydantic.ConfigDict(frozen=True)

    e_max: float
    best_order_value: float
    best_ordering: tuple[int, ...]
    ratio: float
    certificate: ProphetCertificate | None = None

    @pydantic.model_validator(mode="after")
    def _check_ratio(self) -> "ProphetReport":
        if self.ratio < 1 - 1e-12:
            raise InvariantViolation(f"prophet ratio {self.ratio!r} is below 1")
        if self.ratio > PROPHET_FACTOR + CERT_TOL:
            raise InvariantViolation(f"prophet ratio {self.ratio!r} exceeds {PROPHET_FACTOR}")
        return self


def _effective_p(inst: TwoPointInstance, i: int) -> float:
    """P(X_i = b_i); a collapsed variable sits at b_i for sure."""
    return 1.0 if inst.a[i] == inst.b[i] else inst.p[i]


def _first_success(inst: TwoPointInstance, group: tuple[int, ...]) -> tuple[float, float]:
    """Returns ``(p_w, b_w)``: the chance that some variable in ``group``
    hits its right endpoint, and E[max over the group | that happens].

    Computed by enumerating all outcomes of the group.
    """
    if not group:
        return 0.0, 0.0
    if len(group) > MAX_W:
        raise SizeLimitError(f"certificate enumeration supports at most {MAX_W} variables in W (got {len(group)})")
    hit_mass = 0.0
    weighted = 0.0
    for outcome in itertools.product((False, True), repeat=len(group)):
        if not any(outcome):
            continue
        prob = 1.0
        top = 0.0
        for i, high in zip(group, outcome, strict=True):
            q = _effective_p(inst, i)
            prob *= q if high else 1 - q
            top = max(top, inst.b[i] if high else inst.a[i])
        hit_mass += prob
        weighted += prob * top
    p_w = 1 - math.prod(1 - _effective_p(inst, i) for i in group)
    b_w = weighted / hit_mass if hit_mass > 0 else 0.0
    return p_w, b_w


def build_certificate(inst: TwoPointInstance) -> ProphetCertificate:
    """Builds the two candidate orders and the bounds T1, T2, T3 and MAX.

    Variables with ``b_i < a*`` can never beat the guaranteed ``a*`` and are
    left out of both orders.

    Raises:
        PreconditionError: If the instance is empty
        SizeLimitError: If W has more than 20 variables
        InvariantViolation: If the bounds do not hold
    """
    if inst.n == 0:
        raise PreconditionError("need at least one variable")
    i_star = min(range(inst.n), key=lambda i: (-inst.a[i], i))
    a_star, b_star = inst.a[i_star], inst.b[i_star]
    p_star = _effective_p(inst, i_star)

    by_b = two_point.by_right_endpoint(inst)
    upper = tuple(i for i in by_b if i != i_star and inst.b[i] >= b_star)
    middle = tuple(i for i in by_b if i != i_star and a_star <= inst.b[i] < b_star)
    p_w, b_w = _first_success(inst, middle)

    mu_star = p_star * b_star + (1 - p_star) * a_star
    t1 = p_w * b_w + (1 - p_w) * mu_star
    t2 = p_star * b_star + (1 - p_star) * p_w * b_w
    big = p_star * b_star + (1 - p_star) * p_w * b_w + (1 - p_star) * (1 - p_w) * a_star

    dists = inst.dists()
    sigma1 = upper + middle + (i_star,)
    sigma2 = upper + (i_star,) + middle
    return ProphetCertificate(
        i_star=i_star,
        U=upper,
        W=middle,
        b_w=b_w,
        p_w=p_w,
        mu_star=mu_star,
        T1=t1,
        T2=t2,
        T3=mu_star,
        MAX=big,
        sigma1=sigma1,
        sigma2=sigma2,
        sigma1_value=sequence_value([dists[i] for i in sigma1]).value,
        sigma2_value=sequence_value([dists[i] for i in sigma2]).value,
        degenerate=not middle,
    )


def prophet_ratio(inst: TwoPointInstance, with_certificate: bool = True) -> ProphetReport:
    """Compares E[max] with the best order value.

    The ratio is 1 when both are 0. The certificate is attached when W is
    small enough to enumerate.
    """
    if inst.n == 0:
        raise PreconditionError("need at least one variable")
    with tracer.start_as_current_span("stopord.prophet_ratio") as span:
        span.set_attribute("n", inst.n)
        e_max = hindsight_max(inst.dists())
        best = two_point.solve(inst)
        ratio = 1.0 if e_max == 0 and best.value == 0 else e_max / best.value
        certificate = None
        if with_certificate:
            try:
                certificate = build_certificate(inst)
            except SizeLimitError:
                logger.info("certificate skipped: W too large to enumerate")
        span.set_attribute("ratio", ratio)
        return ProphetReport(
            e_max=e_max,
            best_order_value=best.value,
            best_ordering=best.order,
            ratio=ratio,
            certificate=certificate,
        )


def tightness_instance(eps: float) -> TwoPointInstance:
    """Pair whose prophet ratio (5/4 - 3 eps/4) / (1 - eps/4) tends to 5/4 as eps shrinks.

    X1 is 0.5, or 1/(2 eps) with probability eps; X2 is 0 or 1 with equal odds.

    Raises:
        PreconditionError: If ``eps`` is outside (0, 1)
    """
    if not 0 < eps < 1:
        raise PreconditionError(f"eps must lie in (0, 1) (got {eps})")
    return TwoPointInstance(a=(0.5, 0.0), b=(1 / (2 * eps), 1.0), p=(eps, 0.5))
