"""
Power-series solutions of y' = f(t, y), y(0) = y0, by Picard iteration.

The Picard operator T(y) = y0 + integral_0^t f(s, y(s)) ds maps polynomials
to polynomials and raises the order of any difference by one, so its
iterates stay in the polynomial subspace while the fixed point lives among
the (truncated) series.
"""
import logging
from fractions import Fraction
from math import factorial
from typing import Callable, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.agents.limit_oracle import LimitOracle
from src.graph.workflow import run
from src.spaces.maps import PicardOperator
from src.spaces.radius import NatExp
from src.spaces.series import BivariatePolynomial, PolynomialSubspace, SeriesQ, SeriesSpace
from src.state.errors import AccessorViolation
from src.state.report import Report
from src.state.schema import DriverConfig, Inconclusive, Outcome
from src.tools.analysis import PerturbedTruncationAccessor, TruncationAccessor, extend_by_continuity, orbit

logger = logging.getLogger(__name__)


class OdeProblem(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
    rhs: BivariatePolynomial = Field(description="f(t, y)")
    y0: Fraction = Field(description="Initial value y(0)")
    cap: int = Field(ge=1, description="Work modulo t^cap")

    @field_validator("y0", mode="before")
    @classmethod
    def _exact(cls, value):
        return Fraction(value)

    def space(self) -> SeriesSpace:
        return SeriesSpace(self.cap)

    def operator(self) -> PicardOperator:
        return PicardOperator(self.rhs, self.y0)

    def initial(self) -> SeriesQ:
        return SeriesQ.constant(self.y0, self.cap)


class PicardResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)
    problem: OdeProblem
    outcome: Outcome
    series: Optional[SeriesQ] = None
    residual_ok: bool = Field(default=False, description="y' - f(t, y) vanishes through t^(cap-2)")


def ode_residual(prob: OdeProblem, y: SeriesQ) -> SeriesQ:
    """y' - f(t, y), meaningful through t^(cap-2); zero for cap 1."""
    if prob.cap < 2:
        return SeriesQ.zero(1)
    return y.derivative() - prob.rhs.evaluate(y).truncate(prob.cap - 1)


def picard_solve(
    prob: OdeProblem,
    config: Optional[DriverConfig] = None,
    oracle: Optional[LimitOracle] = None,
    progress: Optional[Callable[[str, dict], None]] = None,
) -> PicardResult:
    space = prob.space()
    outcome = run(space, prob.operator(), prob.initial(), config, oracle, progress)
    if isinstance(outcome, Inconclusive):
        return PicardResult(problem=prob, outcome=outcome)
    y = outcome.point
    residual_ok = ode_residual(prob, y).is_zero()
    logger.info("picard y' = %s, y(0) = %s mod t^%d: %s", prob.rhs, prob.y0, prob.cap, outcome.kind)
    return PicardResult(problem=prob, outcome=outcome, series=y, residual_ok=residual_ok)


def picard_orbit(prob: OdeProblem, length: int) -> List[SeriesQ]:
    """T^k(y0) for k < length."""
    return orbit(prob.operator(), prob.initial(), length)


def exp_series(cap: int) -> SeriesQ:
    """sum t^k / k! mod t^cap."""
    return SeriesQ.of([Fraction(1, factorial(k)) for k in range(cap)], cap)


def picard_as_extension_demo(prob: OdeProblem, gamma: NatExp, x_hat: Optional[SeriesQ] = None) -> Report:
    """
    The Picard operator restricted to polynomials of degree <= cap-2, extended
    to x_hat by continuity with two different approximants. Both values and the
    direct evaluation T(x_hat) must agree within gamma.

    At radius index cap-1 an approximant must agree with x_hat through
    t^(cap-1), so Y grows to every polynomial below the cap.
    """
    if gamma.k is None or not 0 <= gamma.k < prob.cap:
        raise ValueError(f"radius index must lie in 0..{prob.cap - 1}, got {gamma!r}")
    space = prob.space()
    subspace = PolynomialSubspace(space, max(prob.cap - 2, gamma.k))
    target = exp_series(prob.cap) if x_hat is None else x_hat
    psi = prob.operator()
    direct = psi(target)

    report = Report(name="map-extension")
    values = []
    for access in (TruncationAccessor(subspace), PerturbedTruncationAccessor(subspace)):
        report.checked += 1
        try:
            values.append(extend_by_continuity(space, psi, access, target, gamma))
        except AccessorViolation as e:
            report.add("accessor-distance", str(e), accessor=type(access).__name__)

    order = space.order
    for v in values:
        report.checked += 1
        if not order.lt(space.distance(v, direct), gamma):
            report.add("direct-agreement", f"extension {v} is {space.distance(v, direct)!r} from T(x) = {direct}",
                       gamma=gamma)
    if len(values) == 2:
        report.checked += 1
        gap = space.distance(values[0], values[1])
        if not order.lt(gap, gamma):
            report.add("approximant-agreement", f"the two extensions differ at {gap!r}", gamma=gamma)
    if target in subspace and values and values[0] != direct:
        report.add("exact-agreement", f"{target} lies in the subspace but its extension differs from T(x)")
    return report
