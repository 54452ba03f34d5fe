"""
Limit oracles - choosing the entry point of the next stage.

When a stage ends without reaching the fixed point, the next stage may start
at any point lying in every recorded principal ball. The driver accepts the
oracle's choice verbatim after re-checking that membership.
"""
import logging
from abc import ABC, abstractmethod
from typing import Any, Optional

from langchain_core.messages import AIMessage

from src.spaces.maps import AffineSeriesMap, ContractingMap
from src.spaces.space import UltrametricSpace
from src.state.errors import OracleMembershipViolation
from src.state.schema import Approximated, DriverState, StageEntry, Trace

logger = logging.getLogger(__name__)


class LimitOracle(ABC):
    """Proposes a point of the intersection of the trace's balls, or None."""

    @abstractmethod
    def resolve(self, space: UltrametricSpace, phi: ContractingMap, trace: Trace) -> Optional[Any]:
        ...


class LastIterateOracle(LimitOracle):
    """The last iterate: d(a_last, a_i) = sigma_i, so it lies in every recorded ball."""

    def resolve(self, space: UltrametricSpace, phi: ContractingMap, trace: Trace) -> Optional[Any]:
        return trace.last_point


class BallIntersectionOracle(LimitOracle):
    """Enumerates the intersection of the balls on a finite space, preferring a fixed point."""

    def resolve(self, space: UltrametricSpace, phi: ContractingMap, trace: Trace) -> Optional[Any]:
        if not space.is_finite:
            return None
        inside = [t for t in space.points() if in_every_ball(space, trace, t)]
        for t in inside:
            if space.order.is_zero(space.distance(t, phi(t))):
                return t
        return inside[0] if inside else None


class AffineSeriesOracle(LimitOracle):
    """Closed-form fixed point offset / (1 - multiplier) of an affine series map."""

    def __init__(self, phi: AffineSeriesMap):
        self.phi = phi

    def resolve(self, space: UltrametricSpace, phi: ContractingMap, trace: Trace) -> Optional[Any]:
        return self.phi.fixed_point()


class ConstantOracle(LimitOracle):
    """Always proposes the same point."""

    def __init__(self, point: Any):
        self.point = point

    def resolve(self, space: UltrametricSpace, phi: ContractingMap, trace: Trace) -> Optional[Any]:
        return self.point


def in_every_ball(space: UltrametricSpace, trace: Trace, t: Any) -> bool:
    """d(t, a_i) <= sigma_i for every recorded step."""
    return all(space.order.leq(space.distance(t, a), s) for a, s in trace.steps())


def limit_oracle_node(state: DriverState) -> dict:
    """
    LangGraph node: pick the next entry point, stop if it is the fixed point.
    """
    space = state["space"]
    phi = state["contracting_map"]
    oracle = state.get("oracle") or LastIterateOracle()
    trace = Trace(stages=list(state.get("stages", [])))
    stage_count = state.get("stage_count", 0)

    t = oracle.resolve(space, phi, trace)
    if t is None:
        logger.info("oracle %s had no proposal; continuing from the last iterate", type(oracle).__name__)
        t = trace.last_point

    if not in_every_ball(space, trace, t):
        logger.warning("oracle %s proposed %s outside the ball chain", type(oracle).__name__, space.describe_point(t))
        raise OracleMembershipViolation(
            f"{space.describe_point(t)} is not in every recorded ball (oracle {type(oracle).__name__})"
        )

    if space.order.is_zero(space.distance(t, phi(t))):
        logger.info("oracle point is the fixed point after stage %d", stage_count)
        return {
            "outcome": Approximated(point=t, trace=trace, precision=space.precision),
            "messages": [AIMessage(content=f"Limit stage {stage_count}: oracle point is fixed.")],
        }

    return {
        "start": t,
        "entry": StageEntry.LIMIT_ORACLE,
        "stage_count": stage_count + 1,
        "messages": [AIMessage(content=f"Limit stage {stage_count}: continuing from {space.describe_point(t)}.")],
    }
