"""
Stage runner - successor steps of the approximation process.

Responsibilities:
1. Apply a_{i+1} = phi(a_i) until a fixed point is hit or the stage budget runs out
2. Record every step distance sigma_i = d(a_i, a_{i+1}) and its principal ball
3. Insist that the step distances strictly decrease, across stages too
"""
import logging
from typing import Any, Optional

from langchain_core.messages import AIMessage

from src.spaces.maps import ContractingMap
from src.spaces.radius import RadiusValue
from src.spaces.space import Ball, UltrametricSpace
from src.state.errors import ContractionViolation
from src.state.schema import DriverState, Reached, StageEntry, StageSegment, Trace

logger = logging.getLogger(__name__)


def iterate_stage(
    space: UltrametricSpace,
    phi: ContractingMap,
    start: Any,
    budget: int,
    entry: StageEntry = StageEntry.START,
    previous_sigma: Optional[RadiusValue] = None,
) -> StageSegment:
    """
    Iterate phi from `start` for at most `budget` steps.

    Stops early when d(a_i, phi(a_i)) is zero. `previous_sigma` is the last step
    distance of the earlier stages; the first step here must fall strictly below it.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    order = space.order
    segment = StageSegment(entry=entry, iterates=[start])
    last = previous_sigma
    current, image = start, phi(start)

    for _ in range(budget):
        d = space.distance(current, image)
        if order.is_zero(d):
            segment.reached = True
            break
        if last is not None and not order.lt(d, last):
            raise ContractionViolation(
                f"step distance {d!r} at {space.describe_point(current)} is not below the previous {last!r}"
            )
        segment.sigma.append(d)
        segment.balls.append(Ball(center=current, radius=d))
        segment.iterates.append(image)
        logger.debug("step %d: sigma=%r", len(segment.sigma), d)
        last = d
        current, image = image, phi(image)
    else:
        segment.reached = order.is_zero(space.distance(current, image))

    return segment


def stage_runner_node(state: DriverState) -> dict:
    """
    LangGraph node that runs one stage from the current entry point.
    """
    space = state["space"]
    phi = state["contracting_map"]
    config = state["config"]
    stages = state.get("stages", [])
    stage_index = state.get("stage_count", 0)

    previous = None
    for seg in reversed(stages):
        if seg.sigma:
            previous = seg.sigma[-1]
            break

    segment = iterate_stage(
        space, phi, state["start"], config.steps_per_stage,
        entry=state.get("entry", StageEntry.START), previous_sigma=previous,
    )
    update = {
        "stages": [segment],
        "messages": [AIMessage(content=f"Stage {stage_index}: {len(segment.sigma)} steps, "
                                       f"{'reached' if segment.reached else 'not reached'}.")],
    }
    if segment.reached:
        logger.info("reached fixed point at stage %d step %d", stage_index, len(segment.iterates) - 1)
        update["outcome"] = Reached(
            point=segment.iterates[-1],
            stage_index=stage_index,
            step_index=len(segment.iterates) - 1,
            trace=Trace(stages=list(stages) + [segment]),
            precision=space.precision,
        )
    return update
