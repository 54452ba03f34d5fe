from typing import Annotated, Any, List, Literal, Optional, TypedDict, Union
import operator
from enum import Enum
from langchain_core.messages import BaseMessage
from pydantic import BaseModel, ConfigDict, Field

from src.spaces.radius import RadiusValue
from src.spaces.space import Ball

# Driver configuration
class DriverConfig(BaseModel):
    """Budgets standing in for the unbounded (transfinite) iteration."""
    steps_per_stage: int = Field(default=64, ge=1, description="Map applications per stage")
    max_stages: int = Field(default=4, ge=1, description="Stages before giving up as inconclusive")

    @property
    def recursion_limit(self) -> int:
        # Two graph steps per stage plus entry and the closing node.
        return 2 * self.max_stages + 5


class StageEntry(str, Enum):
    START = "start"
    LIMIT_ORACLE = "limit_oracle"


# One stage of iteration: a_0, phi(a_0), phi^2(a_0), ...
class StageSegment(BaseModel):
    """Iterates of a single stage with their step distances and principal balls."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    entry: StageEntry
    iterates: List[Any] = Field(default_factory=list)
    sigma: List[RadiusValue] = Field(default_factory=list, description="sigma_i = d(a_i, a_{i+1})")
    balls: List[Ball] = Field(default_factory=list, description="B_i = B_{sigma_i}(a_i)")
    reached: bool = Field(default=False, description="The last iterate is a fixed point")


class Trace(BaseModel):
    """The stage-segmented family produced by the driver."""
    stages: List[StageSegment] = Field(default_factory=list)

    @property
    def reached(self) -> bool:
        return bool(self.stages) and self.stages[-1].reached

    @property
    def last_point(self) -> Any:
        return self.stages[-1].iterates[-1]

    def steps(self) -> List[tuple]:
        """(a_i, sigma_i) for every recorded step, in order across stages."""
        return [(a, s) for seg in self.stages for a, s in zip(seg.iterates, seg.sigma)]

    def sigma_chain(self) -> List[RadiusValue]:
        return [s for seg in self.stages for s in seg.sigma]

    def ball_chain(self) -> List[Ball]:
        return [b for seg in self.stages for b in seg.balls]

    def family(self) -> List[Any]:
        """All iterates in order; a stage entry repeating the previous stage's last iterate is listed once."""
        points: List[Any] = []
        for seg in self.stages:
            its = seg.iterates
            if points and its and its[0] == points[-1]:
                its = its[1:]
            points.extend(its)
        return points

    def truncated(self, steps: int) -> "Trace":
        """The trace cut after its first `steps` recorded steps (for diagnostics)."""
        out, left = [], steps
        for seg in self.stages:
            if left <= 0:
                break
            take = min(left, len(seg.sigma))
            out.append(StageSegment(entry=seg.entry, iterates=seg.iterates[: take + 1], sigma=seg.sigma[:take],
                                    balls=seg.balls[:take], reached=False))
            left -= take
        return Trace(stages=out)


# Outcomes of a driver run
class Reached(BaseModel):
    """The iteration hit the fixed point at (stage_index, step_index)."""
    model_config = ConfigDict(arbitrary_types_allowed=True)
    kind: Literal["reached"] = "reached"
    point: Any
    stage_index: int
    step_index: int
    trace: Trace
    precision: Optional[str] = Field(default=None, description="Working precision when the model is truncated")


class Approximated(BaseModel):
    """The fixed point is the common point of the nested ball chain, supplied at a limit stage."""
    model_config = ConfigDict(arbitrary_types_allowed=True)
    kind: Literal["approximated"] = "approximated"
    point: Any
    trace: Trace
    precision: Optional[str] = None


class Inconclusive(BaseModel):
    """Budgets exhausted before reaching or approximating."""
    model_config = ConfigDict(arbitrary_types_allowed=True)
    kind: Literal["inconclusive"] = "inconclusive"
    trace: Trace
    precision: Optional[str] = None


Outcome = Annotated[Union[Reached, Approximated, Inconclusive], Field(discriminator="kind")]


class DriverState(TypedDict):
    """State for the stage-loop graph."""
    # Progress notes
    messages: Annotated[List[BaseMessage], operator.add]

    # Problem
    space: Any
    contracting_map: Any
    oracle: Any
    config: DriverConfig

    # Iteration control
    start: Any
    entry: StageEntry
    stages: Annotated[List[StageSegment], operator.add]
    stage_count: int

    # Result
    outcome: Optional[Union[Reached, Approximated, Inconclusive]]
