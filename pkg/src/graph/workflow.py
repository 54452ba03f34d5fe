"""
Fixed-point approximation workflow

The stage loop runs as a small state graph:
- stage_runner (successor steps until reached or the stage budget is spent)
- limit_oracle (limit stage: choose a point of every recorded ball)
- inconclusive (budgets exhausted)
"""
import logging
from functools import lru_cache
from typing import Any, Callable, Iterator, Optional, Tuple

from langchain_core.messages import AIMessage
from langgraph.graph import StateGraph, START, END

from src.agents.limit_oracle import LimitOracle, LastIterateOracle, limit_oracle_node
from src.agents.stage_runner import stage_runner_node
from src.spaces.maps import ContractingMap
from src.spaces.space import UltrametricSpace
from src.state.schema import DriverConfig, DriverState, Inconclusive, StageEntry, Trace

logger = logging.getLogger(__name__)


def inconclusive_node(state: DriverState) -> dict:
    """
    Closing node when every stage ran out of budget.
    """
    space = state["space"]
    trace = Trace(stages=list(state.get("stages", [])))
    logger.info("inconclusive after %d stages", len(trace.stages))
    return {
        "outcome": Inconclusive(trace=trace, precision=space.precision),
        "messages": [AIMessage(content=f"Inconclusive after {len(trace.stages)} stages.")],
    }


def after_stage(state: DriverState) -> str:
    """
    Routing function: stop once the stage reached the fixed point.
    """
    if state.get("outcome") is not None:
        return "done"
    return "limit"


def after_limit(state: DriverState) -> str:
    """
    Routing function: stop on an approximated fixed point, give up after max_stages.
    """
    if state.get("outcome") is not None:
        return "done"
    if state.get("stage_count", 0) >= state["config"].max_stages:
        return "exhausted"
    return "continue"


def build_graph():
    """
    Build the stage-loop graph.

    Flow:
    START -> stage_runner -> [after_stage?]
                                |
                    [done] -> END
                    [limit] -> limit_oracle -> [after_limit?]
                                                  |
                                      [done] -> END
                                      [continue] -> stage_runner (loop)
                                      [exhausted] -> inconclusive -> END
    """
    workflow = StateGraph(DriverState)

    workflow.add_node("stage_runner", stage_runner_node)
    workflow.add_node("limit_oracle", limit_oracle_node)
    workflow.add_node("inconclusive", inconclusive_node)

    workflow.add_edge(START, "stage_runner")

    workflow.add_conditional_edges(
        "stage_runner",
        after_stage,
        {
            "done": END,
            "limit": "limit_oracle",
        }
    )

    workflow.add_conditional_edges(
        "limit_oracle",
        after_limit,
        {
            "done": END,
            "continue": "stage_runner",
            "exhausted": "inconclusive",
        }
    )

    workflow.add_edge("inconclusive", END)

    return workflow.compile()


@lru_cache(maxsize=1)
def get_graph():
    return build_graph()


def get_initial_state(
    space: UltrametricSpace,
    phi: ContractingMap,
    start: Any,
    config: DriverConfig,
    oracle: Optional[LimitOracle] = None,
) -> dict:
    """
    Create initial state for the stage loop.
    """
    return {
        "messages": [],
        "space": space,
        "contracting_map": phi,
        "oracle": oracle or LastIterateOracle(),
        "config": config,
        "start": start,
        "entry": StageEntry.START,
        "stages": [],
        "stage_count": 0,
        "outcome": None,
    }


def run(
    space: UltrametricSpace,
    phi: ContractingMap,
    start: Any,
    config: Optional[DriverConfig] = None,
    oracle: Optional[LimitOracle] = None,
    progress: Optional[Callable[[str, dict], None]] = None,
):
    """
    Iterate phi from `start` and return Reached, Approximated or Inconclusive.

    `progress` is called with (node name, state update) as each node finishes.
    Raises ContractionViolation when the step distances stop decreasing and
    OracleMembershipViolation when the oracle proposes a point outside the ball chain.
    """
    config = config or DriverConfig()
    if progress is None:
        state = get_initial_state(space, phi, start, config, oracle)
        outcome = get_graph().invoke(state, config={"recursion_limit": config.recursion_limit})["outcome"]
    else:
        outcome = None
        for node_name, update in stream_run(space, phi, start, config, oracle):
            progress(node_name, update)
            outcome = update.get("outcome") or outcome
    logger.info("run finished: %s", outcome.kind)
    return outcome


def stream_run(
    space: UltrametricSpace,
    phi: ContractingMap,
    start: Any,
    config: Optional[DriverConfig] = None,
    oracle: Optional[LimitOracle] = None,
) -> Iterator[Tuple[str, dict]]:
    """
    Like run(), but yields (node name, state update) as each node finishes.
    The outcome is in the update of the last node.
    """
    config = config or DriverConfig()
    state = get_initial_state(space, phi, start, config, oracle)
    for event in get_graph().stream(state, config={"recursion_limit": config.recursion_limit}):
        for node_name, update in event.items():
            yield node_name, update
