"""
Trace documents: a self-describing JSON form of a driver run, plus a store
that writes them (and a markdown summary) to an output directory.
"""
import os
from datetime import datetime
from typing import Any, List, Optional, Tuple

from pydantic import BaseModel, Field

from src.agents.validator import validate_trace
from src.spaces.maps import ContractingMap
from src.spaces.space import Ball, UltrametricSpace
from src.state.report import Report
from src.state.schema import (
    Approximated,
    DriverConfig,
    Inconclusive,
    Reached,
    StageEntry,
    StageSegment,
    Trace,
)
from src.utils.instance_provider import get_map, get_space


class BallRecord(BaseModel):
    center: Any
    radius: str = Field(description="Tagged radius, e.g. natexp:3")


class StageRecord(BaseModel):
    entry: StageEntry
    iterates: List[Any] = Field(default_factory=list)
    sigma: List[str] = Field(default_factory=list)
    balls: List[BallRecord] = Field(default_factory=list)
    reached: bool = False


class OutcomeRecord(BaseModel):
    kind: str
    point: Optional[Any] = None
    stage_index: Optional[int] = None
    step_index: Optional[int] = None
    precision: Optional[str] = None


class TraceDocument(BaseModel):
    """Everything needed to re-check a run without the code that produced it."""
    instance: dict = Field(description="Space descriptor")
    map: dict = Field(description="Map descriptor")
    config: Optional[DriverConfig] = None
    stages: List[StageRecord] = Field(default_factory=list)
    outcome: OutcomeRecord
    validation: Report

    def dumps(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def loads(cls, text: str) -> "TraceDocument":
        return cls.model_validate_json(text)


def encode_trace_document(space: UltrametricSpace, phi: ContractingMap, outcome,
                          config: Optional[DriverConfig] = None) -> TraceDocument:
    order = space.order
    trace = outcome.trace
    stages = [
        StageRecord(
            entry=seg.entry,
            iterates=[space.encode_point(x) for x in seg.iterates],
            sigma=[order.encode(s) for s in seg.sigma],
            balls=[BallRecord(center=space.encode_point(b.center), radius=order.encode(b.radius)) for b in seg.balls],
            reached=seg.reached,
        )
        for seg in trace.stages
    ]
    record = OutcomeRecord(kind=outcome.kind, precision=outcome.precision)
    if not isinstance(outcome, Inconclusive):
        record.point = space.encode_point(outcome.point)
    if isinstance(outcome, Reached):
        record.stage_index = outcome.stage_index
        record.step_index = outcome.step_index
    return TraceDocument(
        instance=space.descriptor(),
        map=phi.descriptor(space),
        config=config,
        stages=stages,
        outcome=record,
        validation=validate_trace(space, phi, trace),
    )


def decode_trace_document(doc: TraceDocument) -> Tuple[UltrametricSpace, ContractingMap, Any]:
    """Rebuild (space, map, outcome) from a document."""
    space = get_space(doc.instance, validate=False)
    phi = get_map(doc.map, space)
    order = space.order
    trace = Trace(stages=[
        StageSegment(
            entry=rec.entry,
            iterates=[space.decode_point(x) for x in rec.iterates],
            sigma=[order.decode(s) for s in rec.sigma],
            balls=[Ball(center=space.decode_point(b.center), radius=order.decode(b.radius)) for b in rec.balls],
            reached=rec.reached,
        )
        for rec in doc.stages
    ])
    o = doc.outcome
    if o.kind == "reached":
        outcome = Reached(point=space.decode_point(o.point), stage_index=o.stage_index, step_index=o.step_index,
                          trace=trace, precision=o.precision)
    elif o.kind == "approximated":
        outcome = Approximated(point=space.decode_point(o.point), trace=trace, precision=o.precision)
    else:
        outcome = Inconclusive(trace=trace, precision=o.precision)
    return space, phi, outcome


class TraceStore:
    """Writes trace documents and markdown summaries for a run."""

    def __init__(self, output_dir: str, run_id: str):
        self.output_dir = output_dir
        self.run_id = run_id
        self.trace_file = os.path.join(output_dir, f"trace_{run_id}.json")
        self.summary_file = os.path.join(output_dir, f"summary_{run_id}.md")

        os.makedirs(output_dir, exist_ok=True)

    def save_trace(self, doc: TraceDocument) -> str:
        with open(self.trace_file, "w") as f:
            f.write(doc.dumps())
        return self.trace_file

    def load_trace(self) -> TraceDocument:
        with open(self.trace_file, "r") as f:
            return TraceDocument.loads(f.read())

    def save_summary(self, title: str, doc: TraceDocument, result_line: str = "") -> str:
        """Markdown overview of the run: outcome, step distances, validation."""
        sigma = [s for stage in doc.stages for s in stage.sigma]
        content = f"""# {title}
**Generated**: {datetime.now().isoformat()}
**Instance**: `{doc.instance}`
**Map**: `{doc.map.get('kind')}`
**Outcome**: {doc.outcome.kind}
"""
        if doc.outcome.precision:
            content += f"**Precision**: {doc.outcome.precision}\n"
        if result_line:
            content += f"\n## Result\n{result_line}\n"

        content += "\n## Stages\n"
        for i, stage in enumerate(doc.stages):
            content += f"- Stage {i} ({stage.entry.value}): {len(stage.sigma)} steps, " \
                       f"{'reached' if stage.reached else 'not reached'}\n"

        content += "\n## Step distances\n"
        content += ", ".join(sigma) if sigma else "(none)"
        content += f"\n\n## Validation\n```\n{doc.validation.summary()}\n```\n"

        with open(self.summary_file, "w") as f:
            f.write(content)

        return self.summary_file
