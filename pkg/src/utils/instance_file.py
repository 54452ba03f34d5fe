"""
Instance files: JSON declaring either a finite space (radius poset plus
distance table) or a built-in instance with its parameters.

    {"name": "f3", "kind": "finite",
     "order": {"name": "chain3", "elements": ["0", "1", "2"], "zero": "0",
               "less": [["0", "1"], ["0", "2"], ["1", "2"]]},
     "points": ["a", "b", "c"],
     "distances": [["0", "2", "2"], ["2", "0", "1"], ["2", "1", "0"]]}

    {"name": "padic-7-4", "kind": "padic", "p": 7, "n": 4}

Parsing only checks structure; the axioms are the verifier's job.
"""
import json
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, TypeAdapter, ValidationError

from src.spaces.radius import FinitePoset, RadiusOrder
from src.spaces.space import UltrametricSpace
from src.state.errors import ParseError
from src.utils.instance_provider import get_space


class PosetSpec(BaseModel):
    name: str
    elements: List[str] = Field(min_length=1)
    zero: str
    less: List[Tuple[str, str]] = Field(default_factory=list, description="Pairs (a, b) with a < b")

    def build(self) -> FinitePoset:
        return FinitePoset(self.name, self.elements, self.zero, self.less)


class FiniteInstance(BaseModel):
    kind: Literal["finite"] = "finite"
    name: str = "finite"
    order: PosetSpec
    points: Optional[List[str]] = None
    distances: List[List[str]]

    def descriptor(self) -> dict:
        return {
            "kind": "finite",
            "order": self.order.build().descriptor(),
            "points": self.points,
            "distances": self.distances,
        }


class PadicInstance(BaseModel):
    kind: Literal["padic"] = "padic"
    name: str = "padic"
    p: int = Field(ge=2)
    n: int = Field(ge=1)

    def descriptor(self) -> dict:
        return {"kind": "padic", "p": self.p, "n": self.n}


class PadicDiscInstance(BaseModel):
    kind: Literal["padic_disc"] = "padic_disc"
    name: str = "padic_disc"
    p: int = Field(ge=2)
    n: int = Field(ge=1)
    center: int

    def descriptor(self) -> dict:
        return {"kind": "padic_disc", "p": self.p, "n": self.n, "center": self.center}


class SeriesInstance(BaseModel):
    kind: Literal["series"] = "series"
    name: str = "series"
    cap: int = Field(ge=1)

    def descriptor(self) -> dict:
        return {"kind": "series", "cap": self.cap}


class LexSeriesInstance(BaseModel):
    kind: Literal["lex_series"] = "lex_series"
    name: str = "lex_series"
    cap_m: int = Field(default=3, ge=1)
    cap_n: int = Field(default=3, ge=1)

    def descriptor(self) -> dict:
        return {"kind": "lex_series", "cap_m": self.cap_m, "cap_n": self.cap_n}


InstanceFile = Annotated[
    Union[FiniteInstance, PadicInstance, PadicDiscInstance, SeriesInstance, LexSeriesInstance],
    Field(discriminator="kind"),
]

_adapter = TypeAdapter(InstanceFile)


def parse_instance(text: str):
    """Parse instance JSON; errors carry the line and column or the offending field."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno, column=e.colno) from e
    try:
        return _adapter.validate_python(data)
    except ValidationError as e:
        err = e.errors()[0]
        path = ".".join(str(part) for part in err["loc"]) or "<root>"
        raise ParseError(f"{path}: {err['msg']}") from e


def load_instance(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from e
    return parse_instance(text)


def build_instance(instance) -> Tuple[RadiusOrder, UltrametricSpace]:
    """The radius order and the space, without load-time axiom checks."""
    space = get_space(instance.descriptor(), validate=False)
    return space.order, space
