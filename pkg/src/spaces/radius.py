"""
Radius sets: ordered sets with a least element 0, possibly only partially ordered.

Three encodings ship:
- NatExp: k in N u {inf} read as the radius 2^-k (larger k, smaller radius; inf is 0)
- FinitePoset: explicit elements and an order table, incomparable pairs allowed
- LexPair: (m, n) in N^2 u {inf} under reversed lexicographic comparison

Incomparability is an ordinary comparison result. Everything downstream asks
"is it <= ?" and treats Incomparable as "no".
"""
import itertools
from abc import ABC, abstractmethod
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from src.state.errors import MixedOrders, ParseError
from src.state.report import Report


class Comparison(str, Enum):
    LT = "lt"
    GT = "gt"
    EQ = "eq"
    INCOMPARABLE = "incomparable"

    def flipped(self) -> "Comparison":
        if self is Comparison.LT:
            return Comparison.GT
        if self is Comparison.GT:
            return Comparison.LT
        return self


class NatExp(BaseModel):
    """Radius 2^-k; k=None is the zero radius."""
    model_config = ConfigDict(frozen=True)
    k: Optional[int] = Field(default=None, ge=0)

    def __repr__(self) -> str:
        return f"natexp:{'inf' if self.k is None else self.k}"

    __str__ = __repr__


class PosetRadius(BaseModel):
    """An element of a named finite poset."""
    model_config = ConfigDict(frozen=True)
    order: str
    name: str

    def __repr__(self) -> str:
        return f"poset:{self.name}"

    __str__ = __repr__


class LexPair(BaseModel):
    """Radius indexed by an exponent pair; pair=None is the zero radius."""
    model_config = ConfigDict(frozen=True)
    pair: Optional[Tuple[int, int]] = None

    def __repr__(self) -> str:
        return "lexpair:inf" if self.pair is None else f"lexpair:{self.pair[0]},{self.pair[1]}"

    __str__ = __repr__


RadiusValue = Union[NatExp, PosetRadius, LexPair]


class RadiusOrder(ABC):
    """An ordered set of radii with designated least element `zero`."""

    tag: str = ""

    @property
    @abstractmethod
    def zero(self) -> RadiusValue:
        ...

    @abstractmethod
    def owns(self, value: object) -> bool:
        """True iff `value` is an element of this order."""

    @abstractmethod
    def _compare(self, a: RadiusValue, b: RadiusValue) -> Comparison:
        ...

    @abstractmethod
    def enumerate_sample(self) -> List[RadiusValue]:
        """Finite list of nonzero radii for property checks (all of them when finite)."""

    @abstractmethod
    def decode(self, text: str) -> RadiusValue:
        ...

    @abstractmethod
    def descriptor(self) -> dict:
        ...

    def encode(self, value: RadiusValue) -> str:
        return repr(value)

    def compare(self, a: RadiusValue, b: RadiusValue) -> Comparison:
        if not (self.owns(a) and self.owns(b)):
            raise MixedOrders(f"{a!r} and {b!r} are not both radii of {self!r}")
        return self._compare(a, b)

    def leq(self, a: RadiusValue, b: RadiusValue) -> bool:
        return self.compare(a, b) in (Comparison.LT, Comparison.EQ)

    def lt(self, a: RadiusValue, b: RadiusValue) -> bool:
        return self.compare(a, b) is Comparison.LT

    def is_zero(self, value: RadiusValue) -> bool:
        return value == self.zero


class NatExpOrder(RadiusOrder):
    """Total order of radii 2^-k. `depth` bounds the sample, not the order."""

    tag = "natexp"

    def __init__(self, depth: int = 8):
        self.depth = depth

    @property
    def zero(self) -> NatExp:
        return NatExp(k=None)

    def owns(self, value: object) -> bool:
        return isinstance(value, NatExp)

    def _compare(self, a: NatExp, b: NatExp) -> Comparison:
        if a.k == b.k:
            return Comparison.EQ
        if a.k is None:
            return Comparison.LT
        if b.k is None:
            return Comparison.GT
        return Comparison.LT if a.k > b.k else Comparison.GT

    def enumerate_sample(self) -> List[NatExp]:
        return [NatExp(k=k) for k in range(self.depth + 1)]

    def decode(self, text: str) -> NatExp:
        tag, _, body = text.partition(":")
        if tag != self.tag:
            raise ParseError(f"expected a natexp radius, got {text!r}")
        if body == "inf":
            return NatExp(k=None)
        try:
            return NatExp(k=int(body))
        except ValueError as e:
            raise ParseError(f"bad natexp radius {text!r}") from e

    def descriptor(self) -> dict:
        return {"kind": self.tag, "depth": self.depth}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NatExpOrder)

    def __hash__(self) -> int:
        return hash(self.tag)

    def __repr__(self) -> str:
        return "NatExpOrder()"


class LexPairOrder(RadiusOrder):
    """(m, n) pairs: lexicographically larger pair means smaller radius."""

    tag = "lexpair"

    def __init__(self, bound: int = 3):
        self.bound = bound

    @property
    def zero(self) -> LexPair:
        return LexPair(pair=None)

    def owns(self, value: object) -> bool:
        return isinstance(value, LexPair)

    def _compare(self, a: LexPair, b: LexPair) -> Comparison:
        if a.pair == b.pair:
            return Comparison.EQ
        if a.pair is None:
            return Comparison.LT
        if b.pair is None:
            return Comparison.GT
        return Comparison.LT if a.pair > b.pair else Comparison.GT

    def enumerate_sample(self) -> List[LexPair]:
        rng = range(self.bound + 1)
        return [LexPair(pair=(m, n)) for m in rng for n in rng]

    def decode(self, text: str) -> LexPair:
        tag, _, body = text.partition(":")
        if tag != self.tag:
            raise ParseError(f"expected a lexpair radius, got {text!r}")
        if body == "inf":
            return LexPair(pair=None)
        try:
            m, n = (int(part) for part in body.split(","))
        except ValueError as e:
            raise ParseError(f"bad lexpair radius {text!r}") from e
        return LexPair(pair=(m, n))

    def descriptor(self) -> dict:
        return {"kind": self.tag, "bound": self.bound}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LexPairOrder)

    def __hash__(self) -> int:
        return hash(self.tag)

    def __repr__(self) -> str:
        return "LexPairOrder()"


class FinitePoset(RadiusOrder):
    """
    A finite radius set given by its elements and the pairs (a, b) with a < b.

    The relation is taken verbatim: it is not closed transitively, so a broken
    table shows up in `check_order_axioms` instead of being silently repaired.
    """

    tag = "poset"

    def __init__(self, name: str, elements: Sequence[str], zero: str,
                 less: Iterable[Tuple[str, str]]):
        self.name = name
        self.elements: Tuple[str, ...] = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise ParseError(f"poset {name!r} lists an element twice")
        if zero not in self.elements:
            raise ParseError(f"poset {name!r}: zero {zero!r} is not an element")
        self.zero_name = zero
        self.less: FrozenSet[Tuple[str, str]] = frozenset((a, b) for a, b in less if a != b)
        for a, b in self.less:
            if a not in self.elements or b not in self.elements:
                raise ParseError(f"poset {name!r}: pair ({a}, {b}) uses an unknown element")
        self._radii: Dict[str, PosetRadius] = {e: PosetRadius(order=name, name=e) for e in self.elements}

    @property
    def zero(self) -> PosetRadius:
        return self._radii[self.zero_name]

    def radius(self, name: str) -> PosetRadius:
        try:
            return self._radii[name]
        except KeyError as e:
            raise ParseError(f"poset {self.name!r} has no element {name!r}") from e

    def __getitem__(self, name: str) -> PosetRadius:
        return self.radius(name)

    def owns(self, value: object) -> bool:
        return isinstance(value, PosetRadius) and value.order == self.name and value.name in self._radii

    def _compare(self, a: PosetRadius, b: PosetRadius) -> Comparison:
        if a.name == b.name:
            return Comparison.EQ
        if (a.name, b.name) in self.less:
            return Comparison.LT
        if (b.name, a.name) in self.less:
            return Comparison.GT
        return Comparison.INCOMPARABLE

    def all_radii(self) -> List[PosetRadius]:
        return [self._radii[e] for e in self.elements]

    def enumerate_sample(self) -> List[PosetRadius]:
        return [r for r in self.all_radii() if r.name != self.zero_name]

    def decode(self, text: str) -> PosetRadius:
        tag, _, body = text.partition(":")
        if tag != self.tag:
            raise ParseError(f"expected a poset radius, got {text!r}")
        return self.radius(body)

    def descriptor(self) -> dict:
        return {
            "kind": self.tag,
            "name": self.name,
            "elements": list(self.elements),
            "zero": self.zero_name,
            "less": sorted([a, b] for a, b in self.less),
        }

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FinitePoset) and self.descriptor() == other.descriptor()

    def __hash__(self) -> int:
        return hash((self.name, self.elements, self.less))

    def __repr__(self) -> str:
        return f"FinitePoset({self.name!r})"


def chain(length: int, name: Optional[str] = None) -> FinitePoset:
    """The chain 0 < 1 < ... < length-1."""
    elements = [str(i) for i in range(length)]
    less = [(a, b) for a, b in itertools.combinations(elements, 2)]
    return FinitePoset(name or f"chain{length}", elements, "0", less)


def diamond(name: str = "diamond") -> FinitePoset:
    """0 < a, b < 1 with a and b incomparable."""
    return FinitePoset(
        name,
        ["0", "a", "b", "1"],
        "0",
        [("0", "a"), ("0", "b"), ("0", "1"), ("a", "1"), ("b", "1")],
    )


def order_from_descriptor(data: dict) -> RadiusOrder:
    kind = data.get("kind")
    if kind == NatExpOrder.tag:
        return NatExpOrder(depth=int(data.get("depth", 8)))
    if kind == LexPairOrder.tag:
        return LexPairOrder(bound=int(data.get("bound", 3)))
    if kind == FinitePoset.tag:
        return FinitePoset(data["name"], data["elements"], data["zero"],
                           [tuple(pair) for pair in data.get("less", [])])
    raise ParseError(f"unknown radius order kind {kind!r}")


def compare(order: RadiusOrder, a: RadiusValue, b: RadiusValue) -> Comparison:
    return order.compare(a, b)


def leq(order: RadiusOrder, a: RadiusValue, b: RadiusValue) -> bool:
    return order.leq(a, b)


def lt(order: RadiusOrder, a: RadiusValue, b: RadiusValue) -> bool:
    return order.lt(a, b)


def is_total(order: RadiusOrder, sample: Sequence[RadiusValue]) -> bool:
    return all(order.compare(a, b) is not Comparison.INCOMPARABLE
               for a, b in itertools.combinations(sample, 2))


def check_order_axioms(order: RadiusOrder, sample: Sequence[RadiusValue]) -> Report:
    """Reflexivity, antisymmetry, transitivity and least-element checks over `sample`."""
    report = Report(name="order-axioms")
    values = list(sample)
    if not values:
        report.add("empty-sample", "no radii to check")
        return report

    for a in values:
        report.checked += 1
        if order.compare(a, a) is not Comparison.EQ:
            report.add("reflexivity", f"{a!r} is not equal to itself", radius=a)
        c = order.compare(order.zero, a)
        if c not in (Comparison.LT, Comparison.EQ):
            report.add("least-element", f"zero {order.zero!r} is not <= {a!r} ({c.value})",
                       zero=order.zero, radius=a)

    for a, b in itertools.combinations(values, 2):
        report.checked += 1
        forward, backward = order.compare(a, b), order.compare(b, a)
        if backward is not forward.flipped():
            report.add("antisymmetry", f"compare({a!r}, {b!r}) = {forward.value} "
                       f"but compare({b!r}, {a!r}) = {backward.value}", a=a, b=b)

    for a, b, c in itertools.product(values, repeat=3):
        if order.lt(a, b) and order.lt(b, c):
            report.checked += 1
            if not order.lt(a, c):
                report.add("transitivity", f"{a!r} < {b!r} < {c!r} but {a!r} is not < {c!r}",
                           a=a, b=b, c=c)
    return report
