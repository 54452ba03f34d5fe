"""
Self-maps of the shipped spaces. Each map knows how to describe itself so a
trace document can be re-validated without the code that produced it.
"""
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, Sequence

from src.spaces.lex_series import LexSeriesQ
from src.spaces.padic import IntPolynomial, PadicInt
from src.spaces.series import BivariatePolynomial, SeriesQ, fraction_to_str
from src.spaces.space import UltrametricSpace


class ContractingMap(ABC):
    """phi: X -> X. Strict contraction is checked, never assumed."""

    kind: str = ""

    @abstractmethod
    def apply(self, x: Any) -> Any:
        ...

    @abstractmethod
    def descriptor(self, space: UltrametricSpace) -> dict:
        ...

    def __call__(self, x: Any) -> Any:
        return self.apply(x)

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class TableMap(ContractingMap):
    """A self-map of a finite space given by its image list."""

    kind = "table"

    def __init__(self, images: Sequence[int]):
        self.images = tuple(int(i) for i in images)

    def apply(self, x: int) -> int:
        return self.images[x]

    def fixed_points(self) -> list:
        return [x for x, fx in enumerate(self.images) if x == fx]

    def descriptor(self, space: UltrametricSpace) -> dict:
        return {"kind": self.kind, "images": list(self.images)}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TableMap) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"TableMap({list(self.images)})"


class ConstantMap(ContractingMap):
    kind = "constant"

    def __init__(self, value: Any):
        self.value = value

    def apply(self, x: Any) -> Any:
        return self.value

    def descriptor(self, space: UltrametricSpace) -> dict:
        return {"kind": self.kind, "point": space.encode_point(self.value)}


class IdentityMap(ContractingMap):
    """Never contracting on two or more points; kept for counterexamples."""

    kind = "identity"

    def apply(self, x: Any) -> Any:
        return x

    def descriptor(self, space: UltrametricSpace) -> dict:
        return {"kind": self.kind}


class NewtonMap(ContractingMap):
    """x -> x - f(x) / f'(x) on p-adic residues."""

    kind = "newton"

    def __init__(self, poly: IntPolynomial):
        self.poly = poly
        self.slope = poly.derivative()

    def apply(self, x: PadicInt) -> PadicInt:
        return x - self.poly(x) * self.slope(x).unit_inverse()

    def descriptor(self, space: UltrametricSpace) -> dict:
        return {"kind": self.kind, "coefficients": list(self.poly.coefficients)}

    def __repr__(self) -> str:
        return f"NewtonMap({self.poly})"


class PicardOperator(ContractingMap):
    """y -> y0 + integral_0^t f(s, y(s)) ds on truncated series."""

    kind = "picard"

    def __init__(self, rhs: BivariatePolynomial, y0: Any):
        self.rhs = rhs
        self.y0 = Fraction(y0)

    def apply(self, y: SeriesQ) -> SeriesQ:
        return SeriesQ.constant(self.y0, y.cap) + self.rhs.evaluate(y).integrate()

    def descriptor(self, space: UltrametricSpace) -> dict:
        return {"kind": self.kind, "rhs": self.rhs.encode(), "y0": fraction_to_str(self.y0)}

    def __repr__(self) -> str:
        return f"PicardOperator(y' = {self.rhs}, y(0) = {self.y0})"


class AffineSeriesMap(ContractingMap):
    """x -> offset + multiplier * x with ord(multiplier) >= 1."""

    kind = "affine_series"

    def __init__(self, offset: SeriesQ, multiplier: SeriesQ):
        order = multiplier.order()
        if order is not None and order < 1:
            raise ValueError("multiplier must vanish at t = 0 for the map to contract")
        self.offset = offset
        self.multiplier = multiplier

    def apply(self, x: SeriesQ) -> SeriesQ:
        return self.offset + self.multiplier * x

    def fixed_point(self) -> SeriesQ:
        """offset / (1 - multiplier), exact at the working cap."""
        one = SeriesQ.constant(1, self.offset.cap)
        return self.offset * (one - self.multiplier).inverse()

    def descriptor(self, space: UltrametricSpace) -> dict:
        return {"kind": self.kind, "offset": space.encode_point(self.offset),
                "multiplier": space.encode_point(self.multiplier)}


class AffineLexMap(ContractingMap):
    """x -> offset + multiplier * x with multiplier supported strictly above (0, 0)."""

    kind = "affine_lex"

    def __init__(self, offset: LexSeriesQ, multiplier: LexSeriesQ):
        order = multiplier.order()
        if order is not None and order == (0, 0):
            raise ValueError("multiplier must have no constant term for the map to contract")
        self.offset = offset
        self.multiplier = multiplier

    def apply(self, x: LexSeriesQ) -> LexSeriesQ:
        return self.offset + self.multiplier * x

    def descriptor(self, space: UltrametricSpace) -> dict:
        return {"kind": self.kind, "offset": space.encode_point(self.offset),
                "multiplier": space.encode_point(self.multiplier)}
