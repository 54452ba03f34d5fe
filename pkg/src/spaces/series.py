"""
Truncated power series with exact rational coefficients.

A SeriesQ of cap N stands for a class of series modulo t^N: two series that
agree through t^(N-1) are the same point, at distance zero. The distance index
is the order of vanishing of the difference. Integration raises that order by
one, which is what makes the Picard operator strictly contracting.
"""
import random
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.spaces.radius import NatExp, NatExpOrder
from src.spaces.space import UltrametricSpace
from src.state.errors import CapMismatch, ParseError


def fraction_to_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def fraction_from_str(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad rational {text!r}") from e


class SeriesQ(BaseModel):
    """c_0 + c_1 t + ... + c_{cap-1} t^(cap-1), exact."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    cap: int = Field(ge=1)
    coeffs: Tuple[Fraction, ...]

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data: Any) -> Any:
        if isinstance(data, dict) and "cap" in data:
            data = dict(data)
            cap = int(data["cap"])
            raw = [Fraction(c) for c in data.get("coeffs", ())][:cap]
            data["coeffs"] = tuple(raw) + (Fraction(0),) * (cap - len(raw))
        return data

    @classmethod
    def of(cls, coeffs: Sequence[Any], cap: int) -> "SeriesQ":
        return cls(cap=cap, coeffs=tuple(coeffs))

    @classmethod
    def zero(cls, cap: int) -> "SeriesQ":
        return cls(cap=cap, coeffs=())

    @classmethod
    def constant(cls, value: Any, cap: int) -> "SeriesQ":
        return cls(cap=cap, coeffs=(value,))

    @classmethod
    def monomial(cls, k: int, cap: int, coefficient: Any = 1) -> "SeriesQ":
        if k >= cap:
            return cls.zero(cap)
        return cls(cap=cap, coeffs=(0,) * k + (coefficient,))

    def _check(self, other: "SeriesQ") -> None:
        if not isinstance(other, SeriesQ):
            raise TypeError(f"expected SeriesQ, got {type(other).__name__}")
        if other.cap != self.cap:
            raise CapMismatch(f"series caps differ: {self.cap} vs {other.cap}")

    def __add__(self, other: "SeriesQ") -> "SeriesQ":
        self._check(other)
        return SeriesQ(cap=self.cap, coeffs=tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "SeriesQ") -> "SeriesQ":
        self._check(other)
        return SeriesQ(cap=self.cap, coeffs=tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "SeriesQ":
        return SeriesQ(cap=self.cap, coeffs=tuple(-a for a in self.coeffs))

    def __mul__(self, other: "SeriesQ") -> "SeriesQ":
        self._check(other)
        out = [Fraction(0)] * self.cap
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs[: self.cap - i]):
                out[i + j] += a * b
        return SeriesQ(cap=self.cap, coeffs=tuple(out))

    def scale(self, factor: Any) -> "SeriesQ":
        f = Fraction(factor)
        return SeriesQ(cap=self.cap, coeffs=tuple(f * a for a in self.coeffs))

    def shift(self, k: int) -> "SeriesQ":
        """Multiply by t^k."""
        return SeriesQ(cap=self.cap, coeffs=(Fraction(0),) * k + self.coeffs)

    def integrate(self) -> "SeriesQ":
        """Integral from 0 to t, term by term, truncated at cap."""
        return SeriesQ(cap=self.cap, coeffs=(Fraction(0),) + tuple(c / (k + 1) for k, c in enumerate(self.coeffs)))

    def derivative(self) -> "SeriesQ":
        """d/dt; the result is only meaningful through t^(cap-2), so its cap is cap-1."""
        if self.cap < 2:
            raise CapMismatch("derivative of a cap-1 series has no meaningful coefficients")
        return SeriesQ(cap=self.cap - 1, coeffs=tuple(k * c for k, c in enumerate(self.coeffs))[1:])

    def truncate(self, cap: int) -> "SeriesQ":
        return SeriesQ(cap=cap, coeffs=self.coeffs[:cap])

    def inverse(self) -> "SeriesQ":
        """Multiplicative inverse; needs a nonzero constant term."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        out = [Fraction(1) / c0]
        for k in range(1, self.cap):
            acc = sum((self.coeffs[j] * out[k - j] for j in range(1, k + 1)), Fraction(0))
            out.append(-acc / c0)
        return SeriesQ(cap=self.cap, coeffs=tuple(out))

    def order(self) -> Optional[int]:
        """Index of the first nonzero coefficient; None when zero through cap."""
        return next((k for k, c in enumerate(self.coeffs) if c != 0), None)

    def degree(self) -> int:
        return max((k for k, c in enumerate(self.coeffs) if c != 0), default=0)

    def is_zero(self) -> bool:
        return self.order() is None

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{c}*{mono}")
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        return f"{body} + O(t^{self.cap})"


class BivariatePolynomial(BaseModel):
    """f(t, y) = sum of c * t^i * y^j over the stored (i, j, c) terms."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
    terms: Tuple[Tuple[int, int, Fraction], ...]

    @field_validator("terms", mode="before")
    @classmethod
    def _canonical(cls, value: Any) -> Any:
        merged: dict = {}
        for i, j, c in value:
            merged[(int(i), int(j))] = merged.get((int(i), int(j)), Fraction(0)) + Fraction(c)
        return tuple(sorted((i, j, c) for (i, j), c in merged.items() if c != 0))

    @property
    def y_degree(self) -> int:
        return max((j for _, j, _ in self.terms), default=0)

    def evaluate(self, y: SeriesQ) -> SeriesQ:
        """f(t, y(t)) truncated at y's cap."""
        powers = [SeriesQ.constant(1, y.cap)]
        for _ in range(self.y_degree):
            powers.append(powers[-1] * y)
        acc = SeriesQ.zero(y.cap)
        for i, j, c in self.terms:
            acc = acc + powers[j].shift(i).scale(c)
        return acc

    def encode(self) -> List[List[Any]]:
        return [[i, j, fraction_to_str(c)] for i, j, c in self.terms]

    @classmethod
    def decode(cls, data: Sequence[Sequence[Any]]) -> "BivariatePolynomial":
        return cls(terms=tuple((int(i), int(j), fraction_from_str(str(c))) for i, j, c in data))

    def __str__(self) -> str:
        parts = []
        for i, j, c in self.terms:
            mono = "*".join(m for m in (
                "" if i == 0 else ("t" if i == 1 else f"t^{i}"),
                "" if j == 0 else ("y" if j == 1 else f"y^{j}"),
            ) if m)
            parts.append(str(c) if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(parts) or "0"


def add(a: SeriesQ, b: SeriesQ) -> SeriesQ:
    return a + b


def mul(a: SeriesQ, b: SeriesQ) -> SeriesQ:
    return a * b


def scale(a: SeriesQ, factor: Any) -> SeriesQ:
    return a.scale(factor)


def integrate(a: SeriesQ) -> SeriesQ:
    return a.integrate()


def poly_eval(f: BivariatePolynomial, y: SeriesQ) -> SeriesQ:
    return f.evaluate(y)


class SeriesSpace(UltrametricSpace):
    """Series mod t^cap over NatExp radii (index = order of vanishing)."""

    def __init__(self, cap: int, sample_size: int = 12, seed: int = 0):
        if cap < 1:
            raise ParseError(f"cap must be >= 1, got {cap}")
        self.cap = cap
        self.sample_size = sample_size
        self.seed = seed
        self.order = NatExpOrder(depth=cap - 1)
        self.precision = f"mod t^{cap}"

    def element(self, coeffs: Sequence[Any]) -> SeriesQ:
        return SeriesQ(cap=self.cap, coeffs=tuple(coeffs))

    def distance(self, x: SeriesQ, y: SeriesQ) -> NatExp:
        return NatExp(k=(x - y).order())

    def sample_points(self) -> List[SeriesQ]:
        rng = random.Random(self.seed)
        points = [SeriesQ.zero(self.cap)]
        while len(points) < self.sample_size:
            coeffs = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if rng.random() < 0.7 else Fraction(0)
                      for _ in range(self.cap)]
            candidate = self.element(coeffs)
            if candidate not in points:
                points.append(candidate)
        return points

    def realized_radii(self) -> List[NatExp]:
        return [NatExp(k=k) for k in range(self.cap)]

    def witness(self, x: SeriesQ, radius: NatExp) -> Optional[SeriesQ]:
        if radius.k is None:
            return x
        if radius.k >= self.cap:
            return None
        return x + SeriesQ.monomial(radius.k, self.cap)

    def stabilize(self, family: Sequence[SeriesQ]) -> Optional[SeriesQ]:
        """Coefficient k is read off the first member that agrees through t^k with everything after it."""
        members = list(family)
        if len(members) < 2:
            return None
        coeffs = []
        for k in range(self.cap):
            for i in range(len(members) - 1):
                if all(members[i].coeffs[: k + 1] == later.coeffs[: k + 1] for later in members[i + 1:]):
                    coeffs.append(members[i].coeffs[k])
                    break
            else:
                return None
        return self.element(coeffs)

    def describe_point(self, x: SeriesQ) -> str:
        return str(x)

    def encode_point(self, x: SeriesQ) -> List[str]:
        return [fraction_to_str(c) for c in x.coeffs]

    def decode_point(self, data: Any) -> SeriesQ:
        if not isinstance(data, list) or len(data) != self.cap:
            raise ParseError(f"series point must list {self.cap} coefficients, got {data!r}")
        return self.element([fraction_from_str(str(c)) for c in data])

    def descriptor(self) -> dict:
        return {"kind": "series", "cap": self.cap}


class PolynomialSubspace:
    """Series of degree <= `degree`: the dense polynomial part of a SeriesSpace."""

    def __init__(self, space: SeriesSpace, degree: int):
        self.space = space
        self.degree = degree

    def __contains__(self, x: SeriesQ) -> bool:
        return x.cap == self.space.cap and x.degree() <= self.degree
