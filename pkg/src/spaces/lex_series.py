"""
Series in two variables u, v with support capped per exponent, valued in
LexPair radii: the distance is the lexicographically least exponent pair where
two series differ. The nonzero radii (0,1) > (0,2) > ... never get below
(1,0), so single-chain iteration can stall above radii it never reaches.
"""
import random
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.spaces.radius import LexPair, LexPairOrder
from src.spaces.series import fraction_from_str, fraction_to_str
from src.spaces.space import UltrametricSpace
from src.state.errors import CapMismatch, ParseError


class LexSeriesQ(BaseModel):
    """Finitely supported map (m, n) -> rational with m < cap_m, n < cap_n."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    cap_m: int = Field(ge=1)
    cap_n: int = Field(ge=1)
    terms: Tuple[Tuple[int, int, Fraction], ...] = ()

    @field_validator("terms", mode="before")
    @classmethod
    def _canonical(cls, value: Any) -> Any:
        merged: dict = {}
        for m, n, c in value:
            merged[(int(m), int(n))] = merged.get((int(m), int(n)), Fraction(0)) + Fraction(c)
        return tuple(sorted((m, n, c) for (m, n), c in merged.items() if c != 0))

    @classmethod
    def of(cls, terms: Sequence[Tuple[int, int, Any]], cap_m: int, cap_n: int) -> "LexSeriesQ":
        kept = [(m, n, c) for m, n, c in terms if m < cap_m and n < cap_n]
        return cls(cap_m=cap_m, cap_n=cap_n, terms=tuple(kept))

    def _check(self, other: "LexSeriesQ") -> None:
        if (self.cap_m, self.cap_n) != (other.cap_m, other.cap_n):
            raise CapMismatch(f"support caps differ: {(self.cap_m, self.cap_n)} vs {(other.cap_m, other.cap_n)}")

    def as_dict(self) -> dict:
        return {(m, n): c for m, n, c in self.terms}

    def __add__(self, other: "LexSeriesQ") -> "LexSeriesQ":
        self._check(other)
        return LexSeriesQ(cap_m=self.cap_m, cap_n=self.cap_n, terms=self.terms + other.terms)

    def __neg__(self) -> "LexSeriesQ":
        return self.scale(-1)

    def __sub__(self, other: "LexSeriesQ") -> "LexSeriesQ":
        return self + (-other)

    def scale(self, factor: Any) -> "LexSeriesQ":
        f = Fraction(factor)
        return LexSeriesQ(cap_m=self.cap_m, cap_n=self.cap_n, terms=tuple((m, n, f * c) for m, n, c in self.terms))

    def __mul__(self, other: "LexSeriesQ") -> "LexSeriesQ":
        self._check(other)
        products = [
            (m1 + m2, n1 + n2, c1 * c2)
            for m1, n1, c1 in self.terms
            for m2, n2, c2 in other.terms
        ]
        return LexSeriesQ.of(products, self.cap_m, self.cap_n)

    def order(self) -> Optional[Tuple[int, int]]:
        return self.terms[0][:2] if self.terms else None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, n, c in self.terms:
            mono = "*".join(s for s in (
                "" if m == 0 else ("u" if m == 1 else f"u^{m}"),
                "" if n == 0 else ("v" if n == 1 else f"v^{n}"),
            ) if s)
            parts.append(str(c) if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(parts)


class LexSeriesSpace(UltrametricSpace):
    def __init__(self, cap_m: int = 3, cap_n: int = 3, sample_size: int = 10, seed: int = 0):
        self.cap_m = cap_m
        self.cap_n = cap_n
        self.sample_size = sample_size
        self.seed = seed
        self.order = LexPairOrder(bound=max(cap_m, cap_n) - 1)
        self.precision = f"support below u^{cap_m}, v^{cap_n}"

    def element(self, terms: Sequence[Tuple[int, int, Any]]) -> LexSeriesQ:
        return LexSeriesQ.of(terms, self.cap_m, self.cap_n)

    def distance(self, x: LexSeriesQ, y: LexSeriesQ) -> LexPair:
        return LexPair(pair=(x - y).order())

    def sample_points(self) -> List[LexSeriesQ]:
        rng = random.Random(self.seed)
        points = [self.element([])]
        # coefficients are drawn from -2..2, so at most 5^cells distinct points
        target = min(self.sample_size, 5 ** (self.cap_m * self.cap_n))
        draws = 0
        while len(points) < target and draws < 50 * self.sample_size:
            draws += 1
            terms = [(m, n, rng.randint(-2, 2)) for m in range(self.cap_m) for n in range(self.cap_n)
                     if rng.random() < 0.4]
            candidate = self.element(terms)
            if candidate not in points:
                points.append(candidate)
        return points

    def realized_radii(self) -> List[LexPair]:
        return [LexPair(pair=(m, n)) for m in range(self.cap_m) for n in range(self.cap_n)]

    def witness(self, x: LexSeriesQ, radius: LexPair) -> Optional[LexSeriesQ]:
        if radius.pair is None:
            return x
        m, n = radius.pair
        if m >= self.cap_m or n >= self.cap_n:
            return None
        return x + self.element([(m, n, 1)])

    def describe_point(self, x: LexSeriesQ) -> str:
        return str(x)

    def encode_point(self, x: LexSeriesQ) -> List[List[Any]]:
        return [[m, n, fraction_to_str(c)] for m, n, c in x.terms]

    def decode_point(self, data: Any) -> LexSeriesQ:
        if not isinstance(data, list):
            raise ParseError(f"lex series point must be a list of [m, n, c] terms, got {data!r}")
        return self.element([(int(m), int(n), fraction_from_str(str(c))) for m, n, c in data])

    def descriptor(self) -> dict:
        return {"kind": "lex_series", "cap_m": self.cap_m, "cap_n": self.cap_n}
