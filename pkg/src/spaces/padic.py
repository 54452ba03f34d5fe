"""
p-adic integers at fixed precision N: residues mod p^N.

The distance between two residues is 2^-v where v is the p-adic valuation of
their difference; equal residues (v >= N) are at distance zero. The space is
solid: x + p^k sits at every realized radius from x.
"""
import random
from typing import Any, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from sympy import isprime

from src.spaces.radius import NatExp, NatExpOrder
from src.spaces.space import UltrametricSpace
from src.state.errors import MixedPrecision, NonUnit, ParseError


class PadicInt(BaseModel):
    """A residue class mod p^n, stored reduced."""
    model_config = ConfigDict(frozen=True)

    p: int = Field(ge=2, description="Prime")
    n: int = Field(ge=1, description="Precision: residues are taken mod p^n")
    residue: int

    @model_validator(mode="before")
    @classmethod
    def _reduce(cls, data: Any) -> Any:
        if isinstance(data, dict) and {"p", "n", "residue"} <= data.keys():
            data = dict(data)
            data["residue"] = int(data["residue"]) % (int(data["p"]) ** int(data["n"]))
        return data

    @classmethod
    def of(cls, value: int, p: int, n: int) -> "PadicInt":
        return cls(p=p, n=n, residue=value)

    @property
    def modulus(self) -> int:
        return self.p ** self.n

    def _lift(self, other: Any) -> "PadicInt":
        if isinstance(other, int):
            return PadicInt(p=self.p, n=self.n, residue=other)
        if not isinstance(other, PadicInt):
            return NotImplemented
        if (other.p, other.n) != (self.p, self.n):
            raise MixedPrecision(f"cannot combine mod {self.p}^{self.n} with mod {other.p}^{other.n}")
        return other

    def __add__(self, other: Any) -> "PadicInt":
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return PadicInt(p=self.p, n=self.n, residue=self.residue + o.residue)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "PadicInt":
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return PadicInt(p=self.p, n=self.n, residue=self.residue - o.residue)

    def __rsub__(self, other: Any) -> "PadicInt":
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self) -> "PadicInt":
        return PadicInt(p=self.p, n=self.n, residue=-self.residue)

    def __mul__(self, other: Any) -> "PadicInt":
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return PadicInt(p=self.p, n=self.n, residue=self.residue * o.residue)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "PadicInt":
        if exponent < 0:
            return self.unit_inverse() ** (-exponent)
        return PadicInt(p=self.p, n=self.n, residue=pow(self.residue, exponent, self.modulus))

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def unit_inverse(self) -> "PadicInt":
        if not self.is_unit():
            raise NonUnit(f"{self.residue} is divisible by {self.p}; no inverse mod {self.p}^{self.n}")
        return PadicInt(p=self.p, n=self.n, residue=pow(self.residue, -1, self.modulus))

    def valuation(self) -> Optional[int]:
        """p-adic valuation of the residue; None for zero (valuation >= n)."""
        if self.residue == 0:
            return None
        r, v = self.residue, 0
        while r % self.p == 0:
            r //= self.p
            v += 1
        return v

    def digits(self) -> List[int]:
        """Base-p digits, least significant first, exactly n of them."""
        r, out = self.residue, []
        for _ in range(self.n):
            r, d = divmod(r, self.p)
            out.append(d)
        return out

    def __int__(self) -> int:
        return self.residue

    def __str__(self) -> str:
        return str(self.residue)


def add(a: PadicInt, b: PadicInt) -> PadicInt:
    return a + b


def mul(a: PadicInt, b: PadicInt) -> PadicInt:
    return a * b


def unit_inverse(a: PadicInt) -> PadicInt:
    return a.unit_inverse()


def distance(a: PadicInt, b: PadicInt) -> NatExp:
    return NatExp(k=(a - b).valuation())


class PadicSpace(UltrametricSpace):
    """Z/p^N as an ultrametric space over NatExp radii."""

    def __init__(self, p: int, n: int, sample_size: int = 20, seed: int = 0):
        if not isprime(p):
            raise ParseError(f"p must be prime, got {p}")
        if n < 1:
            raise ParseError(f"precision must be >= 1, got {n}")
        self.p = p
        self.n = n
        self.sample_size = sample_size
        self.seed = seed
        self.order = NatExpOrder(depth=n - 1)
        self.precision = f"mod {p}^{n}"

    @property
    def modulus(self) -> int:
        return self.p ** self.n

    def element(self, value: int) -> PadicInt:
        return PadicInt(p=self.p, n=self.n, residue=value)

    def distance(self, x: PadicInt, y: PadicInt) -> NatExp:
        return distance(x, y)

    def sample_points(self) -> List[PadicInt]:
        rng = random.Random(self.seed)
        count = min(self.sample_size, self.modulus)
        return [self.element(r) for r in rng.sample(range(self.modulus), count)]

    def disc_sample(self, center: PadicInt, count: int, seed: Optional[int] = None) -> List[PadicInt]:
        """Points of the residue disc center + pZ (the disc itself when small)."""
        size = self.p ** (self.n - 1)
        rng = random.Random(self.seed if seed is None else seed)
        offsets = range(size) if size <= count else rng.sample(range(size), count)
        return [center + self.p * k for k in offsets]

    def realized_radii(self) -> List[NatExp]:
        return [NatExp(k=k) for k in range(self.n)]

    def witness(self, x: PadicInt, radius: NatExp) -> Optional[PadicInt]:
        if radius.k is None:
            return x
        if radius.k >= self.n:
            return None
        return x + self.p ** radius.k

    def stabilize(self, family: Sequence[PadicInt]) -> Optional[PadicInt]:
        """Digit k is read off the first member that agrees mod p^(k+1) with everything after it."""
        members = list(family)
        if len(members) < 2:
            return None
        residue = 0
        for k in range(self.n):
            level = self.p ** (k + 1)
            for i in range(len(members) - 1):
                if all((members[i].residue - later.residue) % level == 0 for later in members[i + 1:]):
                    residue += members[i].digits()[k] * self.p ** k
                    break
            else:
                return None
        return self.element(residue)

    def encode_point(self, x: PadicInt) -> int:
        return x.residue

    def decode_point(self, data: Any) -> PadicInt:
        if not isinstance(data, int):
            raise ParseError(f"p-adic point must be an integer residue, got {data!r}")
        return self.element(data)

    def descriptor(self) -> dict:
        return {"kind": "padic", "p": self.p, "n": self.n}


class PadicDisc(PadicSpace):
    """
    The residue disc center + pZ inside Z/p^N. Samples and witnesses stay in
    the disc, so the realized radii are 2^-k for 1 <= k < N.
    """

    def __init__(self, p: int, n: int, center: int, sample_size: int = 20, seed: int = 0):
        super().__init__(p, n, sample_size=sample_size, seed=seed)
        self.center = self.element(center % p)

    def contains(self, x: PadicInt) -> bool:
        return (x.residue - self.center.residue) % self.p == 0

    def sample_points(self) -> List[PadicInt]:
        return self.disc_sample(self.center, self.sample_size)

    def realized_radii(self) -> List[NatExp]:
        return [NatExp(k=k) for k in range(1, self.n)]

    def witness(self, x: PadicInt, radius: NatExp) -> Optional[PadicInt]:
        if radius.k == 0:
            return None
        return super().witness(x, radius)

    def descriptor(self) -> dict:
        return {"kind": "padic_disc", "p": self.p, "n": self.n, "center": self.center.residue}


class IntPolynomial(BaseModel):
    """Integer polynomial, coefficients lowest degree first."""
    model_config = ConfigDict(frozen=True)
    coefficients: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return max((i for i, c in enumerate(self.coefficients) if c), default=0)

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(coefficients=tuple(i * c for i, c in enumerate(self.coefficients))[1:] or (0,))

    def __call__(self, x: Any) -> Any:
        acc = 0 * x
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        terms = []
        for i, c in reversed(list(enumerate(self.coefficients))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(c) if (abs(c) != 1 or i == 0) else ("-" if c < 0 else "")
            terms.append(f"{coef}{mono}")
        return " + ".join(terms).replace("+ -", "- ") or "0"
