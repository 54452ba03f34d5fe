"""
Finite ultrametric spaces over finite radius posets.

Finite spaces are spherically complete (every chain of balls is finite and so
has a smallest member), which makes them the exhaustive test bed for the
fixed point theorem: enumerate all small spaces, all strictly contracting
self-maps, and check that each has exactly one fixed point.
"""
import itertools
import logging
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from src.spaces.radius import FinitePoset, PosetRadius, chain
from src.spaces.space import UltrametricSpace, check_ball_lemma, check_space_axioms
from src.state.errors import InvalidInstance, ParseError
from src.state.report import Report

logger = logging.getLogger(__name__)

MAX_ENUMERATION_POINTS = 6


class FiniteSpace(UltrametricSpace):
    """Points 0..n-1 with a full distance table of poset element names."""

    def __init__(self, order: FinitePoset, table: Sequence[Sequence[str]],
                 names: Optional[Sequence[str]] = None):
        self.order = order
        n = len(table)
        if n == 0:
            raise ParseError("a finite space needs at least one point")
        if any(len(row) != n for row in table):
            raise ParseError(f"distance table must be {n}x{n}")
        self.table: Tuple[Tuple[str, ...], ...] = tuple(tuple(row) for row in table)
        self.names: Tuple[str, ...] = tuple(names) if names is not None else tuple(_default_name(i) for i in range(n))
        if len(self.names) != n:
            raise ParseError(f"{len(self.names)} point names for {n} points")
        self._radii: List[List[PosetRadius]] = [[order.radius(v) for v in row] for row in self.table]

    @classmethod
    def load(cls, order: FinitePoset, table: Sequence[Sequence[str]],
             names: Optional[Sequence[str]] = None) -> "FiniteSpace":
        """Build a space and insist that it passes the axiom checks."""
        space = cls(order, table, names)
        report = space.validate()
        if not report.passed:
            raise InvalidInstance(report.summary())
        return space

    def validate(self) -> Report:
        report = check_space_axioms(self, self.order.all_radii())
        return report.merge(check_ball_lemma(self))

    @property
    def size(self) -> int:
        return len(self.table)

    @property
    def is_finite(self) -> bool:
        return True

    def distance(self, x: int, y: int) -> PosetRadius:
        return self._radii[x][y]

    def sample_points(self) -> List[int]:
        return list(range(self.size))

    def point(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError as e:
            raise ParseError(f"no point named {name!r}") from e

    def describe_point(self, x: int) -> str:
        return self.names[x]

    def encode_point(self, x: int) -> int:
        return int(x)

    def decode_point(self, data: object) -> int:
        if not isinstance(data, int) or not 0 <= data < self.size:
            raise ParseError(f"{data!r} is not a point of a {self.size}-point space")
        return data

    def descriptor(self) -> dict:
        return {
            "kind": "finite",
            "order": self.order.descriptor(),
            "points": list(self.names),
            "distances": [list(row) for row in self.table],
        }

    def __repr__(self) -> str:
        return f"FiniteSpace({self.order.name}, {self.size} points)"


def _default_name(i: int) -> str:
    return chr(ord("a") + i) if i < 26 else f"p{i}"


def f3() -> FiniteSpace:
    """Three points a, b, c over the chain 0 < 1 < 2 with d(a,b) = d(a,c) = 2, d(b,c) = 1."""
    return FiniteSpace.load(
        chain(3),
        [["0", "2", "2"],
         ["2", "0", "1"],
         ["2", "1", "0"]],
        ["a", "b", "c"],
    )


def _pair_order(n: int) -> List[Tuple[int, int]]:
    # Pairs (i, j) with i < j, sorted by j so each new point closes its triples early.
    return [(i, j) for j in range(1, n) for i in range(j)]


def finite_space_enumerate(max_points: int, order: FinitePoset) -> Iterator[FiniteSpace]:
    """
    Every distance table on 2..max_points points with values in `order` that
    passes the ultrametric axioms, one representative per relabeling class.
    """
    if max_points > MAX_ENUMERATION_POINTS:
        raise ValueError(f"max_points must be <= {MAX_ENUMERATION_POINTS}, got {max_points}")
    nonzero = order.enumerate_sample()
    idx = {r.name: i for i, r in enumerate(nonzero)}
    leq = [[order.leq(a, b) for b in nonzero] for a in nonzero]

    def triangle_ok(a: int, b: int, c: int) -> bool:
        # d(x,y)=a, d(y,z)=b, d(x,z)=c; any gamma bounding a and b must bound c.
        return all(leq[c][g] for g in range(len(nonzero)) if leq[a][g] and leq[b][g])

    for n in range(2, max_points + 1):
        pairs = _pair_order(n)
        perms = list(itertools.permutations(range(n)))
        seen = set()
        assignment: Dict[Tuple[int, int], int] = {}
        count = 0

        def dist(i: int, j: int) -> Optional[int]:
            return assignment.get((i, j) if i < j else (j, i))

        def consistent(i: int, j: int) -> bool:
            for k in range(n):
                if k in (i, j):
                    continue
                a, b, c = dist(i, j), dist(j, k), dist(i, k)
                if b is None or c is None:
                    continue
                if not (triangle_ok(a, b, c) and triangle_ok(b, c, a) and triangle_ok(c, a, b)
                        and triangle_ok(a, c, b) and triangle_ok(c, b, a) and triangle_ok(b, a, c)):
                    return False
            return True

        def canonical() -> Tuple[int, ...]:
            best = None
            for perm in perms:
                key = tuple(dist(perm[i], perm[j]) for i, j in pairs)
                if best is None or key < best:
                    best = key
            return best

        def extend(pos: int) -> Iterator[FiniteSpace]:
            nonlocal count
            if pos == len(pairs):
                key = canonical()
                if key in seen:
                    return
                seen.add(key)
                count += 1
                table = [["" for _ in range(n)] for _ in range(n)]
                for i in range(n):
                    table[i][i] = order.zero_name
                for (i, j), v in zip(pairs, key):
                    table[i][j] = table[j][i] = nonzero[v].name
                yield FiniteSpace(order, table)
                return
            i, j = pairs[pos]
            for v in range(len(nonzero)):
                assignment[i, j] = v
                if consistent(i, j):
                    yield from extend(pos + 1)
                del assignment[i, j]

        yield from extend(0)
        logger.debug("enumerated %d spaces with %d points over %s", count, n, order.name)


def all_contracting_selfmaps(space: FiniteSpace) -> list:
    """All n^n self-maps of a finite space filtered by the exhaustive strict-contraction test."""
    from src.spaces.maps import TableMap

    n = space.size
    order = space.order
    pairs = list(itertools.combinations(range(n), 2))
    maps = []
    for images in itertools.product(range(n), repeat=n):
        if all(order.lt(space.distance(images[x], images[y]), space.distance(x, y)) for x, y in pairs):
            maps.append(TableMap(images))
    return maps
