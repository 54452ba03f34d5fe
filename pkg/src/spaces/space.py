"""
The ultrametric-space contract: points, a distance into a radius order, balls.

A ball stores (center, radius). Two different pairs may describe the same set
of points; set-equality is only decided where the points can be enumerated.
"""
import itertools
import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.spaces.radius import RadiusOrder, RadiusValue, is_total
from src.state.errors import EqualPoints
from src.state.report import Report

logger = logging.getLogger(__name__)


class Ball(BaseModel):
    """B_radius(center) = {x : d(center, x) <= radius}, radius nonzero."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
    center: Any
    radius: RadiusValue = Field(description="Nonzero radius")


class UltrametricSpace(ABC):
    """
    A set with a distance into a radius order satisfying identity, symmetry
    and the strong triangle law in "<= gamma" form.
    """

    order: RadiusOrder
    precision: Optional[str] = None

    @abstractmethod
    def distance(self, x: Any, y: Any) -> RadiusValue:
        ...

    @abstractmethod
    def sample_points(self) -> List[Any]:
        """Finite list of points for property checks."""

    @abstractmethod
    def encode_point(self, x: Any) -> Any:
        """JSON-compatible form of a point."""

    @abstractmethod
    def decode_point(self, data: Any) -> Any:
        ...

    @abstractmethod
    def descriptor(self) -> dict:
        ...

    @property
    def is_finite(self) -> bool:
        return False

    def points(self) -> List[Any]:
        """All points when finite, otherwise the sample."""
        return self.sample_points()

    def points_equal(self, x: Any, y: Any) -> bool:
        return x == y

    def describe_point(self, x: Any) -> str:
        return str(x)

    def realized_radii(self) -> List[RadiusValue]:
        """Nonzero radii the instance can realize (its sample of the radius set)."""
        return self.order.enumerate_sample()

    def witness(self, x: Any, radius: RadiusValue) -> Optional[Any]:
        """A point y with d(x, y) = radius, if one is known."""
        for y in self.points():
            if self.distance(x, y) == radius:
                return y
        return None

    def stabilize(self, family: Sequence[Any]) -> Optional[Any]:
        """Instance-specific limit of a Cauchy family; None when not supported."""
        return None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.descriptor()})"


def ball_contains(space: UltrametricSpace, b: Ball, x: Any) -> bool:
    return space.order.leq(space.distance(b.center, x), b.radius)


def principal_ball(space: UltrametricSpace, x: Any, y: Any) -> Ball:
    """B(x, y): the ball around x whose radius is d(x, y)."""
    if space.points_equal(x, y):
        raise EqualPoints(f"principal ball needs distinct points, got {space.describe_point(x)} twice")
    return Ball(center=x, radius=space.distance(x, y))


def ball_points(space: UltrametricSpace, b: Ball, points: Optional[Sequence[Any]] = None) -> List[Any]:
    candidates = space.points() if points is None else points
    return [p for p in candidates if ball_contains(space, b, p)]


def balls_equal(space: UltrametricSpace, b1: Ball, b2: Ball) -> bool:
    """Set-equality of two balls; exact only on finite spaces."""
    pts = space.points()
    return all(ball_contains(space, b1, p) == ball_contains(space, b2, p) for p in pts)


def check_space_axioms(space: UltrametricSpace, radii: Optional[Sequence[RadiusValue]] = None) -> Report:
    """Identity, symmetry and strong-triangle checks over all sampled triples."""
    report = Report(name="space-axioms")
    pts = space.points()
    if not pts:
        report.add("empty-sample", "space has no sample points")
        return report
    order = space.order
    gammas = list(radii) if radii is not None else order.enumerate_sample()
    d = {(i, j): space.distance(x, y) for (i, x), (j, y) in itertools.product(enumerate(pts), repeat=2)}
    name = space.describe_point

    for (i, x), (j, y) in itertools.product(enumerate(pts), repeat=2):
        report.checked += 1
        is_zero = order.is_zero(d[i, j])
        if is_zero != space.points_equal(x, y):
            report.add("identity", f"d({name(x)}, {name(y)}) = {d[i, j]!r} but the points are "
                       f"{'equal' if space.points_equal(x, y) else 'distinct'}", x=name(x), y=name(y))
        if d[i, j] != d[j, i]:
            report.add("symmetry", f"d({name(x)}, {name(y)}) = {d[i, j]!r} != d({name(y)}, {name(x)}) = {d[j, i]!r}",
                       x=name(x), y=name(y))

    n = len(pts)
    for i, j, k in itertools.product(range(n), repeat=3):
        for g in gammas:
            report.checked += 1
            if order.leq(d[i, j], g) and order.leq(d[j, k], g) and not order.leq(d[i, k], g):
                report.add("strong-triangle",
                           f"d({name(pts[i])}, {name(pts[j])}) <= {g!r} and d({name(pts[j])}, {name(pts[k])}) <= {g!r} "
                           f"but d({name(pts[i])}, {name(pts[k])}) = {d[i, k]!r}",
                           x=name(pts[i]), y=name(pts[j]), z=name(pts[k]), radius=g)
    return report


def _member_sets(space: UltrametricSpace, centers: Sequence[Any], radii: Sequence[RadiusValue],
                 universe: Sequence[Any]) -> Dict[Tuple[int, int], FrozenSet[int]]:
    return {
        (ci, ri): frozenset(u for u, p in enumerate(universe) if ball_contains(space, Ball(center=c, radius=r), p))
        for (ci, c), (ri, r) in itertools.product(enumerate(centers), enumerate(radii))
    }


def check_ball_lemma(space: UltrametricSpace, radii: Optional[Sequence[RadiusValue]] = None) -> Report:
    """
    Ball calculus over the enumerable (or sampled) points:
    - gamma <= delta and B_gamma(x), B_delta(y) meet  =>  B_gamma(x) is inside B_delta(y)
    - B_delta(y) properly inside B_gamma(x)            =>  gamma is not <= delta
    - membership is monotone in the radius
    - with a total order, proper containment forces delta < gamma
    """
    report = Report(name="ball-lemma")
    order = space.order
    pts = space.points()
    gammas = list(radii) if radii is not None else order.enumerate_sample()
    members = _member_sets(space, pts, gammas, pts)
    total = is_total(order, gammas)
    name = space.describe_point

    for (xi, x), (yi, y) in itertools.product(enumerate(pts), repeat=2):
        for (gi, g), (di, dl) in itertools.product(enumerate(gammas), repeat=2):
            report.checked += 1
            bx, by = members[xi, gi], members[yi, di]
            if order.leq(g, dl) and bx & by and not bx <= by:
                report.add("nested-or-disjoint",
                           f"B_{g!r}({name(x)}) meets B_{dl!r}({name(y)}) but is not contained in it",
                           x=name(x), y=name(y), gamma=g, delta=dl)
            if by < bx:
                if order.leq(g, dl):
                    report.add("proper-containment",
                               f"B_{dl!r}({name(y)}) is properly inside B_{g!r}({name(x)}) yet {g!r} <= {dl!r}",
                               x=name(x), y=name(y), gamma=g, delta=dl)
                if total and not order.lt(dl, g):
                    report.add("proper-containment-total",
                               f"B_{dl!r}({name(y)}) is properly inside B_{g!r}({name(x)}) yet not {dl!r} < {g!r}",
                               x=name(x), y=name(y), gamma=g, delta=dl)
            if xi == yi and order.leq(g, dl) and not bx <= by:
                report.add("radius-monotone",
                           f"B_{g!r}({name(x)}) is not inside B_{dl!r}({name(x)})",
                           x=name(x), gamma=g, delta=dl)
    return report


def check_principal_ball_lemma(space: UltrametricSpace, radii: Optional[Sequence[RadiusValue]] = None) -> Report:
    """
    For principal balls B(x, z) and balls B_delta(y):
    containment iff d(x, z) <= delta and x in B_delta(y); proper containment
    forces d(x, z) < delta; equal principal balls have equal radii.
    """
    report = Report(name="principal-ball-lemma")
    order = space.order
    pts = space.points()
    gammas = list(radii) if radii is not None else order.enumerate_sample()
    name = space.describe_point
    members = _member_sets(space, pts, gammas, pts)
    principal = {}
    for (xi, x), (zi, z) in itertools.product(enumerate(pts), repeat=2):
        if xi != zi and not space.points_equal(x, z):
            b = principal_ball(space, x, z)
            principal[xi, zi] = (b, frozenset(u for u, p in enumerate(pts) if ball_contains(space, b, p)))

    for (xi, zi), (b, bset) in principal.items():
        x, z = pts[xi], pts[zi]
        for (yi, y), (di, dl) in itertools.product(enumerate(pts), enumerate(gammas)):
            report.checked += 1
            inside = bset <= members[yi, di]
            expected = order.leq(b.radius, dl) and ball_contains(space, Ball(center=y, radius=dl), x)
            if inside != expected:
                report.add("principal-containment",
                           f"B({name(x)}, {name(z)}) inside B_{dl!r}({name(y)}) is {inside}, expected {expected}",
                           x=name(x), z=name(z), y=name(y), delta=dl)
            if bset < members[yi, di] and not order.lt(b.radius, dl):
                report.add("principal-proper",
                           f"B({name(x)}, {name(z)}) is properly inside B_{dl!r}({name(y)}) but {b.radius!r} is not < {dl!r}",
                           x=name(x), z=name(z), y=name(y), delta=dl)

    for ((k1, (b1, s1)), (k2, (b2, s2))) in itertools.combinations(principal.items(), 2):
        report.checked += 1
        if s1 == s2 and b1.radius != b2.radius:
            report.add("principal-equal",
                       f"B({name(pts[k1[0]])}, {name(pts[k1[1]])}) = B({name(pts[k2[0]])}, {name(pts[k2[1]])}) "
                       f"with radii {b1.radius!r} != {b2.radius!r}")
    return report


def check_solid_ball_lemma(space: UltrametricSpace, radii: Optional[Sequence[RadiusValue]] = None) -> Report:
    """
    On a solid space: B_gamma(x) inside B_delta(y) iff gamma <= delta and
    x in B_delta(y); proper containment forces gamma < delta; equal balls have
    equal radii. The point universe is the sample plus one distance witness per
    (sample point, radius), so every ball is seen at its full radius.
    """
    report = Report(name="solid-ball-lemma")
    order = space.order
    base = space.sample_points()
    gammas = list(radii) if radii is not None else space.realized_radii()
    universe = list(base)
    for x, g in itertools.product(base, gammas):
        w = space.witness(x, g)
        if w is None:
            report.add("not-solid", f"no point at distance {g!r} from {space.describe_point(x)}",
                       x=space.describe_point(x), gamma=g)
        else:
            universe.append(w)
    if not report.passed:
        return report
    members = _member_sets(space, base, gammas, universe)
    name = space.describe_point

    for (xi, x), (yi, y) in itertools.product(enumerate(base), repeat=2):
        for (gi, g), (di, dl) in itertools.product(enumerate(gammas), repeat=2):
            report.checked += 1
            bx, by = members[xi, gi], members[yi, di]
            expected = order.leq(g, dl) and ball_contains(space, Ball(center=y, radius=dl), x)
            if (bx <= by) != expected:
                report.add("solid-containment",
                           f"B_{g!r}({name(x)}) inside B_{dl!r}({name(y)}) is {bx <= by}, expected {expected}",
                           x=name(x), y=name(y), gamma=g, delta=dl)
            if bx < by and not order.lt(g, dl):
                report.add("solid-proper", f"B_{g!r}({name(x)}) properly inside B_{dl!r}({name(y)}) but not {g!r} < {dl!r}",
                           x=name(x), y=name(y), gamma=g, delta=dl)
            if bx == by and g != dl:
                report.add("solid-equal", f"B_{g!r}({name(x)}) = B_{dl!r}({name(y)}) with different radii",
                           x=name(x), y=name(y), gamma=g, delta=dl)
    return report
