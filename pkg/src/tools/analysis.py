"""
Convergence diagnostics for families of points.

Families are finite prefixes, so every "eventually" below means "from some
index on, with at least one later member to compare against", and every
"for all radii" ranges over a finite radius sample.
"""
import itertools
import logging
from abc import ABC, abstractmethod
from typing import Any, Callable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.agents.validator import check_strict_contraction
from src.spaces.maps import ContractingMap
from src.spaces.radius import RadiusOrder, RadiusValue
from src.spaces.series import PolynomialSubspace, SeriesQ
from src.spaces.space import Ball, ball_contains, principal_ball, UltrametricSpace
from src.state.errors import AccessorViolation, ContractionViolation, NotCauchy
from src.state.report import Report
from src.state.schema import Trace

logger = logging.getLogger(__name__)


class Family(BaseModel):
    """x_0, ..., x_n in index order."""
    model_config = ConfigDict(arbitrary_types_allowed=True)
    elements: List[Any] = Field(default_factory=list)

    @classmethod
    def from_trace(cls, trace: Trace, phi: Optional[ContractingMap] = None) -> "Family":
        """
        The iterates of a trace. With `phi` and a reached trace the orbit is
        continued by one step, so the fixed point shows up as a stable tail.
        """
        elements = trace.family()
        if phi is not None and trace.reached:
            elements.append(phi(elements[-1]))
        return cls(elements=elements)

    def __len__(self) -> int:
        return len(self.elements)


class PCReport(BaseModel):
    """Pseudo-convergence verdict with the gauge xi_i = d(x_i, x_{i+1}) from start_index on."""
    model_config = ConfigDict(arbitrary_types_allowed=True)
    is_pc: bool
    gauge: List[RadiusValue] = Field(default_factory=list)
    start_index: Optional[int] = Field(default=None, description="Least index from which the family pseudo-converges")


def _distance_matrix(space: UltrametricSpace, xs: Sequence[Any]) -> List[List[RadiusValue]]:
    n = len(xs)
    d: List[List[Any]] = [[None] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = space.distance(xs[i], xs[i])
        for j in range(i + 1, n):
            d[i][j] = d[j][i] = space.distance(xs[i], xs[j])
    return d


def pseudo_convergence(space: UltrametricSpace, fam: Family) -> PCReport:
    """
    Least i0 with d(x_k, x_m) < d(x_i, x_k) for all i0 <= i < k < m, if a
    triple remains from there on.
    """
    xs = fam.elements
    n = len(xs)
    if n < 3:
        return PCReport(is_pc=False)
    order = space.order
    d = _distance_matrix(space, xs)

    worst = -1  # largest i taking part in a failing triple
    for k in range(1, n - 1):
        for m in range(k + 1, n):
            for i in range(k - 1, worst, -1):
                if not order.lt(d[k][m], d[i][k]):
                    worst = i
                    break
    start = worst + 1
    if start > n - 3:
        return PCReport(is_pc=False)
    return PCReport(is_pc=True, start_index=start, gauge=[d[i][i + 1] for i in range(start, n - 1)])


def gauge_identity_violations(space: UltrametricSpace, fam: Family, report: PCReport) -> List[Tuple[int, int]]:
    """Pairs i < m in the pseudo-convergent tail with d(x_i, x_m) != xi_i."""
    if not report.is_pc:
        return []
    xs = fam.elements
    i0 = report.start_index
    bad = []
    for i in range(i0, len(xs) - 1):
        xi = report.gauge[i - i0]
        for m in range(i + 1, len(xs)):
            if space.distance(xs[i], xs[m]) != xi:
                bad.append((i, m))
    return bad


def is_pseudo_limit(space: UltrametricSpace, fam: Family, report: PCReport, y: Any,
                    from_index: Optional[int] = None) -> bool:
    """d(y, x_i) <= xi_i for every gauge index from `from_index` (default: the start of pseudo-convergence)."""
    if not report.is_pc:
        return False
    i0 = report.start_index
    i1 = i0 if from_index is None else max(from_index, i0)
    order = space.order
    return all(order.leq(space.distance(y, fam.elements[i]), report.gauge[i - i0])
               for i in range(i1, i0 + len(report.gauge)))


def _cauchy_index(order: RadiusOrder, d: List[List[RadiusValue]], gamma: RadiusValue) -> int:
    """Least i0 with d(x_i, x_k) < gamma for all i0 <= i < k."""
    n = len(d)
    worst = -1
    for i in range(n - 1):
        if any(not order.lt(d[i][k], gamma) for k in range(i + 1, n)):
            worst = i
    return worst + 1


def is_cauchy(space: UltrametricSpace, fam: Family, radii: Optional[Sequence[RadiusValue]] = None) -> bool:
    xs = fam.elements
    if len(xs) < 2:
        return False
    gammas = space.realized_radii() if radii is None else list(radii)
    d = _distance_matrix(space, xs)
    return all(_cauchy_index(space.order, d, g) <= len(xs) - 2 for g in gammas)


def is_limit(space: UltrametricSpace, fam: Family, y: Any, radii: Optional[Sequence[RadiusValue]] = None) -> bool:
    """For every radius, d(y, x_i) < gamma from some index on (with at least two members in that tail)."""
    xs = fam.elements
    if len(xs) < 2:
        return False
    order = space.order
    gammas = space.realized_radii() if radii is None else list(radii)
    dist = [space.distance(y, x) for x in xs]
    for g in gammas:
        worst = max((i for i, v in enumerate(dist) if not order.lt(v, g)), default=-1)
        if worst + 1 > len(xs) - 2:
            return False
    return True


def sigma_coinitial(trace: Trace, lambda_sample: Sequence[RadiusValue], order: RadiusOrder) -> bool:
    """
    Every sampled value of Lambda_phi lies above some step distance of the
    trace. A reached trace counts zero among its step distances.
    """
    sigma = trace.sigma_chain()
    if trace.reached:
        sigma = sigma + [order.zero]
    return all(any(order.leq(s, lam) for s in sigma) for lam in lambda_sample)


def lambda_sample(space: UltrametricSpace, phi: ContractingMap, points: Optional[Sequence[Any]] = None,
                  z: Any = None) -> List[RadiusValue]:
    """Sampled Lambda_phi = {d(x, phi x) : x != z}, without repeats."""
    candidates = space.sample_points() if points is None else points
    out: List[RadiusValue] = []
    for x in candidates:
        if z is not None and space.points_equal(x, z):
            continue
        v = space.distance(x, phi(x))
        if not space.order.is_zero(v) and v not in out:
            out.append(v)
    return out


def lambda_y_coinitial(lambda_y: Sequence[RadiusValue], lambda_x: Sequence[RadiusValue], order: RadiusOrder) -> bool:
    """Every value of the ambient sample lies above some value realized on the subspace."""
    return all(any(order.leq(a, b) for a in lambda_y) for b in lambda_x)


def solidness_check(space: UltrametricSpace, witness_budget: int = 20,
                    radii: Optional[Sequence[RadiusValue]] = None) -> Report:
    """For each of the first `witness_budget` sample points and each realized radius, a point at exactly that distance."""
    report = Report(name="solidness")
    gammas = space.realized_radii() if radii is None else list(radii)
    name = space.describe_point
    for x in space.sample_points()[:witness_budget]:
        for g in gammas:
            report.checked += 1
            y = space.witness(x, g)
            if y is None:
                report.add("not-solid", f"no point at distance {g!r} from {name(x)}", x=name(x), gamma=g)
            elif space.distance(x, y) != g:
                report.add("bad-witness", f"witness {name(y)} is at {space.distance(x, y)!r}, not {g!r}",
                           x=name(x), y=name(y), gamma=g)
    return report


def check_lambda_realizes_radii(space: UltrametricSpace, phi: ContractingMap, z: Any,
                                radii: Optional[Sequence[RadiusValue]] = None) -> Report:
    """
    On a solid space with fixed point z: for each radius gamma the witness x at
    distance gamma from z has d(x, phi x) = gamma.
    """
    report = Report(name="lambda-radii")
    gammas = space.realized_radii() if radii is None else list(radii)
    for g in gammas:
        report.checked += 1
        x = space.witness(z, g)
        if x is None:
            report.add("not-solid", f"no point at distance {g!r} from the fixed point", gamma=g)
            continue
        got = space.distance(x, phi(x))
        if got != g:
            report.add("lambda-radius", f"d(x, phi x) = {got!r} at a point {g!r} away from the fixed point",
                       x=space.describe_point(x), gamma=g)
    return report


class DenseAccessor(ABC):
    """Picks y in a dense subspace Y with d(y, target) < gamma."""

    @abstractmethod
    def approximate(self, target: Any, gamma: RadiusValue) -> Any:
        ...

    def in_subspace(self, y: Any) -> bool:
        return True

    def __call__(self, target: Any, gamma: RadiusValue) -> Any:
        return self.approximate(target, gamma)


class TruncationAccessor(DenseAccessor):
    """Keeps the coefficients through t^k for gamma = 2^-k; targets already in Y are returned as is."""

    def __init__(self, subspace: PolynomialSubspace):
        self.subspace = subspace

    def approximate(self, target: SeriesQ, gamma: RadiusValue) -> SeriesQ:
        if target in self.subspace:
            return target
        return self.subspace.space.element(target.coeffs[: gamma.k + 1])

    def in_subspace(self, y: SeriesQ) -> bool:
        return y in self.subspace


class PerturbedTruncationAccessor(TruncationAccessor):
    """
    Truncation through t^k plus `bump` * t^(k+1): a second, different choice
    of approximant. The bump is left out when t^(k+1) falls outside Y.
    """

    def __init__(self, subspace: PolynomialSubspace, bump: Any = 1):
        super().__init__(subspace)
        self.bump = bump

    def approximate(self, target: SeriesQ, gamma: RadiusValue) -> SeriesQ:
        base = self.subspace.space.element(target.coeffs[: gamma.k + 1])
        if gamma.k + 1 > self.subspace.degree:
            return base
        return base + SeriesQ.monomial(gamma.k + 1, self.subspace.space.cap, self.bump)


def extend_by_continuity(space: UltrametricSpace, psi: ContractingMap, access: DenseAccessor, x_hat: Any,
                         gamma: RadiusValue, check_pairs: Optional[Sequence[Tuple[Any, Any]]] = None) -> Any:
    """
    psi(y) for the accessor's y with d(y, x_hat) < gamma. Any strictly
    contracting extension of psi then takes a value within gamma of it at x_hat.
    """
    if check_pairs is not None:
        report = check_strict_contraction(space, psi, check_pairs)
        if not report.passed:
            raise ContractionViolation(report.summary())
    y = access(x_hat, gamma)
    gap = space.distance(y, x_hat)
    if not space.order.lt(gap, gamma):
        raise AccessorViolation(
            f"{type(access).__name__} returned {space.describe_point(y)} at {gap!r}, not below {gamma!r}"
        )
    return psi(y)


def is_dense_sample(space: UltrametricSpace, access: DenseAccessor, targets: Sequence[Any],
                    radii: Optional[Sequence[RadiusValue]] = None) -> Report:
    """Every accessor answer lies in the subspace and strictly inside the requested radius."""
    report = Report(name="dense-sample")
    gammas = space.realized_radii() if radii is None else list(radii)
    name = space.describe_point
    for t, g in itertools.product(targets, gammas):
        report.checked += 1
        y = access(t, g)
        if not access.in_subspace(y):
            report.add("accessor-membership", f"{name(y)} is outside the subspace", target=name(t), gamma=g)
        if not space.order.lt(space.distance(y, t), g):
            report.add("accessor-distance", f"{name(y)} is {space.distance(y, t)!r} from {name(t)}, not < {g!r}",
                       target=name(t), gamma=g)
    return report


def cauchy_limit(space: UltrametricSpace, fam: Family, oracle_free: bool = True,
                 radii: Optional[Sequence[RadiusValue]] = None) -> Optional[Any]:
    """
    The limit of a Cauchy family at working precision.

    oracle_free reads it off the stable tail of the family; otherwise the
    instance rebuilds it digit- or coefficient-wise.
    """
    gammas = space.realized_radii() if radii is None else list(radii)
    if not is_cauchy(space, fam, gammas):
        raise NotCauchy(f"family of {len(fam)} points is not Cauchy over {len(gammas)} radii")
    if oracle_free:
        candidate = fam.elements[-1]
        return candidate if is_limit(space, fam, candidate, gammas) else None
    return space.stabilize(fam.elements)


def ball_intersection(space: UltrametricSpace, balls: Sequence[Ball],
                      points: Optional[Sequence[Any]] = None) -> List[Any]:
    """Points lying in every ball; exact on finite spaces."""
    candidates = space.points() if points is None else points
    return [x for x in candidates if all(ball_contains(space, b, x) for b in balls)]


def check_principal_completeness(space: UltrametricSpace) -> Report:
    """Every chain of principal balls, ordered by inclusion, has a common point."""
    report = Report(name="principal-completeness")
    pts = space.points()
    sets = []
    for x, y in itertools.permutations(pts, 2):
        if space.points_equal(x, y):
            continue
        b = principal_ball(space, x, y)
        members = frozenset(i for i, p in enumerate(pts) if ball_contains(space, b, p))
        if members not in sets:
            sets.append(members)

    def walk(current: frozenset, common: frozenset, length: int) -> None:
        report.checked += 1
        if not common:
            report.add("empty-intersection", f"a chain of {length} principal balls has no common point")
            return
        for s in sets:
            if s < current:
                walk(s, common & s, length + 1)

    for s in sets:
        walk(s, s, 1)
    return report


def orbit(phi: Callable[[Any], Any], start: Any, length: int) -> List[Any]:
    """start, phi(start), ..., phi^(length-1)(start)."""
    out = [start]
    for _ in range(length - 1):
        out.append(phi(out[-1]))
    return out
