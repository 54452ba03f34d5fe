"""
Validator - independent re-checks of what the driver produced.

- validate_trace: successor steps, strict decrease, limit-stage membership, ball nesting
- verify_fixed_point: d(z, phi(z)) = 0
- check_strict_contraction: d(phi x, phi y) < d(x, y) on given pairs
"""
import itertools
from typing import Any, Iterable, Optional, Sequence, Tuple

from src.spaces.maps import ContractingMap
from src.spaces.space import Ball, ball_contains, UltrametricSpace
from src.state.report import Report
from src.state.schema import StageEntry, Trace


def verify_fixed_point(space: UltrametricSpace, phi: ContractingMap, z: Any) -> bool:
    return space.order.is_zero(space.distance(z, phi(z)))


def check_strict_contraction(
    space: UltrametricSpace,
    phi: ContractingMap,
    pairs: Optional[Iterable[Tuple[Any, Any]]] = None,
) -> Report:
    """
    Every pair with d(phi x, phi y) not < d(x, y). Without `pairs`, all
    distinct pairs of the space's points (exhaustive on finite spaces).
    """
    report = Report(name="strict-contraction")
    if pairs is None:
        pairs = itertools.combinations(space.points(), 2)
    order = space.order
    name = space.describe_point
    for x, y in pairs:
        if space.points_equal(x, y):
            continue
        report.checked += 1
        before = space.distance(x, y)
        after = space.distance(phi(x), phi(y))
        if not order.lt(after, before):
            report.add("strict-contraction",
                       f"d(phi {name(x)}, phi {name(y)}) = {after!r} is not < d({name(x)}, {name(y)}) = {before!r}",
                       x=name(x), y=name(y))
    return report


def validate_trace(space: UltrametricSpace, phi: ContractingMap, trace: Trace) -> Report:
    """Re-check a trace from scratch; an empty report means it is a valid family."""
    report = Report(name="trace")
    if not trace.stages or not any(seg.iterates for seg in trace.stages):
        report.add("empty-trace", "trace has no iterates")
        return report
    order = space.order
    name = space.describe_point

    # successor steps and segment bookkeeping
    for s, seg in enumerate(trace.stages):
        if len(seg.sigma) != len(seg.iterates) - 1 or len(seg.balls) != len(seg.sigma):
            report.add("segment-shape", f"stage {s}: {len(seg.iterates)} iterates, {len(seg.sigma)} distances, "
                       f"{len(seg.balls)} balls", stage=s)
            continue
        if s == 0 and seg.entry is not StageEntry.START:
            report.add("segment-shape", "first stage must be entered at the start point", stage=s)
        if s > 0 and seg.entry is not StageEntry.LIMIT_ORACLE:
            report.add("segment-shape", f"stage {s} must be entered at a limit stage", stage=s)
        for i, (a, b) in enumerate(zip(seg.iterates, seg.iterates[1:])):
            report.checked += 1
            image = phi(a)
            if not space.points_equal(image, b):
                report.add("successor-step", f"stage {s} step {i}: phi({name(a)}) = {name(image)}, recorded {name(b)}",
                           stage=s, step=i)
            if space.points_equal(a, b):
                report.add("successor-step", f"stage {s} step {i}: the iteration did not move", stage=s, step=i)
            if seg.sigma[i] != space.distance(a, b):
                report.add("successor-step", f"stage {s} step {i}: recorded sigma {seg.sigma[i]!r} "
                           f"but d = {space.distance(a, b)!r}", stage=s, step=i)
            if seg.balls[i] != Ball(center=a, radius=seg.sigma[i]):
                report.add("successor-step", f"stage {s} step {i}: ball does not match (a_i, sigma_i)", stage=s, step=i)
        if seg.reached and seg.iterates and not order.is_zero(space.distance(seg.iterates[-1], phi(seg.iterates[-1]))):
            report.add("successor-step", f"stage {s} is marked reached but its last iterate is not fixed", stage=s)
        if seg.reached and s != len(trace.stages) - 1:
            report.add("segment-shape", f"stage {s} is marked reached but the trace continues", stage=s)

    # strictly decreasing step distances over the whole trace
    sigma = trace.sigma_chain()
    for k, (prev, nxt) in enumerate(zip(sigma, sigma[1:])):
        report.checked += 1
        if not order.lt(nxt, prev):
            report.add("strict-decrease", f"sigma_{k + 1} = {nxt!r} is not < sigma_{k} = {prev!r}", index=k + 1)

    # limit-stage entries lie in every earlier ball
    earlier = []
    for s, seg in enumerate(trace.stages):
        if s > 0 and seg.iterates:
            b = seg.iterates[0]
            for i, (a, radius) in enumerate(earlier):
                report.checked += 1
                if not order.leq(space.distance(b, a), radius):
                    report.add("limit-membership", f"stage {s} entry {name(b)} has d = {space.distance(b, a)!r} "
                               f"to a_{i} = {name(a)}, not <= sigma_{i} = {radius!r}", stage=s, index=i)
        earlier.extend(zip(seg.iterates, seg.sigma))

    # strictly nested ball chain
    balls = trace.ball_chain()
    for k, (outer, inner) in enumerate(zip(balls, balls[1:])):
        report.checked += 1
        if not (ball_contains(space, outer, inner.center) and order.leq(inner.radius, outer.radius)):
            report.add("ball-nesting", f"B_{k + 1} is not inside B_{k}", index=k + 1)
        if ball_contains(space, inner, outer.center):
            report.add("ball-nesting", f"center of B_{k} lies in B_{k + 1}; nesting is not proper", index=k + 1)
    return report


def fixed_points(space: UltrametricSpace, phi: ContractingMap, points: Optional[Sequence[Any]] = None) -> list:
    """All fixed points among `points` (every point of a finite space by default)."""
    candidates = space.points() if points is None else points
    return [x for x in candidates if verify_fixed_point(space, phi, x)]
