import pytest

from src.agents.validator import check_strict_contraction
from src.apps.hensel import HenselProblem, hensel_solve
from src.apps.picard import OdeProblem, exp_series, picard_as_extension_demo, picard_orbit
from src.graph.workflow import run
from src.spaces.finite import all_contracting_selfmaps
from src.spaces.maps import NewtonMap
from src.spaces.padic import IntPolynomial
from src.spaces.radius import NatExp
from src.spaces.series import PolynomialSubspace, SeriesQ, SeriesSpace
from src.spaces.space import principal_ball
from src.state.errors import AccessorViolation, NotCauchy
from src.state.schema import DriverConfig, Reached
from src.tools.analysis import (
    Family,
    PerturbedTruncationAccessor,
    TruncationAccessor,
    ball_intersection,
    cauchy_limit,
    check_lambda_realizes_radii,
    check_principal_completeness,
    extend_by_continuity,
    gauge_identity_violations,
    is_cauchy,
    is_dense_sample,
    is_limit,
    is_pseudo_limit,
    lambda_sample,
    lambda_y_coinitial,
    orbit,
    pseudo_convergence,
    sigma_coinitial,
    solidness_check,
)
from src.utils.polynomial import parse_rhs

GEOMETRIC_6 = SeriesQ.of([1] * 6, 6)


@pytest.fixture
def affine_orbit(affine_6):
    return Family(elements=orbit(affine_6, SeriesQ.zero(6), 5))


def test_orbit_of_an_affine_map_pseudo_converges(series_6, affine_orbit):
    report = pseudo_convergence(series_6, affine_orbit)
    assert report.is_pc
    assert report.start_index == 0
    assert report.gauge == [NatExp(k=k) for k in range(4)]
    assert gauge_identity_violations(series_6, affine_orbit, report) == []
    assert is_pseudo_limit(series_6, affine_orbit, report, GEOMETRIC_6)
    assert not is_pseudo_limit(series_6, affine_orbit, report, SeriesQ.zero(6))


def test_oscillating_family_is_neither_pseudo_convergent_nor_cauchy(series_6):
    x, y = series_6.element([1]), series_6.element([2])
    fam = Family(elements=[x, y, x, y])
    assert not pseudo_convergence(series_6, fam).is_pc
    assert not is_cauchy(series_6, fam)
    with pytest.raises(NotCauchy):
        cauchy_limit(series_6, fam)


def test_short_families():
    space = SeriesSpace(3)
    fam = Family(elements=[SeriesQ.zero(3), SeriesQ.constant(1, 3)])
    assert not pseudo_convergence(space, fam).is_pc
    assert not is_cauchy(space, Family(elements=[SeriesQ.zero(3)]))


def test_picard_orbit_is_cauchy_with_the_solution_as_limit():
    prob = OdeProblem(rhs=parse_rhs("y"), y0=1, cap=5)
    space = prob.space()
    outcome = run(space, prob.operator(), prob.initial())
    assert isinstance(outcome, Reached)
    fam = Family.from_trace(outcome.trace, prob.operator())
    assert len(fam) == len(outcome.trace.family()) + 1
    assert is_cauchy(space, fam)
    assert is_limit(space, fam, exp_series(5))
    assert not is_limit(space, fam, SeriesQ.zero(5))
    assert cauchy_limit(space, fam) == exp_series(5)
    assert cauchy_limit(space, fam, oracle_free=False) == exp_series(5)


def test_stabilize_rebuilds_the_limit_of_an_unreached_orbit():
    prob = OdeProblem(rhs=parse_rhs("y"), y0=1, cap=5)
    xs = picard_orbit(prob, 5)
    assert xs[-1] == exp_series(5)
    fam = Family(elements=xs + [prob.operator()(xs[-1])])
    assert prob.space().stabilize(fam.elements) == exp_series(5)


def test_sigma_is_coinitial_in_the_displacements(series_6, affine_6):
    outcome = run(series_6, affine_6, SeriesQ.zero(6), DriverConfig(steps_per_stage=8, max_stages=1))
    assert isinstance(outcome, Reached)
    sample = lambda_sample(series_6, affine_6, z=outcome.point)
    assert sample
    assert sigma_coinitial(outcome.trace, sample, series_6.order)
    assert not sigma_coinitial(outcome.trace.truncated(1), [NatExp(k=4)], series_6.order)


def test_lambda_of_a_subspace(series_6, affine_6):
    order = series_6.order
    ambient = [NatExp(k=k) for k in range(6)]
    assert lambda_y_coinitial([NatExp(k=5)], ambient, order)
    assert not lambda_y_coinitial([NatExp(k=2)], ambient, order)


def test_solidness(series_6, space_f3):
    assert solidness_check(series_6).passed
    assert "not-solid" in solidness_check(space_f3).rules()


def test_displacement_realizes_every_radius(series_6, affine_6):
    assert check_lambda_realizes_radii(series_6, affine_6, GEOMETRIC_6).passed


def test_principal_completeness_of_f3(space_f3):
    report = check_principal_completeness(space_f3)
    assert report.passed
    assert report.checked > 0


def test_ball_intersection(space_f3):
    a, b, c = range(3)
    balls = [principal_ball(space_f3, a, b), principal_ball(space_f3, b, c)]
    assert ball_intersection(space_f3, balls) == [b, c]


def test_accessors_stay_in_the_subspace():
    space = SeriesSpace(10)
    subspace = PolynomialSubspace(space, 8)
    radii = [NatExp(k=k) for k in range(8)]
    for access in (TruncationAccessor(subspace), PerturbedTruncationAccessor(subspace)):
        report = is_dense_sample(space, access, [exp_series(10)], radii)
        assert report.passed, report.summary()


def test_extension_by_continuity_rejects_a_bad_accessor():
    space = SeriesSpace(6)
    subspace = PolynomialSubspace(space, 4)

    class Lazy(TruncationAccessor):
        def approximate(self, target, gamma):
            return space.element([])

    prob = OdeProblem(rhs=parse_rhs("y"), y0=1, cap=6)
    with pytest.raises(AccessorViolation):
        extend_by_continuity(space, prob.operator(), Lazy(subspace), exp_series(6), NatExp(k=2))


@pytest.mark.parametrize("k", range(1, 7))
def test_picard_extension_agrees_within_each_radius(k):
    prob = OdeProblem(rhs=parse_rhs("y"), y0=1, cap=10)
    report = picard_as_extension_demo(prob, NatExp(k=k))
    assert report.passed, report.summary()
    assert report.checked >= 5


def test_picard_extension_radius_range():
    prob = OdeProblem(rhs=parse_rhs("y"), y0=1, cap=10)
    for k in (0, 8, 9):
        report = picard_as_extension_demo(prob, NatExp(k=k))
        assert report.passed, report.summary()
    with pytest.raises(ValueError):
        picard_as_extension_demo(prob, NatExp(k=10))
    with pytest.raises(ValueError):
        picard_as_extension_demo(prob, NatExp(k=None))


@pytest.mark.parametrize("k", [1, 4, 9])
def test_picard_extension_of_a_polynomial_is_exact(k):
    prob = OdeProblem(rhs=parse_rhs("y^2 + t"), y0=1, cap=10)
    report = picard_as_extension_demo(prob, NatExp(k=k), x_hat=SeriesQ.of([1, 2, 0, -3], 10))
    assert report.passed, report.summary()
    assert "exact-agreement" not in report.rules()


@pytest.fixture
def hensel_run():
    prob = HenselProblem(p=7, n=6, poly=IntPolynomial(coefficients=(-2, 0, 1)), seed=3)
    result = hensel_solve(prob)
    assert isinstance(result.outcome, Reached)
    return prob.space(), NewtonMap(prob.poly), result.outcome


def test_hensel_iterates_pseudo_converge_to_the_root(hensel_run):
    space, newton, outcome = hensel_run
    fam = Family.from_trace(outcome.trace, newton)
    report = pseudo_convergence(space, fam)
    assert report.is_pc and report.start_index == 0
    # Newton doubles the number of correct digits
    assert [g.k for g in report.gauge] == [1, 2, 4, None]
    assert gauge_identity_violations(space, fam, report) == []
    assert is_pseudo_limit(space, fam, report, outcome.point)
    assert not is_pseudo_limit(space, fam, report, space.element(3 + 7))


def test_hensel_iterates_are_cauchy_with_the_root_as_limit(hensel_run):
    space, newton, outcome = hensel_run
    fam = Family.from_trace(outcome.trace, newton)
    assert [x.residue % 49 for x in fam.elements[1:]] == [10, 10, 10, 10]
    assert is_cauchy(space, fam)
    assert cauchy_limit(space, fam) == outcome.point
    assert cauchy_limit(space, fam, oracle_free=False) == outcome.point


def test_hensel_displacements_on_the_disc(hensel_run):
    space, newton, outcome = hensel_run
    sample = lambda_sample(space, newton, z=outcome.point)
    assert sample and all(v.k >= 1 for v in sample)
    assert sigma_coinitial(outcome.trace, sample, space.order)
    assert check_strict_contraction(space, newton).passed
    report = check_lambda_realizes_radii(space, newton, outcome.point)
    assert report.passed, report.summary()
    assert report.checked == 5
    assert solidness_check(space).passed


def test_every_finite_trace_passes_the_diagnostics(space_f3):
    for phi in all_contracting_selfmaps(space_f3):
        for start in space_f3.points():
            outcome = run(space_f3, phi, start)
            fam = Family.from_trace(outcome.trace, phi)
            if len(fam) < 3:
                continue
            report = pseudo_convergence(space_f3, fam)
            assert report.is_pc
            order = space_f3.order
            assert all(order.lt(b, a) for a, b in zip(report.gauge, report.gauge[1:]))
            assert gauge_identity_violations(space_f3, fam, report) == []
            assert is_pseudo_limit(space_f3, fam, report, outcome.point)
            assert is_cauchy(space_f3, fam)
            assert cauchy_limit(space_f3, fam) == outcome.point
