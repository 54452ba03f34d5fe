from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.spaces.finite import FiniteSpace, all_contracting_selfmaps, finite_space_enumerate
from src.spaces.lex_series import LexSeriesSpace
from src.spaces import padic, series
from src.spaces.padic import PadicDisc, PadicInt, PadicSpace
from src.spaces.radius import LexPair, NatExp, chain, diamond
from src.spaces.series import BivariatePolynomial, SeriesQ, SeriesSpace
from src.spaces.space import (
    ball_contains,
    ball_points,
    balls_equal,
    check_ball_lemma,
    check_principal_ball_lemma,
    check_solid_ball_lemma,
    check_space_axioms,
    principal_ball,
)
from src.state.errors import CapMismatch, EqualPoints, InvalidInstance, MixedPrecision, NonUnit

BROKEN = [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]]


def test_f3_satisfies_the_axioms(space_f3):
    order = space_f3.order
    assert check_space_axioms(space_f3, order.all_radii()).passed
    assert check_ball_lemma(space_f3).passed
    assert check_principal_ball_lemma(space_f3).passed


def test_f3_balls(space_f3):
    a, b, c = (space_f3.point(n) for n in "abc")
    order = space_f3.order
    assert ball_points(space_f3, principal_ball(space_f3, b, c)) == [b, c]
    assert ball_points(space_f3, principal_ball(space_f3, a, b)) == [a, b, c]
    assert balls_equal(space_f3, principal_ball(space_f3, a, b), principal_ball(space_f3, c, a))
    assert not ball_contains(space_f3, principal_ball(space_f3, b, c), a)
    assert principal_ball(space_f3, b, c).radius == order["1"]


def test_principal_ball_of_equal_points_raises(space_f3):
    with pytest.raises(EqualPoints):
        principal_ball(space_f3, 0, 0)


def test_broken_triangle_is_reported():
    space = FiniteSpace(chain(3), BROKEN)
    report = check_space_axioms(space, chain(3).all_radii())
    assert "strong-triangle" in report.rules()
    with pytest.raises(InvalidInstance):
        FiniteSpace.load(chain(3), BROKEN)


def test_asymmetric_table_is_reported():
    space = FiniteSpace(chain(3), [["0", "1"], ["2", "0"]])
    assert "symmetry" in check_space_axioms(space).rules()


def test_enumeration_counts_on_the_three_chain():
    spaces = list(finite_space_enumerate(3, chain(3)))
    # two 2-point spaces, three 3-point triangles up to relabeling
    assert len(spaces) == 5
    assert all(check_space_axioms(s, chain(3).all_radii()).passed for s in spaces)


def test_enumeration_over_the_diamond_passes_the_ball_lemma():
    for space in finite_space_enumerate(3, diamond()):
        assert check_space_axioms(space, diamond().all_radii()).passed
        assert check_ball_lemma(space).passed
        assert check_principal_ball_lemma(space).passed


def test_enumeration_size_limit():
    with pytest.raises(ValueError):
        list(finite_space_enumerate(7, chain(3)))


def test_contracting_selfmaps_have_one_fixed_point(space_f3):
    maps = all_contracting_selfmaps(space_f3)
    constants = {(0, 0, 0), (1, 1, 1), (2, 2, 2)}
    assert constants <= {m.images for m in maps}
    assert (0, 1, 2) not in {m.images for m in maps}
    for phi in maps:
        assert len(phi.fixed_points()) == 1


def test_padic_arithmetic():
    x = PadicInt.of(3, 7, 3)
    assert (x * x - 2).residue == 7
    assert (x.unit_inverse() * x).residue == 1
    assert PadicInt.of(-1, 7, 2).residue == 48
    assert PadicInt.of(98, 7, 3).valuation() == 2
    assert PadicInt.of(0, 7, 3).valuation() is None
    assert PadicInt.of(10, 7, 2).digits() == [3, 1]
    with pytest.raises(NonUnit):
        PadicInt.of(14, 7, 3).unit_inverse()
    with pytest.raises(MixedPrecision):
        _ = PadicInt.of(1, 7, 3) + PadicInt.of(1, 7, 4)


def test_padic_distance(padic_7_4):
    one = padic_7_4.element(1)
    assert padic_7_4.distance(one, padic_7_4.element(8)) == NatExp(k=1)
    assert padic_7_4.distance(one, padic_7_4.element(1 + 7 ** 3)) == NatExp(k=3)
    assert padic_7_4.distance(one, padic_7_4.element(1 + 7 ** 4)) == NatExp(k=None)
    assert padic_7_4.distance(one, padic_7_4.element(2)) == NatExp(k=0)


def test_padic_space_is_solid():
    space = PadicSpace(5, 3, sample_size=8)
    radii = space.realized_radii()
    assert check_space_axioms(space, radii).passed
    assert check_ball_lemma(space, radii).passed
    assert check_solid_ball_lemma(space, radii).passed


def test_series_arithmetic():
    one_minus_t = SeriesQ.of([1, -1], 5)
    geometric = one_minus_t.inverse()
    assert geometric.coeffs == (1, 1, 1, 1, 1)
    assert (geometric * one_minus_t) == SeriesQ.constant(1, 5)
    assert SeriesQ.of([1, 1, 1], 4).integrate().coeffs == (0, 1, Fraction(1, 2), Fraction(1, 3))
    assert SeriesQ.of([5, 3, 2], 4).derivative().coeffs == (3, 4, 0)
    with pytest.raises(CapMismatch):
        _ = SeriesQ.zero(3) + SeriesQ.zero(4)
    with pytest.raises(ZeroDivisionError):
        SeriesQ.monomial(1, 4).inverse()


def test_series_distance(series_6):
    x = series_6.element([1, 2, 3])
    assert series_6.distance(x, series_6.element([1, 2, 4])) == NatExp(k=2)
    assert series_6.distance(x, x) == NatExp(k=None)
    assert series_6.distance(x, series_6.element([0, 2, 3])) == NatExp(k=0)


def test_series_space_is_solid(series_6):
    radii = series_6.realized_radii()
    assert check_space_axioms(series_6, radii).passed
    assert check_solid_ball_lemma(series_6, radii).passed


def test_lex_series_distance():
    space = LexSeriesSpace(3, 3)
    x = space.element([(0, 1, 1), (1, 0, 2)])
    y = space.element([(0, 1, 1), (1, 0, 3)])
    assert space.distance(x, y) == LexPair(pair=(1, 0))
    assert space.distance(x, space.element([])) == LexPair(pair=(0, 1))
    assert space.distance(x, x) == LexPair(pair=None)
    assert check_space_axioms(space, space.realized_radii()).passed


@settings(max_examples=100, deadline=None)
@given(st.integers(), st.integers(), st.integers())
def test_padic_strong_triangle(x, y, z):
    space = PadicSpace(7, 4)
    order = space.order
    a, b, c = space.element(x), space.element(y), space.element(z)
    dab, dbc = space.distance(a, b), space.distance(b, c)
    bound = dbc if order.leq(dab, dbc) else dab
    assert order.leq(space.distance(a, c), bound)
    assert space.distance(a, b) == space.distance(b, a)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=-4, max_value=4), min_size=5, max_size=5),
       st.lists(st.integers(min_value=-4, max_value=4), min_size=5, max_size=5))
def test_series_distance_is_order_of_the_difference(xs, ys):
    space = SeriesSpace(5)
    x, y = space.element(xs), space.element(ys)
    k = next((i for i, (a, b) in enumerate(zip(xs, ys)) if a != b), None)
    assert space.distance(x, y) == NatExp(k=k)


def test_series_operations_on_small_examples():
    assert series.integrate(SeriesQ.of([1, 1], 4)) == SeriesQ.of([0, 1, Fraction(1, 2)], 4)
    assert series.mul(SeriesQ.of([1, 1], 4), SeriesQ.of([1, -1], 4)) == SeriesQ.of([1, 0, -1], 4)
    y_squared = BivariatePolynomial(terms=[(0, 2, 1)])
    assert series.poly_eval(y_squared, SeriesQ.of([1, 1], 3)) == SeriesQ.of([1, 2, 1], 3)
    assert series.scale(SeriesQ.of([2, 4], 3), Fraction(1, 2)) == SeriesQ.of([1, 2], 3)


def test_padic_operations_on_small_examples():
    a, b = PadicInt.of(5, 7, 2), PadicInt.of(47, 7, 2)
    assert padic.add(a, b).residue == 3
    assert padic.mul(a, b).residue == (5 * 47) % 49
    assert padic.mul(padic.unit_inverse(a), a).residue == 1
    assert padic.distance(a, PadicInt.of(12, 7, 2)) == NatExp(k=1)


def test_padic_disc_stays_in_the_residue_class():
    disc = PadicDisc(7, 4, center=10)
    assert disc.center.residue == 3
    points = disc.sample_points()
    assert len(points) == 20
    assert all(disc.contains(x) for x in points)
    assert disc.realized_radii() == [NatExp(k=1), NatExp(k=2), NatExp(k=3)]
    x = points[0]
    assert disc.witness(x, NatExp(k=0)) is None
    assert disc.contains(disc.witness(x, NatExp(k=2)))
    assert disc.distance(x, disc.witness(x, NatExp(k=2))) == NatExp(k=2)


def test_padic_disc_is_solid():
    disc = PadicDisc(5, 3, center=2, sample_size=8)
    radii = disc.realized_radii()
    assert check_space_axioms(disc, radii).passed
    assert check_solid_ball_lemma(disc, radii).passed


def test_one_point_disc():
    disc = PadicDisc(7, 1, center=3)
    assert [x.residue for x in disc.sample_points()] == [3]
    assert disc.realized_radii() == []


def test_tiny_lex_series_space_samples_every_point():
    space = LexSeriesSpace(1, 1)
    points = space.sample_points()
    assert len(points) == len(set(points)) <= 5
    assert space.element([]) in points
    assert check_space_axioms(space, space.realized_radii()).passed
