import pytest
from hypothesis import given, settings, strategies as st

from src.spaces.radius import (
    Comparison,
    FinitePoset,
    LexPair,
    LexPairOrder,
    NatExp,
    NatExpOrder,
    chain,
    check_order_axioms,
    diamond,
    is_total,
    order_from_descriptor,
)
from src.state.errors import MixedOrders, ParseError

nat = st.one_of(st.none(), st.integers(min_value=0, max_value=30)).map(lambda k: NatExp(k=k))
lex = st.one_of(
    st.none(),
    st.tuples(st.integers(min_value=0, max_value=5), st.integers(min_value=0, max_value=5)),
).map(lambda p: LexPair(pair=p))


def test_natexp_larger_index_is_smaller_radius():
    order = NatExpOrder()
    assert order.lt(NatExp(k=3), NatExp(k=1))
    assert order.compare(NatExp(k=0), NatExp(k=0)) is Comparison.EQ
    assert order.lt(order.zero, NatExp(k=100))


def test_lexpair_order_is_reversed_lexicographic():
    order = LexPairOrder()
    assert order.lt(LexPair(pair=(1, 0)), LexPair(pair=(0, 5)))
    assert order.lt(LexPair(pair=(0, 2)), LexPair(pair=(0, 1)))
    assert order.lt(order.zero, LexPair(pair=(9, 9)))


def test_diamond_has_incomparable_radii():
    order = diamond()
    assert order.compare(order["a"], order["b"]) is Comparison.INCOMPARABLE
    assert not order.leq(order["a"], order["b"])
    assert order.lt(order["a"], order["1"])
    assert not is_total(order, order.all_radii())
    assert is_total(chain(4), chain(4).all_radii())


def test_mixed_orders_raise():
    with pytest.raises(MixedOrders):
        NatExpOrder().compare(NatExp(k=1), LexPair(pair=(0, 1)))
    with pytest.raises(MixedOrders):
        chain(3).compare(chain(3)["1"], diamond()["a"])


@pytest.mark.parametrize("order", [chain(3), chain(5), diamond()], ids=lambda o: o.name)
def test_shipped_posets_satisfy_axioms(order):
    report = check_order_axioms(order, order.all_radii())
    assert report.passed, report.summary()
    assert report.checked > 0


def test_zero_that_is_not_least_is_reported():
    order = FinitePoset("skewed", ["0", "1", "2"], "0", [("0", "1"), ("2", "0"), ("2", "1")])
    report = check_order_axioms(order, order.all_radii())
    assert "least-element" in report.rules()


def test_missing_transitive_pair_is_reported():
    order = FinitePoset("gap", ["0", "1", "2"], "0", [("0", "1"), ("1", "2")])
    report = check_order_axioms(order, order.all_radii())
    assert "transitivity" in report.rules()


def test_empty_sample_is_a_violation():
    assert check_order_axioms(chain(2), []).rules() == ["empty-sample"]


def test_poset_rejects_unknown_elements():
    with pytest.raises(ParseError):
        FinitePoset("bad", ["0", "1"], "0", [("0", "7")])
    with pytest.raises(ParseError):
        FinitePoset("bad", ["0", "1"], "z", [])
    with pytest.raises(ParseError):
        chain(3).radius("9")


def test_radius_text_form():
    assert NatExpOrder().decode("natexp:inf") == NatExp(k=None)
    assert NatExpOrder().decode(repr(NatExp(k=4))) == NatExp(k=4)
    assert LexPairOrder().decode("lexpair:2,3") == LexPair(pair=(2, 3))
    assert diamond().decode("poset:b") == diamond()["b"]
    with pytest.raises(ParseError):
        NatExpOrder().decode("lexpair:1,2")
    with pytest.raises(ParseError):
        NatExpOrder().decode("natexp:x")


def test_order_descriptor_rebuilds_the_order():
    for order in (NatExpOrder(depth=5), LexPairOrder(bound=2), diamond()):
        assert order_from_descriptor(order.descriptor()) == order
    with pytest.raises(ParseError):
        order_from_descriptor({"kind": "reals"})


@settings(max_examples=100, deadline=None)
@given(nat, nat)
def test_natexp_comparison_is_antisymmetric(a, b):
    order = NatExpOrder()
    assert order.compare(b, a) is order.compare(a, b).flipped()
    assert order.compare(a, b) is not Comparison.INCOMPARABLE


@settings(max_examples=100, deadline=None)
@given(lex, lex, lex)
def test_lexpair_order_is_transitive(a, b, c):
    order = LexPairOrder()
    if order.leq(a, b) and order.leq(b, c):
        assert order.leq(a, c)
    assert order.leq(order.zero, a)
