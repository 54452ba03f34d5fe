from hypothesis import given, settings, strategies as st
import pytest
from pydantic import ValidationError

from src.agents.limit_oracle import AffineSeriesOracle
from src.apps.hensel import HenselProblem
from src.apps.picard import OdeProblem
from src.graph.workflow import run
from src.spaces.finite import all_contracting_selfmaps, f3
from src.spaces.lex_series import LexSeriesSpace
from src.spaces.maps import AffineLexMap, AffineSeriesMap, NewtonMap
from src.spaces.padic import IntPolynomial
from src.spaces.series import BivariatePolynomial, SeriesQ, SeriesSpace
from src.state.schema import DriverConfig
from src.utils.memory import TraceDocument, TraceStore, decode_trace_document, encode_trace_document

F3 = f3()
F3_MAPS = all_contracting_selfmaps(F3)


def reemit(space, phi, outcome, config=None) -> tuple:
    text = encode_trace_document(space, phi, outcome, config).dumps()
    space2, phi2, outcome2 = decode_trace_document(TraceDocument.loads(text))
    return text, encode_trace_document(space2, phi2, outcome2, config).dumps()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(F3_MAPS), st.integers(min_value=0, max_value=2))
def test_finite_trace_reemits_identically(phi, start):
    config = DriverConfig(steps_per_stage=4, max_stages=1)
    first, second = reemit(F3, phi, run(F3, phi, start, config), config)
    assert first == second


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.integers(min_value=1, max_value=60), st.integers(min_value=1, max_value=4))
def test_padic_trace_reemits_identically(p, a, n):
    if a % p == 0:
        a += 1
    poly = IntPolynomial(coefficients=(-a * a, 0, 1))
    space = HenselProblem(p=p, n=n, poly=poly, seed=a % p).space()
    phi = NewtonMap(poly)
    first, second = reemit(space, phi, run(space, phi, space.element(a % p)))
    assert first == second


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), max_size=4),
       st.integers(-2, 2), st.integers(min_value=2, max_value=6), st.integers(min_value=1, max_value=3))
def test_picard_trace_reemits_identically(terms, y0, cap, steps):
    prob = OdeProblem(rhs=BivariatePolynomial(terms=terms), y0=y0, cap=cap)
    config = DriverConfig(steps_per_stage=steps, max_stages=2)
    first, second = reemit(prob.space(), prob.operator(), run(prob.space(), prob.operator(), prob.initial(), config),
                           config)
    assert first == second


def test_approximated_trace_survives_the_round_trip(affine_6, series_6):
    config = DriverConfig(steps_per_stage=3, max_stages=2)
    outcome = run(series_6, affine_6, SeriesQ.zero(6), config, AffineSeriesOracle(affine_6))
    doc = encode_trace_document(series_6, affine_6, outcome, config)
    assert doc.outcome.kind == "approximated"
    assert doc.validation.passed
    space, phi, back = decode_trace_document(TraceDocument.loads(doc.dumps()))
    assert isinstance(space, SeriesSpace) and isinstance(phi, AffineSeriesMap)
    assert back.point == outcome.point
    assert back.trace.sigma_chain() == outcome.trace.sigma_chain()


def test_reached_document_fields():
    phi = F3_MAPS[0]
    doc = encode_trace_document(F3, phi, run(F3, phi, 0))
    assert doc.instance["kind"] == "finite"
    assert doc.map == {"kind": "table", "images": list(phi.images)}
    assert doc.outcome.kind == "reached"
    assert doc.outcome.point == phi.fixed_points()[0]
    assert all(r.startswith("poset:") for stage in doc.stages for r in stage.sigma)


def test_malformed_document():
    with pytest.raises(ValidationError):
        TraceDocument.loads('{"instance": {}}')


def test_trace_store(tmp_path, padic_7_4):
    phi = NewtonMap(IntPolynomial(coefficients=(-2, 0, 1)))
    doc = encode_trace_document(padic_7_4, phi, run(padic_7_4, phi, padic_7_4.element(3)))
    store = TraceStore(str(tmp_path / "out"), "abc123")
    path = store.save_trace(doc)
    assert path.endswith("trace_abc123.json")
    assert store.load_trace() == doc
    line = f"root {doc.outcome.point}"
    summary = store.save_summary("Hensel lifting", doc, line)
    text = (tmp_path / "out" / "summary_abc123.md").read_text()
    assert summary.endswith("summary_abc123.md")
    assert text.startswith("# Hensel lifting")
    assert "**Outcome**: reached" in text
    assert line in text
    assert "trace: ok" in text


def test_lexicographic_trace_round_trip():
    space = LexSeriesSpace(3, 3)
    phi = AffineLexMap(space.element([(0, 0, 1)]), space.element([(0, 1, 1)]))
    outcome = run(space, phi, space.element([]))
    doc = encode_trace_document(space, phi, outcome)
    assert doc.validation.passed
    assert doc.map["kind"] == "affine_lex"
    assert doc.stages[0].sigma == ["lexpair:0,0", "lexpair:0,1", "lexpair:0,2"]
    first, second = reemit(space, phi, outcome)
    assert first == second
    space2, phi2, back = decode_trace_document(TraceDocument.loads(first))
    assert isinstance(space2, LexSeriesSpace) and isinstance(phi2, AffineLexMap)
    assert back.point == outcome.point


def test_hensel_trace_names_its_disc():
    prob = HenselProblem(p=7, n=4, poly=IntPolynomial(coefficients=(-2, 0, 1)), seed=3)
    space, phi = prob.space(), NewtonMap(prob.poly)
    doc = encode_trace_document(space, phi, run(space, phi, space.element(3)))
    assert doc.instance == {"kind": "padic_disc", "p": 7, "n": 4, "center": 3}
    space2, _, back = decode_trace_document(TraceDocument.loads(doc.dumps()))
    assert space2.center == space.center
    assert (back.point.residue ** 2 - 2) % 7 ** 4 == 0
    assert back.point.residue % 7 == 3
