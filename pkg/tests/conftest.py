import os
from pathlib import Path

import pytest
from hypothesis import settings

from src.spaces.finite import f3
from src.spaces.maps import AffineSeriesMap
from src.spaces.padic import PadicSpace
from src.spaces.series import SeriesQ, SeriesSpace

settings.register_profile("fast", max_examples=20, deadline=None)
settings.register_profile("thorough", max_examples=200, deadline=None)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))

INSTANCES = Path(__file__).resolve().parents[1] / "data" / "instances"


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for var in ("FIXPOINT_STEPS_PER_STAGE", "FIXPOINT_MAX_STAGES", "FIXPOINT_LOG_LEVEL"):
        monkeypatch.delenv(var, raising=False)


@pytest.fixture
def instances() -> Path:
    return INSTANCES


@pytest.fixture
def space_f3():
    return f3()


@pytest.fixture
def padic_7_4():
    return PadicSpace(7, 4)


@pytest.fixture
def series_6():
    return SeriesSpace(6)


@pytest.fixture
def affine_6():
    """x -> 1 + t*x mod t^6; fixed point 1 + t + ... + t^5."""
    return AffineSeriesMap(SeriesQ.constant(1, 6), SeriesQ.monomial(1, 6))
