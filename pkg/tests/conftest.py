from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
sys.path.insert(0, str(Path(__file__).resolve().parent))

settings.register_profile(
    "latmax", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("latmax")

FIXTURE_FILES = {
    "fix1": "fix1_s3_p3.json",
    "fix2": "fix2_s3_p2.json",
    "fix3": "fix3_s4_p2.json",
    "fix4": "fix4_semisimple_interior_p3.json",
    "fix1c": "fix1_conjugated.json",
    "fix5": "fix5_power_series.json",
}


def fixture_path(name: str) -> Path:
    return FIXTURES / FIXTURE_FILES.get(name, name)


@lru_cache(maxsize=None)
def spec_of(name: str):
    from latmax.config import parse_spec

    return parse_spec(fixture_path(name))


@lru_cache(maxsize=None)
def analysis_of(name: str):
    from latmax.analysis import analyze_spec

    return analyze_spec(spec_of(name))


@pytest.fixture
def fix1():
    return analysis_of("fix1")


@pytest.fixture
def fix3():
    return analysis_of("fix3")
