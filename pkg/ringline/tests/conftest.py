"""
Shared fixtures: the ring zoo, built lines and the shipped fixture files
"""

from pathlib import Path

import pytest

from ringline.app.grammar import parse_ring_spec
from ringline.services.projline import build_line
from ringline.services.rings import build_ring

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"

ZOO = [
    "GF(2)",
    "GF(5)",
    "Z/4",
    "Z/6",
    "Z/8",
    "dual(GF(2), h=2)",
    "dual(GF(4), h=2, frob=1)",
    "mat(2, GF(2))",
    "prod(GF(2), GF(3))",
    "ext(GF(2), n=2)",
]

LOCAL = {"GF(2)", "GF(5)", "Z/4", "Z/8", "dual(GF(2), h=2)", "dual(GF(4), h=2, frob=1)", "ext(GF(2), n=2)"}


def ring_of(text):
    return build_ring(parse_ring_spec(text))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def ring():
    """Factory building a ring from spec text."""
    return ring_of


@pytest.fixture
def line():
    """Factory building P(R) from spec text."""
    return lambda text: build_line(ring_of(text))


@pytest.fixture(params=ZOO)
def zoo_spec(request) -> str:
    return request.param
