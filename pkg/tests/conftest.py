import gzip
import random
from pathlib import Path

import pytest

from energia.graph_core import Graph, from_edges

DATA = Path(__file__).parent / "data"

# (criterion, passed, detail) lines collected by test_acceptance.py
ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


def geng_lines(name: str) -> list[bytes]:
    """Lines of a gzipped geng output file shipped under tests/data."""
    with gzip.open(DATA / f"{name}.g6.gz", "rb") as fh:
        return fh.read().splitlines()


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return from_edges(n, [(u, v) for v in range(n) for u in range(v) if rng.random() < p])


@pytest.fixture
def rng():
    return random.Random(20240917)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
