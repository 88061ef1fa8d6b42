import random
from pathlib import Path

import pytest

from prefmatch.instance import Instance, parse_instance

DATA = Path(__file__).parent / "data"


def load(name: str) -> Instance:
    return parse_instance((DATA / name).read_text())


def random_instance(rng: random.Random, max_a: int = 7, max_p: int = 7) -> Instance:
    n_a = rng.randint(2, max_a)
    n_p = rng.randint(2, max_p)
    density = rng.choice([0.2, 0.35, 0.5, 0.75, 1.0])
    prefs = []
    for _ in range(n_a):
        posts = [p for p in range(n_p) if rng.random() < density]
        rng.shuffle(posts)
        prefs.append(tuple(posts))
    return Instance(n_a, n_p, tuple(prefs))


def random_suite(count: int, seed: int = 12345, **kw):
    rng = random.Random(seed)
    return [random_instance(rng, **kw) for _ in range(count)]


@pytest.fixture
def fix_a():
    return load("fix_a.txt")


@pytest.fixture
def fix_b():
    return load("fix_b.txt")


@pytest.fixture
def fix_c():
    return load("fix_c.txt")


_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record a one-line acceptance verdict; printed at the end of the run."""
    def emit(criterion: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f": {detail}" if detail else "")
        _ACCEPTANCE_LINES.append(line)
        print(line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
