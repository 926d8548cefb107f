import random

import pytest

from nilclose.freegroup import Alphabet
from nilclose.stallings import subgroup, whole

AB = Alphabet.of("ab")


@pytest.fixture
def ab():
    return AB


@pytest.fixture
def H():
    return subgroup(AB, "aa,b")


@pytest.fixture
def K():
    return subgroup(AB, "a,bbb")


@pytest.fixture
def F():
    return whole(AB)


@pytest.fixture
def rng():
    return random.Random(20240601)


def random_reduced(rng, alphabet, max_len, min_len=0):
    """Uniform-ish random reduced word as letter codes."""
    n = rng.randint(min_len, max_len)
    out = []
    while len(out) < n:
        c = rng.randrange(alphabet.signed_size)
        if out and out[-1] == c ^ 1:
            continue
        out.append(c)
    return tuple(out)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, elapsed, note = RESULTS[n]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f} s)"
        terminalreporter.write_line(line + (f" {note}" if note else ""))
