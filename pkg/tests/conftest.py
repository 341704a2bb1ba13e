import functools

import pytest

from strongchow.scenario import load_fixture
from strongchow.space_chow import quotient_fan
from strongchow.stack_chow import build_ring
from strongchow.strong import strong_catalogue

STABLE_FIXTURES = ("egs", "p2-flag", "quadric")
ACCEPTANCE_LINES: dict[int, str] = {}


@functools.lru_cache(maxsize=None)
def presentation(name):
    return load_fixture(name).presentation()


@functools.lru_cache(maxsize=None)
def ring(name):
    return build_ring(presentation(name))


@functools.lru_cache(maxsize=None)
def fan(name):
    return quotient_fan(presentation(name))


@functools.lru_cache(maxsize=None)
def catalogue(name):
    return strong_catalogue(presentation(name), ring(name))


@functools.lru_cache(maxsize=None)
def sequence(name):
    from strongchow.reichstein import reichstein_sequence

    return reichstein_sequence(presentation(name))


@pytest.fixture(params=STABLE_FIXTURES)
def stable_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
