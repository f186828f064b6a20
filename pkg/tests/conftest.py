import pytest

from scenarios import THREE_BREAKPOINTS, canonical_instance


@pytest.fixture
def canonical():
    return canonical_instance()


@pytest.fixture
def three_breakpoints():
    return THREE_BREAKPOINTS
