import sys
from pathlib import Path

import pytest
from hypothesis import settings

from pathpack.demand import anticliques
from pathpack.netmodel import Network

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE: dict[int, str] = {}


def make(edges, terminals, demands=()):
    net = Network.build(edges, terminals, demands)
    return net, anticliques(net.terminals, net.demands)


@pytest.fixture
def c4():
    """4-cycle s1-s2-t1-t2-s1 with demands s1t1, s2t2."""
    return make([("s1", "s2"), ("s2", "t1"), ("t1", "t2"), ("t2", "s1")],
                ["s1", "s2", "t1", "t2"], [("s1", "t1"), ("s2", "t2")])


@pytest.fixture
def sxt():
    return make([("s", "x"), ("x", "t")], ["s", "t"], [("s", "t")])


@pytest.fixture
def star():
    return make([("c", "a"), ("c", "b"), ("c", "d")], ["a", "b", "d"], [("a", "b")])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
