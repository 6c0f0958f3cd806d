import numpy as np
import pytest

from graphmap.instance import Instance


def pytest_configure(config):
    config._criterion_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_criterion_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def make_instance(distances, flows, name="test"):
    return Instance(
        name=name,
        distances=np.array(distances, dtype=np.int64),
        flows=np.array(flows, dtype=np.int64),
    )


@pytest.fixture
def tiny():
    # n=2 hand case used across modules
    return make_instance([[0, 2], [1, 0]], [[0, 1], [4, 0]], name="tiny2")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
