import numpy as np
import pytest

from gicwsr.channel import MisoChannel, SimoChannel, SisoChannel


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def single_siso():
    return SisoChannel([[1.0]], noise=1.0, pmax=3.0)


def decoupled_siso():
    return SisoChannel([[1.0, 0.0], [0.0, 1.0]], noise=1.0, pmax=3.0)


def orthogonal_simo():
    h = [[np.array([1.0, 0.0]), np.zeros(2)], [np.zeros(2), np.array([0.0, 1.0])]]
    return SimoChannel(h, noise=1.0, pmax=3.0)


def orthogonal_miso():
    # cross channels orthogonal to the direct ones, so MRT causes no interference
    h = [[np.array([1.0, 0.0]), np.array([1.0, 0.0])],
         [np.array([0.0, 1.0]), np.array([0.0, 1.0])]]
    return MisoChannel(h, noise=1.0, pmax=3.0)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
