import numpy as np
import pytest

from gicwsr.channel import SisoChannel, rates_of_witness
from gicwsr.errors import ChannelError, OriginInfeasible
from gicwsr.feasibility import check_feasible
from gicwsr.instances import random_miso, random_simo
from gicwsr.oracle import RateProfile, intersect, target_from_profile


def test_target_examples():
    assert target_from_profile([1.0], 2.0) == pytest.approx([3.0])
    assert target_from_profile([0.5, 0.5], 2.0) == pytest.approx([1.0, 1.0])
    g = target_from_profile([0.5, 0.5], 3.0, origin=[0.5, 0.5])
    assert g == pytest.approx([2 ** 1.5 - 1] * 2)


def test_target_rejects_below_origin():
    with pytest.raises(ChannelError):
        target_from_profile([0.5, 0.5], 0.5, origin=[0.5, 0.5])


def test_profile_normalization():
    a = RateProfile.from_vertex([2.0, 6.0])
    assert a.alpha == pytest.approx([0.25, 0.75])
    assert abs(a.alpha.sum() - 1) <= 1e-12
    with pytest.raises(ChannelError):
        RateProfile([-0.1, 1.1])


def test_intersect_single_user():
    hit = intersect(SisoChannel([[1.0]], 1.0, 3.0), [1.0], tol_bits=1e-6)
    assert hit.rsum == pytest.approx(2.0, abs=1e-6)


def test_intersect_decoupled():
    ch = SisoChannel([[1.0, 0.0], [0.0, 1.0]], 1.0, 3.0)
    hit = intersect(ch, [0.5, 0.5], tol_bits=1e-6)
    assert hit.rsum == pytest.approx(4.0, abs=1e-6)


def test_intersect_symmetric_matches_grid():
    ch = SisoChannel([[1.0, 0.2], [0.2, 1.0]], 1.0, 3.0)
    hit = intersect(ch, [0.5, 0.5], tol_bits=1e-7)
    # brute force: largest symmetric sum-rate reachable on a fine power grid
    g = np.linspace(0, 3, 1501)
    P1, P2 = np.meshgrid(g, g)
    r1 = np.log2(1 + P1 / (0.2 * P2 + 1))
    r2 = np.log2(1 + P2 / (0.2 * P1 + 1))
    best = 2 * np.max(np.minimum(r1, r2))
    assert hit.rsum == pytest.approx(best, abs=2e-3)
    assert hit.rsum >= best - 1e-7


@pytest.mark.parametrize("make", [lambda: random_simo(3, 2, 1, noise=0.3),
                                  lambda: random_miso(3, 2, 1, noise=0.3)])
def test_intersect_boundary(make):
    ch = make()
    alpha = np.array([0.2, 0.3, 0.5])
    tol = 1e-4
    hit = intersect(ch, alpha, tol_bits=tol)
    assert check_feasible(ch, target_from_profile(alpha, hit.rsum)).feasible
    assert not check_feasible(ch, target_from_profile(alpha, hit.rsum + tol)).feasible
    assert not check_feasible(ch, target_from_profile(alpha, hit.upper_rsum)).feasible
    assert check_feasible(ch, target_from_profile(alpha, 0.5 * hit.rsum)).feasible
    assert np.all(rates_of_witness(ch, hit.witness) >= hit.rates - tol)


def test_intersect_origin_infeasible():
    ch = SisoChannel([[1.0, 1.0], [1.0, 1.0]], 1.0, 3.0)
    with pytest.raises(OriginInfeasible):
        intersect(ch, [0.5, 0.5], origin=[1.5, 1.5])
