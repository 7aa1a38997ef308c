import numpy as np
import pytest

from gicwsr.channel import (
    MinRateConstraint,
    MisoChannel,
    SimoChannel,
    SisoChannel,
    initial_vertex,
    lift_witness,
    rate_of,
    rates_of_witness,
    sinr_miso,
    sinr_simo,
    sinr_simo_mmse,
    sinr_siso,
    siso_as_simo,
    subchannel,
)
from gicwsr.config import load_bundled
from gicwsr.errors import ChannelError
from gicwsr.instances import cscg, random_miso, random_simo, random_siso


def test_sinr_siso_single_user():
    ch = SisoChannel([[1.0]], noise=1.0, pmax=3.0)
    assert sinr_siso(ch, [2.0])[0] == pytest.approx(2.0)


def test_sinr_siso_two_users():
    ch = SisoChannel([[1.0, 0.5], [0.3, 1.0]], noise=1.0, pmax=3.0)
    assert sinr_siso(ch, [1.0, 2.0])[0] == pytest.approx(0.5)


def test_sinr_siso_bundled_matrix():
    ch = load_bundled("siso_weak4").channel
    expected = 1.293 / (3 * (0.0022 + 0.0105 + 0.0042) + 0.1)
    assert sinr_siso(ch, np.full(4, 3.0))[0] == pytest.approx(expected, rel=1e-12)


def test_sinr_siso_rejects_bad_shape():
    ch = SisoChannel([[1.0, 0.5], [0.3, 1.0]])
    with pytest.raises(ChannelError):
        sinr_siso(ch, [1.0, 2.0, 3.0])


def test_mmse_matched_filter():
    ch = SimoChannel([[np.array([1.0, 1.0])]], noise=1.0, pmax=3.0)
    assert sinr_simo_mmse(ch, [1.0])[0] == pytest.approx(2.0)


def test_mmse_decoupled_users():
    h = [[np.array([1.0, 2.0]), np.zeros(2)], [np.zeros(2), np.array([0.5, 1j])]]
    ch = SimoChannel(h, noise=[1.0, 2.0], pmax=3.0)
    p = np.array([1.5, 2.0])
    gam = sinr_simo_mmse(ch, p)
    assert gam == pytest.approx([1.5 * 5 / 1.0, 2.0 * 1.25 / 2.0])


def test_mmse_matches_receiver_grid_search():
    ch = random_simo(2, 2, seed=5)
    p = np.ones(2)
    gam = sinr_simo_mmse(ch, p)
    # unit receivers w = (cos t, e^{i phi} sin t) up to a common phase
    t, phi = np.meshgrid(np.linspace(0, np.pi / 2, 301), np.linspace(0, 2 * np.pi, 301))
    W = np.stack([np.cos(t), np.exp(1j * phi) * np.sin(t)], axis=-1).reshape(-1, 2)
    for k in range(2):
        num = p[k] * np.abs(W.conj() @ ch.h[k][k]) ** 2
        j = 1 - k
        den = p[j] * np.abs(W.conj() @ ch.h[k][j]) ** 2 + ch.noise[k]
        assert np.max(num / den) <= gam[k] * (1 + 1e-9)
        assert np.max(num / den) == pytest.approx(gam[k], rel=1e-3)


def test_mmse_dominates_random_receivers(rng):
    ch = random_simo(3, 2, seed=2)
    p = rng.uniform(0, 3, 3)
    gam, W = sinr_simo_mmse(ch, p, return_receivers=True)
    assert sinr_simo(ch, p, W) == pytest.approx(gam, rel=1e-10)
    for _ in range(200):
        Wr = [cscg(rng, 2) for _ in range(3)]
        assert np.all(sinr_simo(ch, p, Wr) <= gam * (1 + 1e-9))


def test_sinr_miso_mrt_single_user():
    h = np.array([1.0, 1j])
    ch = MisoChannel([[h]], noise=0.5, pmax=3.0)
    v = np.sqrt(3.0) * h / np.linalg.norm(h)
    assert sinr_miso(ch, [v])[0] == pytest.approx(3.0 * 2 / 0.5)


def test_sinr_miso_zero_beam():
    ch = random_miso(2, 2, seed=1)
    V = [np.zeros(2, dtype=complex), np.array([1.0, 0.0])]
    assert sinr_miso(ch, V)[0] == 0.0


def test_sinr_miso_matches_direct_formula(rng):
    ch = random_miso(2, 2, seed=3)
    V = [cscg(rng, 2) for _ in range(2)]
    V = [v * np.sqrt(ch.pmax[k] * 0.9) / np.linalg.norm(v) for k, v in enumerate(V)]
    expect = []
    for k in range(2):
        s = abs(sum(np.conj(ch.h[k][k][i]) * V[k][i] for i in range(2))) ** 2
        j = 1 - k
        x = abs(sum(np.conj(ch.h[k][j][i]) * V[j][i] for i in range(2))) ** 2
        expect.append(s / (x + ch.noise[k]))
    assert sinr_miso(ch, V) == pytest.approx(expect, rel=1e-12)


def test_sinr_miso_power_violation():
    ch = MisoChannel([[np.array([1.0, 0.0])]], pmax=1.0)
    with pytest.raises(ChannelError):
        sinr_miso(ch, [np.array([2.0, 0.0])])


@pytest.mark.parametrize("gamma,rate", [(0.0, 0.0), (1.0, 1.0), (3.0, 2.0)])
def test_rate_of(gamma, rate):
    assert rate_of(np.array([gamma]))[0] == pytest.approx(rate)


def test_initial_vertex_examples():
    assert initial_vertex(SisoChannel([[1.0]], 1.0, 3.0)) == pytest.approx([2.0])
    ch = MisoChannel([[np.array([1.0, 1.0])]], 1.0, 3.0)
    assert initial_vertex(ch) == pytest.approx([np.log2(7.0)])
    weak = load_bundled("siso_weak4").channel
    assert initial_vertex(weak)[0] == pytest.approx(np.log2(1 + 3 * 0.431 / 0.1))


@pytest.mark.parametrize("topology", ["siso", "simo", "miso"])
def test_initial_box_contains_random_allocations(topology, rng):
    make = {"siso": lambda: random_siso(3, 4), "simo": lambda: random_simo(3, 2, 4),
            "miso": lambda: random_miso(3, 2, 4)}[topology]
    ch = make()
    z1 = initial_vertex(ch)
    for _ in range(50):
        if topology == "miso":
            V = []
            for k in range(3):
                v = cscg(rng, 2)
                V.append(v * np.sqrt(rng.uniform(0, ch.pmax[k])) / np.linalg.norm(v))
            wit = {"V": V}
        else:
            wit = {"p": rng.uniform(0, 1, 3) * ch.pmax}
        assert np.all(rates_of_witness(ch, wit) <= z1 + 1e-12)


def test_own_power_monotone(rng):
    ch = random_simo(3, 2, 7)
    sis = random_siso(3, 7)
    p = rng.uniform(0, 2, 3)
    for k in range(3):
        q = p.copy()
        q[k] += 0.5
        assert sinr_simo_mmse(ch, q)[k] >= sinr_simo_mmse(ch, p)[k]
        assert sinr_siso(sis, q)[k] >= sinr_siso(sis, p)[k]


def test_channel_validation():
    with pytest.raises(ChannelError):
        SisoChannel([[0.0]])
    with pytest.raises(ChannelError):
        SisoChannel([[1.0]], noise=0.0)
    with pytest.raises(ChannelError):
        SisoChannel([[1.0, 0.1], [0.1, 1.0]], weights=0.0)
    with pytest.raises(ChannelError):
        SimoChannel([[np.array([1.0, 0.0]), np.array([1.0])],
                     [np.array([1.0, 0.0]), np.array([1.0])]])


def test_min_rate_constraint_rejects_capacity():
    ch = SisoChannel([[1.0]], 1.0, 3.0)
    MinRateConstraint([1.9], ch)
    with pytest.raises(ChannelError):
        MinRateConstraint([2.0], ch)
    with pytest.raises(ChannelError):
        MinRateConstraint([-0.1], ch)


def test_channels_are_immutable():
    ch = random_siso(2, 0)
    with pytest.raises(ValueError):
        ch.gain[0, 0] = 5.0


def test_subchannel_and_lift():
    ch = random_miso(3, 2, 1)
    sub = subchannel(ch, (0, 2))
    assert sub.K == 2
    V = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    full = lift_witness(ch, (0, 2), {"V": V})
    assert np.all(full["V"][1] == 0)
    r_sub = rates_of_witness(sub, {"V": V})
    r_full = rates_of_witness(ch, full)
    assert r_full[[0, 2]] == pytest.approx(r_sub)
    assert r_full[1] == 0.0


def test_siso_as_simo_same_rates(rng):
    ch = random_siso(3, 2)
    p = rng.uniform(0, 3, 3)
    assert sinr_simo_mmse(siso_as_simo(ch), p) == pytest.approx(sinr_siso(ch, p), rel=1e-12)
