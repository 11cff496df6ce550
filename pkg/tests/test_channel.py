import numpy as np
import pytest

from ini_lab import waveform as wf
from ini_lab.channel import IDENTITY, ChannelModel, apply, cfr, equalize, format_channel, parse_channel
from ini_lab.errors import ConfigError, DelayExceedsCp, SpectralNull
from ini_lab.numerology import CpMode, MultiplexPair, active_indices_nsn, active_indices_wsn

THREE_TAP = ChannelModel(((0, 0.8 + 0.1j), (1, -0.3 + 0.2j), (3, 0.15 - 0.05j)))


def test_identity_apply():
    x = np.arange(10) + 1j
    assert apply(x, IDENTITY) is not None
    np.testing.assert_array_equal(apply(x, IDENTITY), x)


def test_single_delayed_tap():
    x = np.arange(1, 9) + 0j
    y = apply(x, ChannelModel(((2, 0.5),)))
    np.testing.assert_array_equal(y, np.r_[0, 0, 0.5 * x[:-2]])


def test_apply_matches_numpy_convolution():
    x = np.random.default_rng(0).normal(size=50) + 0j
    np.testing.assert_allclose(apply(x, THREE_TAP), np.convolve(x, THREE_TAP.impulse_response())[:50])


def test_cfr():
    np.testing.assert_array_equal(cfr(IDENTITY, 64, np.arange(64)), np.ones(64))
    h = cfr(ChannelModel(((3, 1),)), 64, np.arange(64))
    np.testing.assert_allclose(np.abs(h), 1)
    np.testing.assert_allclose(h, np.exp(-2j * np.pi * np.arange(64) * 3 / 64))
    cir = np.zeros(64, complex)
    cir[: THREE_TAP.max_delay + 1] = THREE_TAP.impulse_response()
    np.testing.assert_allclose(cfr(THREE_TAP, 64, np.arange(64)), np.fft.fft(cir), atol=1e-14)


def test_equalize():
    g = np.arange(4) + 1j
    np.testing.assert_array_equal(equalize(g, IDENTITY, 8, np.arange(4)), g)
    null = ChannelModel(((0, 1), (1, 1)))  # zero at bin N/2
    with pytest.raises(SpectralNull):
        equalize(np.ones(8), null, 8, np.arange(8))


def test_delay_vs_cp():
    p = MultiplexPair(q=2)  # M_CP = 4
    with pytest.raises(DelayExceedsCp):
        apply(np.zeros(136), ChannelModel(((0, 1), (4, 0.1))), p)
    apply(np.zeros(136), THREE_TAP, p)


def test_invalid_taps():
    with pytest.raises(ConfigError):
        ChannelModel(((2, 1), (1, 1)))
    with pytest.raises(ConfigError):
        ChannelModel(())


def test_parse_and_format():
    assert parse_channel("identity") is IDENTITY
    ch = parse_channel("taps:0:0.8:0.1;1:-0.3:0.2;3:0.15:-0.05")
    assert ch == THREE_TAP
    assert parse_channel(format_channel(ch)) == ch
    with pytest.raises(ConfigError):
        parse_channel("taps:0:1")
    with pytest.raises(ConfigError):
        parse_channel("rayleigh")


def test_multipath_round_trip_individual_cp():
    p = MultiplexPair(q=2)
    rng = np.random.default_rng(7)
    nsn = (1 - 2 * rng.integers(0, 2, p.n_active_nsn)).astype(complex)
    y = apply(wf.frame_individual(wf.map_nsn(nsn, p), None, p), THREE_TAP, p)
    got = equalize(wf.rx_nsn(y, p), THREE_TAP, p.n_fft, active_indices_nsn(p))
    assert np.max(np.abs(got - nsn)) <= 1e-9
    wsn = (1 - 2 * rng.integers(0, 2, (p.q, p.n_active_wsn))).astype(complex)
    y = apply(wf.frame_individual(None, wf.WsnBlock(wf.map_wsn(wsn, p), CpMode.INDIVIDUAL), p), THREE_TAP, p)
    for q in range(p.q):
        got = equalize(wf.rx_wsn_individual(y, p, q), THREE_TAP, p.m_fft, active_indices_wsn(p))
        assert np.max(np.abs(got - wsn[q])) <= 1e-9
