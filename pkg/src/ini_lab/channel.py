"""Static multipath channel and one-tap equalization."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DelayExceedsCp, SpectralNull
from .numerology import MultiplexPair

NULL_THRESHOLD = 1e-12


@dataclass(frozen=True)
class ChannelModel:
    """Time-invariant tapped delay line; ``taps`` is a tuple of (delay_samples, gain)."""

    taps: tuple[tuple[int, complex], ...] = ((0, 1 + 0j),)

    def __post_init__(self):
        taps = tuple((int(d), complex(g)) for d, g in self.taps)
        if not taps:
            raise ConfigError("channel needs at least one tap")
        delays = [d for d, _ in taps]
        if delays[0] < 0 or any(b <= a for a, b in zip(delays, delays[1:])):
            raise ConfigError("tap delays must be non-negative and strictly increasing")
        object.__setattr__(self, "taps", taps)

    @property
    def max_delay(self) -> int:
        return self.taps[-1][0]

    @property
    def is_identity(self) -> bool:
        return self.taps == ((0, 1 + 0j),)

    def check_against(self, pair: MultiplexPair) -> None:
        # M_CP <= N_CP, so the WSN prefix is the binding one.
        if self.max_delay >= min(pair.n_cp, pair.m_cp):
            raise DelayExceedsCp(
                f"max delay {self.max_delay} must be < min(N_CP, M_CP) = {min(pair.n_cp, pair.m_cp)}"
            )

    def impulse_response(self) -> np.ndarray:
        h = np.zeros(self.max_delay + 1, dtype=complex)
        for d, g in self.taps:
            h[d] = g
        return h


IDENTITY = ChannelModel()


def parse_channel(text: str) -> ChannelModel:
    """Parse ``identity`` or ``taps:<delay>:<re>:<im>;...``."""
    text = text.strip()
    if text == "identity":
        return IDENTITY
    if not text.startswith("taps:"):
        raise ConfigError(f"unknown channel spec {text!r}")
    taps = []
    for item in filter(None, (s.strip() for s in text[5:].split(";"))):
        try:
            d, re, im = item.split(":")
            taps.append((int(d), complex(float(re), float(im))))
        except ValueError:
            raise ConfigError(f"bad tap {item!r}; expected delay:gain_re:gain_im") from None
    return ChannelModel(tuple(taps))


def format_channel(ch: ChannelModel) -> str:
    if ch.is_identity:
        return "identity"
    return "taps:" + ";".join(f"{d}:{g.real!r}:{g.imag!r}" for d, g in ch.taps)


def apply(signal, ch: ChannelModel, pair: MultiplexPair | None = None) -> np.ndarray:
    """Linear convolution along the last axis, truncated to the input length.

    The block is treated as preceded by silence; the CP absorbs the delay
    spread as long as every delay is shorter than the CPs.
    """
    if pair is not None:
        ch.check_against(pair)
    signal = np.asarray(signal, dtype=complex)
    if ch.is_identity:
        return signal
    out = np.zeros_like(signal)
    n = signal.shape[-1]
    for d, g in ch.taps:
        if d < n:
            out[..., d:] += g * signal[..., : n - d]
    return out


def cfr(ch: ChannelModel, fft_size: int, bin) -> np.ndarray:
    bins = np.asarray(bin, dtype=float)
    h = np.zeros(bins.shape, dtype=complex)
    for d, g in ch.taps:
        h = h + g * np.exp(-2j * np.pi * bins * d / fft_size)
    return h


def equalize(values, ch: ChannelModel, fft_size: int, bins) -> np.ndarray:
    """Divide received bins ``values[..., i]`` (at DFT bins ``bins[i]``) by the CFR."""
    values = np.asarray(values, dtype=complex)
    if ch.is_identity:
        return values
    h = cfr(ch, fft_size, bins)
    if np.any(np.abs(h) < NULL_THRESHOLD):
        raise SpectralNull(f"channel response below {NULL_THRESHOLD} on an active bin")
    return values / h
