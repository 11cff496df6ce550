"""Numerology presets and the configuration of a multiplexed NSN/WSN pair.

The pair is described at the sampling rate of the narrow-spacing numerology
(NSN): it uses an N-point DFT, the wide-spacing numerology (WSN) an M = N/Q
point DFT, and Q WSN symbols fit in one NSN symbol including cyclic prefixes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import BadQ, BadShare, ConfigError, NonIntegerGrid

# Relative slack used when checking that eta*N etc. land on integers.
_INT_TOL = 1e-9


class CpMode(str, Enum):
    INDIVIDUAL = "individual"
    COMMON = "common"


class Direction(str, Enum):
    WSN_TO_NSN = "wsn_to_nsn"
    NSN_TO_WSN = "nsn_to_wsn"

    @property
    def victim(self) -> "Victim":
        return Victim.NSN if self is Direction.WSN_TO_NSN else Victim.WSN


class Victim(str, Enum):
    NSN = "NSN"
    WSN = "WSN"

    @property
    def direction(self) -> Direction:
        """Interference direction that lands on this victim."""
        return Direction.WSN_TO_NSN if self is Victim.NSN else Direction.NSN_TO_WSN


@dataclass(frozen=True)
class NumerologyPreset:
    mu: int
    subcarrier_spacing_khz: float
    symbol_duration_us: float
    cp_duration_us: float
    slot_duration_ms: float


# 3GPP data-channel numerologies, normal CP only.
PRESETS = {
    0: NumerologyPreset(0, 15.0, 66.67, 4.69, 1.0),
    1: NumerologyPreset(1, 30.0, 33.33, 2.34, 0.5),
    2: NumerologyPreset(2, 60.0, 16.67, 1.17, 0.25),
    3: NumerologyPreset(3, 120.0, 8.33, 0.58, 0.125),
    4: NumerologyPreset(4, 240.0, 4.17, 0.29, 0.0625),
}


def preset(mu: int) -> NumerologyPreset:
    try:
        return PRESETS[mu]
    except KeyError:
        raise ConfigError(f"numerology index mu={mu} not in 0..4") from None


def _as_int(x: float, what: str) -> int:
    r = round(x)
    if r <= 0 or abs(x - r) > _INT_TOL * max(1.0, abs(x)):
        raise NonIntegerGrid(f"{what} = {x!r} is not a positive integer")
    return int(r)


@dataclass(frozen=True)
class MultiplexPair:
    """Two numerologies sharing one band, NSN in the low part of the spectrum.

    Powers are linear per-subcarrier powers. ``delta_f1_khz`` and
    ``bandwidth_hz`` are carried for reporting only; interference depends
    on the spacing ratio ``q`` alone.

    The pair validates itself on construction, so every instance in
    circulation satisfies the grid constraints.
    """

    n_fft: int = 128
    q: int = 2
    eta_nsn: float = 0.5
    eta_wsn: float = 0.5
    cp_ratio: float = 1 / 16
    power_nsn: float = 1.0
    power_wsn: float = 1.0
    cp_mode: CpMode = CpMode.INDIVIDUAL
    delta_f1_khz: float = 15.0
    bandwidth_hz: float | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "cp_mode", CpMode(self.cp_mode))
        validate(self)

    @property
    def m_fft(self) -> int:
        return self.n_fft // self.q

    @property
    def n_cp(self) -> int:
        return round(self.cp_ratio * self.n_fft)

    @property
    def m_cp(self) -> int:
        return round(self.cp_ratio * self.m_fft)

    @property
    def n_active_nsn(self) -> int:
        """eta1*N, the number of active NSN subcarriers."""
        return round(self.eta_nsn * self.n_fft)

    @property
    def n_active_wsn(self) -> int:
        """eta2*M, the number of active WSN subcarriers."""
        return round(self.eta_wsn * self.m_fft)

    @property
    def wsn_first_bin(self) -> int:
        """eta1*M, the lowest active WSN bin."""
        return self.m_fft - self.n_active_wsn

    @property
    def delta_f2_khz(self) -> float:
        return self.delta_f1_khz * self.q

    def with_(self, **changes) -> "MultiplexPair":
        return replace(self, **changes)


def validate(pair: MultiplexPair) -> MultiplexPair:
    """Check every grid constraint of ``pair`` and return it unchanged."""
    n, q = pair.n_fft, pair.q
    if not isinstance(n, (int, np.integer)) or n <= 0:
        raise NonIntegerGrid(f"n_fft must be a positive integer, got {n!r}")
    if not isinstance(q, (int, np.integer)) or q <= 0 or q & (q - 1):
        raise BadQ(f"Q must be a positive power of two, got {q!r}")
    for name in ("eta_nsn", "eta_wsn"):
        eta = getattr(pair, name)
        if not 0.0 < eta < 1.0:
            raise BadShare(f"{name} must lie in (0, 1), got {eta!r}")
    if abs(pair.eta_nsn + pair.eta_wsn - 1.0) > 1e-12:
        raise BadShare(f"eta_nsn + eta_wsn must equal 1, got {pair.eta_nsn + pair.eta_wsn!r}")
    if not 0.0 < pair.cp_ratio < 1.0:
        raise NonIntegerGrid(f"cp_ratio must lie in (0, 1), got {pair.cp_ratio!r}")
    if n % q:
        raise NonIntegerGrid(f"M = N/Q = {n}/{q} is not an integer")
    m = n // q
    _as_int(pair.cp_ratio * n, "N_CP")
    _as_int(pair.cp_ratio * m, "M_CP")
    _as_int(pair.eta_nsn * n, "eta_nsn*N")
    _as_int(pair.eta_wsn * n, "eta_wsn*N")
    _as_int(pair.eta_nsn * m, "eta_nsn*M")
    _as_int(pair.eta_wsn * m, "eta_wsn*M")
    for name in ("power_nsn", "power_wsn"):
        p = getattr(pair, name)
        if not (p >= 0.0 and math.isfinite(p)):
            raise ConfigError(f"{name} must be finite and >= 0, got {p!r}")
    return pair


def active_indices_nsn(pair: MultiplexPair) -> np.ndarray:
    return np.arange(pair.n_active_nsn)


def active_indices_wsn(pair: MultiplexPair) -> np.ndarray:
    """Active WSN bins l = eta1*M + k/Q, in the WSN's own M-point grid."""
    return np.arange(pair.wsn_first_bin, pair.m_fft)


def wsn_k_indices(pair: MultiplexPair) -> np.ndarray:
    """Active WSN subcarriers on the NSN grid, offset by eta1*N (k with k/Q integer)."""
    return np.arange(0, pair.n_fft - pair.n_active_nsn, pair.q)


def wsn_bin_from_k(pair: MultiplexPair, k) -> np.ndarray:
    return pair.wsn_first_bin + np.asarray(k) // pair.q


@dataclass(frozen=True)
class FrameGeometry:
    lcm_block_samples: int
    nsn_symbol_samples: int
    wsn_symbol_samples_individual: int
    wsn_block_samples_common: int


def geometry(pair: MultiplexPair) -> FrameGeometry:
    n, m, q = pair.n_fft, pair.m_fft, pair.q
    g = FrameGeometry(
        lcm_block_samples=n + pair.n_cp,
        nsn_symbol_samples=n + pair.n_cp,
        wsn_symbol_samples_individual=m + pair.m_cp,
        wsn_block_samples_common=pair.n_cp + q * m,
    )
    assert q * g.wsn_symbol_samples_individual == g.lcm_block_samples
    assert g.wsn_block_samples_common == g.lcm_block_samples
    return g


def pair_from_presets(mu_nsn: int, mu_wsn: int, n_fft: int = 128, **kwargs) -> MultiplexPair:
    """Build a pair from two 3GPP numerology indices (mu_wsn >= mu_nsn)."""
    a, b = preset(mu_nsn), preset(mu_wsn)
    if b.mu < a.mu:
        raise BadQ("the WSN must not have a narrower spacing than the NSN")
    return MultiplexPair(
        n_fft=n_fft, q=2 ** (b.mu - a.mu), delta_f1_khz=a.subcarrier_spacing_khz, **kwargs
    )


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x)
