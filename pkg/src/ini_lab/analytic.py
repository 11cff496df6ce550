"""Closed-form inter-numerology interference (INI) and SIR.

Index conventions follow the NSN grid:

* NSN subcarriers ``v`` (or ``k`` when interfering) run over ``0 .. eta1*N-1``.
* WSN subcarriers are addressed by ``k`` (or ``p`` as victims) in
  ``0 .. eta2*N-1`` with ``k % Q == 0``; the physical NSN-grid frequency is
  ``k + eta1*N`` and the WSN bin is ``eta1*M + k/Q``.

All kernels are ratios of sines whose numerator arguments are integer
multiples of pi/N (or pi/Q). Numerators are reduced modulo their period in
integer arithmetic first, so lattice zeros come out as exact 0.0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange
from .numerology import (
    CpMode,
    Direction,
    MultiplexPair,
    Victim,
    active_indices_nsn,
    linear_to_db,
    wsn_bin_from_k,
    wsn_k_indices,
)


def _sin_sq_ratio(num_int, num_period: int, den_int, n: int) -> np.ndarray:
    """|sin(pi*a/P) / sin(pi*b/N)|^2 for integer a, b with a reduced mod P."""
    num = np.sin(np.pi * (np.asarray(num_int) % num_period) / num_period) ** 2
    den = np.sin(np.pi * np.asarray(den_int) / n) ** 2
    # Valid index ranges keep the spectral distance inside (0, N) mod N.
    assert np.all(den >= np.sin(np.pi / n) ** 2 * (1 - 1e-9)), "spectral distance hit a DFT null"
    return num / den


def dirichlet_sq(length: int, theta, n: int) -> np.ndarray:
    """|sum_{r<length} exp(j 2pi r theta / n)|^2 for integer theta, n not dividing theta."""
    theta = np.asarray(theta, dtype=np.int64)
    return _sin_sq_ratio(length * theta, n, theta, n)


def _check_wsn_k(pair: MultiplexPair, k) -> np.ndarray:
    k = np.asarray(k, dtype=np.int64)
    span = pair.n_fft - pair.n_active_nsn
    if np.any((k < 0) | (k >= span) | (k % pair.q != 0)):
        raise IndexOutOfRange(f"WSN index must be a multiple of Q={pair.q} in [0, {span})")
    return k


def _check_nsn(pair: MultiplexPair, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    if np.any((v < 0) | (v >= pair.n_active_nsn)):
        raise IndexOutOfRange(f"NSN index must lie in [0, {pair.n_active_nsn})")
    return v


def kernel_psi(k, v, pair: MultiplexPair, literal: bool = False) -> np.ndarray:
    """Individual-CP WSN->NSN kernel, summed over the Q WSN symbols.

    The first WSN symbol loses ``N_CP - M_CP`` samples to the NSN CP removal,
    so it contributes a Dirichlet term of length ``M + M_CP - N_CP``; the other
    ``Q-1`` symbols fall entirely in the NSN window with length ``M + M_CP``.

    With ``literal=True`` the numerators use ``k - v`` instead of the full
    spectral distance ``k - v + eta1*N``. The two agree only when
    ``eta1*(M + M_CP - N_CP)`` and ``eta1*(M + M_CP)`` are integers.
    """
    k, v = np.broadcast_arrays(_check_wsn_k(pair, k), _check_nsn(pair, v))
    n = pair.n_fft
    theta = k - v + pair.n_active_nsn
    l_first = pair.m_fft + pair.m_cp - pair.n_cp
    l_rest = pair.m_fft + pair.m_cp
    arg = (k - v) if literal else theta
    return _sin_sq_ratio(l_first * arg, n, theta, n) + (pair.q - 1) * _sin_sq_ratio(
        l_rest * arg, n, theta, n
    )


def kernel_xi_sq(k, p, pair: MultiplexPair) -> np.ndarray:
    """NSN->WSN kernel |sin(pi(k-p)/Q) / sin(pi(k-p-eta1*N)/N)|^2 (both CP modes)."""
    k, p = np.broadcast_arrays(_check_nsn(pair, k), _check_wsn_k(pair, p))
    return _sin_sq_ratio(k - p, pair.q, k - p - pair.n_active_nsn, pair.n_fft)


def kernel_zeta_sq(k, v, pair: MultiplexPair) -> np.ndarray:
    """Common-CP WSN->NSN kernel |sin(pi(k-v)/Q) / sin(pi(k-v+eta1*N)/N)|^2."""
    k, v = np.broadcast_arrays(_check_wsn_k(pair, k), _check_nsn(pair, v))
    return _sin_sq_ratio(k - v, pair.q, k - v + pair.n_active_nsn, pair.n_fft)


@dataclass(frozen=True)
class IniMatrix:
    """Expected INI power from each interfering subcarrier (rows) to each victim (columns)."""

    direction: Direction
    cp_mode: CpMode
    entries: np.ndarray
    interferer_indices: np.ndarray
    victim_indices: np.ndarray

    @property
    def victim(self) -> Victim:
        return self.direction.victim


def ini_matrix(
    pair: MultiplexPair,
    direction: Direction,
    cp_mode: CpMode | None = None,
    literal: bool = False,
) -> IniMatrix:
    direction = Direction(direction)
    cp_mode = CpMode(cp_mode or pair.cp_mode)
    n, m = pair.n_fft, pair.m_fft
    ks_wsn = wsn_k_indices(pair)
    ks_nsn = active_indices_nsn(pair)
    if direction is Direction.WSN_TO_NSN:
        k, v = ks_wsn[:, None], ks_nsn[None, :]
        if cp_mode is CpMode.INDIVIDUAL:
            entries = pair.power_wsn / (n * m) * kernel_psi(k, v, pair, literal=literal)
        else:
            entries = pair.power_wsn / m**2 * kernel_zeta_sq(k, v, pair)
        return IniMatrix(direction, cp_mode, entries, ks_wsn, ks_nsn)
    # Same expression for both CP modes.
    entries = pair.power_nsn / (n * m) * kernel_xi_sq(ks_nsn[:, None], ks_wsn[None, :], pair)
    return IniMatrix(direction, cp_mode, entries, ks_nsn, ks_wsn)


def total_ini_per_victim(m: IniMatrix) -> np.ndarray:
    # Cross terms vanish in expectation for independent zero-mean data.
    return np.sum(m.entries, axis=0)


@dataclass(frozen=True)
class SirProfile:
    """Per-subcarrier SIR of one victim numerology.

    ``subcarriers`` are indices in the victim's own DFT grid. Victims that
    receive no interference at all carry ``inf`` in ``sir_linear`` and are
    marked in ``infinite``.
    """

    victim: Victim
    cp_mode: CpMode
    subcarriers: np.ndarray
    ini: np.ndarray
    sir_linear: np.ndarray
    infinite: np.ndarray

    @property
    def sir_db(self) -> np.ndarray:
        return linear_to_db(self.sir_linear)

    @property
    def ini_db(self) -> np.ndarray:
        return linear_to_db(self.ini)


def make_sir_profile(
    pair: MultiplexPair, victim: Victim, cp_mode: CpMode, ini: np.ndarray, zero_floor: float = 0.0
) -> SirProfile:
    """SIR from per-victim INI; INI at or below ``zero_floor`` counts as none."""
    victim = Victim(victim)
    if victim is Victim.NSN:
        power, subcarriers = pair.power_nsn, active_indices_nsn(pair)
    else:
        power, subcarriers = pair.power_wsn, wsn_bin_from_k(pair, wsn_k_indices(pair))
    ini = np.asarray(ini, dtype=float)
    infinite = ini <= zero_floor
    with np.errstate(divide="ignore"):
        sir = np.where(infinite, np.inf, power / np.where(infinite, 1.0, ini))
    return SirProfile(victim, CpMode(cp_mode), subcarriers, ini, sir, infinite)


def sir_profile(pair: MultiplexPair, victim: Victim, cp_mode: CpMode | None = None) -> SirProfile:
    victim = Victim(victim)
    cp_mode = CpMode(cp_mode or pair.cp_mode)
    ini = total_ini_per_victim(ini_matrix(pair, victim.direction, cp_mode))
    return make_sir_profile(pair, victim, cp_mode, ini)


@dataclass(frozen=True)
class AverageMetrics:
    avg_ini_nsn: float
    avg_ini_wsn: float
    avg_sir_nsn_db: float
    avg_sir_wsn_db: float
    avg_sir_system_db: float
    n_infinite_nsn: int
    n_infinite_wsn: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _mean_finite_db(*profiles: SirProfile) -> float:
    vals = np.concatenate([p.sir_db[~p.infinite] for p in profiles])
    return float(np.mean(vals)) if vals.size else float("inf")


def summarize(nsn: SirProfile, wsn: SirProfile) -> AverageMetrics:
    """Average INI (linear) and SIR (mean of dB, finite entries only).

    The system figure pools the subcarriers of both numerologies, so each
    numerology weighs in by its number of active subcarriers.
    """
    return AverageMetrics(
        avg_ini_nsn=float(np.mean(nsn.ini)),
        avg_ini_wsn=float(np.mean(wsn.ini)),
        avg_sir_nsn_db=_mean_finite_db(nsn),
        avg_sir_wsn_db=_mean_finite_db(wsn),
        avg_sir_system_db=_mean_finite_db(nsn, wsn),
        n_infinite_nsn=int(np.count_nonzero(nsn.infinite)),
        n_infinite_wsn=int(np.count_nonzero(wsn.infinite)),
    )


def average_metrics(pair: MultiplexPair, cp_mode: CpMode | None = None) -> AverageMetrics:
    return summarize(
        sir_profile(pair, Victim.NSN, cp_mode), sir_profile(pair, Victim.WSN, cp_mode)
    )
