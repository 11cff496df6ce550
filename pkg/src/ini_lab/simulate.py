"""Time-domain INI measurement: the reference the closed forms are checked against.

Interference is isolated by silencing the victim numerology, which is exact
because the whole chain is linear.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytic, waveform
from .channel import ChannelModel, apply, equalize
from .errors import BadIndex, ConfigError, UnsupportedChannel
from .numerology import (
    CpMode,
    Direction,
    MultiplexPair,
    Victim,
    active_indices_nsn,
    active_indices_wsn,
    wsn_bin_from_k,
    wsn_k_indices,
)

CHUNK_TRIALS = 1024
ZERO_ABS = 1e-15


def default_workers() -> int:
    env = os.environ.get("INI_LAB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"INI_LAB_THREADS must be an integer, got {env!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


@dataclass(frozen=True)
class RngSpec:
    """Seed for the Monte-Carlo engine.

    Every chunk of ``CHUNK_TRIALS`` trials draws from its own PCG64 stream,
    keyed by ``(seed, chunk index)`` through ``SeedSequence`` spawn keys, so
    results do not depend on how chunks are spread over workers.
    """

    seed: int = 1
    algorithm: str = "pcg64"

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.algorithm != "pcg64":
            raise ConfigError(f"unsupported RNG algorithm {self.algorithm!r}")

    def generator(self, chunk: int) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(chunk,))
        return np.random.Generator(np.random.PCG64(ss))


def draw_symbols(rng: np.random.Generator, shape, modulation: str = "bpsk") -> np.ndarray:
    """Unit-power i.i.d. constellation points."""
    if modulation == "bpsk":
        return (1 - 2 * rng.integers(0, 2, size=shape)).astype(complex)
    if modulation == "qpsk":
        bits = 1 - 2 * rng.integers(0, 2, size=tuple(shape) + (2,))
        return (bits[..., 0] + 1j * bits[..., 1]) / np.sqrt(2)
    raise ConfigError(f"unsupported modulation {modulation!r}")


def _rx_victim(signal, pair, cp_mode, direction, channel=None) -> np.ndarray:
    """Victim bins for every WSN window: shape (..., n_victims) or (..., Q, n_victims)."""
    if direction is Direction.WSN_TO_NSN:
        out = waveform.rx_nsn(signal, pair)
        if channel is not None:
            out = equalize(out, channel, pair.n_fft, active_indices_nsn(pair))
        return out
    out = np.stack([waveform.rx_wsn(signal, pair, q, cp_mode) for q in range(pair.q)], axis=-2)
    if channel is not None:
        out = equalize(out, channel, pair.m_fft, active_indices_wsn(pair))
    return out


def _single_tone_powers(pair, cp_mode, direction, ks, amplitude=1.0) -> np.ndarray:
    """|victim bin|^2 for each interfering tone in ``ks``.

    WSN->NSN: shape (len(ks), Q, n_nsn), one slice per WSN symbol carrying the tone.
    NSN->WSN: shape (len(ks), Q, n_wsn), one slice per WSN victim window.
    """
    ks = np.asarray(ks, dtype=np.int64)
    rows = np.arange(ks.size)
    if direction is Direction.WSN_TO_NSN:
        grids = np.zeros((ks.size, pair.q, pair.q, pair.m_fft), dtype=complex)
        bins = wsn_bin_from_k(pair, ks)
        for q in range(pair.q):
            grids[rows, q, q, bins] = amplitude
        sig = waveform.frame(None, waveform.WsnBlock(grids, cp_mode), pair, cp_mode)
    else:
        grids = np.zeros((ks.size, pair.n_fft), dtype=complex)
        grids[rows, ks] = amplitude
        sig = waveform.frame(grids, None, pair, cp_mode)
    return np.abs(_rx_victim(sig, pair, cp_mode, direction)) ** 2


def _check_tone(pair, direction, k) -> None:
    valid = wsn_k_indices(pair) if direction is Direction.WSN_TO_NSN else active_indices_nsn(pair)
    if k not in set(valid.tolist()):
        raise BadIndex(f"interferer index {k} is not active for {direction.value}")


def measure_ini_single_tone(
    pair: MultiplexPair,
    cp_mode: CpMode,
    direction: Direction,
    k: int,
    q: int | None = None,
) -> np.ndarray:
    """Received power at each victim subcarrier from a unit tone on interferer ``k``.

    For WSN->NSN, ``q`` picks the WSN symbol carrying the tone; ``None`` sums
    the Q per-symbol powers (independent data in each symbol). For NSN->WSN,
    ``q`` picks the victim symbol window; ``None`` averages over windows.
    """
    cp_mode, direction = CpMode(cp_mode), Direction(direction)
    _check_tone(pair, direction, k)
    if q is not None and not 0 <= q < pair.q:
        raise BadIndex(f"symbol index {q} outside 0..{pair.q - 1}")
    p = _single_tone_powers(pair, cp_mode, direction, [k])[0]
    if q is not None:
        return p[q]
    return p.sum(axis=0) if direction is Direction.WSN_TO_NSN else p.mean(axis=0)


def oracle_ini_matrix(pair: MultiplexPair, cp_mode: CpMode, direction: Direction) -> np.ndarray:
    """Single-tone measurements for every interferer, shaped like ``analytic.ini_matrix``."""
    cp_mode, direction = CpMode(cp_mode), Direction(direction)
    if direction is Direction.WSN_TO_NSN:
        ks, power = wsn_k_indices(pair), pair.power_wsn
    else:
        ks, power = active_indices_nsn(pair), pair.power_nsn
    p = _single_tone_powers(pair, cp_mode, direction, ks, amplitude=np.sqrt(power))
    return p.sum(axis=1) if direction is Direction.WSN_TO_NSN else p.mean(axis=1)


def relative_error(value, reference, abs_floor: float = ZERO_ABS) -> np.ndarray:
    """Elementwise |value-reference|/|reference|; absolute where both sit below ``abs_floor``."""
    value, reference = np.asarray(value, float), np.asarray(reference, float)
    diff = np.abs(value - reference)
    tiny = np.maximum(np.abs(value), np.abs(reference)) < abs_floor
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(tiny, diff, diff / np.abs(reference))
    return rel


@dataclass(frozen=True)
class MeasurementReport:
    direction: Direction
    cp_mode: CpMode
    per_victim_ini: np.ndarray
    per_victim_std: np.ndarray
    trials: int
    max_rel_err_vs_analytic: float
    per_entry_ini: np.ndarray | None = None

    @property
    def standard_error(self) -> np.ndarray:
        return self.per_victim_std / np.sqrt(self.trials)


def _chunk_stats(pair, cp_mode, direction, rng_spec, chunk, n_trials, modulation, channel):
    rng = rng_spec.generator(chunk)
    if direction is Direction.WSN_TO_NSN:
        data = np.sqrt(pair.power_wsn) * draw_symbols(rng, (n_trials, pair.q, pair.n_active_wsn), modulation)
        block = waveform.WsnBlock(waveform.map_wsn(data, pair), cp_mode)
        sig = waveform.frame(None, block, pair, cp_mode)
    else:
        data = np.sqrt(pair.power_nsn) * draw_symbols(rng, (n_trials, pair.n_active_nsn), modulation)
        sig = waveform.frame(waveform.map_nsn(data, pair), None, pair, cp_mode)
    if channel is not None:
        sig = apply(sig, channel, pair)
    power = np.abs(_rx_victim(sig, pair, cp_mode, direction, channel)) ** 2
    if direction is Direction.NSN_TO_WSN:
        power = power.mean(axis=-2)
    mean = power.mean(axis=0)
    m2 = np.sum((power - mean) ** 2, axis=0)
    return n_trials, mean, m2


def measure_ini_ensemble(
    pair: MultiplexPair,
    cp_mode: CpMode,
    direction: Direction,
    trials: int = 10_000,
    rng: RngSpec | None = None,
    modulation: str = "bpsk",
    channel: ChannelModel | None = None,
    workers: int | None = None,
) -> MeasurementReport:
    """Monte-Carlo mean INI per victim with random data on every interfering subcarrier.

    For NSN->WSN each trial's sample is the average over the Q victim windows.
    A non-identity ``channel`` is only supported with individual CP; victim
    bins are then equalized with the ideal one-tap equalizer.
    """
    cp_mode, direction = CpMode(cp_mode), Direction(direction)
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    rng = rng or RngSpec()
    if channel is not None and channel.is_identity:
        channel = None
    if channel is not None:
        if cp_mode is CpMode.COMMON:
            raise UnsupportedChannel("common-CP mode needs a block equalizer; only the identity channel is supported")
        channel.check_against(pair)
    n_chunks = -(-trials // CHUNK_TRIALS)
    sizes = [min(CHUNK_TRIALS, trials - c * CHUNK_TRIALS) for c in range(n_chunks)]
    workers = workers or default_workers()

    def run(c):
        return _chunk_stats(pair, cp_mode, direction, rng, c, sizes[c], modulation, channel)

    if workers > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=min(workers, n_chunks)) as pool:
            stats = list(pool.map(run, range(n_chunks)))
    else:
        stats = [run(c) for c in range(n_chunks)]

    # Chan et al. pairwise merge, always in chunk order.
    count, mean, m2 = stats[0]
    for n_b, mean_b, m2_b in stats[1:]:
        total = count + n_b
        delta = mean_b - mean
        mean = mean + delta * (n_b / total)
        m2 = m2 + m2_b + delta**2 * (count * n_b / total)
        count = total
    std = np.sqrt(np.maximum(m2, 0.0) / (count - 1)) if count > 1 else np.zeros_like(mean)

    reference = analytic.total_ini_per_victim(analytic.ini_matrix(pair, direction, cp_mode))
    err = float(np.max(relative_error(mean, reference), initial=0.0))
    return MeasurementReport(direction, cp_mode, mean, std, trials, err)


def measure_sir(
    pair: MultiplexPair,
    cp_mode: CpMode | None = None,
    trials: int = 10_000,
    rng: RngSpec | None = None,
    modulation: str = "bpsk",
    channel: ChannelModel | None = None,
    workers: int | None = None,
) -> dict[Victim, analytic.SirProfile]:
    """Per-victim SIR with INI from the ensemble and desired power as configured."""
    cp_mode = CpMode(cp_mode or pair.cp_mode)
    out = {}
    for victim in Victim:
        rep = measure_ini_ensemble(
            pair, cp_mode, victim.direction, trials, rng, modulation, channel, workers
        )
        interferer_power = pair.power_wsn if victim is Victim.NSN else pair.power_nsn
        out[victim] = analytic.make_sir_profile(
            pair, victim, cp_mode, rep.per_victim_ini, zero_floor=1e-12 * interferer_power
        )
    return out


def cross_validate_report(pair: MultiplexPair, cp_mode: CpMode, literal: bool = False) -> dict[Direction, float]:
    """Worst relative error of each closed-form INI matrix against the single-tone oracle."""
    cp_mode = CpMode(cp_mode)
    out = {}
    for direction in Direction:
        model = analytic.ini_matrix(pair, direction, cp_mode, literal=literal).entries
        oracle = oracle_ini_matrix(pair, cp_mode, direction)
        out[direction] = float(np.max(relative_error(model, oracle), initial=0.0))
    return out


def cross_validate(pair: MultiplexPair, cp_mode: CpMode | None = None, literal: bool = False) -> float:
    return max(cross_validate_report(pair, CpMode(cp_mode or pair.cp_mode), literal).values())
