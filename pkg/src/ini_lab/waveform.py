"""Transmitter and receiver chains for one T_LCM block.

Frequency grids and time signals are plain complex ndarrays whose last axis
holds bins or samples; any leading axes are batch dimensions and pass
through untouched. A WSN block carries the Q symbol grids on the
second-to-last axis.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadSymbolIndex, FramingMismatch, LengthMismatch, SizeMismatch
from .numerology import CpMode, MultiplexPair, active_indices_wsn, geometry


@dataclass(frozen=True)
class WsnBlock:
    """Q WSN symbol grids of M bins each, shape ``(..., Q, M)``."""

    grids: np.ndarray
    framing: CpMode

    def __post_init__(self):
        object.__setattr__(self, "grids", np.asarray(self.grids, dtype=complex))
        object.__setattr__(self, "framing", CpMode(self.framing))
        if self.grids.ndim < 2:
            raise SizeMismatch("WSN block needs shape (..., Q, M)")


def map_nsn(data, pair: MultiplexPair) -> np.ndarray:
    data = np.asarray(data, dtype=complex)
    if data.shape[-1] != pair.n_active_nsn:
        raise LengthMismatch(f"NSN data length {data.shape[-1]} != eta1*N = {pair.n_active_nsn}")
    grid = np.zeros(data.shape[:-1] + (pair.n_fft,), dtype=complex)
    grid[..., : pair.n_active_nsn] = data
    return grid


def map_wsn(data, pair: MultiplexPair) -> np.ndarray:
    data = np.asarray(data, dtype=complex)
    if data.shape[-1] != pair.n_active_wsn:
        raise LengthMismatch(f"WSN data length {data.shape[-1]} != eta2*M = {pair.n_active_wsn}")
    grid = np.zeros(data.shape[:-1] + (pair.m_fft,), dtype=complex)
    grid[..., pair.wsn_first_bin :] = data
    return grid


def idft_unitary(grid) -> np.ndarray:
    return np.fft.ifft(np.asarray(grid, dtype=complex), norm="ortho")


def dft_unitary(signal, size: int) -> np.ndarray:
    signal = np.asarray(signal, dtype=complex)
    if signal.shape[-1] != size:
        raise SizeMismatch(f"DFT size {size} != signal length {signal.shape[-1]}")
    return np.fft.fft(signal, norm="ortho")


def add_cp(symbol: np.ndarray, cp_len: int) -> np.ndarray:
    return np.concatenate([symbol[..., symbol.shape[-1] - cp_len :], symbol], axis=-1)


def _nsn_stream(nsn_grid, pair: MultiplexPair) -> np.ndarray | None:
    if nsn_grid is None:
        return None
    nsn_grid = np.asarray(nsn_grid, dtype=complex)
    if nsn_grid.shape[-1] != pair.n_fft:
        raise SizeMismatch(f"NSN grid has {nsn_grid.shape[-1]} bins, expected {pair.n_fft}")
    return add_cp(idft_unitary(nsn_grid), pair.n_cp)


def _wsn_symbols(wsn_block: WsnBlock | None, pair: MultiplexPair, framing: CpMode):
    if wsn_block is None:
        return None
    if wsn_block.framing is not framing:
        raise FramingMismatch(f"WSN block framed as {wsn_block.framing.value}, expected {framing.value}")
    if wsn_block.grids.shape[-2:] != (pair.q, pair.m_fft):
        raise SizeMismatch(f"WSN block shape {wsn_block.grids.shape[-2:]} != (Q, M) = {(pair.q, pair.m_fft)}")
    return idft_unitary(wsn_block.grids)


def _compose(nsn, wsn) -> np.ndarray:
    if nsn is None and wsn is None:
        raise LengthMismatch("at least one numerology must transmit")
    if nsn is None:
        return wsn
    if wsn is None:
        return nsn
    return nsn + wsn


def frame_individual(nsn_grid, wsn_block: WsnBlock | None, pair: MultiplexPair) -> np.ndarray:
    """Composite block with a CP on every WSN symbol; ``None`` silences a side."""
    nsn = _nsn_stream(nsn_grid, pair)
    sym = _wsn_symbols(wsn_block, pair, CpMode.INDIVIDUAL)
    wsn = None
    if sym is not None:
        framed = add_cp(sym, pair.m_cp)
        wsn = framed.reshape(framed.shape[:-2] + (-1,))
    return _compose(nsn, wsn)


def frame_common(nsn_grid, wsn_block: WsnBlock | None, pair: MultiplexPair) -> np.ndarray:
    """Composite block whose Q bare WSN symbols share one N_CP-long prefix."""
    nsn = _nsn_stream(nsn_grid, pair)
    sym = _wsn_symbols(wsn_block, pair, CpMode.COMMON)
    wsn = None
    if sym is not None:
        wsn = add_cp(sym.reshape(sym.shape[:-2] + (-1,)), pair.n_cp)
    return _compose(nsn, wsn)


def frame(nsn_grid, wsn_block: WsnBlock | None, pair: MultiplexPair, cp_mode: CpMode) -> np.ndarray:
    if CpMode(cp_mode) is CpMode.INDIVIDUAL:
        return frame_individual(nsn_grid, wsn_block, pair)
    return frame_common(nsn_grid, wsn_block, pair)


def _check_block(signal, pair: MultiplexPair) -> np.ndarray:
    signal = np.asarray(signal, dtype=complex)
    expected = geometry(pair).lcm_block_samples
    if signal.shape[-1] != expected:
        raise LengthMismatch(f"signal has {signal.shape[-1]} samples, expected {expected}")
    return signal


def _check_q(pair: MultiplexPair, q: int) -> None:
    if not 0 <= q < pair.q:
        raise BadSymbolIndex(f"symbol index {q} outside 0..{pair.q - 1}")


def rx_nsn(signal, pair: MultiplexPair) -> np.ndarray:
    """Active NSN bins after CP removal and an N-point unitary DFT."""
    signal = _check_block(signal, pair)
    spec = dft_unitary(signal[..., pair.n_cp :], pair.n_fft)
    return spec[..., : pair.n_active_nsn]


def rx_wsn_individual(signal, pair: MultiplexPair, q: int) -> np.ndarray:
    signal = _check_block(signal, pair)
    _check_q(pair, q)
    start = q * (pair.m_fft + pair.m_cp) + pair.m_cp
    spec = dft_unitary(signal[..., start : start + pair.m_fft], pair.m_fft)
    return spec[..., active_indices_wsn(pair)]


def rx_wsn_common(signal, pair: MultiplexPair, q: int) -> np.ndarray:
    signal = _check_block(signal, pair)
    _check_q(pair, q)
    start = pair.n_cp + q * pair.m_fft
    spec = dft_unitary(signal[..., start : start + pair.m_fft], pair.m_fft)
    return spec[..., active_indices_wsn(pair)]


def rx_wsn(signal, pair: MultiplexPair, q: int, cp_mode: CpMode) -> np.ndarray:
    if CpMode(cp_mode) is CpMode.INDIVIDUAL:
        return rx_wsn_individual(signal, pair, q)
    return rx_wsn_common(signal, pair, q)


def write_raw(path, signal) -> None:
    """Dump samples as interleaved little-endian float64 (re, im) pairs, no header."""
    np.asarray(signal, dtype="<c16").ravel().tofile(path)


def read_raw(path) -> np.ndarray:
    return np.fromfile(path, dtype="<c16").astype(complex)
