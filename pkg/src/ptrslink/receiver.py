"""CPE estimation from PT-RS, de-rotation and link-quality metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EstimationError

__all__ = [
    "CpeEstimate",
    "EvmReport",
    "EVM_REQUIREMENT_PERCENT",
    "estimate_cpe",
    "interpolate_cpe",
    "compensate",
    "evm",
    "symbol_error_rate",
    "cpe_rmse",
]

# Tx EVM requirements by modulation order (percent of reference amplitude).
EVM_REQUIREMENT_PERCENT = {4: 17.5, 16: 12.5, 64: 8.0}


@dataclass(frozen=True, eq=False)
class CpeEstimate:
    """Per-symbol common-phase estimate.

    ``measured`` flags symbols whose phase came from pilots; the rest carry
    interpolated values and have ``n_pilots`` 0.
    """

    phase_rad: np.ndarray
    measured: np.ndarray
    n_pilots: np.ndarray

    @property
    def n_symbols(self) -> int:
        return self.phase_rad.size


@dataclass(frozen=True)
class EvmReport:
    evm_percent: float
    evm_db: float
    p_error: float
    p_reference: float
    modulation: int
    passes_requirement: bool | None


def estimate_cpe(rx_values, ptrs_positions, pilot_value: complex = 1 + 0j,
                 power_boost_db: float = 0.0, interpolate: bool = True) -> CpeEstimate:
    """Pilot-coherent CPE: per symbol, arg of the sum of rx * conj(expected pilot).

    Coherent summation before taking the angle is wrap-safe and optimal at low
    SNR; the phase is invariant to the (real, positive) boost amplitude.
    Symbols without pilots are filled by :func:`interpolate_cpe` unless
    ``interpolate`` is disabled.
    """
    rx = np.asarray(rx_values)
    if rx.ndim != 2:
        raise ValueError("rx_values must be a (subcarriers x symbols) matrix")
    n_sc, n_sym = rx.shape
    if not ptrs_positions:
        raise EstimationError("no PT-RS positions to estimate from")
    arr = np.array(sorted(ptrs_positions), dtype=int)
    if arr[:, 0].min() < 0 or arr[:, 0].max() >= n_sc or arr[:, 1].min() < 0 or arr[:, 1].max() >= n_sym:
        raise ValueError("PT-RS position outside the grid")
    expected = pilot_value * 10.0 ** (power_boost_db / 20.0)
    sums = np.zeros(n_sym, dtype=complex)
    counts = np.zeros(n_sym, dtype=int)
    np.add.at(sums, arr[:, 1], rx[arr[:, 0], arr[:, 1]] * np.conj(expected))
    np.add.at(counts, arr[:, 1], 1)
    measured = counts > 0
    phase = np.zeros(n_sym)
    phase[measured] = np.angle(sums[measured])
    est = CpeEstimate(phase_rad=phase, measured=measured, n_pilots=counts)
    if interpolate and not measured.all():
        est = interpolate_cpe(est)
    return est


def interpolate_cpe(est: CpeEstimate) -> CpeEstimate:
    """Fill non-measured symbols by linear interpolation on unwrapped phase.

    Measured symbols keep their values; beyond the first/last measured symbol
    the nearest measured value is held.
    """
    if not est.measured.any():
        raise EstimationError("no measured symbols to interpolate from")
    if est.measured.all():
        return CpeEstimate(est.phase_rad.copy(), est.measured.copy(), est.n_pilots.copy())
    m_idx = np.flatnonzero(est.measured)
    unwrapped = np.unwrap(est.phase_rad[m_idx])
    filled = np.interp(np.arange(est.n_symbols), m_idx, unwrapped)
    phase = est.phase_rad.copy()
    phase[~est.measured] = filled[~est.measured]
    return CpeEstimate(phase_rad=phase, measured=est.measured.copy(), n_pilots=est.n_pilots.copy())


def compensate(rx_values, est: CpeEstimate) -> np.ndarray:
    """De-rotate every RE of symbol s by exp(-j phase[s])."""
    rx = np.asarray(rx_values)
    if rx.ndim != 2 or rx.shape[1] != est.n_symbols:
        raise ValueError("estimate length does not match the symbol count")
    return rx * np.exp(-1j * est.phase_rad)[None, :]


def evm(rx_data, ref_data, modulation: int) -> EvmReport:
    """Error vector magnitude of rx against the reference symbols."""
    rx = np.asarray(rx_data, dtype=complex).ravel()
    ref = np.asarray(ref_data, dtype=complex).ravel()
    if rx.size == 0:
        raise ValueError("empty input")
    if rx.size != ref.size:
        raise ValueError(f"length mismatch {rx.size} vs {ref.size}")
    p_error = float(np.mean(np.abs(rx - ref) ** 2))
    p_reference = float(np.mean(np.abs(ref) ** 2))
    ratio = p_error / p_reference
    if ratio == 0.0:
        evm_db, evm_percent = -math.inf, 0.0
    else:
        evm_db = 10.0 * math.log10(ratio)
        evm_percent = 100.0 * math.sqrt(ratio)
    req = EVM_REQUIREMENT_PERCENT.get(modulation)
    passes = None if req is None else bool(evm_percent <= req)
    return EvmReport(evm_percent=evm_percent, evm_db=evm_db, p_error=p_error,
                     p_reference=p_reference, modulation=modulation,
                     passes_requirement=passes)


def symbol_error_rate(rx_bits, tx_bits, bits_per_symbol: int) -> float:
    """Fraction of bits_per_symbol groups with any bit mismatch."""
    rx = np.asarray(rx_bits, dtype=np.uint8).ravel()
    tx = np.asarray(tx_bits, dtype=np.uint8).ravel()
    if rx.size != tx.size:
        raise ValueError(f"bit count mismatch {rx.size} vs {tx.size}")
    if rx.size % bits_per_symbol != 0:
        raise ValueError("bit count not divisible by bits_per_symbol")
    diffs = (rx != tx).reshape(-1, bits_per_symbol)
    return float(diffs.any(axis=1).mean())


def cpe_rmse(estimated_phase_rad, true_phase_rad) -> float:
    """RMS of the wrapped phase-estimate error."""
    d = np.angle(np.exp(1j * (np.asarray(estimated_phase_rad) - np.asarray(true_phase_rad))))
    return float(np.sqrt(np.mean(d**2)))
