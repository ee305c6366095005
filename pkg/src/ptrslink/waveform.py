"""CP-OFDM / DFT-s-OFDM modulation, impairments and PAPR measurement.

Both transform directions are unitary (1/sqrt(N)), so the impairment-free
chain is the identity and a per-symbol constant phase passes through as a
pure common rotation of every subcarrier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .grid import ResourceGrid
from .phase_noise import PhaseNoiseProcess

__all__ = [
    "OfdmParams",
    "TimeSignal",
    "subcarrier_bin_indices",
    "ofdm_modulate",
    "ofdm_demodulate",
    "transform_precode",
    "transform_decode",
    "apply_phase_noise",
    "apply_awgn",
    "papr_db",
    "papr_ccdf",
    "ccdf",
    "ccdf_point",
    "symbol_cpe",
    "write_time_signal",
]


@dataclass(frozen=True)
class OfdmParams:
    """FFT size, cyclic prefix and occupied-bandwidth bookkeeping."""

    fft_size: int
    cp_len: int
    n_used: int
    subcarrier_spacing_hz: float

    def __post_init__(self):
        n = self.fft_size
        if n < 2 or (n & (n - 1)) != 0:
            raise ConfigError(f"fft_size must be a power of two, got {n}")
        if self.cp_len < 0:
            raise ConfigError("cp_len must be >= 0")
        if self.n_used % 2 != 0 or not 0 < self.n_used < n:
            raise ConfigError(
                f"n_used must be even and inside (0, fft_size); got {self.n_used} for N={n}"
            )
        if self.subcarrier_spacing_hz <= 0:
            raise ConfigError("subcarrier_spacing_hz must be > 0")

    @property
    def sample_rate_hz(self) -> float:
        return self.fft_size * self.subcarrier_spacing_hz

    @property
    def symbol_len(self) -> int:
        return self.fft_size + self.cp_len

    @classmethod
    def for_rb(cls, n_rb: int, fft_size: int = 1024, cp_len: int | None = None,
               subcarrier_spacing_hz: float = 120e3) -> "OfdmParams":
        if cp_len is None:
            cp_len = fft_size // 8
        return cls(fft_size=fft_size, cp_len=cp_len, n_used=12 * n_rb,
                   subcarrier_spacing_hz=subcarrier_spacing_hz)


@dataclass(frozen=True, eq=False)
class TimeSignal:
    samples: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        if np.asarray(self.samples).size == 0:
            raise ValueError("TimeSignal must be non-empty")


def subcarrier_bin_indices(params: OfdmParams) -> np.ndarray:
    """FFT bins of the occupied subcarriers: contiguous around DC, DC unused."""
    half = params.n_used // 2
    offsets = np.concatenate([np.arange(-half, 0), np.arange(1, half + 1)])
    return offsets % params.fft_size


def _grid_values(grid) -> np.ndarray:
    return grid.cells if isinstance(grid, ResourceGrid) else np.asarray(grid, dtype=complex)


def ofdm_modulate(grid, params: OfdmParams) -> TimeSignal:
    """Unitary IFFT per symbol with cyclic prefix, symbols concatenated."""
    values = _grid_values(grid)
    if values.ndim != 2 or values.shape[0] != params.n_used:
        raise ConfigError(
            f"grid has {values.shape[0] if values.ndim == 2 else '?'} subcarriers, "
            f"params expect {params.n_used}"
        )
    n_sym = values.shape[1]
    spectrum = np.zeros((params.fft_size, n_sym), dtype=complex)
    spectrum[subcarrier_bin_indices(params), :] = values
    td = np.fft.ifft(spectrum, axis=0, norm="ortho")
    if params.cp_len:
        td = np.vstack([td[-params.cp_len :, :], td])
    return TimeSignal(samples=td.reshape(-1, order="F"), sample_rate_hz=params.sample_rate_hz)


def ofdm_demodulate(sig: TimeSignal, params: OfdmParams, n_symbols: int) -> np.ndarray:
    """Strip CP, unitary FFT, extract occupied bins -> (n_used, n_symbols)."""
    samples = np.asarray(sig.samples)
    expected = n_symbols * params.symbol_len
    if samples.size != expected:
        raise ValueError(f"signal length {samples.size} != {n_symbols} x {params.symbol_len}")
    blocks = samples.reshape((params.symbol_len, n_symbols), order="F")
    fd = np.fft.fft(blocks[params.cp_len :, :], axis=0, norm="ortho")
    return fd[subcarrier_bin_indices(params), :]


def transform_precode(samples, m: int) -> np.ndarray:
    """Unitary m-point DFT of the pre-DFT vector (columns if 2-D)."""
    x = np.asarray(samples, dtype=complex)
    if x.shape[0] != m:
        raise ValueError(f"pre-DFT vector length {x.shape[0]} != m={m}")
    return np.fft.fft(x, axis=0, norm="ortho")


def transform_decode(samples, m: int) -> np.ndarray:
    """Inverse of :func:`transform_precode`."""
    x = np.asarray(samples, dtype=complex)
    if x.shape[0] != m:
        raise ValueError(f"vector length {x.shape[0]} != m={m}")
    return np.fft.ifft(x, axis=0, norm="ortho")


def apply_phase_noise(sig: TimeSignal, pn: PhaseNoiseProcess) -> TimeSignal:
    """Multiply by the noisy carrier exp(j theta[n]); magnitudes are preserved."""
    if pn.sample_rate_hz != sig.sample_rate_hz:
        raise ValueError(
            f"sample-rate mismatch: signal {sig.sample_rate_hz:g}, phase noise {pn.sample_rate_hz:g}"
        )
    n = np.asarray(sig.samples).size
    theta = np.asarray(pn.samples_rad)
    if theta.size < n:
        raise ValueError(f"phase-noise stream has {theta.size} samples, need {n}")
    return TimeSignal(samples=sig.samples * np.exp(1j * theta[:n]), sample_rate_hz=sig.sample_rate_hz)


def apply_awgn(sig: TimeSignal, snr_db: float, seed: int,
               reference_power: float | None = None) -> TimeSignal:
    """Add circularly-symmetric Gaussian noise at the given SNR, seeded.

    ``reference_power`` overrides the measured mean power as the SNR
    reference (e.g. per-transmitter power when several signals were summed).
    An infinite snr_db is the no-noise marker.
    """
    samples = np.asarray(sig.samples)
    if math.isinf(snr_db) and snr_db > 0:
        return TimeSignal(samples=samples.copy(), sample_rate_hz=sig.sample_rate_hz)
    p_ref = float(np.mean(np.abs(samples) ** 2)) if reference_power is None else float(reference_power)
    nvar = p_ref / 10.0 ** (snr_db / 10.0)
    rng = np.random.default_rng(seed)
    noise = np.sqrt(nvar / 2.0) * (rng.standard_normal(samples.size) + 1j * rng.standard_normal(samples.size))
    return TimeSignal(samples=samples + noise, sample_rate_hz=sig.sample_rate_hz)


def papr_db(samples, oversample: int = 1) -> float:
    """Peak-to-average power ratio of one symbol's samples, in dB."""
    x = np.asarray(samples, dtype=complex)
    if oversample > 1:
        n = x.size
        spec = np.fft.fft(x)
        padded = np.zeros(n * oversample, dtype=complex)
        half = n // 2
        padded[:half] = spec[:half]
        padded[-(n - half):] = spec[half:]
        x = np.fft.ifft(padded) * oversample
    p = np.abs(x) ** 2
    return float(10.0 * np.log10(p.max() / p.mean()))


def ccdf(values_db, thresholds_db) -> list:
    """Complementary CDF of the given per-symbol values at each threshold."""
    values = np.asarray(values_db, dtype=float)
    return [(float(t), float(np.mean(values > t))) for t in thresholds_db]


def ccdf_point(values_db, prob: float = 1e-3) -> float:
    """Threshold exceeded with probability ``prob`` (e.g. the 99.9% point)."""
    return float(np.quantile(np.asarray(values_db, dtype=float), 1.0 - prob))


def papr_ccdf(signals, thresholds_db, oversample: int = 1) -> list:
    """CCDF of per-symbol PAPR over an iterable of TimeSignals."""
    paprs = np.array([papr_db(s.samples, oversample=oversample) for s in signals])
    if paprs.size == 0:
        raise ValueError("need at least one signal")
    return ccdf(paprs, thresholds_db)


def symbol_cpe(pn: PhaseNoiseProcess, params: OfdmParams, n_symbols: int) -> np.ndarray:
    """Ground-truth common rotation per symbol: mean of exp(j theta) over each
    FFT window (CP samples excluded, exactly as demodulation sees it)."""
    need = n_symbols * params.symbol_len
    theta = np.asarray(pn.samples_rad)
    if theta.size < need:
        raise ValueError(f"phase-noise stream has {theta.size} samples, need {need}")
    win = theta[:need].reshape((params.symbol_len, n_symbols), order="F")[params.cp_len :, :]
    return np.exp(1j * win).mean(axis=0)


def write_time_signal(path, sig: TimeSignal, fmt: str = "bin") -> None:
    """Export samples as interleaved float32 pairs ('bin') or CSV ('csv')."""
    samples = np.asarray(sig.samples, dtype=complex)
    if fmt == "bin":
        inter = np.empty(2 * samples.size, dtype=np.float32)
        inter[0::2] = samples.real
        inter[1::2] = samples.imag
        with open(path, "wb") as fh:
            fh.write(inter.tobytes())
    elif fmt == "csv":
        with open(path, "w", newline="") as fh:
            fh.write("real,imag\n")
            for v in samples:
                fh.write(f"{float(v.real)!r},{float(v.imag)!r}\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
