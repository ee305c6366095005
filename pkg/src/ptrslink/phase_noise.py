"""Oscillator phase-noise model and sample-stream synthesis.

The PSD model is a multi-pole/zero shape

    S(f) = PSD0 * prod_n (1 + (f/f_z,n)^2) / (1 + (f/f_p,n)^2)

with PSD0 in dBc/Hz at f=0 and an additive 20*log10(fc/fc_base) dB shift when
the oscillator runs at a carrier other than the one it was characterized at.
Discrete-time streams are synthesized by filtering white Gaussian noise
through the bilinear-transformed cascade of the first-order analog sections.

PSD convention: all densities here are the two-sided density evaluated at
positive frequencies (no one-sided doubling), so a white stream of variance
``v`` at rate ``fs`` sits at ``10*log10(v/fs)`` dBc/Hz.  ``psd_at``,
``design_shaping_filter`` and ``estimate_psd`` all share this convention.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy import signal

from .errors import ConfigError

__all__ = [
    "PoleZeroPsdModel",
    "PhaseNoiseProcess",
    "ShapingFilter",
    "SET_A",
    "SET_B",
    "with_carrier",
    "psd_at",
    "design_shaping_filter",
    "filter_response_db",
    "warmup_length",
    "generate",
    "estimate_psd",
    "write_psd_csv",
]

WARMUP_CAP = 2**20


@dataclass(frozen=True)
class PoleZeroPsdModel:
    """Multi-pole/zero phase-noise PSD parameter bundle."""

    psd0_dbc_hz: float
    zeros_hz: tuple
    poles_hz: tuple
    base_carrier_hz: float
    carrier_hz: float

    def __post_init__(self):
        zeros = tuple(float(z) for z in self.zeros_hz)
        poles = tuple(float(p) for p in self.poles_hz)
        object.__setattr__(self, "zeros_hz", zeros)
        object.__setattr__(self, "poles_hz", poles)
        if len(zeros) != len(poles) or len(zeros) < 1:
            raise ConfigError("zeros_hz and poles_hz must have the same length >= 1")
        for f in zeros + poles:
            if not np.isfinite(f) or f <= 0:
                raise ConfigError(f"pole/zero frequency must be finite and > 0, got {f}")
        if self.base_carrier_hz <= 0 or self.carrier_hz <= 0:
            raise ConfigError("carrier frequencies must be > 0")

    @property
    def carrier_shift_db(self) -> float:
        return 20.0 * np.log10(self.carrier_hz / self.base_carrier_hz)


# Parameter sets of practical 30 GHz / 60 GHz oscillators (frequencies in Hz).
SET_A = PoleZeroPsdModel(
    psd0_dbc_hz=-79.4,
    zeros_hz=(1.8e6, 2.2e6, 40e6),
    poles_hz=(0.1e6, 0.2e6, 8e6),
    base_carrier_hz=30e9,
    carrier_hz=30e9,
)
SET_B = PoleZeroPsdModel(
    psd0_dbc_hz=-70.0,
    zeros_hz=(0.02e6, 6e6, 10e6),
    poles_hz=(0.005e6, 0.4e6, 0.6e6),
    base_carrier_hz=60e9,
    carrier_hz=60e9,
)


def with_carrier(model: PoleZeroPsdModel, carrier_hz: float) -> PoleZeroPsdModel:
    """Same oscillator retuned to another operating carrier."""
    return replace(model, carrier_hz=float(carrier_hz))


@dataclass(frozen=True, eq=False)
class PhaseNoiseProcess:
    """A synthesized phase trajectory theta[n] in radians."""

    samples_rad: np.ndarray
    sample_rate_hz: float
    model: PoleZeroPsdModel | None
    seed: int


@dataclass(frozen=True, eq=False)
class ShapingFilter:
    """Discrete shaping cascade: second-order-section array plus input gain.

    Driving the cascade with unit-variance white Gaussian samples and scaling
    by ``gain`` yields a stream whose PSD matches ``psd_at`` of the model the
    filter was designed from.
    """

    sos: np.ndarray
    gain: float
    sample_rate_hz: float


def psd_at(model: PoleZeroPsdModel, f):
    """Evaluate the model PSD in dBc/Hz at frequency ``f`` (scalar or array)."""
    f_arr = np.asarray(f, dtype=float)
    if not np.all(np.isfinite(f_arr)) or np.any(f_arr < 0):
        raise ValueError("frequency must be finite and non-negative")
    ratio = np.ones_like(f_arr)
    for fz, fp in zip(model.zeros_hz, model.poles_hz):
        ratio = ratio * (1.0 + (f_arr / fz) ** 2) / (1.0 + (f_arr / fp) ** 2)
    out = model.psd0_dbc_hz + 10.0 * np.log10(ratio) + model.carrier_shift_db
    if np.isscalar(f) or f_arr.ndim == 0:
        return float(out)
    return out


def design_shaping_filter(model: PoleZeroPsdModel, sample_rate_hz: float) -> ShapingFilter:
    """Bilinear-transform the analog sections into a discrete shaping cascade.

    Each analog section is H_n(s) = (1 + s/(2 pi f_z,n)) / (1 + s/(2 pi f_p,n)),
    which has unit DC gain, so the cascade DC gain is 1 and the input ``gain``
    alone fixes the PSD level.  No frequency pre-warping is applied; the
    residual warp stays well inside 0.5 dB for poles/zeros far below Nyquist.
    """
    fs = float(sample_rate_hz)
    worst = max(model.zeros_hz + model.poles_hz)
    if fs <= 2.0 * worst:
        raise ConfigError(
            f"sample rate {fs:g} Hz too low: pole/zero at {worst:g} Hz needs > {2.0 * worst:g} Hz"
        )
    sections = []
    for fz, fp in zip(model.zeros_hz, model.poles_hz):
        wz = 2.0 * np.pi * fz
        wp = 2.0 * np.pi * fp
        b, a = signal.bilinear([1.0 / wz, 1.0], [1.0 / wp, 1.0], fs=fs)
        sections.append([b[0], b[1], 0.0, 1.0, a[1], 0.0])
    psd0_lin = 10.0 ** (psd_at(model, 0.0) / 10.0)
    gain = float(np.sqrt(psd0_lin * fs))
    return ShapingFilter(sos=np.asarray(sections), gain=gain, sample_rate_hz=fs)


def filter_response_db(filt: ShapingFilter, freqs_hz) -> np.ndarray:
    """Squared-magnitude response of the cascade in dB (gain excluded)."""
    freqs_hz = np.asarray(freqs_hz, dtype=float)
    w = 2.0 * np.pi * freqs_hz / filt.sample_rate_hz
    _, h = signal.sosfreqz(filt.sos, worN=w)
    return 20.0 * np.log10(np.abs(h))


def warmup_length(model: PoleZeroPsdModel, sample_rate_hz: float) -> int:
    """Samples discarded so the slowest pole's transient has settled."""
    n = int(np.ceil(8.0 * sample_rate_hz / min(model.poles_hz)))
    return min(n, WARMUP_CAP)


def generate(model: PoleZeroPsdModel, sample_rate_hz: float, count: int, seed: int) -> PhaseNoiseProcess:
    """Synthesize ``count`` phase samples at ``sample_rate_hz``, deterministic per seed."""
    if count < 1:
        raise ValueError("count must be >= 1")
    filt = design_shaping_filter(model, sample_rate_hz)
    warm = warmup_length(model, sample_rate_hz)
    rng = np.random.default_rng(seed)
    white = rng.standard_normal(count + warm)
    shaped = signal.sosfilt(filt.sos, white)
    theta = filt.gain * shaped[warm:]
    return PhaseNoiseProcess(
        samples_rad=theta,
        sample_rate_hz=float(sample_rate_hz),
        model=model,
        seed=int(seed),
    )


def estimate_psd(process: PhaseNoiseProcess, segment_len: int, overlap_frac: float = 0.5):
    """Averaged-periodogram PSD of a phase stream.

    Returns ``(freqs_hz, psd_dbc_hz)`` over bins from sample_rate/segment_len
    up to Nyquist, in the same density convention as ``psd_at``.
    """
    x = np.asarray(process.samples_rad)
    if segment_len > x.size:
        raise ValueError(f"segment_len {segment_len} exceeds sample count {x.size}")
    if not 0.0 <= overlap_frac < 1.0:
        raise ValueError("overlap_frac must be in [0, 1)")
    noverlap = int(segment_len * overlap_frac)
    freqs, pxx = signal.welch(
        x,
        fs=process.sample_rate_hz,
        window="hann",
        nperseg=segment_len,
        noverlap=noverlap,
        detrend=False,
        return_onesided=False,
        scaling="density",
    )
    half = segment_len // 2
    f_pos = np.abs(freqs[1 : half + 1])
    p_pos = np.maximum(pxx[1 : half + 1], 1e-300)
    return f_pos, 10.0 * np.log10(p_pos)


def write_psd_csv(path, freqs_hz, psd_dbc_hz) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("frequency_hz,psd_dbc_hz\n")
        for f, p in zip(freqs_hz, psd_dbc_hz):
            fh.write(f"{float(f)!r},{float(p)!r}\n")
