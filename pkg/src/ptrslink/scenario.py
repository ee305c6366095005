"""Scenario files, validation and the Monte-Carlo seed policy.

Scenarios are TOML key-value trees with a mandatory ``schema_version``.
Unknown keys are hard errors: a silently ignored typo would invalidate a
Monte-Carlo campaign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError
from .phase_noise import SET_A, SET_B, PoleZeroPsdModel, with_carrier
from .ptrs import ChunkConfig, PtrsConfig
from .waveform import OfdmParams

__all__ = [
    "Scenario",
    "DensityParams",
    "FreqDensityParams",
    "InterferenceParams",
    "PaprParams",
    "MultiTrpParams",
    "SCHEMA_VERSION",
    "EXPERIMENTS",
    "splitmix64",
    "drop_seed",
    "stream_seed",
    "STREAM_AWGN",
    "STREAM_INTERFERER_PHASE",
    "STREAM_BITS",
    "STREAM_PHASE_NOISE",
    "STREAM_PAPR",
]

SCHEMA_VERSION = 1
EXPERIMENTS = (
    "single-run",
    "density-sweep",
    "freq-density-sweep",
    "interference",
    "papr",
    "multi-trp",
)
WAVEFORMS = ("cp-ofdm", "dft-s-ofdm")
PN_MODELS = ("set-a", "set-b", "custom", "none")

# ---------------------------------------------------------------------------
# seed policy: drop i gets base_seed XOR splitmix64(i); independent streams
# within a drop are derived from fixed labels so adding a stream never shifts
# the others.

_MASK64 = (1 << 64) - 1

STREAM_AWGN = 1
STREAM_INTERFERER_PHASE = 2
STREAM_PAPR = 3
STREAM_BITS = 16  # + transmitter index
STREAM_PHASE_NOISE = 64  # + transmitter index


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def drop_seed(base_seed: int, drop_index: int) -> int:
    return (base_seed & _MASK64) ^ splitmix64(drop_index)


def stream_seed(dseed: int, label: int) -> int:
    return splitmix64((dseed ^ splitmix64(label)) & _MASK64)


# ---------------------------------------------------------------------------
# experiment parameter bundles


@dataclass(frozen=True)
class DensityParams:
    l_values: tuple = (1, 2, 4)


@dataclass(frozen=True)
class FreqDensityParams:
    d_f_values: tuple = (1, 4)
    n_rb_values: tuple = (8, 32)


@dataclass(frozen=True)
class InterferenceParams:
    victim_offset: int = 0
    interferer_offset: int = 1
    # Relative interferer power; 0 dB keeps the degradation mechanism visible
    interferer_power_db: float = 0.0
    interferer_boost_db: float = 3.0


@dataclass(frozen=True)
class PaprParams:
    variants: tuple = ("cp-ofdm", "dft-s-ofdm", "dft-s-ofdm+ptrs")
    n_symbols: int = 100000
    oversample: int = 1


@dataclass(frozen=True)
class MultiTrpParams:
    n_trp: int = 2
    rb_offsets: tuple = (0, 1)


# ---------------------------------------------------------------------------
# schema: nested map of allowed keys -> expected python types

_NUM = (int, float)
_SCHEMA = {
    "schema_version": int,
    "name": str,
    "experiment": str,
    "waveform": str,
    "n_rb": int,
    "n_symbols": int,
    "modulation_order": int,
    "fft_size": int,
    "cp_len": int,
    "subcarrier_spacing_hz": _NUM,
    "snr_db": list,
    "n_drops": int,
    "base_seed": int,
    "phase_noise": {
        "model": str,
        "carrier_hz": _NUM,
        "psd0_dbc_hz": _NUM,
        "zeros_hz": list,
        "poles_hz": list,
        "base_carrier_hz": _NUM,
    },
    "ptrs": {
        "time_density": int,
        "freq_density_rb": int,
        "rb_offset": int,
        "sc_in_rb": int,
        "power_boost_db": _NUM,
    },
    "chunk": {
        "x_chunks": int,
        "k_per_chunk": int,
        "rb_thresholds": list,
        "time_density": int,
    },
    "density": {"l_values": list},
    "freq_density": {"d_f_values": list, "n_rb_values": list},
    "interference": {
        "victim_offset": int,
        "interferer_offset": int,
        "interferer_power_db": _NUM,
        "interferer_boost_db": _NUM,
    },
    "papr": {"variants": list, "n_symbols": int, "oversample": int},
    "multi_trp": {"n_trp": int, "rb_offsets": list},
}


def _check_keys(data: dict, schema: dict, prefix: str = "") -> None:
    for key, value in data.items():
        if key not in schema:
            raise ConfigError(f"unknown scenario key '{prefix}{key}'")
        expected = schema[key]
        if isinstance(expected, dict):
            if not isinstance(value, dict):
                raise ConfigError(f"scenario key '{prefix}{key}' must be a table")
            _check_keys(value, expected, prefix=f"{prefix}{key}.")
        else:
            if not isinstance(value, expected) or isinstance(value, bool):
                raise ConfigError(
                    f"scenario key '{prefix}{key}' has wrong type {type(value).__name__}"
                )


@dataclass(frozen=True)
class Scenario:
    """Fully resolved experiment description."""

    name: str = "scenario"
    experiment: str = "single-run"
    waveform: str = "cp-ofdm"
    n_rb: int = 32
    n_symbols: int = 14
    modulation_order: int = 64
    fft_size: int = 1024
    cp_len: int = 128
    subcarrier_spacing_hz: float = 120e3
    snr_db: tuple = (math.inf,)
    n_drops: int = 100
    base_seed: int = 1
    pn_model: PoleZeroPsdModel | None = SET_A
    ptrs: PtrsConfig = field(default_factory=PtrsConfig)
    chunk: ChunkConfig = field(default_factory=ChunkConfig)
    density: DensityParams = field(default_factory=DensityParams)
    freq_density: FreqDensityParams = field(default_factory=FreqDensityParams)
    interference: InterferenceParams = field(default_factory=InterferenceParams)
    papr: PaprParams = field(default_factory=PaprParams)
    multi_trp: MultiTrpParams = field(default_factory=MultiTrpParams)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment '{self.experiment}'")
        if self.waveform not in WAVEFORMS:
            raise ConfigError(f"unknown waveform '{self.waveform}'")
        if self.modulation_order not in (4, 16, 64, 256):
            raise ConfigError(f"unsupported modulation order {self.modulation_order}")
        if self.n_drops < 1:
            raise ConfigError("n_drops must be >= 1")
        if not self.snr_db:
            raise ConfigError("snr_db list must be non-empty")
        self.ofdm_params()  # validates fft/cp/n_rb consistency

    def ofdm_params(self, n_rb: int | None = None) -> OfdmParams:
        n_rb = self.n_rb if n_rb is None else n_rb
        return OfdmParams(
            fft_size=self.fft_size,
            cp_len=self.cp_len,
            n_used=12 * n_rb,
            subcarrier_spacing_hz=self.subcarrier_spacing_hz,
        )

    # -- loading ------------------------------------------------------------

    @classmethod
    def from_toml(cls, path) -> "Scenario":
        path = Path(path)
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
        return cls.from_dict(data, default_name=path.stem)

    @classmethod
    def from_dict(cls, data: dict, default_name: str = "scenario") -> "Scenario":
        _check_keys(data, _SCHEMA)
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ConfigError(
                f"scenario schema_version must be {SCHEMA_VERSION}, got {version!r}"
            )

        pn = data.get("phase_noise", {})
        model_name = pn.get("model", "set-a")
        if model_name not in PN_MODELS:
            raise ConfigError(f"unknown phase-noise model '{model_name}'")
        if model_name == "none":
            model = None
        elif model_name == "custom":
            try:
                model = PoleZeroPsdModel(
                    psd0_dbc_hz=float(pn["psd0_dbc_hz"]),
                    zeros_hz=tuple(pn["zeros_hz"]),
                    poles_hz=tuple(pn["poles_hz"]),
                    base_carrier_hz=float(pn["base_carrier_hz"]),
                    carrier_hz=float(pn.get("carrier_hz", pn["base_carrier_hz"])),
                )
            except KeyError as exc:
                raise ConfigError(f"custom phase-noise model missing key {exc}") from None
        else:
            model = SET_A if model_name == "set-a" else SET_B
            if "carrier_hz" in pn:
                model = with_carrier(model, float(pn["carrier_hz"]))

        fft_size = int(data.get("fft_size", 1024))
        cp_len = int(data.get("cp_len", fft_size // 8))

        ptrs_cfg = PtrsConfig(**{k: v for k, v in data.get("ptrs", {}).items()})
        chunk_in = dict(data.get("chunk", {}))
        if "rb_thresholds" in chunk_in:
            chunk_in["rb_thresholds"] = tuple(chunk_in["rb_thresholds"])
        chunk_cfg = ChunkConfig(**chunk_in)

        def sub(cls_, key, tuple_keys=()):
            kwargs = dict(data.get(key, {}))
            for tk in tuple_keys:
                if tk in kwargs:
                    kwargs[tk] = tuple(kwargs[tk])
            return cls_(**kwargs)

        return cls(
            name=str(data.get("name", default_name)),
            experiment=str(data.get("experiment", "single-run")),
            waveform=str(data.get("waveform", "cp-ofdm")),
            n_rb=int(data.get("n_rb", 32)),
            n_symbols=int(data.get("n_symbols", 14)),
            modulation_order=int(data.get("modulation_order", 64)),
            fft_size=fft_size,
            cp_len=cp_len,
            subcarrier_spacing_hz=float(data.get("subcarrier_spacing_hz", 120e3)),
            snr_db=tuple(float(s) for s in data.get("snr_db", [math.inf])),
            n_drops=int(data.get("n_drops", 100)),
            base_seed=int(data.get("base_seed", 1)),
            pn_model=model,
            ptrs=ptrs_cfg,
            chunk=chunk_cfg,
            density=sub(DensityParams, "density", ("l_values",)),
            freq_density=sub(FreqDensityParams, "freq_density", ("d_f_values", "n_rb_values")),
            interference=sub(InterferenceParams, "interference"),
            papr=sub(PaprParams, "papr", ("variants",)),
            multi_trp=sub(MultiTrpParams, "multi_trp", ("rb_offsets",)),
        )

    def with_overrides(self, base_seed: int | None = None, n_drops: int | None = None) -> "Scenario":
        sc = self
        if base_seed is not None:
            sc = replace(sc, base_seed=int(base_seed))
        if n_drops is not None:
            sc = replace(sc, n_drops=int(n_drops))
        return sc

    # -- reporting ------------------------------------------------------------

    def header_lines(self) -> list:
        """Resolved parameters echoed into every CSV (deterministic order)."""
        model = self.pn_model
        if model is None:
            pn_desc = "none"
        else:
            pn_desc = (
                f"psd0={model.psd0_dbc_hz} zeros={list(model.zeros_hz)} "
                f"poles={list(model.poles_hz)} base={model.base_carrier_hz:g} "
                f"carrier={model.carrier_hz:g}"
            )
        lines = [
            f"# scenario = {self.name}",
            f"# schema_version = {SCHEMA_VERSION}",
            f"# experiment = {self.experiment}",
            f"# waveform = {self.waveform}",
            f"# n_rb = {self.n_rb}",
            f"# n_symbols = {self.n_symbols}",
            f"# modulation_order = {self.modulation_order}",
            f"# fft_size = {self.fft_size}",
            f"# cp_len = {self.cp_len}",
            f"# subcarrier_spacing_hz = {self.subcarrier_spacing_hz:g}",
            f"# snr_db = {list(self.snr_db)}",
            f"# n_drops = {self.n_drops}",
            f"# base_seed = {self.base_seed}",
            f"# phase_noise = {pn_desc}",
            f"# ptrs = L={self.ptrs.time_density} d_f={self.ptrs.freq_density_rb} "
            f"offset={self.ptrs.rb_offset} sc_in_rb={self.ptrs.sc_in_rb} "
            f"boost_db={self.ptrs.power_boost_db:g}",
            f"# chunk = X={self.chunk.x_chunks} K={self.chunk.k_per_chunk} "
            f"thresholds={list(self.chunk.rb_thresholds)} time_density={self.chunk.time_density}",
        ]
        return lines
