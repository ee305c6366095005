"""PT-RS placement: RE-level mapping for CP-OFDM, pre-DFT chunks for
DFT-s-OFDM, multi-TRP orthogonal layouts and collision accounting."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import CollisionError, ConfigError
from .grid import ReKind, ResourceGrid, SC_PER_RB

__all__ = [
    "PtrsConfig",
    "ChunkConfig",
    "TABLE_XK_ROWS",
    "ptrs_re_positions",
    "chunk_params_for_bandwidth",
    "pre_dft_positions",
    "multi_trp_layout",
    "collision_fraction",
    "map_ptrs",
    "mark_vacant",
    "write_re_sets_csv",
]

# (X, K) rows selected by scheduled bandwidth, smallest allocation first.
TABLE_XK_ROWS = ((2, 2), (2, 4), (4, 2), (4, 4), (8, 4))


@dataclass(frozen=True)
class PtrsConfig:
    """RE-level PT-RS pattern for CP-OFDM.

    One PT-RS subcarrier in every ``freq_density_rb``-th RB (those congruent
    to ``rb_offset``), on every ``time_density``-th OFDM symbol.
    """

    time_density: int = 1
    freq_density_rb: int = 1
    rb_offset: int = 0
    sc_in_rb: int = 0
    power_boost_db: float = 0.0
    pilot_value: complex = 1 + 0j

    def __post_init__(self):
        if self.time_density not in (1, 2, 4):
            raise ConfigError(f"time_density must be 1, 2 or 4, got {self.time_density}")
        if self.freq_density_rb not in (1, 2, 4):
            raise ConfigError(f"freq_density_rb must be 1, 2 or 4, got {self.freq_density_rb}")
        if not 0 <= self.rb_offset < self.freq_density_rb:
            raise ConfigError(
                f"rb_offset {self.rb_offset} must be in [0, {self.freq_density_rb})"
            )
        if not 0 <= self.sc_in_rb < SC_PER_RB:
            raise ConfigError(f"sc_in_rb must be in [0, {SC_PER_RB})")
        if self.power_boost_db < 0:
            raise ConfigError("power_boost_db must be >= 0")
        if abs(abs(self.pilot_value) - 1.0) > 1e-9:
            raise ConfigError("pilot_value must have unit magnitude")


@dataclass(frozen=True)
class ChunkConfig:
    """Pre-DFT PT-RS chunk parameters for DFT-s-OFDM.

    ``rb_thresholds`` are the five ascending bandwidth break points that
    select the (X, K) row; they stand in for higher-layer configuration.
    ``time_density`` 1 puts chunks in every symbol, 2 in every other symbol.
    """

    x_chunks: int = 2
    k_per_chunk: int = 2
    rb_thresholds: tuple = (2, 8, 16, 32, 48)
    time_density: int = 1

    def __post_init__(self):
        object.__setattr__(self, "rb_thresholds", tuple(int(t) for t in self.rb_thresholds))
        if (self.x_chunks, self.k_per_chunk) not in TABLE_XK_ROWS:
            raise ConfigError(f"(X={self.x_chunks}, K={self.k_per_chunk}) is not a valid chunk row")
        if len(self.rb_thresholds) != 5:
            raise ConfigError("rb_thresholds needs exactly 5 entries")
        if any(a >= b for a, b in zip(self.rb_thresholds, self.rb_thresholds[1:])):
            raise ConfigError("rb_thresholds must be strictly ascending")
        if self.time_density not in (1, 2):
            raise ConfigError("chunk time_density must be 1 (every symbol) or 2 (every other)")


def ptrs_re_positions(cfg: PtrsConfig, n_rb: int, n_symbols: int) -> set:
    """RE set {(subcarrier, symbol)} carrying PT-RS for this config."""
    if n_rb < 1:
        raise ValueError("n_rb must be >= 1")
    subcarriers = [SC_PER_RB * r + cfg.sc_in_rb for r in range(cfg.rb_offset, n_rb, cfg.freq_density_rb)]
    symbols = range(0, n_symbols, cfg.time_density)
    return {(sc, s) for sc in subcarriers for s in symbols}


def chunk_params_for_bandwidth(cfg: ChunkConfig, n_rb: int):
    """(X, K) row for ``n_rb`` scheduled RBs, or None below the first threshold."""
    if n_rb < 1:
        raise ValueError("n_rb must be >= 1")
    row = bisect_right(cfg.rb_thresholds, n_rb) - 1
    if row < 0:
        return None
    return TABLE_XK_ROWS[row]


def pre_dft_positions(x: int, k: int, m: int) -> np.ndarray:
    """Sample indices of X equally spaced K-sample chunks in a size-m DFT input.

    Chunk i sits at the tail of its interval: [floor((i+1)m/X) - K,
    floor((i+1)m/X)).  Tail anchoring samples the phase late in the symbol
    where accumulated drift is largest.
    """
    if x < 1 or k < 1:
        raise ValueError("x and k must be >= 1")
    if x * k > m:
        raise ValueError(f"{x} chunks of {k} samples do not fit in m={m}")
    return np.concatenate([np.arange((i + 1) * m // x - k, (i + 1) * m // x) for i in range(x)])


def multi_trp_layout(per_trp_cfgs, n_rb: int, n_symbols: int) -> list:
    """Per-TRP PT-RS RE sets, validated to be pairwise disjoint."""
    if len(per_trp_cfgs) < 2:
        raise ValueError("multi-TRP layout needs at least 2 configs")
    sets = [ptrs_re_positions(cfg, n_rb, n_symbols) for cfg in per_trp_cfgs]
    clashes = set()
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            clashes |= sets[i] & sets[j]
    if clashes:
        raise CollisionError(
            f"PT-RS allocations overlap on {len(clashes)} REs", clashes
        )
    return sets


def collision_fraction(a, b) -> float:
    """|a & b| / |a|, taking 0 for an empty a."""
    a = set(a)
    if not a:
        return 0.0
    return len(a & set(b)) / len(a)


def map_ptrs(grid: ResourceGrid, positions, pilot_value: complex = 1 + 0j,
             power_boost_db: float = 0.0) -> ResourceGrid:
    """Write boosted pilots into ``positions`` and label them PTRS (in place)."""
    if not positions:
        return grid
    arr = np.array(sorted(positions), dtype=int)
    amp = 10.0 ** (power_boost_db / 20.0)
    grid.cells[arr[:, 0], arr[:, 1]] = amp * pilot_value
    grid.labels[arr[:, 0], arr[:, 1]] = int(ReKind.PTRS)
    return grid


def mark_vacant(grid: ResourceGrid, positions) -> ResourceGrid:
    """Zero the given REs and label them VACANT (in place)."""
    if not positions:
        return grid
    arr = np.array(sorted(positions), dtype=int)
    grid.cells[arr[:, 0], arr[:, 1]] = 0.0
    grid.labels[arr[:, 0], arr[:, 1]] = int(ReKind.VACANT)
    return grid


def write_re_sets_csv(path, re_sets) -> None:
    """Dump RE sets as (trp_id, subcarrier, symbol) rows."""
    with open(path, "w", newline="") as fh:
        fh.write("trp_id,subcarrier,symbol\n")
        for trp, res in enumerate(re_sets):
            for sc, s in sorted(res):
                fh.write(f"{trp},{sc},{s}\n")
