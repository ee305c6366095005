"""Resource grid, RE-kind bookkeeping and square-QAM mapping."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

__all__ = [
    "ReKind",
    "ResourceGrid",
    "QamConstellation",
    "qam_modulate",
    "qam_demodulate",
    "fill_data",
    "extract_data",
    "extract_res",
    "grid_to_csv",
]

SC_PER_RB = 12


class ReKind(IntEnum):
    DATA = 0
    PTRS = 1
    VACANT = 2


class ResourceGrid:
    """Subcarrier x OFDM-symbol matrix of complex REs with kind labels.

    Freshly constructed grids are all-DATA and zero-valued.  PT-RS cells must
    be written through the mapping helpers in :mod:`ptrslink.ptrs`; data
    filling never touches non-DATA REs.
    """

    sc_per_rb = SC_PER_RB

    def __init__(self, n_rb: int, n_symbols: int):
        if n_rb < 1 or n_symbols < 1:
            raise ValueError("n_rb and n_symbols must be >= 1")
        self.n_rb = int(n_rb)
        self.n_symbols = int(n_symbols)
        n_sc = SC_PER_RB * self.n_rb
        self.cells = np.zeros((n_sc, self.n_symbols), dtype=complex)
        self.labels = np.full((n_sc, self.n_symbols), int(ReKind.DATA), dtype=np.uint8)

    @property
    def n_subcarriers(self) -> int:
        return self.cells.shape[0]

    def count(self, kind: ReKind) -> int:
        return int(np.count_nonzero(self.labels == int(kind)))

    def copy(self) -> "ResourceGrid":
        dup = ResourceGrid(self.n_rb, self.n_symbols)
        dup.cells = self.cells.copy()
        dup.labels = self.labels.copy()
        return dup


# ---------------------------------------------------------------------------
# QAM

def _gray_decode(g: np.ndarray) -> np.ndarray:
    # width <= 8 bits is enough for 256QAM axes
    n = g.copy()
    n ^= n >> 1
    n ^= n >> 2
    n ^= n >> 4
    return n


@dataclass(frozen=True, eq=False)
class QamConstellation:
    """Gray-labeled square QAM with unit average power.

    ``points[v]`` is the symbol for label ``v``; the top half of the label
    bits select the I level, the bottom half the Q level, each through a
    reflected Gray code over the ascending PAM levels.
    """

    order: int
    points: np.ndarray

    def __post_init__(self):
        if self.order not in (4, 16, 64, 256):
            raise ValueError(f"unsupported constellation order {self.order}")
        if len(self.points) != self.order:
            raise ValueError("points length must equal order")

    @property
    def bits_per_symbol(self) -> int:
        return int(np.log2(self.order))

    @classmethod
    def square(cls, order: int) -> "QamConstellation":
        if order not in (4, 16, 64, 256):
            raise ValueError(f"unsupported constellation order {order}")
        b = int(np.log2(order))
        h = b // 2
        lvl_count = 1 << h
        scale = 1.0 / np.sqrt(2.0 * (4.0**h - 1.0) / 3.0)
        labels = np.arange(order)
        i_idx = _gray_decode(labels >> h)
        q_idx = _gray_decode(labels & (lvl_count - 1))
        levels_i = 2.0 * i_idx - (lvl_count - 1)
        levels_q = 2.0 * q_idx - (lvl_count - 1)
        return cls(order=order, points=scale * (levels_i + 1j * levels_q))


def qam_modulate(bits, constellation: QamConstellation) -> np.ndarray:
    """Map a 0/1 sequence onto constellation points, MSB first per symbol."""
    bits = np.asarray(bits, dtype=np.int64)
    b = constellation.bits_per_symbol
    if bits.size % b != 0:
        raise ValueError(f"bit count {bits.size} not divisible by {b}")
    groups = bits.reshape(-1, b)
    weights = 1 << np.arange(b - 1, -1, -1)
    return constellation.points[groups @ weights]


def qam_demodulate(symbols, constellation: QamConstellation) -> np.ndarray:
    """Hard minimum-distance decision back to bits.

    Uses per-axis slicing, which coincides with exhaustive nearest-point
    search for these square constellations.
    """
    symbols = np.asarray(symbols, dtype=complex).ravel()
    b = constellation.bits_per_symbol
    h = b // 2
    lvl_count = 1 << h
    scale = 1.0 / np.sqrt(2.0 * (4.0**h - 1.0) / 3.0)

    def axis_bits(vals):
        idx = np.clip(np.rint((vals / scale + (lvl_count - 1)) / 2.0), 0, lvl_count - 1)
        return idx.astype(np.int64) ^ (idx.astype(np.int64) >> 1)

    labels = (axis_bits(symbols.real) << h) | axis_bits(symbols.imag)
    shifts = np.arange(b - 1, -1, -1)
    return ((labels[:, None] >> shifts) & 1).astype(np.uint8).ravel()


# ---------------------------------------------------------------------------
# grid filling

def _kind_mask_t(grid: ResourceGrid, kind: ReKind) -> np.ndarray:
    # transposed mask: boolean indexing then walks symbol-major, subcarrier
    # ascending inside each symbol (the canonical traversal order)
    return grid.labels.T == int(kind)


def fill_data(grid: ResourceGrid, symbols) -> ResourceGrid:
    """Write ``symbols`` into the DATA REs in traversal order (in place)."""
    symbols = np.asarray(symbols, dtype=complex)
    mask = _kind_mask_t(grid, ReKind.DATA)
    n_data = int(mask.sum())
    if symbols.size != n_data:
        raise ValueError(f"got {symbols.size} symbols for {n_data} data REs")
    grid.cells.T[mask] = symbols
    return grid


def extract_data(grid: ResourceGrid) -> np.ndarray:
    return grid.cells.T[_kind_mask_t(grid, ReKind.DATA)]


def extract_res(values: np.ndarray, labels: np.ndarray, kind: ReKind) -> np.ndarray:
    """Pull REs of one kind out of any value matrix shaped like ``labels``."""
    return np.asarray(values).T[np.asarray(labels).T == int(kind)]


def grid_to_csv(grid: ResourceGrid, path) -> None:
    names = {int(k): k.name.lower() for k in ReKind}
    with open(path, "w", newline="") as fh:
        fh.write("subcarrier,symbol,re_kind,real,imag\n")
        for s in range(grid.n_symbols):
            for sc in range(grid.n_subcarriers):
                v = grid.cells[sc, s]
                fh.write(
                    f"{sc},{s},{names[int(grid.labels[sc, s])]},"
                    f"{float(v.real)!r},{float(v.imag)!r}\n"
                )
