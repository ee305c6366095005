"""PT-RS placement patterns: densities, RB offsets, multi-TRP, pre-DFT chunks.

Draws the RE maps produced by the placement rules and dumps them as CSV so
pattern diagrams can be regenerated elsewhere.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ptrslink import (
    ChunkConfig,
    PtrsConfig,
    chunk_params_for_bandwidth,
    multi_trp_layout,
    pre_dft_positions,
    ptrs_re_positions,
    write_re_sets_csv,
)

OUT = Path(__file__).resolve().parent / "output"
N_SYM = 14


def re_map(ax, re_sets, n_rb, title):
    colors = ("tab:blue", "tab:red", "tab:green", "tab:orange")
    for i, res in enumerate(re_sets):
        if not res:
            continue
        arr = np.array(sorted(res))
        ax.scatter(arr[:, 1], arr[:, 0], s=8, marker="s", color=colors[i % 4],
                   label=f"TRP {i}" if len(re_sets) > 1 else None)
    for rb in range(n_rb + 1):
        ax.axhline(12 * rb - 0.5, color="0.85", lw=0.5, zorder=0)
    ax.set_xlim(-0.5, N_SYM - 0.5)
    ax.set_ylim(-0.5, 12 * n_rb - 0.5)
    ax.set_xlabel("OFDM symbol")
    ax.set_ylabel("subcarrier")
    ax.set_title(title, fontsize=9)
    if len(re_sets) > 1:
        ax.legend(fontsize=7)


def main():
    OUT.mkdir(exist_ok=True)

    # time/frequency densities on a small allocation
    fig, axes = plt.subplots(1, 4, figsize=(13, 3.6))
    cases = [
        (PtrsConfig(time_density=1, freq_density_rb=1), "every symbol, 1 per RB"),
        (PtrsConfig(time_density=2, freq_density_rb=1), "every 2nd symbol, 1 per RB"),
        (PtrsConfig(time_density=1, freq_density_rb=2), "every symbol, 1 per 2 RB"),
        (PtrsConfig(time_density=1, freq_density_rb=4), "every symbol, 1 per 4 RB"),
    ]
    for ax, (cfg, title) in zip(axes, cases):
        re_map(ax, [ptrs_re_positions(cfg, 8, N_SYM)], 8, title)
    fig.tight_layout()
    fig.savefig(OUT / "ptrs_densities.png", dpi=130)
    print(f"wrote {OUT / 'ptrs_densities.png'}")

    # RB offsets: four users sharing d_f = 4 without collisions
    offset_sets = [ptrs_re_positions(PtrsConfig(freq_density_rb=4, rb_offset=o), 8, N_SYM)
                   for o in range(4)]
    fig, ax = plt.subplots(figsize=(4.6, 3.8))
    re_map(ax, offset_sets, 8, "user-specific RB offsets, d_f = 4")
    fig.tight_layout()
    fig.savefig(OUT / "ptrs_rb_offsets.png", dpi=130)
    write_re_sets_csv(OUT / "ptrs_rb_offsets.csv", offset_sets)
    print(f"wrote {OUT / 'ptrs_rb_offsets.png'} and .csv")

    # orthogonal multi-TRP allocation (validated disjoint)
    cfgs = [PtrsConfig(freq_density_rb=2, rb_offset=0),
            PtrsConfig(freq_density_rb=2, rb_offset=1)]
    trp_sets = multi_trp_layout(cfgs, 8, N_SYM)
    fig, ax = plt.subplots(figsize=(4.6, 3.8))
    re_map(ax, trp_sets, 8, "orthogonal 2-TRP allocation")
    fig.tight_layout()
    fig.savefig(OUT / "ptrs_multi_trp.png", dpi=130)
    write_re_sets_csv(OUT / "ptrs_multi_trp.csv", trp_sets)
    print(f"wrote {OUT / 'ptrs_multi_trp.png'} and .csv")

    # pre-DFT chunks across the bandwidth table
    cfg = ChunkConfig()
    print("\npre-DFT chunk placement (tail-anchored, equally spaced):")
    fig, axes = plt.subplots(5, 1, figsize=(9, 5.2), sharex=False)
    for ax, n_rb in zip(axes, (4, 10, 20, 40, 64)):
        m = 12 * n_rb
        x, k = chunk_params_for_bandwidth(cfg, n_rb)
        pos = pre_dft_positions(x, k, m)
        row = np.zeros(m)
        row[pos] = 1.0
        ax.imshow(row[None, :], aspect="auto", cmap="Blues", vmin=0, vmax=1.3)
        ax.set_yticks([])
        ax.set_ylabel(f"{n_rb} RB", rotation=0, ha="right", va="center", fontsize=8)
        ax.set_xlim(-0.5, m - 0.5)
        print(f"  n_rb={n_rb:3d}: X={x} K={k}, chunks start at "
              f"{[int(p) for p in pos.reshape(x, k)[:, 0]]} of m={m}")
    axes[-1].set_xlabel("pre-DFT sample index")
    fig.suptitle("PT-RS chunks in the DFT-s-OFDM pre-DFT vector", fontsize=10)
    fig.tight_layout()
    fig.savefig(OUT / "ptrs_pre_dft_chunks.png", dpi=130)
    print(f"wrote {OUT / 'ptrs_pre_dft_chunks.png'}")


if __name__ == "__main__":
    main()
