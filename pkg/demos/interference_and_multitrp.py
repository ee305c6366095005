"""Interference randomization and orthogonal multi-TRP tracking at desk scale.

Two short studies: (1) what happens to a victim's CPE estimate when another
user's boosted PT-RS lands on the same REs versus on offset RBs, and (2) how
two transmit points with independent oscillators are tracked separately
through orthogonally allocated PT-RS.
"""

from pathlib import Path

from ptrslink import Scenario, PtrsConfig
from ptrslink.runners import run_interference, run_multi_trp, write_table_csv

OUT = Path(__file__).resolve().parent / "output"
N_DROPS = 150


def main():
    OUT.mkdir(exist_ok=True)

    sc = Scenario(name="intf_demo", n_rb=32, modulation_order=64, snr_db=(20.0,),
                  n_drops=N_DROPS, ptrs=PtrsConfig(freq_density_rb=2))
    rows = run_interference(sc, victim_offset=0, interferer_offset=1,
                            interferer_power_db=0.0, interferer_boost_db=3.0)
    write_table_csv(OUT / "interference.csv", rows, sc.header_lines())
    print(f"co-scheduled user at 0 dB with 3 dB PT-RS boost, {N_DROPS} drops:")
    for r in rows:
        print(f"  {r['case']:<10} victim CPE RMSE {r['cpe_rmse_mean']:.4f} rad, "
              f"post EVM {r['evm_db_post_mean']:6.2f} dB")
    coll = next(r for r in rows if r["case"] == "colliding")
    sep = next(r for r in rows if r["case"] == "separated")
    print(f"  -> user-specific RB offsets cut the estimator error by "
          f"{coll['cpe_rmse_mean'] / sep['cpe_rmse_mean']:.1f}x here\n")

    sc = Scenario(name="mtrp_demo", n_rb=32, modulation_order=64, snr_db=(10.0,),
                  n_drops=N_DROPS, ptrs=PtrsConfig(freq_density_rb=2))
    baseline = run_multi_trp(sc, n_trp=1, rb_offsets=(0,))[0]
    dual = run_multi_trp(sc, n_trp=2, rb_offsets=(0, 1))
    write_table_csv(OUT / "multi_trp.csv", dual, sc.header_lines())
    print(f"orthogonal 2-TRP tracking at 10 dB SNR, {N_DROPS} drops:")
    print(f"  single-TRP baseline CPE RMSE {baseline['cpe_rmse_mean']:.4f} rad, "
          f"overhead {baseline['overhead_fraction']:.1%}")
    for r in dual:
        print(f"  TRP {r['trp']} CPE RMSE {r['cpe_rmse_mean']:.4f} rad "
              f"(overhead now {r['overhead_fraction']:.1%})")
    print("  -> orthogonal PT-RS keeps per-oscillator tracking at the single-TRP level,")
    print("     paying only the doubled pilot overhead")


if __name__ == "__main__":
    main()
