"""Seeded Monte-Carlo experiment runners and CSV emission.

Every runner is deterministic given (scenario, base_seed): drop i derives its
seed from the scenario seed policy, per-drop results are reduced in drop
order, and CSV cells are formatted via repr so reruns are byte-identical.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError
from .grid import (
    QamConstellation,
    ReKind,
    ResourceGrid,
    extract_data,
    extract_res,
    fill_data,
    qam_demodulate,
    qam_modulate,
)
from .phase_noise import PhaseNoiseProcess, generate
from .ptrs import (
    chunk_params_for_bandwidth,
    map_ptrs,
    mark_vacant,
    multi_trp_layout,
    pre_dft_positions,
    ptrs_re_positions,
)
from .receiver import compensate, cpe_rmse, estimate_cpe, evm, symbol_error_rate
from .scenario import (
    STREAM_AWGN,
    STREAM_BITS,
    STREAM_INTERFERER_PHASE,
    STREAM_PAPR,
    STREAM_PHASE_NOISE,
    Scenario,
    drop_seed,
    stream_seed,
)
from .waveform import (
    TimeSignal,
    apply_awgn,
    apply_phase_noise,
    ofdm_demodulate,
    ofdm_modulate,
    subcarrier_bin_indices,
    symbol_cpe,
    transform_decode,
    transform_precode,
)

__all__ = [
    "DropReport",
    "run_single",
    "run_density_sweep",
    "run_freq_density_sweep",
    "run_interference",
    "run_papr",
    "run_multi_trp",
    "write_table_csv",
    "default_papr_thresholds",
]

_PAPR_BATCH = 2048


@dataclass
class DropReport:
    """Metrics of one Monte-Carlo drop."""

    scenario: str
    seed: int
    snr_db: float
    evm_db_pre: float
    evm_db_post: float
    ser: float
    cpe_rmse_rad: float
    papr_db: np.ndarray | None = None


# ---------------------------------------------------------------------------
# helpers


def _phase_stream(sc: Scenario, sample_rate_hz: float, count: int, seed: int) -> PhaseNoiseProcess:
    if sc.pn_model is None:
        return PhaseNoiseProcess(samples_rad=np.zeros(count), sample_rate_hz=sample_rate_hz,
                                 model=None, seed=seed)
    return generate(sc.pn_model, sample_rate_hz, count, seed)


def _random_bits(rng, count):
    return rng.integers(0, 2, size=count, dtype=np.uint8)


def _pmap(fn, argtuples, jobs):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, *zip(*argtuples)))
    return [fn(*a) for a in argtuples]


def _mean_se(values):
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        return float(arr.mean()), 0.0
    se = float(arr.std(ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
    return float(arr.mean()), se


def _aggregate(results, key_map):
    out = {}
    for out_name, key in key_map.items():
        mean, se = _mean_se([r[key] for r in results])
        out[f"{out_name}_mean"] = mean
        out[f"{out_name}_se"] = se
    return out


_DROP_KEYS = {
    "evm_db_pre": "evm_db_pre",
    "evm_db_post": "evm_db_post",
    "ser": "ser",
    "cpe_rmse": "cpe_rmse",
}


# scenario snr_db is the per-resource-element SNR: unitary transforms keep the
# per-RE noise variance equal to the per-sample variance, and constellations
# and pilots are unit power, so referencing the noise to 1.0 makes snr_db the
# SNR seen by every occupied RE regardless of allocation width, TRP muting or
# the constellation draw.
_RE_REFERENCE_POWER = 1.0


def _scenario_context(sc: Scenario, exc: Exception):
    msg = exc.args[0] if exc.args else str(exc)
    exc.args = (f"scenario '{sc.name}': {msg}",) + tuple(exc.args[1:])
    return exc


# ---------------------------------------------------------------------------
# single-drop chains


def _per_symbol_papr(samples: np.ndarray, params, n_sym: int) -> np.ndarray:
    # phase noise is unit-modulus, so this equals the clean-waveform PAPR
    p = np.abs(samples.reshape((params.symbol_len, n_sym), order="F")) ** 2
    return 10.0 * np.log10(p.max(axis=0) / p.mean(axis=0))


def _cp_ofdm_drop(sc: Scenario, snr_db: float, seed: int, offsets) -> dict:
    """CP-OFDM drop with one or more transmit points.

    With several TRPs, every TRP mutes all foreign PT-RS REs (the orthogonal
    allocation) and serves the data REs of the RBs it owns (RB r belongs to
    TRP r mod n_trp); the receiver de-rotates each RE with its owner's CPE
    estimate.  One TRP reduces to the plain single-transmitter chain.
    """
    n_trp = len(offsets)
    params = sc.ofdm_params()
    n_sym = sc.n_symbols
    const = QamConstellation.square(sc.modulation_order)
    cfgs = [replace(sc.ptrs, rb_offset=int(o)) for o in offsets]
    if n_trp > 1:
        pos_sets = multi_trp_layout(cfgs, sc.n_rb, n_sym)
    else:
        pos_sets = [ptrs_re_positions(cfgs[0], sc.n_rb, n_sym)]

    owner_rb = np.arange(sc.n_rb) % n_trp
    owner_row = np.repeat(owner_rb, 12)

    grids, bits_tx, signals, pn_streams = [], [], [], []
    n_samples = n_sym * params.symbol_len
    for t in range(n_trp):
        grid = ResourceGrid(sc.n_rb, n_sym)
        if n_trp > 1:
            grid.labels[owner_row != t, :] = int(ReKind.VACANT)
            for u in range(n_trp):
                if u != t:
                    mark_vacant(grid, pos_sets[u])
        map_ptrs(grid, pos_sets[t], cfgs[t].pilot_value, cfgs[t].power_boost_db)
        rng = np.random.default_rng(stream_seed(seed, STREAM_BITS + t))
        bits = _random_bits(rng, grid.count(ReKind.DATA) * const.bits_per_symbol)
        fill_data(grid, qam_modulate(bits, const))
        tx = ofdm_modulate(grid, params)
        pn = _phase_stream(sc, params.sample_rate_hz, n_samples,
                           stream_seed(seed, STREAM_PHASE_NOISE + t))
        grids.append(grid)
        bits_tx.append(bits)
        pn_streams.append(pn)
        signals.append(apply_phase_noise(tx, pn).samples)

    composite = np.sum(signals, axis=0)
    rx = TimeSignal(samples=composite, sample_rate_hz=params.sample_rate_hz)
    rx = apply_awgn(rx, snr_db, stream_seed(seed, STREAM_AWGN),
                    reference_power=_RE_REFERENCE_POWER)
    rx_vals = ofdm_demodulate(rx, params, n_sym)

    ests, rmses = [], []
    for t in range(n_trp):
        est = estimate_cpe(rx_vals, pos_sets[t], cfgs[t].pilot_value, cfgs[t].power_boost_db)
        truth = np.angle(symbol_cpe(pn_streams[t], params, n_sym))
        ests.append(est)
        rmses.append(cpe_rmse(est.phase_rad, truth))

    phase_mat = np.vstack([e.phase_rad for e in ests])[owner_row, :]
    rx_comp = rx_vals * np.exp(-1j * phase_mat)

    rx_pre, rx_post, refs, bits_rx, bits_ref = [], [], [], [], []
    for t in range(n_trp):
        labels = grids[t].labels
        rx_pre.append(extract_res(rx_vals, labels, ReKind.DATA))
        data_post = extract_res(rx_comp, labels, ReKind.DATA)
        rx_post.append(data_post)
        refs.append(extract_data(grids[t]))
        bits_rx.append(qam_demodulate(data_post, const))
        bits_ref.append(bits_tx[t])

    ref_all = np.concatenate(refs)
    evm_pre = evm(np.concatenate(rx_pre), ref_all, sc.modulation_order)
    evm_post = evm(np.concatenate(rx_post), ref_all, sc.modulation_order)
    ser = symbol_error_rate(np.concatenate(bits_rx), np.concatenate(bits_ref),
                            const.bits_per_symbol)
    total_res = grids[0].n_subcarriers * n_sym
    return {
        "evm_db_pre": evm_pre.evm_db,
        "evm_db_post": evm_post.evm_db,
        "ser": ser,
        "cpe_rmse": rmses[0],
        "rmse_per_trp": np.array(rmses),
        "overhead_fraction": sum(len(s) for s in pos_sets) / total_res,
        "papr_db_per_symbol": _per_symbol_papr(composite, params, n_sym),
    }


def _dfts_drop(sc: Scenario, snr_db: float, seed: int) -> dict:
    """DFT-s-OFDM drop with pre-DFT PT-RS chunks."""
    params = sc.ofdm_params()
    n_sym = sc.n_symbols
    m = 12 * sc.n_rb
    const = QamConstellation.square(sc.modulation_order)
    xk = chunk_params_for_bandwidth(sc.chunk, sc.n_rb)
    pilot = sc.ptrs.pilot_value

    bearing = np.zeros(n_sym, dtype=bool)
    if xk is not None:
        bearing[:: sc.chunk.time_density] = True
        pos = pre_dft_positions(xk[0], xk[1], m)
        data_idx = np.setdiff1d(np.arange(m), pos)
    else:
        pos = np.array([], dtype=int)
        data_idx = np.arange(m)

    n_data = int(bearing.sum()) * data_idx.size + int((~bearing).sum()) * m
    rng = np.random.default_rng(stream_seed(seed, STREAM_BITS))
    bits = _random_bits(rng, n_data * const.bits_per_symbol)
    data = qam_modulate(bits, const)

    pre_dft = np.empty((m, n_sym), dtype=complex)
    used = 0
    for s in range(n_sym):
        if bearing[s]:
            pre_dft[pos, s] = pilot
            pre_dft[data_idx, s] = data[used : used + data_idx.size]
            used += data_idx.size
        else:
            pre_dft[:, s] = data[used : used + m]
            used += m

    tx = ofdm_modulate(transform_precode(pre_dft, m), params)
    n_samples = n_sym * params.symbol_len
    pn = _phase_stream(sc, params.sample_rate_hz, n_samples, stream_seed(seed, STREAM_PHASE_NOISE))
    faded = apply_phase_noise(tx, pn)
    papr_per_symbol = _per_symbol_papr(faded.samples, params, n_sym)
    rx = apply_awgn(faded, snr_db, stream_seed(seed, STREAM_AWGN),
                    reference_power=_RE_REFERENCE_POWER)
    rx_pre_dft = transform_decode(ofdm_demodulate(rx, params, n_sym), m)

    truth = np.angle(symbol_cpe(pn, params, n_sym))
    if xk is not None:
        pilot_res = {(int(p), s) for s in np.flatnonzero(bearing) for p in pos}
        est = estimate_cpe(rx_pre_dft, pilot_res, pilot)
        comp = compensate(rx_pre_dft, est)
        rmse = cpe_rmse(est.phase_rad, truth)
    else:
        # allocation below the first chunk threshold carries no PT-RS at all
        comp = rx_pre_dft
        rmse = cpe_rmse(np.zeros(n_sym), truth)

    def gather(mat):
        parts = []
        for s in range(n_sym):
            parts.append(mat[data_idx, s] if bearing[s] else mat[:, s])
        return np.concatenate(parts)

    rx_pre = gather(rx_pre_dft)
    rx_post = gather(comp)
    evm_pre = evm(rx_pre, data, sc.modulation_order)
    evm_post = evm(rx_post, data, sc.modulation_order)
    ser = symbol_error_rate(qam_demodulate(rx_post, const), bits, const.bits_per_symbol)
    return {
        "evm_db_pre": evm_pre.evm_db,
        "evm_db_post": evm_post.evm_db,
        "ser": ser,
        "cpe_rmse": rmse,
        "rmse_per_trp": np.array([rmse]),
        "overhead_fraction": (pos.size * int(bearing.sum())) / (m * n_sym),
        "papr_db_per_symbol": papr_per_symbol,
    }


def _interference_drop(sc: Scenario, snr_db: float, seed: int, victim_offset: int,
                       interferer_offset: int, interferer_power_db: float,
                       interferer_boost_db: float) -> dict:
    """Victim CP-OFDM chain with one co-scheduled user added.

    The interferer carries its own data and PT-RS (the identical fixed pilot
    symbol, optionally boosted), runs on an independent oscillator and arrives
    with an arbitrary static carrier phase.  Interferer randomness is drawn
    even at -inf relative power so the two collision cases stay seed-aligned.
    """
    params = sc.ofdm_params()
    n_sym = sc.n_symbols
    const = QamConstellation.square(sc.modulation_order)
    n_samples = n_sym * params.symbol_len

    v_cfg = replace(sc.ptrs, rb_offset=int(victim_offset))
    i_cfg = replace(sc.ptrs, rb_offset=int(interferer_offset),
                    power_boost_db=float(interferer_boost_db))

    v_pos = ptrs_re_positions(v_cfg, sc.n_rb, n_sym)
    grid_v = ResourceGrid(sc.n_rb, n_sym)
    map_ptrs(grid_v, v_pos, v_cfg.pilot_value, v_cfg.power_boost_db)
    rng_v = np.random.default_rng(stream_seed(seed, STREAM_BITS))
    bits_v = _random_bits(rng_v, grid_v.count(ReKind.DATA) * const.bits_per_symbol)
    fill_data(grid_v, qam_modulate(bits_v, const))
    tx_v = ofdm_modulate(grid_v, params)
    pn_v = _phase_stream(sc, params.sample_rate_hz, n_samples,
                         stream_seed(seed, STREAM_PHASE_NOISE))

    i_pos = ptrs_re_positions(i_cfg, sc.n_rb, n_sym)
    grid_i = ResourceGrid(sc.n_rb, n_sym)
    map_ptrs(grid_i, i_pos, i_cfg.pilot_value, i_cfg.power_boost_db)
    rng_i = np.random.default_rng(stream_seed(seed, STREAM_BITS + 1))
    bits_i = _random_bits(rng_i, grid_i.count(ReKind.DATA) * const.bits_per_symbol)
    fill_data(grid_i, qam_modulate(bits_i, const))
    tx_i = ofdm_modulate(grid_i, params)
    pn_i = _phase_stream(sc, params.sample_rate_hz, n_samples,
                         stream_seed(seed, STREAM_PHASE_NOISE + 1))
    phi0 = np.random.default_rng(stream_seed(seed, STREAM_INTERFERER_PHASE)).uniform(0.0, 2.0 * np.pi)

    alpha = 0.0 if math.isinf(interferer_power_db) and interferer_power_db < 0 \
        else 10.0 ** (interferer_power_db / 20.0)
    combined = apply_phase_noise(tx_v, pn_v).samples \
        + alpha * np.exp(1j * phi0) * apply_phase_noise(tx_i, pn_i).samples
    rx = apply_awgn(TimeSignal(samples=combined, sample_rate_hz=params.sample_rate_hz),
                    snr_db, stream_seed(seed, STREAM_AWGN),
                    reference_power=_RE_REFERENCE_POWER)
    rx_vals = ofdm_demodulate(rx, params, n_sym)

    est = estimate_cpe(rx_vals, v_pos, v_cfg.pilot_value, v_cfg.power_boost_db)
    truth = np.angle(symbol_cpe(pn_v, params, n_sym))
    rx_comp = compensate(rx_vals, est)

    ref = extract_data(grid_v)
    rx_pre = extract_res(rx_vals, grid_v.labels, ReKind.DATA)
    rx_post = extract_res(rx_comp, grid_v.labels, ReKind.DATA)
    return {
        "evm_db_pre": evm(rx_pre, ref, sc.modulation_order).evm_db,
        "evm_db_post": evm(rx_post, ref, sc.modulation_order).evm_db,
        "ser": symbol_error_rate(qam_demodulate(rx_post, const), bits_v, const.bits_per_symbol),
        "cpe_rmse": cpe_rmse(est.phase_rad, truth),
    }


# ---------------------------------------------------------------------------
# public runners


def run_single(sc: Scenario, seed: int, snr_db: float | None = None,
               collect_papr: bool = False) -> DropReport:
    """One full transmit-impair-receive drop; deterministic per (scenario, seed)."""
    snr = sc.snr_db[0] if snr_db is None else float(snr_db)
    try:
        if sc.waveform == "cp-ofdm":
            res = _cp_ofdm_drop(sc, snr, seed, offsets=(sc.ptrs.rb_offset,))
        else:
            res = _dfts_drop(sc, snr, seed)
    except ValueError as exc:
        raise _scenario_context(sc, exc)
    return DropReport(
        scenario=sc.name,
        seed=int(seed),
        snr_db=snr,
        evm_db_pre=res["evm_db_pre"],
        evm_db_post=res["evm_db_post"],
        ser=res["ser"],
        cpe_rmse_rad=res["cpe_rmse"],
        papr_db=res["papr_db_per_symbol"] if collect_papr else None,
    )


def _drop_seeds(sc: Scenario):
    return [drop_seed(sc.base_seed, i) for i in range(sc.n_drops)]


def _report_dict(rep: DropReport) -> dict:
    return {
        "evm_db_pre": rep.evm_db_pre,
        "evm_db_post": rep.evm_db_post,
        "ser": rep.ser,
        "cpe_rmse": rep.cpe_rmse_rad,
    }


def run_drops(sc: Scenario, snr_db: float, jobs: int = 1):
    """All drops of one sweep point as DropReports (drop order preserved)."""
    return _pmap(run_single, [(sc, s, snr_db) for s in _drop_seeds(sc)], jobs)


def run_density_sweep(sc: Scenario, densities=None, snrs=None, jobs: int = 1) -> list:
    """Mean metrics per (time density, SNR)."""
    densities = tuple(densities) if densities is not None else sc.density.l_values
    snrs = tuple(snrs) if snrs is not None else sc.snr_db
    rows = []
    for L in densities:
        sc_l = replace(sc, ptrs=replace(sc.ptrs, time_density=int(L)))
        for snr in snrs:
            reps = [_report_dict(r) for r in run_drops(sc_l, snr, jobs)]
            rows.append({
                "time_density": int(L),
                "snr_db": float(snr),
                "n_drops": sc.n_drops,
                **_aggregate(reps, _DROP_KEYS),
            })
    return rows


def run_freq_density_sweep(sc: Scenario, d_f_values=None, n_rb_values=None,
                           snrs=None, jobs: int = 1) -> list:
    """Mean metrics per (frequency density, allocation size, SNR)."""
    d_fs = tuple(d_f_values) if d_f_values is not None else sc.freq_density.d_f_values
    n_rbs = tuple(n_rb_values) if n_rb_values is not None else sc.freq_density.n_rb_values
    snrs = tuple(snrs) if snrs is not None else sc.snr_db
    rows = []
    for d_f in d_fs:
        for n_rb in n_rbs:
            try:
                sc_x = replace(sc, n_rb=int(n_rb),
                               ptrs=replace(sc.ptrs, freq_density_rb=int(d_f)))
            except ValueError as exc:
                raise _scenario_context(sc, exc)
            pilots = len(range(sc_x.ptrs.rb_offset, int(n_rb), int(d_f)))
            for snr in snrs:
                reps = [_report_dict(r) for r in run_drops(sc_x, snr, jobs)]
                rows.append({
                    "freq_density_rb": int(d_f),
                    "n_rb": int(n_rb),
                    "pilots_per_symbol": pilots,
                    "snr_db": float(snr),
                    "n_drops": sc.n_drops,
                    **_aggregate(reps, _DROP_KEYS),
                })
    return rows


def run_interference(sc: Scenario, victim_offset: int | None = None,
                     interferer_offset: int | None = None,
                     interferer_power_db: float | None = None,
                     interferer_boost_db: float | None = None,
                     snrs=None, jobs: int = 1) -> list:
    """Victim metrics with a co-scheduled user, colliding vs offset-separated."""
    p = sc.interference
    v_off = p.victim_offset if victim_offset is None else int(victim_offset)
    i_off = p.interferer_offset if interferer_offset is None else int(interferer_offset)
    power = p.interferer_power_db if interferer_power_db is None else float(interferer_power_db)
    boost = p.interferer_boost_db if interferer_boost_db is None else float(interferer_boost_db)
    if v_off == i_off:
        raise ConfigError(
            f"scenario '{sc.name}': separated case needs distinct offsets, both are {v_off}"
        )
    snrs = tuple(snrs) if snrs is not None else sc.snr_db
    seeds = _drop_seeds(sc)
    rows = []
    for case, off in (("colliding", v_off), ("separated", i_off)):
        for snr in snrs:
            try:
                reps = _pmap(_interference_drop,
                             [(sc, snr, s, v_off, off, power, boost) for s in seeds], jobs)
            except ValueError as exc:
                raise _scenario_context(sc, exc)
            rows.append({
                "case": case,
                "victim_offset": v_off,
                "interferer_offset": off,
                "interferer_power_db": power,
                "interferer_boost_db": boost,
                "snr_db": float(snr),
                "n_drops": sc.n_drops,
                **_aggregate(reps, _DROP_KEYS),
            })
    return rows


def run_multi_trp(sc: Scenario, n_trp: int | None = None, rb_offsets=None,
                  snrs=None, jobs: int = 1) -> list:
    """Per-TRP CPE accuracy and combined quality with orthogonal PT-RS."""
    n_trp = sc.multi_trp.n_trp if n_trp is None else int(n_trp)
    offsets = tuple(rb_offsets) if rb_offsets is not None else sc.multi_trp.rb_offsets
    if len(offsets) != n_trp:
        raise ConfigError(f"scenario '{sc.name}': need {n_trp} rb_offsets, got {len(offsets)}")
    snrs = tuple(snrs) if snrs is not None else sc.snr_db
    seeds = _drop_seeds(sc)
    rows = []
    for snr in snrs:
        try:
            results = _pmap(_cp_ofdm_drop, [(sc, snr, s, offsets) for s in seeds], jobs)
        except ValueError as exc:
            raise _scenario_context(sc, exc)
        agg = _aggregate(results, _DROP_KEYS)
        overhead = results[0]["overhead_fraction"]
        for t in range(n_trp):
            rmse_mean, rmse_se = _mean_se([r["rmse_per_trp"][t] for r in results])
            rows.append({
                "snr_db": float(snr),
                "trp": t,
                "rb_offset": int(offsets[t]),
                "n_trp": n_trp,
                "cpe_rmse_mean": rmse_mean,
                "cpe_rmse_se": rmse_se,
                "evm_db_post_mean": agg["evm_db_post_mean"],
                "evm_db_post_se": agg["evm_db_post_se"],
                "ser_mean": agg["ser_mean"],
                "ser_se": agg["ser_se"],
                "overhead_fraction": overhead,
                "n_drops": sc.n_drops,
            })
    return rows


# ---------------------------------------------------------------------------
# PAPR

PAPR_VARIANTS = ("cp-ofdm", "cp-ofdm+ptrs", "dft-s-ofdm", "dft-s-ofdm+ptrs")


def default_papr_thresholds() -> list:
    return [round(2.0 + 0.1 * i, 1) for i in range(121)]


def _papr_batch(sc: Scenario, variant: str, count: int, seed: int) -> np.ndarray:
    params = sc.ofdm_params()
    const = QamConstellation.square(sc.modulation_order)
    m = 12 * sc.n_rb
    rng = np.random.default_rng(seed)
    b = const.bits_per_symbol
    data = qam_modulate(_random_bits(rng, m * count * b), const).reshape(m, count, order="F")

    if variant.startswith("dft-s-ofdm"):
        if variant.endswith("+ptrs"):
            xk = chunk_params_for_bandwidth(sc.chunk, sc.n_rb)
            if xk is None:
                raise ConfigError(f"no chunk parameters for n_rb={sc.n_rb}")
            data[pre_dft_positions(xk[0], xk[1], m), :] = sc.ptrs.pilot_value
        values = transform_precode(data, m)
    else:
        if variant.endswith("+ptrs"):
            sc_rows = sorted({p[0] for p in ptrs_re_positions(sc.ptrs, sc.n_rb, 1)})
            boost = 10.0 ** (sc.ptrs.power_boost_db / 20.0)
            data[sc_rows, :] = boost * sc.ptrs.pilot_value
        values = data

    spectrum = np.zeros((params.fft_size, count), dtype=complex)
    spectrum[subcarrier_bin_indices(params), :] = values
    os_factor = max(1, int(sc.papr.oversample))
    if os_factor > 1:
        n = params.fft_size
        padded = np.zeros((n * os_factor, count), dtype=complex)
        half = n // 2
        padded[:half, :] = spectrum[:half, :]
        padded[-(n - half):, :] = spectrum[half:, :]
        td = np.fft.ifft(padded, axis=0, norm="ortho") * np.sqrt(os_factor)
    else:
        td = np.fft.ifft(spectrum, axis=0, norm="ortho")
    p = np.abs(td) ** 2
    return 10.0 * np.log10(p.max(axis=0) / p.mean(axis=0))


def run_papr(sc: Scenario, variants=None, n_symbols: int | None = None,
             thresholds_db=None, jobs: int = 1) -> dict:
    """Per-symbol PAPR CCDF for each waveform/PT-RS variant.

    PAPR is measured on the FFT-length samples of each symbol (the cyclic
    prefix only repeats them); the oversampling factor comes from the
    scenario and is echoed into the output.
    """
    variants = tuple(variants) if variants is not None else sc.papr.variants
    for v in variants:
        if v not in PAPR_VARIANTS:
            raise ConfigError(f"scenario '{sc.name}': unknown PAPR variant '{v}'")
    total = sc.papr.n_symbols if n_symbols is None else int(n_symbols)
    thresholds = list(thresholds_db) if thresholds_db is not None else default_papr_thresholds()

    samples = {}
    for vi, variant in enumerate(variants):
        args = []
        start = 0
        batch_index = 0
        while start < total:
            count = min(_PAPR_BATCH, total - start)
            seed = stream_seed(drop_seed(sc.base_seed, batch_index), STREAM_PAPR + vi)
            args.append((sc, variant, count, seed))
            start += count
            batch_index += 1
        try:
            parts = _pmap(_papr_batch, args, jobs)
        except ValueError as exc:
            raise _scenario_context(sc, exc)
        samples[variant] = np.concatenate(parts)

    ccdf_rows = []
    for variant in variants:
        vals = samples[variant]
        for t in thresholds:
            ccdf_rows.append({"variant": variant, "threshold_db": float(t),
                              "ccdf": float(np.mean(vals > t))})
    summary_rows = [
        {"variant": variant, "ccdf_prob": 1e-3,
         "papr_db": float(np.quantile(samples[variant], 1.0 - 1e-3)),
         "n_symbols": total, "oversample": sc.papr.oversample}
        for variant in variants
    ]
    return {"ccdf": ccdf_rows, "summary": summary_rows, "samples": samples}


# ---------------------------------------------------------------------------
# CSV emission


def _fmt_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_table_csv(path, rows, header_lines=()) -> None:
    """Write dict rows with a '# key = value' preamble; byte-deterministic."""
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(line + "\n")
        if not rows:
            return
        cols = list(rows[0].keys())
        fh.write(",".join(cols) + "\n")
        for row in rows:
            fh.write(",".join(_fmt_cell(row[c]) for c in cols) + "\n")


def single_run_rows(sc: Scenario, jobs: int = 1) -> list:
    """Per-drop rows over every scenario SNR (the single-run experiment)."""
    rows = []
    for snr in sc.snr_db:
        for i, rep in enumerate(run_drops(sc, snr, jobs)):
            rows.append({
                "snr_db": float(snr),
                "drop": i,
                "seed": rep.seed,
                "evm_db_pre": rep.evm_db_pre,
                "evm_db_post": rep.evm_db_post,
                "ser": rep.ser,
                "cpe_rmse_rad": rep.cpe_rmse_rad,
            })
    return rows
