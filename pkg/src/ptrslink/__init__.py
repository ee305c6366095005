"""Link-level simulator for oscillator phase noise and PT-RS based CPE
compensation on CP-OFDM and DFT-s-OFDM waveforms."""

from .errors import CollisionError, ConfigError, EstimationError
from .grid import (
    QamConstellation,
    ReKind,
    ResourceGrid,
    extract_data,
    fill_data,
    grid_to_csv,
    qam_demodulate,
    qam_modulate,
)
from .phase_noise import (
    SET_A,
    SET_B,
    PhaseNoiseProcess,
    PoleZeroPsdModel,
    ShapingFilter,
    design_shaping_filter,
    estimate_psd,
    generate,
    psd_at,
    with_carrier,
    write_psd_csv,
)
from .ptrs import (
    ChunkConfig,
    PtrsConfig,
    chunk_params_for_bandwidth,
    collision_fraction,
    map_ptrs,
    multi_trp_layout,
    pre_dft_positions,
    ptrs_re_positions,
    write_re_sets_csv,
)
from .receiver import (
    CpeEstimate,
    EvmReport,
    compensate,
    cpe_rmse,
    estimate_cpe,
    evm,
    interpolate_cpe,
    symbol_error_rate,
)
from .runners import (
    DropReport,
    run_density_sweep,
    run_freq_density_sweep,
    run_interference,
    run_multi_trp,
    run_papr,
    run_single,
    write_table_csv,
)
from .scenario import Scenario, drop_seed, splitmix64, stream_seed
from .waveform import (
    OfdmParams,
    TimeSignal,
    apply_awgn,
    apply_phase_noise,
    ccdf_point,
    ofdm_demodulate,
    ofdm_modulate,
    papr_ccdf,
    papr_db,
    symbol_cpe,
    transform_decode,
    transform_precode,
)

__version__ = "0.1.0"
