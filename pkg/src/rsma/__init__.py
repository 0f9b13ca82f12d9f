"""Rate-splitting multiple access toolkit.

Numerical building blocks for one-layer rate splitting on the multi-antenna
downlink broadcast channel and the Gaussian multiple-access uplink, with
SDMA / NOMA / OMA baselines, analytic oracles, and a seeded Monte Carlo
experiment runner. See the README for a tour and the demos directory for
worked scripts.
"""
from ._version import __version__
from .baselines import (
    PentagonRegion,
    mac_pentagon,
    mac_sum_capacity,
    noma_rates_2user,
    oma_tdma_rates,
    sdma_rates,
    uplink_mmse_rates,
    uplink_sic_rates,
)
from .channel import (
    ChannelMatrix,
    CsitModel,
    apply_csit_error,
    deterministic_channel,
    sample_rayleigh,
)
from .downlink import (
    DownlinkDesign,
    DownlinkRates,
    common_rate,
    evaluate,
    refit_shares,
    sinr_common,
    sinr_private,
    total_power,
)
from .errors import (
    ConfigError,
    FeasibilityError,
    OptimizerInitError,
    OrderTooLargeError,
    RsmaError,
    ZfInfeasibleError,
)
from .experiments import (
    ExperimentConfig,
    OptimizerSettings,
    ResultRow,
    ResultTable,
    load_config,
    run,
    run_region,
    summarize,
    write_csv,
)
from .precoder import (
    OptimizerReport,
    PowerSplit,
    default_warm_starts,
    matched_private,
    multicast_common,
    noma_corner_2user,
    optimize_noma_wsr_2user,
    optimize_sdma_wsr,
    optimize_wsr,
    sdma_corner,
    split_search,
    waterfill_shares,
    zf_private,
)
from .rng import RNG_ID, SEED_MIX_ID, derive_seed
from .uplink import (
    UplinkDesign,
    UplinkRates,
    enumerate_orders,
    evaluate_uplink,
    optimize_uplink_sumrate,
    pareto_filter,
    receive_filter,
    sample_orders,
    stream_labels,
    stream_rate,
    trace_region_2user,
)

__all__ = [name for name in dir() if not name.startswith("_")]
