from .channel import (
    AntennaConfig,
    ChannelMatrix,
    ChannelRealization,
    RealizationBatch,
    SnrPoint,
    capacity,
    eigen_exponents,
    half_power_capacity,
    mac_sum_capacity,
    sample_batch,
    sample_realization,
)
from .config import RunConfig, load_config, parse_config
from .errors import ConfigError, DmtError, DomainError, InputError, InsufficientDataError
from .exponents import (
    ExponentVector,
    SearchMethod,
    cf_exponent,
    dcf_dmt,
    exponent_weight,
    fixed_listen_dmt,
    minimize_exponent,
    s_value,
)
from .montecarlo import (
    OutageEstimate,
    SlopeFit,
    SnrGrid,
    TrialPlan,
    estimate_outage,
    fit_diversity,
    scaled_rates,
    simulate_curve,
)
from .protocols import OutageVerdict, ProtocolKind, RateAssignment, make_protocol
from .protocols.compress_forward import cf_outage
from .protocols.decode_forward import df_outage
from .protocols.dynamic_compress_forward import dcf_listen_fraction, dcf_outage
from .protocols.dynamic_decode_forward import ddf_outage
from .results import read_metadata
from .tradeoff import (
    DiversityPair,
    DmtCurve,
    MultiplexingPair,
    RateRegion,
    cf_dmt,
    df_optimal,
    df_region,
    df_symmetric_dmt,
    df_threshold,
    dmt_inverse,
    dmt_value,
    outer_bound,
)

__all__ = [
    "AntennaConfig",
    "ChannelMatrix",
    "ChannelRealization",
    "ConfigError",
    "DiversityPair",
    "DmtCurve",
    "DmtError",
    "DomainError",
    "ExponentVector",
    "InputError",
    "InsufficientDataError",
    "MultiplexingPair",
    "OutageEstimate",
    "OutageVerdict",
    "ProtocolKind",
    "RateAssignment",
    "RateRegion",
    "RealizationBatch",
    "RunConfig",
    "SearchMethod",
    "SlopeFit",
    "SnrGrid",
    "SnrPoint",
    "TrialPlan",
    "capacity",
    "cf_dmt",
    "cf_exponent",
    "cf_outage",
    "dcf_dmt",
    "dcf_listen_fraction",
    "dcf_outage",
    "ddf_outage",
    "df_optimal",
    "df_outage",
    "df_region",
    "df_symmetric_dmt",
    "df_threshold",
    "dmt_inverse",
    "dmt_value",
    "eigen_exponents",
    "estimate_outage",
    "exponent_weight",
    "fit_diversity",
    "fixed_listen_dmt",
    "half_power_capacity",
    "load_config",
    "mac_sum_capacity",
    "make_protocol",
    "minimize_exponent",
    "outer_bound",
    "parse_config",
    "read_metadata",
    "s_value",
    "sample_batch",
    "sample_realization",
    "scaled_rates",
    "simulate_curve",
]
