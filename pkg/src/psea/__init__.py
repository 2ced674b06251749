"""Power-splitting energy-accumulation relaying: analysis and simulation."""

from .chain import BatteryModel, build_transition_matrix, mode2_probability, stationary_distribution
from .channel import (
    SnrConstants,
    SystemParams,
    Topology,
    harvested_energy,
    instantaneous_snrs,
    outage_threshold,
    pathloss_gain,
    sample_channel_power,
    snr_constants,
)
from .config import ExperimentConfig, parse_config
from .errors import ConfigError, DomainError, NumericalInstabilityError, PseaError, SingularChainError
from .gammasum import GammaPair, discretize_energy, harvest_pair, sum_gamma_cdf
from .optimize import optimize_ps_ea, optimize_ps_noea, optimize_ts_ea
from .sim import SimConfig, SimResult, empirical_stationary, run_simulation
from .throughput import (
    ThroughputResult,
    delta_profile,
    phi,
    system_throughput,
    throughput_ps_ea,
    throughput_ts_ea,
)

__all__ = [
    "BatteryModel",
    "build_transition_matrix",
    "ConfigError",
    "delta_profile",
    "discretize_energy",
    "DomainError",
    "empirical_stationary",
    "ExperimentConfig",
    "GammaPair",
    "harvest_pair",
    "harvested_energy",
    "instantaneous_snrs",
    "mode2_probability",
    "NumericalInstabilityError",
    "optimize_ps_ea",
    "optimize_ps_noea",
    "optimize_ts_ea",
    "outage_threshold",
    "parse_config",
    "pathloss_gain",
    "phi",
    "PseaError",
    "run_simulation",
    "sample_channel_power",
    "SimConfig",
    "SimResult",
    "SingularChainError",
    "snr_constants",
    "SnrConstants",
    "stationary_distribution",
    "sum_gamma_cdf",
    "system_throughput",
    "SystemParams",
    "throughput_ps_ea",
    "throughput_ts_ea",
    "ThroughputResult",
    "Topology",
]

__version__ = "0.1.0"
