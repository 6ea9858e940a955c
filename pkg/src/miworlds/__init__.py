"""Ground states of the interacting-worlds oscillator recursion
x_{n+1} = x_n - 1/(x_1 + ... + x_n), their Gaussian-approximation
diagnostics, and the resampling Markov chain whose rescaled sum
approximates an Ornstein-Uhlenbeck process.
"""

from .analysis import (
    HamiltonianReport,
    PropertyReport,
    QuantilePoint,
    hamiltonian,
    quantile_deviation,
    verify_properties,
)
from .errors import (
    BisectionNotConvergedError,
    BracketNotFoundError,
    DegenerateConfigurationError,
    InvalidInputError,
    InvariantViolationError,
    MissingDependencyError,
    MIWError,
    SchemaError,
)
from .metrics import (
    DistanceReport,
    distance_report,
    ks_distance_to_normal,
    sawtooth_at,
    sawtooth_lower_bound,
    stein_upper_bound,
    sup_density_gap,
    wasserstein_empirical_to_zerobias,
    wasserstein_to_normal,
)
from .ou_chain import (
    ChainState,
    ConfigurationSource,
    NormalSource,
    PathStatistics,
    RescaledPath,
    ar1_reference,
    init_chain,
    ou_statistics,
    run_rescaled,
    step,
)
from .solver import (
    Configuration,
    SolverOptions,
    Trajectory,
    default_precision_digits,
    find_largest_root_Sn,
    find_largest_root_xn,
    iterate_recursion,
    median_index,
    normal_upper_quantile,
    shooting_residual,
    solve_ground_state,
)
from .zero_bias import (
    CouplingTable,
    ZeroBiasDensity,
    build_density,
    coupled_sample,
    coupling_masses,
    coupling_table_exact,
    density_at,
    density_mean,
    density_second_moment,
    sample_zero_bias,
)

__version__ = "0.1.0"

__all__ = [
    "BisectionNotConvergedError",
    "BracketNotFoundError",
    "ChainState",
    "Configuration",
    "ConfigurationSource",
    "CouplingTable",
    "DegenerateConfigurationError",
    "DistanceReport",
    "HamiltonianReport",
    "InvalidInputError",
    "InvariantViolationError",
    "MIWError",
    "MissingDependencyError",
    "NormalSource",
    "PathStatistics",
    "PropertyReport",
    "QuantilePoint",
    "RescaledPath",
    "SchemaError",
    "SolverOptions",
    "Trajectory",
    "ZeroBiasDensity",
    "ar1_reference",
    "build_density",
    "coupled_sample",
    "coupling_masses",
    "coupling_table_exact",
    "default_precision_digits",
    "density_at",
    "density_mean",
    "density_second_moment",
    "distance_report",
    "find_largest_root_Sn",
    "find_largest_root_xn",
    "hamiltonian",
    "init_chain",
    "iterate_recursion",
    "ks_distance_to_normal",
    "median_index",
    "normal_upper_quantile",
    "ou_statistics",
    "quantile_deviation",
    "run_rescaled",
    "sample_zero_bias",
    "sawtooth_at",
    "sawtooth_lower_bound",
    "shooting_residual",
    "solve_ground_state",
    "stein_upper_bound",
    "step",
    "sup_density_gap",
    "verify_properties",
    "wasserstein_empirical_to_zerobias",
    "wasserstein_to_normal",
]
