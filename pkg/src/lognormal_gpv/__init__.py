"""Generalized p-values for comparing two log-normal means."""

from .distributions import (
    LogSummary,
    RngStream,
    chi_square_sample,
    lognormal_mean,
    std_normal_cdf,
    std_normal_sample,
    summarize_log,
)
from .pvalues import (
    Alternative,
    McSettings,
    Method,
    PValueResult,
    TestRequest,
    generalized_variable,
    gp_value,
    gp_value_quadrature,
    km_gp_value,
    phi_argument,
    two_sided_adjust,
    zhou_z_value,
)
from .simulation import ExperimentConfig, ExperimentResult, Scenario, run_grid, run_scenario

__version__ = "0.1.0"
