"""Predictive ability testing under heavy tails.

Self-normalized test statistics with subsampled critical values remain
valid whether the loss differentials have finite variance, infinite
variance, or no mean at all; classical Diebold-Mariano/HAC machinery is
included as the baseline, together with the heavy-tailed data-generating
processes, tail diagnostics and a Monte Carlo harness.
"""

from .backend import backend_name
from .dgp import Ar1Spec, SimulationError, SreSpec, simulate_ar1, simulate_sre
from .evaluate import PairwiseReport, pairwise_epa_matrix, spa_loss_matrix
from .experiments import ExperimentConfig, run_power_experiment, run_rejection_experiment
from .limits import (
    ar1_limit_mean,
    ar1_limit_second_moment,
    hac_limit_factor,
    hill_estimate,
    hill_plot,
    normalizing_sequence_estimate,
    sample_spectral_path,
    stable_scale_skew_mc,
    tail_balance_estimate,
)
from .losses import (
    EstimationError,
    ForecastSeries,
    Garch11Params,
    fit_garch11,
    garch_var_forecast,
    loss_differential,
    rw_quantile_forecast,
    squared_loss,
    tick_loss,
)
from .rng import (
    RngStream,
    SkewStudentParams,
    StableParams,
    StudentParams,
    gamma_fn,
    sample_skew_student,
    sample_stable,
    sample_student,
)
from .series import TimeSeries
from .stats import (
    PrefixTable,
    TestMethod,
    TestReport,
    build_prefix,
    dm_statistic,
    dm_test,
    hac_variance,
    modified_stat,
    self_norm_stat,
    spa_statistic,
    window_modified,
    window_self_norm,
)
from .subsampling import (
    ConfidenceInterval,
    SubsampleConfig,
    SubsampleDistribution,
    abs_test,
    default_block,
    empirical_quantile,
    epa_test,
    mean_confidence_interval,
    spa_test,
)

__version__ = "0.1.0"
