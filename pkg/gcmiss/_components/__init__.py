from .datagen import (
    ErrorKind, Mechanism, ErrorDistribution, MissingSpec, SimulatedDataset,
    gen_random_effects, gen_errors, gen_complete, impose_mar, impose_mnar,
    impose_missingness, mar_cutoff_levels, mnar_thresholds)
from .laplace import (
    check_loss, al_density, al_cdf, al_mixture_draw, sample_gig)
from .diagnostics import (
    spectral_variance, geweke_z, geweke_passes, effective_sample_size)
from .fiml import FimlOptions, FimlEstimator, fiml_loglik, fiml_fit
from .tsre import (
    TsreOptions, RobustSaturated, TsreEstimator, stage1_robust, stage2_fit,
    ml_discrepancy, tsre_fit)
from .selection import SelectionParams, selection_logit
from .rmb import (
    RmbPriors, ChainConfig, SamplerContext, PosteriorSummary, RmbEstimator,
    gibbs_step, initial_state, run_chain, rmb_fit)
from .monitors import (
    DrawMonitor, CheckpointMonitor, read_draws_csv, write_draws_csv)
from .datafiles import (
    ingest_csv, write_csv, describe_occasions, comparison_table,
    emit_replication_data)
from .simstudy import (
    Condition, ConditionResult, Budget, relative_bias, mse, run_condition,
    run_grid, default_grid, grid_from_config, results_table, audit_results)

__all__ = (
    ErrorKind, Mechanism, ErrorDistribution, MissingSpec, SimulatedDataset,
    gen_random_effects, gen_errors, gen_complete, impose_mar, impose_mnar,
    impose_missingness, mar_cutoff_levels, mnar_thresholds,
    check_loss, al_density, al_cdf, al_mixture_draw, sample_gig,
    spectral_variance, geweke_z, geweke_passes, effective_sample_size,
    FimlOptions, FimlEstimator, fiml_loglik, fiml_fit,
    TsreOptions, RobustSaturated, TsreEstimator, stage1_robust, stage2_fit,
    ml_discrepancy, tsre_fit,
    SelectionParams, selection_logit,
    RmbPriors, ChainConfig, SamplerContext, PosteriorSummary, RmbEstimator,
    gibbs_step, initial_state, run_chain, rmb_fit,
    DrawMonitor, CheckpointMonitor, read_draws_csv, write_draws_csv,
    ingest_csv, write_csv, describe_occasions, comparison_table,
    emit_replication_data,
    Condition, ConditionResult, Budget, relative_bias, mse, run_condition,
    run_grid, default_grid, grid_from_config, results_table, audit_results)
