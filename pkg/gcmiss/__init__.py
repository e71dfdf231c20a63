# -*- coding: utf-8 -*-
__version__ = '0.1.0'

from ._core.base_components import Estimator, GibbsBlock, Monitor
from ._core.composite import GibbsSweep
from ._core.model import (
    GrowthModelSpec, ParameterSet, LongitudinalDataset, FitResult,
    implied_mean, implied_covariance, parameter_names)
from ._core.exceptions import (
    InvalidDataError, DimensionMismatchError, NonPositiveDefiniteError,
    ConstantChainError, InvalidConfigError, InvalidStateError,
    ComponentMissingOutputError, ComponentExtraOutputError,
    ConvergenceWarning, BoundaryEstimateWarning, DroppedSubjectWarning)
from ._core.settings import (
    get_setting, set_setting, reset_settings, get_settings_string,
    set_profile, get_profile, settings_snapshot, apply_settings)
from ._components import (
    ErrorKind, Mechanism, ErrorDistribution, MissingSpec, SimulatedDataset,
    gen_complete, impose_mar, impose_mnar, impose_missingness,
    al_density, al_cdf, al_mixture_draw, sample_gig,
    geweke_z, effective_sample_size,
    FimlOptions, FimlEstimator, fiml_loglik, fiml_fit,
    TsreOptions, RobustSaturated, TsreEstimator, stage1_robust, stage2_fit,
    tsre_fit,
    SelectionParams, RmbPriors, ChainConfig, PosteriorSummary, RmbEstimator,
    gibbs_step, rmb_fit,
    DrawMonitor, CheckpointMonitor, read_draws_csv, write_draws_csv,
    ingest_csv, write_csv, describe_occasions, comparison_table,
    Condition, ConditionResult, relative_bias, mse, run_condition, run_grid,
    default_grid)

__all__ = (
    Estimator, GibbsBlock, Monitor, GibbsSweep,
    GrowthModelSpec, ParameterSet, LongitudinalDataset, FitResult,
    implied_mean, implied_covariance, parameter_names,
    InvalidDataError, DimensionMismatchError, NonPositiveDefiniteError,
    ConstantChainError, InvalidConfigError, InvalidStateError,
    ComponentMissingOutputError, ComponentExtraOutputError,
    ConvergenceWarning, BoundaryEstimateWarning, DroppedSubjectWarning,
    get_setting, set_setting, reset_settings, get_settings_string,
    set_profile, get_profile, settings_snapshot, apply_settings,
    ErrorKind, Mechanism, ErrorDistribution, MissingSpec, SimulatedDataset,
    gen_complete, impose_mar, impose_mnar, impose_missingness,
    al_density, al_cdf, al_mixture_draw, sample_gig,
    geweke_z, effective_sample_size,
    FimlOptions, FimlEstimator, fiml_loglik, fiml_fit,
    TsreOptions, RobustSaturated, TsreEstimator, stage1_robust, stage2_fit,
    tsre_fit,
    SelectionParams, RmbPriors, ChainConfig, PosteriorSummary, RmbEstimator,
    gibbs_step, rmb_fit,
    DrawMonitor, CheckpointMonitor, read_draws_csv, write_draws_csv,
    ingest_csv, write_csv, describe_occasions, comparison_table,
    Condition, ConditionResult, relative_bias, mse, run_condition, run_grid,
    default_grid
)
