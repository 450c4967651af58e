"""Simulation and analysis of optimal unambiguous discrimination of two
polarization states in a free-space interferometer."""

from .bounds import BoundsReport, best_von_neumann_error, bounds_report, helstrom_bound, idp_bound
from .components import (
    MEASURED_CALIBRATION,
    PBSCalibration,
    PBSModel,
    WaveplateModel,
    calibrated_pbs,
    half_waveplate,
    ideal_pbs,
    load_calibration,
    variable_loss_stage,
)
from .errors import CalibrationError, ConvergenceError, DomainError, NumericalError, UndefinedEstimateError
from .interferometer import (
    DetectionProbabilities,
    InterferometerConfig,
    ModeState,
    align,
    calibrated_config,
    ideal_config,
    propagate,
    run_pair,
)
from .oracle import OracleReport, idp_povm_search, unequal_prior_inconclusive, von_neumann_search
from .photons import CountsRecord, PulseEnsemble, error_rate_estimate, expected_counts, sample_counts
from .states import JonesVector, StatePair, make_states, overlap
from .sweep import RunConfig, SweepRow, emit_csv, run_sweep

__version__ = "0.1.0"
