'''
Adaptive Thiele continued fraction interpolation.
'''

__version__ = '1.0.0'

from .errors import (
    BreakdownError, DuplicateAbscissa, InsufficientSamples, InvalidInput, InvalidN,
    NonFiniteValue, OverflowDetected, ParseError, ReaderError, SchemaError,
    ThieleError, VersionMismatch,
)
from .core import (
    DEFAULT_TOL, FitConfig, FitReport, SampleSet, ThieleModel, eval_cfrac,
    eval_cfrac_batch, fit_adaptive, fit_fixed_order, select_first_point,
)
from .convergents import (
    ConvergentTrace, check_consecutive_distinct, check_phi_residual_identity,
    convergent_trace, numerator_denominator,
)
from .newman import (
    NewmanConfig, NewmanStudyRow, StudyGrid, convergence_slope, newman_points,
    node_error_norm, pole_scan, run_newman_study, sup_error_on_grid,
)
from .export import read_study_csv, write_grid_csv, write_model, write_study_csv
from .readers.csv import read_samples
from .readers.json import read_model
