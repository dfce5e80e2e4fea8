"""Estimate the proportion of alternative hypotheses for bounded and one-sided
nulls from characteristic-function matching."""

from .baselines import mr_estimate, one_sided_pvalue, storey_estimate
from .errors import (
    ConfigurationError,
    DomainError,
    NullPropError,
    NumericRangeError,
    QuadratureResourceError,
    UnsupportedConstruction,
)
from .estimators import (
    EstimateReport,
    EstimatorConfig,
    SpeedSchedule,
    class_membership,
    concentration_halfwidth,
    estimate_functional,
    estimate_pi1,
    oracle_functional,
    oracle_pi1,
    speed_t,
    variance_bound,
)
from .families import GammaNEF, LocationShift, ParameterVector, family_from_name
from .kernels import (
    BoundedNull,
    FunctionalSpec,
    OneSidedNull,
    PointNull,
    SeriesConfig,
    compose_full_kernel,
    compose_functional_kernel,
)
from .numerics import QuadratureConfig, triangular_weight, uniform_weight
from .simlab import ScenarioSpec, run_experiment, write_results

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
