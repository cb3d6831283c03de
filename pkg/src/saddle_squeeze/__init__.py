"""Squeezed-state transmission diagnostics for quantum normal-form reaction bottlenecks."""

from .errors import (
    DomainError,
    NoBottleneckError,
    SaddleSqueezeError,
    SeriesLimitError,
    SingularDenominatorError,
    UndefinedReferenceError,
    ValidationError,
)
from .gaussian_moments import (
    MomentOrder,
    bath_action_power_moment,
    double_factorial,
    gaussian_moment,
    wick_moment,
)
from .qnf_symbol import (
    ModelParams,
    QnfSymbol,
    QnfTerm,
    ReactiveEnergyResult,
    ThresholdOutcome,
    ThresholdResult,
    build_two_dof_symbol,
    candidate_width,
    depletion_threshold,
    geometric_threshold,
    max_bath_actions,
    reactive_energy,
)
from .squeezed_state import (
    BathCovariance,
    SqueezedState,
    action_area_scale,
    covariance,
    expected_bath_action,
    number_distribution,
    number_distribution_prefix,
    occupation_probability,
    wigner_density,
)
from .transmission import (
    TransmissionResult,
    kemble,
    log_kemble,
    suppression_metric,
    transmission_qnf,
    transmission_quadratic,
)

__version__ = "0.1.0"
