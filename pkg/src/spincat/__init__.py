"""Spin-cat dephasing by an Ising environment and its probe-measurement reversal."""

from ._core import BACKEND
from .errors import (
    CostGuardError,
    DimensionMismatchError,
    DomainError,
    NumericalConsistencyError,
    OutcomeImpossibleError,
    SpinCatError,
    ValidationError,
)
from .model import (
    CatState,
    DephasingKernel,
    EnvParams,
    ProbeModel,
    StructuredDensity,
    apply_average_unitary,
    apply_environment,
    apply_probe_measurement,
    cat_coefficients,
    dephasing_kernel,
    dephasing_kernel_approx,
    outcome_probability,
    probe_model,
)
from .observables import (
    OutcomeTable,
    RecoveryReport,
    fidelity_squared,
    fidelity_to_cat,
    outcome_table,
    purity,
    recovery_report,
)

__version__ = "0.1.0"
