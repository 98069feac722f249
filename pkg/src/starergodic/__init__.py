"""Ergodicity and recurrence for finite-dimensional *-dynamical systems."""

__version__ = "0.1.0"

from .algebra import (
    AlgebraElement,
    AlgebraKind,
    StarDynamicalSystem,
    State,
    Superoperator,
    ValidationReport,
    build_diagonal_swap,
    diagonal_swap_superoperator,
    seminorm_phi,
    state_apply,
    tau_apply,
    validate_system,
)
from .appendix import appendix_density, appendix_fixed_dims, appendix_operator
from .ergodic import (
    cesaro_average,
    ergodicity_verdicts,
    is_ergodic,
    mean_ergodic_limit,
    mixing_test,
    time_mean_test,
)
from .errors import (
    ConsistencyError,
    ConvergenceError,
    HypothesisError,
    InvalidSystemError,
    KindMismatchError,
    PreconditionError,
    StarErgodicError,
)
from .gns import GnsRepresentation, fixed_point_projector, gns_construct, iota_of
from .measure import (
    FiniteMeasureSystem,
    embed_commutative,
    intersection_measures,
    is_ergodic_measure,
    khintchine_report,
    pair_recurrence_report,
    rotation_system,
)
from .recurrence import (
    RecurrenceReport,
    certified_window,
    max_gap,
    recurrence_set_khintchine,
    recurrence_set_pair,
    verify_relative_dense,
)
