"""Speed-limit time estimates along open-quantum-system trajectories.

The library integrates Lindblad dynamics on small Hilbert spaces, measures
the Bures length of the traveled path against the geodesic distance
between its endpoints, derives the standard family of minimum-evolution-
time estimates from both, and classifies each estimate as attainable or
not by the dynamics that produced it.  A stopping-time analysis quantifies
how floating-point resolution caps trace-distance convergence toward
asymptotic stationary states.
"""

from .bounds import (
    AttainabilityVerdict,
    BoundReport,
    StoppingTimeCurve,
    build_report,
    classify_attainability,
    deffner_lutz,
    divergence_scan,
    report_for_model,
    stopping_time_curve,
    tau_av,
    tau_from_speed_functional,
    tau_min,
)
from .dynamics import (
    LindbladModel,
    ModelOracles,
    Trajectory,
    amplitude_damping,
    catalog,
    evolve,
    lindblad_rhs,
    load_model,
    model_by_name,
    model_from_dict,
    precession,
    pure_dephasing,
    spiral,
    stationary_state,
)
from .errors import (
    EigensolverError,
    FrozenDynamicsError,
    InconsistencyError,
    IntegrationError,
    ModelError,
    PurityError,
    QslError,
    StateError,
    StationaryStateError,
)
from .geometry import (
    PathLength,
    SpeedProfile,
    average_speed,
    cumulative_path_integral,
    path_length,
    qfi_rate,
    qfi_rate_bloch,
    speed_profile,
)
from .states import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    Spectrum,
    bloch_to_state,
    bures_angle,
    eigh,
    fidelity,
    matrix_sqrt,
    purity,
    schatten_norm,
    state_to_bloch,
    trace_distance,
)

__version__ = "0.1.0"

__all__ = [
    "AttainabilityVerdict",
    "BoundReport",
    "EigensolverError",
    "FrozenDynamicsError",
    "InconsistencyError",
    "IntegrationError",
    "LindbladModel",
    "ModelError",
    "ModelOracles",
    "PathLength",
    "PurityError",
    "QslError",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "Spectrum",
    "SpeedProfile",
    "StateError",
    "StationaryStateError",
    "StoppingTimeCurve",
    "Trajectory",
    "amplitude_damping",
    "average_speed",
    "bloch_to_state",
    "build_report",
    "bures_angle",
    "catalog",
    "classify_attainability",
    "cumulative_path_integral",
    "deffner_lutz",
    "divergence_scan",
    "eigh",
    "evolve",
    "fidelity",
    "lindblad_rhs",
    "load_model",
    "matrix_sqrt",
    "model_by_name",
    "model_from_dict",
    "path_length",
    "precession",
    "pure_dephasing",
    "purity",
    "qfi_rate",
    "qfi_rate_bloch",
    "report_for_model",
    "schatten_norm",
    "speed_profile",
    "spiral",
    "state_to_bloch",
    "stationary_state",
    "stopping_time_curve",
    "tau_av",
    "tau_from_speed_functional",
    "tau_min",
    "trace_distance",
]
