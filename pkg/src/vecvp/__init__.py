"""Vector Borwein-Preiss and Ekeland variational principles on finite metric spaces."""
from .certificate import brute_force_certificate
from .cones import (
    DEFAULT_TOL,
    DualFunctional,
    PolyhedralCone,
    boundary_distance,
    cone_contains,
    cone_interior_contains,
    cone_margin,
    distance_to_cone,
    is_pointed,
    select_dual_functional,
)
from .engine import VPTrace, run_construction, verify, verify_conclusions, verify_corollaries
from .exceptions import (
    ConeError,
    DimensionError,
    HypothesisError,
    IncompleteTraceError,
    InstanceError,
    VPError,
)
from .instances import dump_instance, gen_instance, load_instance, parse_instance
from .minimality import (
    MinimalityMode,
    check_c_lsc_witness,
    check_p26_directional,
    eps_upper_sublevel,
    gauge_lower_sector,
    is_eps_minimal,
    is_eps_minimal_wrt,
    lower_sublevel,
    min_eps,
    upper_sublevel,
)
from .principles import PrincipleRun, run_borwein_preiss, run_ekeland
from .problem import DeltaSequence, EpsSequence, VPProblem, validate_problem
from .report import Claim, VerificationReport, emit_report
from .spaces import (
    FiniteMetricSpace,
    MatrixGauge,
    MetricPower,
    NormPower,
    check_gauge_type,
    check_metric_axioms,
    check_triangle,
    gauge_eval,
)

__all__ = [
    "Claim",
    "ConeError",
    "DEFAULT_TOL",
    "DeltaSequence",
    "DimensionError",
    "DualFunctional",
    "EpsSequence",
    "FiniteMetricSpace",
    "HypothesisError",
    "IncompleteTraceError",
    "InstanceError",
    "MatrixGauge",
    "MetricPower",
    "MinimalityMode",
    "NormPower",
    "PolyhedralCone",
    "PrincipleRun",
    "VPError",
    "VPProblem",
    "VPTrace",
    "VerificationReport",
    "boundary_distance",
    "brute_force_certificate",
    "check_c_lsc_witness",
    "check_gauge_type",
    "check_metric_axioms",
    "check_p26_directional",
    "check_triangle",
    "cone_contains",
    "cone_interior_contains",
    "cone_margin",
    "distance_to_cone",
    "dump_instance",
    "emit_report",
    "eps_upper_sublevel",
    "gauge_eval",
    "gauge_lower_sector",
    "gen_instance",
    "is_eps_minimal",
    "is_eps_minimal_wrt",
    "is_pointed",
    "load_instance",
    "lower_sublevel",
    "min_eps",
    "parse_instance",
    "run_borwein_preiss",
    "run_construction",
    "run_ekeland",
    "select_dual_functional",
    "upper_sublevel",
    "validate_problem",
    "verify",
    "verify_conclusions",
    "verify_corollaries",
]

__version__ = "0.1.0"
