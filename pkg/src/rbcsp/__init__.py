"""Random CSP instances with growing domains, their robust solutions, and
the first-moment theory that locates the critical constraint density."""

from .core import (
    BERNOULLI,
    Constraint,
    DegreeProfile,
    EXACT,
    ExactSpaceError,
    Instance,
    NotASolutionError,
    ParameterError,
    RBParams,
    ResourceBudgetError,
    alpha_for_domain,
    decode_tuple,
    degree_profile,
    delta,
    derive_params,
    encode_tuple,
    find_repair,
    generate,
    generate_with_resamples,
    is_super_solution,
    params_for,
    r_for_constraints,
    regular_profile,
    repair_levels,
    satisfies,
)
from .fileio import (
    ParseError,
    parse_assignment,
    parse_instance,
    serialize_assignment,
    serialize_instance,
)
from .montecarlo import (
    ExpectedCounts,
    MCEstimate,
    RepairBoundsResult,
    SweepRow,
    mc_expected_counts,
    mc_repair_bounds,
    mc_repair_prob,
    render_sweep_csv,
    sweep,
)
from .search import CountReport, backtrack_solve, count_all, find_super
from .theory import (
    MomentReport,
    log_expected_solutions,
    log_expected_super_bounds,
    pair_repair_sat_prob,
    repair_sat_prob,
    threshold,
    variable_failure_prob,
)

__version__ = "0.1.0"

__all__ = [
    "BERNOULLI",
    "Constraint",
    "CountReport",
    "DegreeProfile",
    "EXACT",
    "ExactSpaceError",
    "ExpectedCounts",
    "Instance",
    "MCEstimate",
    "MomentReport",
    "NotASolutionError",
    "ParameterError",
    "ParseError",
    "RBParams",
    "RepairBoundsResult",
    "ResourceBudgetError",
    "SweepRow",
    "alpha_for_domain",
    "backtrack_solve",
    "count_all",
    "decode_tuple",
    "degree_profile",
    "delta",
    "derive_params",
    "encode_tuple",
    "find_repair",
    "find_super",
    "generate",
    "generate_with_resamples",
    "is_super_solution",
    "log_expected_solutions",
    "log_expected_super_bounds",
    "mc_expected_counts",
    "mc_repair_bounds",
    "mc_repair_prob",
    "pair_repair_sat_prob",
    "params_for",
    "parse_assignment",
    "parse_instance",
    "r_for_constraints",
    "regular_profile",
    "render_sweep_csv",
    "repair_levels",
    "repair_sat_prob",
    "satisfies",
    "serialize_assignment",
    "serialize_instance",
    "sweep",
    "threshold",
    "variable_failure_prob",
]
