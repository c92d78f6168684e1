"""Two-sided reflection (Skorokhod) maps on piecewise-constant paths."""

from .cadlag_path import (
    Band,
    PathParseError,
    StepPath,
    evaluate,
    merged_grid,
    oscillation,
    parse_csv,
    parse_json,
    project_band,
    read_path,
    shift,
    uniform_distance,
    write_path,
)
from .one_sided import OneSidedSolution, check_complementarity_one_sided, gamma_lower, gamma_upper
from .oracle import fixed_point_regulators, verify_solution
from .report import ComplianceReport, ConvergenceError, DomainError, GeneratorError, Violation
from .two_sided import (
    METHODS,
    CrossingSchedule,
    TwoSidedSolution,
    c_from_schedule,
    constraining_term,
    crossing_schedule,
    decompose_regulator,
    lambda_map,
    reflect,
    reflect_symmetric_check,
)

__version__ = "0.1.0"
