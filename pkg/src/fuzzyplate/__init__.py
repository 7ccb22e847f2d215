"""Fuzzy finite-difference propagation for the suddenly accelerated plate problem."""
__version__ = "0.1.0"

from .errors import DomainError, InstabilityError, ValidationError, VerificationError
from .fuzzy import (AlphaLevels, FuzzyScalar, Interval, TriangularFuzzyNumber, alpha_cut, fuzzify,
                    iv_add, iv_div, iv_mul, iv_sub, membership, width)
from .solver import (CrispField, FuzzyField, GridSpec, IntervalField, IntervalParams,
                     PhysicalParams, solve_crisp, solve_fuzzy, solve_interval, step_crisp,
                     step_interval)
from .stability import build_update_matrix, check_stability, seeded_error_experiment
from .scenario import (DEFAULT_TFNS, ScenarioSpec, run_case, sensitivity_ranking, vertex_oracle,
                       width_metrics)
