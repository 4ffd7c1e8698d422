"""Independent oracles and named property suites."""
from .lp import GridProblem, LPResult, build_grid, lp_oracle
from .suites import SUITES, SuiteReport, run_suite

__all__ = ["GridProblem", "LPResult", "build_grid", "lp_oracle", "SUITES", "SuiteReport", "run_suite"]
