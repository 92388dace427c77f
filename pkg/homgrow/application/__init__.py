from .use_cases import cmd_export, cmd_homology, cmd_tower, cmd_verify, parse_levels
from .suites import SuiteResult, run_suite, run_suites

__all__ = [
    "cmd_homology", "cmd_tower", "cmd_verify", "cmd_export", "parse_levels",
    "SuiteResult", "run_suite", "run_suites",
]
