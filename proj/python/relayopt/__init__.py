"""Throughput-optimal power and rate allocation for mobile relays.

Thin wrapper around the native extension; all operations live in C++.
"""

try:
    from ._relayopt import *  # noqa: F401,F403
    from ._relayopt import __doc__ as _native_doc
except ImportError:  # development layout: extension next to the build tree
    from _relayopt import *  # noqa: F401,F403
    from _relayopt import __doc__ as _native_doc

__all__ = [
    "PhyParams",
    "TrajectoryPattern",
    "Trajectory",
    "LinkGains",
    "generate_trajectory",
    "validate_trajectory",
    "channel_gains",
    "WfResult",
    "weighted_wf",
    "classic_wf",
    "rate_curve",
    "invert_rate_curve",
    "ProblemInstance",
    "CaseTag",
    "Solution",
    "solve",
    "solve_general",
    "is_monotone_instance",
    "solve_monotone",
    "FeasibilityReport",
    "check_feasibility",
    "OracleResult",
    "grid_search_solve",
    "SolverError",
]
