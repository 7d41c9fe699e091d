"""Greedy hyperplane cuts that shrink many point sets at once.

Given point sets P_1..P_m in R^d with size targets mu_i, find few hyperplanes
whose arrangement leaves at most mu_i points of P_i in any face.  The
problem is reduced to a sum of pair-cutting partial covers and solved with
the greedy algorithm for monotone submodular functions.
"""

from .formats import emit_instance, emit_solution, parse_instance, parse_solution
from .geometry import (
    CanonicalHalfspace,
    Group,
    Hyperplane,
    PointConfig,
    build_rmc,
    check_general_position,
    enumerate_halfspaces,
    side_sign,
    solve_geometric,
    verify_partition,
    witness_for_subset,
)
from .greedy import FunctionObjective, GreedyTrace, SubmodularObjective, greedy_cover, marginal_gain
from .instances import (
    PCMSInstance,
    PTDInstance,
    RMCInstance,
    SetSystem,
    arrangement,
    cut_of,
    face_of,
    pcms_objective,
    ptd_to_pcms,
    reduce_by_half,
    rmc_objective,
    solve_pcms,
    solve_ptd,
    solve_rmc,
    verify_pcms,
    verify_ptd,
    verify_rmc,
)
from .oracle import OracleBudget, check_submodular, exact_min_cover, realizable_subsets

__version__ = "0.1.0"
