"""Structural stabilizability of symmetric networks, with attack and recovery tools."""

__version__ = "0.1.0"

from .analyze import (ComponentBound, CyclePacking, IndependentSet, MdimEstimate, StabilizabilityVerdict,
                      autonomous_bound, check_stabilizable, generic_controllable_dim, is_structurally_controllable,
                      max_cycle_packing, max_independent_set, mdim_bounds)
from .attack import (AttackResult, SetSystem, attack_exact, attack_via_reduction, build_min_k_union_instance,
                     check_assumption, min_k_union_via_attack, parse_set_system, reduce_min_k_union_to_attack,
                     solve_min_k_union)
from .errors import AssumptionError, NetstabError, PatternError, SearchLimitError
from .graphcore import (BipartiteView, Matching, SystemGraph, bipartite_view, build_graph, hall_deficiency,
                        hall_witness, matching_size, max_matching, scc_decompose, term_rank)
from .oracle import (NumericReport, controllability_rank, cycle_realization, monte_carlo_mdim, stabilizable_dim,
                     verify_generic_dim)
from .pattern import (CandidatePattern, NumericRealization, SystemPattern, append_candidates, check_candidates,
                      dump_system, parse_candidates, parse_system, sample_realization, select_columns)
from .recovery import RecoveryObjective, RecoveryResult, greedy_recover, recover_exact, recovery_objective, recovery_value
