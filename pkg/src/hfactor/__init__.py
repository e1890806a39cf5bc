"""Degree sequences realizable by graphs with a spanning clique factor."""

from .checker import (BoundBreakdown, check_graphic, check_h1,
                      check_h_realizable, residue, rhs_bound, slack_profile)
from .core import (ContractViolation, DegreeSequence, FactorShape,
                   InvariantError, LabelledGraph, Move, Rule, Verdict,
                   VerifyReport, is_h_spanning, verify_realization)
from .factorize import UnsupportedEvenH, extract_matchings, round_robin_block
from .oracle import (CapExceeded, RetryBudgetExceeded, count_realizations,
                     decide_exists, enumerate_realizations, gen_sequence,
                     residual_graph, sweep_equivalence)
from .realizer import (ADVANCE, EngineReport, InvariantViolation,
                       StuckWithDeficiency, Subrealization, Unrealizable,
                       apply_move, critical_index, initial_subrealization,
                       realize, select_move)

__version__ = "0.1.0"
