"""Choice machines over hereditarily finite sets with insignificance checking."""
from .errors import (
    EvaluationError, ExplosionError, HFError, ICASMError, ParseError, SearchLimitError, StructureError,
    SupportError,
)
from .hf import Const, Permutation, Universe, default_universe
from .structure import (
    InputStructure, Location, Signature, State, format_structure, initial_state, parse_structure,
    permute_structure, state_permute,
)
from .syntax import Program, print_program, print_rule, print_term
from .parser import parse, parse_rule, parse_term
from .transforms import desugar, load_program, make_time_explicit
from .evaluator import Update, apply, consistent, delta_sets, eval_term, perm_update_set
from .runs import (
    Bounds, Outcome, RunResult, RunTree, RunVerdict, SchedulingMode, active_objects, critical_objects,
    explore, export_trace, format_trace, run,
)
from .encoding import TuringMachine, encode_ordered, even_ones_tm, length_mod3_tm, parse_tm, tm_run
from .programs import (
    builtin, builtin_matching, builtin_order_and_simulate, builtin_parity, builtin_red_choice,
    constructed_order, default_bounds, order_bounds, tape_contents,
)
from .insignificance import (
    FULL, TRANSPOSITIONS, InsignificanceReport, IsoSearchStrategy, brute_force_global_ic,
    check_run_local_ic, check_state_local_ic, find_iso,
)
from .symmetry import AutGroup, Orbit, automorphisms, colours, is_support, min_support, orbit

__version__ = "0.1.0"
