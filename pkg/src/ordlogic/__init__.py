"""Toolkit for the ordered fragments of first-order logic (prefix, suffix
and infix orderings, with and without guards)."""
from .syntax import (And, Atom, Bottom, Exists, Forall, Formula, Implies, Not,
                     Or, Top, classify, depth_membership, parse_formula,
                     to_sexpr)
from .structures import (AffixType, Structure, affix_type, decode_list,
                         decode_matrix, encode_list, encode_matrix)
from .evaluator import eval_naive, eval_windowed, peak_window
from .bisimulation import (BisimRelation, GameConfig, bisim_fixpoint,
                           guarded_bisim_fixpoint, kround_game,
                           verify_bisimulation)
from .rewriter import (NormalForm, normalize_pair, to_normal_form_guarded,
                       to_normal_form_pre, to_suffix_form)
from .unravel import Hat, check_type_preservation, hah_unravel, is_hat
from .amalgam import (audit_conditions, build_pre_model, completion,
                      order_maximal_live, repair, run_guarded,
                      run_guarded_stage)

__version__ = "0.1.0"
