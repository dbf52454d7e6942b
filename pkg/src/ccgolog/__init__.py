"""Projection engine for event-driven concurrent robot plans.

Programs are built from sequencing, conditionals, loops, concurrent
composition (``tryAll``), prioritized policies (``withPol``), and a single
time-advancing action ``waitFor(cond)`` that jumps to the least time point
at which the condition holds.  Continuous fluents carry symbolic functions
of time; all arithmetic is exact.
"""

from .domain import (ActionDecl, Domain, EffectRule, Procedure, eval_formula,
                     expand_macros, lookup_effects, validate_domain)
from .engine import (ProjectionResult, Situation, TraceEntry, final,
                     initial_situation, poss, project, successor, trans)
from .errors import CcgologError, DomainError, IllegalActionError, ParseError
from .lang import (Act, And, Cmp, Constant, If, Linear, Lit, Nil, NIL, Not,
                   Or, Par, Piecewise, Prim, Prio, Seq, Test, TryAll, WaitFor,
                   Whenever, While, WithCtrl, WithPol, action_text,
                   formula_text, normalize_tform, program_equal, program_text,
                   tfunction_text)
from .parser import parse_domain, parse_program
from .report import TraceDocument, format_trace, trace_document
from .temporal import Interval, IntervalSet, Valuation, holds, ltp, solve_tform, val

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
