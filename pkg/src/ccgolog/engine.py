"""Transition semantics and projection.

A situation is a finite action history together with the progressed fluent
valuation and the time the situation begins.  Every action other than
waitFor happens immediately; waitFor advances the clock to the least time
point of its condition.  ``trans`` computes the unique next configuration of
the deterministic fragment: when both sides of a concurrent construct could
step, the one whose resulting situation starts earlier goes first, the
policy side of withPol wins ties, and tryAll ties go to the left branch.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .domain import Domain, bind_formula, eval_expr, eval_formula, lookup_effects
from .errors import DomainError, IllegalActionError
from .lang import (Constant, If, Linear, Nil, NIL, Piecewise, Prim, Seq,
                   Test, TryAll, WaitFor, While, WithPol, action_text,
                   formula_text, is_core)
from .temporal import Valuation, ltp


@dataclass(frozen=True)
class Situation:
    history: tuple
    start: Fraction
    valuation: Valuation


@dataclass(frozen=True)
class TraceEntry:
    time: Fraction
    action: object


@dataclass(frozen=True)
class ProjectionResult:
    status: str  # "completed" | "blocked" | "step-limit"
    situation: Situation
    remaining: object
    trace: tuple
    steps: int
    reason: str | None = None

    @property
    def completed(self) -> bool:
        return self.status == "completed"


def initial_situation(d: Domain) -> Situation:
    return Situation((), Fraction(0), d.initial_valuation())


def poss(action, s: Situation, d: Domain) -> bool:
    """Action precondition: waitFor needs its condition to have a least time
    point; named actions evaluate their declared precondition."""
    if isinstance(action, WaitFor):
        return ltp(action.cond, s.valuation, s.start) is not None
    decl = d.actions.get(action.name)
    if decl is None:
        raise DomainError(f"undeclared action '{action.name}'")
    if len(decl.params) != len(action.args):
        raise DomainError(
            f"action '{action.name}' expects {len(decl.params)} argument(s), got {len(action.args)}")
    binding = dict(zip(decl.params, action.args))
    return eval_formula(bind_formula(decl.precondition, binding), s.valuation, s.start)


def successor(action, s: Situation, d: Domain) -> Situation:
    """The situation after performing ``action``.

    waitFor only advances the start time.  For other actions, every matching
    effect rule is evaluated against the old valuation at the (unchanged)
    start time and the updates are applied together; fluents without a
    matching rule keep their values.
    """
    if not poss(action, s, d):
        raise IllegalActionError(f"action not possible here: {action_text(action)}")
    if isinstance(action, WaitFor):
        t = ltp(action.cond, s.valuation, s.start)
        assert t is not None and t >= s.start
        return Situation(s.history + (action,), t, s.valuation)
    t = s.start
    cont_updates: dict = {}
    disc_updates: dict = {}
    for fluent, expr, binding in lookup_effects(action, d):
        value = eval_expr(expr, s.valuation, t, binding)
        if fluent in s.valuation.continuous:
            if not isinstance(value, (Constant, Linear, Piecewise)):
                raise DomainError(
                    f"effect for continuous fluent '{fluent}' produced {value!r}, not a time function")
            cont_updates[fluent] = value
        else:
            if isinstance(value, (Constant, Linear, Piecewise)):
                raise DomainError(
                    f"effect for discrete fluent '{fluent}' produced a time function")
            disc_updates[fluent] = value
    return Situation(s.history + (action,), t,
                     s.valuation.updated(cont_updates, disc_updates))


def final(p, s: Situation) -> bool:
    """May the program legally stop in this situation?"""
    if isinstance(p, Nil):
        return True
    if isinstance(p, (Prim, Test)):
        return False
    if isinstance(p, Seq):
        return final(p.first, s) and final(p.second, s)
    if isinstance(p, If):
        branch = p.then if eval_formula(p.cond, s.valuation, s.start) else p.orelse
        return final(branch, s)
    if isinstance(p, While):
        return (not eval_formula(p.cond, s.valuation, s.start)) or final(p.body, s)
    if isinstance(p, TryAll):
        return final(p.left, s) or final(p.right, s)
    if isinstance(p, WithPol):
        return final(p.main, s)
    raise TypeError(f"not a core program: {p!r}")


def trans(p, s: Situation, d: Domain):
    """One computation step: the next (program, situation), or None if the
    configuration cannot move."""
    if isinstance(p, Nil):
        return None
    if isinstance(p, Prim):
        if poss(p.action, s, d):
            return NIL, successor(p.action, s, d)
        return None
    if isinstance(p, Test):
        if eval_formula(p.cond, s.valuation, s.start):
            return NIL, s
        return None
    if isinstance(p, Seq):
        if final(p.first, s):
            return trans(p.second, s, d)
        step = trans(p.first, s, d)
        if step is None:
            return None
        rest, s2 = step
        return Seq(rest, p.second), s2
    if isinstance(p, If):
        branch = p.then if eval_formula(p.cond, s.valuation, s.start) else p.orelse
        return trans(branch, s, d)
    if isinstance(p, While):
        if not eval_formula(p.cond, s.valuation, s.start):
            return None
        step = trans(p.body, s, d)
        if step is None:
            return None
        rest, s2 = step
        return Seq(rest, p), s2
    if isinstance(p, TryAll):
        if final(p.left, s) or final(p.right, s):
            return None
        left = trans(p.left, s, d)
        right = trans(p.right, s, d)
        if left is not None and (right is None or left[1].start <= right[1].start):
            return TryAll(left[0], p.right), left[1]
        if right is not None:
            return TryAll(p.left, right[0]), right[1]
        return None
    if isinstance(p, WithPol):
        if final(p.main, s):
            return None
        pol = trans(p.policy, s, d)
        main = trans(p.main, s, d)
        if pol is not None and (main is None or pol[1].start <= main[1].start):
            return WithPol(pol[0], p.main), pol[1]
        if main is not None:
            return WithPol(p.policy, main[0]), main[1]
        return None
    raise TypeError(f"not a core program: {p!r}")


def blocked_reason(p, s: Situation, d: Domain) -> str:
    """Why the non-final configuration has no transition."""
    if isinstance(p, Nil):
        return "nothing left to execute"
    if isinstance(p, Prim):
        a = p.action
        if isinstance(a, WaitFor):
            return f"waitFor condition has no least time point: {formula_text(a.cond)}"
        return f"precondition of action {action_text(a)} is false"
    if isinstance(p, Test):
        return f"test condition is false: {formula_text(p.cond)}"
    if isinstance(p, Seq):
        if final(p.first, s):
            return blocked_reason(p.second, s, d)
        return blocked_reason(p.first, s, d)
    if isinstance(p, If):
        branch = p.then if eval_formula(p.cond, s.valuation, s.start) else p.orelse
        return blocked_reason(branch, s, d)
    if isinstance(p, While):
        return blocked_reason(p.body, s, d)
    if isinstance(p, TryAll):
        return (f"tryAll blocked on both branches: [{blocked_reason(p.left, s, d)}] "
                f"and [{blocked_reason(p.right, s, d)}]")
    if isinstance(p, WithPol):
        return blocked_reason(p.main, s, d)
    raise TypeError(f"not a core program: {p!r}")


def project(p, d: Domain, max_steps: int = 100000) -> ProjectionResult:
    """Iterate ``trans`` from the initial situation until the program may
    stop, records why it cannot move, or the step budget runs out.

    The trace lists every executed action with the start time of the
    situation it produced; test steps change nothing and leave no entry.
    """
    if not is_core(p):
        raise DomainError("program still contains surface constructs; expand macros first")
    s = initial_situation(d)
    trace: list[TraceEntry] = []
    steps = 0
    while True:
        if final(p, s):
            return ProjectionResult("completed", s, p, tuple(trace), steps)
        if steps >= max_steps:
            return ProjectionResult("step-limit", s, p, tuple(trace), steps)
        step = trans(p, s, d)
        if step is None:
            return ProjectionResult("blocked", s, p, tuple(trace), steps,
                                    reason=blocked_reason(p, s, d))
        p, s2 = step
        if len(s2.history) > len(s.history):
            entry = TraceEntry(s2.start, s2.history[-1])
            if trace:
                assert entry.time >= trace[-1].time
            trace.append(entry)
        s = s2
        steps += 1
