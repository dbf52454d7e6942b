"""Action theories: fluent declarations, preconditions, effect rules,
procedures, and expansion of the surface constructs into core programs.

Effect rules are the per-fluent update rules applied when an action occurs.
Each rule's right-hand side is kept as a small s-expression and evaluated
against the old valuation at the new start time, so the sampled values seen
by ``(val (old f) newStart)`` are the pre-action ones even when several
fluents change at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import temporal
from .errors import DomainError
from .lang import (Act, And, Cmp, Constant, If, Linear, Lit, Nil, NIL, Not,
                   Or, Par, Piecewise, Prim, Prio, Program, Seq, Test, TryAll,
                   WaitFor, Whenever, While, WithCtrl, WithPol, as_rational)


@dataclass(frozen=True)
class ActionDecl:
    name: str
    params: tuple[str, ...] = ()
    precondition: object = Lit(True)


@dataclass(frozen=True)
class EffectRule:
    """When an action matching ``action``/``params`` occurs, ``fluent`` is
    assigned the value of ``value`` (an s-expression, see ``eval_expr``)."""

    action: str
    params: tuple[str, ...]
    fluent: str
    value: object


@dataclass(frozen=True)
class Procedure:
    name: str
    params: tuple[str, ...]
    body: object


@dataclass(frozen=True)
class Domain:
    continuous: dict
    discrete: dict
    actions: dict
    effects: tuple = ()
    procedures: dict = field(default_factory=dict)
    hidden_fluents: frozenset = frozenset()
    hidden_actions: frozenset = frozenset()

    def initial_valuation(self) -> temporal.Valuation:
        return temporal.Valuation(dict(self.continuous), dict(self.discrete))

    def fluent_names(self):
        return set(self.continuous) | set(self.discrete)


# ---------------------------------------------------------------------------
# Validation

def validate_domain(d: Domain) -> Domain:
    """Check declarations; raises DomainError with a distinct diagnostic per
    defect class."""
    both = set(d.continuous) & set(d.discrete)
    if both:
        raise DomainError(f"fluent declared both continuous and discrete: {sorted(both)}")
    for name, f in d.continuous.items():
        if not isinstance(f, (Constant, Linear, Piecewise)):
            raise DomainError(f"continuous fluent '{name}' needs a time function initial value")
    seen_rules = set()
    for rule in d.effects:
        if rule.action not in d.actions:
            raise DomainError(f"effect rule for undeclared action '{rule.action}'")
        if rule.fluent not in d.continuous and rule.fluent not in d.discrete:
            raise DomainError(f"undeclared fluent '{rule.fluent}' in effect rule for '{rule.action}'")
        key = (rule.action, rule.fluent)
        if key in seen_rules:
            raise DomainError(f"duplicate effect rule for action '{rule.action}' and fluent '{rule.fluent}'")
        seen_rules.add(key)
        _check_expr_fluents(rule.value, d, rule.action)
    for decl in d.actions.values():
        _check_formula_fluents(decl.precondition, d,
                               f"precondition of action '{decl.name}'",
                               params=set(decl.params))
    _check_procedures_acyclic(d)
    return d


def _check_expr_fluents(expr, d: Domain, where: str):
    if isinstance(expr, (list, tuple)) and expr:
        head = expr[0]
        if head == "old":
            if len(expr) != 2 or not isinstance(expr[1], str):
                raise DomainError(f"malformed (old ...) in effect rule for '{where}'")
            if expr[1] not in d.continuous and expr[1] not in d.discrete:
                raise DomainError(f"undeclared fluent '{expr[1]}' in effect rule for '{where}'")
            return
        for sub in expr[1:]:
            _check_expr_fluents(sub, d, where)


def _check_formula_fluents(phi, d: Domain, where: str, params=frozenset()):
    if isinstance(phi, Lit):
        return
    if isinstance(phi, Cmp):
        if phi.fluent not in d.continuous and phi.fluent not in d.discrete:
            raise DomainError(f"undeclared fluent '{phi.fluent}' in {where}")
        return
    if isinstance(phi, Not):
        _check_formula_fluents(phi.arg, d, where, params)
        return
    if isinstance(phi, (And, Or)):
        _check_formula_fluents(phi.left, d, where, params)
        _check_formula_fluents(phi.right, d, where, params)
        return
    raise DomainError(f"not a condition in {where}: {phi!r}")


def _check_procedures_acyclic(d: Domain):
    colors: dict[str, int] = {}  # 1 = on stack, 2 = done

    def visit(name, stack):
        if colors.get(name) == 2:
            return
        if colors.get(name) == 1:
            cycle = stack[stack.index(name):] + [name]
            raise DomainError("recursive procedure cycle: " + " -> ".join(cycle))
        colors[name] = 1
        for callee in _called_procedures(d.procedures[name].body, d):
            visit(callee, stack + [name])
        colors[name] = 2

    for name in d.procedures:
        visit(name, [])


def _called_procedures(p, d: Domain):
    if isinstance(p, Prim) and isinstance(p.action, Act) and p.action.name in d.procedures:
        yield p.action.name
    for child in _children(p):
        yield from _called_procedures(child, d)


def _children(p):
    if isinstance(p, Seq):
        return (p.first, p.second)
    if isinstance(p, If):
        return (p.then, p.orelse)
    if isinstance(p, While):
        return (p.body,)
    if isinstance(p, TryAll):
        return (p.left, p.right)
    if isinstance(p, WithPol):
        return (p.policy, p.main)
    if isinstance(p, (Whenever, WithCtrl)):
        return (p.body,)
    if isinstance(p, Par):
        return (p.left, p.right)
    if isinstance(p, Prio):
        return (p.high, p.low)
    return ()


# ---------------------------------------------------------------------------
# Formula evaluation (test/if/while conditions and preconditions)

def eval_formula(phi, v: temporal.Valuation, t: Fraction) -> bool:
    """Truth of a condition at a situation: discrete atoms look up the stored
    constant, continuous atoms evaluate the time function at ``t``."""
    if isinstance(phi, Lit):
        return phi.value
    if isinstance(phi, Cmp):
        if phi.fluent in v.continuous:
            return temporal.holds(Cmp(phi.fluent, phi.op, as_rational(phi.value)), v, t)
        if phi.fluent in v.discrete:
            return _compare_discrete(v.discrete[phi.fluent], phi.op, phi.value)
        raise DomainError(f"undeclared fluent '{phi.fluent}'")
    if isinstance(phi, Not):
        return not eval_formula(phi.arg, v, t)
    if isinstance(phi, And):
        return eval_formula(phi.left, v, t) and eval_formula(phi.right, v, t)
    if isinstance(phi, Or):
        return eval_formula(phi.left, v, t) or eval_formula(phi.right, v, t)
    raise TypeError(f"not a condition: {phi!r}")


def _compare_discrete(stored, op, wanted) -> bool:
    if op == "=":
        if isinstance(stored, bool) != isinstance(wanted, bool):
            return False
        return stored == wanted
    if isinstance(stored, Fraction) and isinstance(wanted, (Fraction, int)) \
            and not isinstance(wanted, bool):
        return temporal.compare(stored, op, as_rational(wanted))
    raise DomainError(f"ordering comparison on non-numeric value: {stored!r} {op} {wanted!r}")


def bind_formula(phi, binding: dict):
    """Substitute bound parameter symbols appearing in value positions."""
    if not binding:
        return phi
    if isinstance(phi, Cmp):
        if isinstance(phi.value, str) and phi.value in binding:
            return Cmp(phi.fluent, phi.op, binding[phi.value])
        return phi
    if isinstance(phi, Not):
        return Not(bind_formula(phi.arg, binding))
    if isinstance(phi, And):
        return And(bind_formula(phi.left, binding), bind_formula(phi.right, binding))
    if isinstance(phi, Or):
        return Or(bind_formula(phi.left, binding), bind_formula(phi.right, binding))
    return phi


# ---------------------------------------------------------------------------
# Effect rule lookup and expression evaluation

def lookup_effects(action, d: Domain):
    """Matching effect rules with parameters bound; empty for waitFor and for
    actions without rules (those fluents keep their old values)."""
    if isinstance(action, WaitFor):
        return []
    out = []
    for rule in d.effects:
        if rule.action == action.name and len(rule.params) == len(action.args):
            out.append((rule.fluent, rule.value, dict(zip(rule.params, action.args))))
    return out


_ARITH = {
    "+": lambda args: sum(args, Fraction(0)),
    "*": lambda args: _product(args),
}


def _product(args):
    out = Fraction(1)
    for a in args:
        out *= a
    return out


def eval_expr(expr, old: temporal.Valuation, now: Fraction, binding: dict):
    """Evaluate an effect-rule expression.

    Supported forms: rational and boolean literals; symbols (parameters are
    substituted, anything else is a symbolic constant); ``newStart``;
    ``(old f)``; ``(val e t)``; arithmetic ``+ - * /``; comparisons and
    ``and/or/not`` (inside conditionals); ``(if c a b)``; and the time
    function constructors ``constant``/``linear``/``piecewise``.
    """
    if isinstance(expr, (Fraction, bool)):
        return expr
    if isinstance(expr, (Constant, Linear, Piecewise)):
        return expr
    if isinstance(expr, str):
        if expr == "newStart":
            return now
        if expr in binding:
            return binding[expr]
        return expr
    if isinstance(expr, (list, tuple)) and expr:
        head = expr[0]
        args = expr[1:]
        if head == "old":
            name = args[0]
            if name in old.continuous:
                return old.continuous[name]
            if name in old.discrete:
                return old.discrete[name]
            raise DomainError(f"undeclared fluent '{name}' in effect expression")
        if head == "val":
            f = eval_expr(args[0], old, now, binding)
            t = _num(eval_expr(args[1], old, now, binding))
            if not isinstance(f, (Constant, Linear, Piecewise)):
                raise DomainError(f"val applied to a non time function: {f!r}")
            return temporal.val(f, t)
        if head in _ARITH:
            return _ARITH[head]([_num(eval_expr(a, old, now, binding)) for a in args])
        if head == "-":
            nums = [_num(eval_expr(a, old, now, binding)) for a in args]
            if len(nums) == 1:
                return -nums[0]
            return nums[0] - sum(nums[1:], Fraction(0))
        if head == "/":
            nums = [_num(eval_expr(a, old, now, binding)) for a in args]
            quotient = nums[0]
            for n in nums[1:]:
                if n == 0:
                    raise DomainError("division by zero in effect expression")
                quotient /= n
            return quotient
        if head in ("<", "<=", "=", ">=", ">"):
            a = eval_expr(args[0], old, now, binding)
            b = eval_expr(args[1], old, now, binding)
            if head == "=":
                return _eq(a, b)
            return temporal.compare(_num(a), head, _num(b))
        if head == "and":
            return all(_truth(eval_expr(a, old, now, binding)) for a in args)
        if head == "or":
            return any(_truth(eval_expr(a, old, now, binding)) for a in args)
        if head == "not":
            return not _truth(eval_expr(args[0], old, now, binding))
        if head == "if":
            chosen = args[1] if _truth(eval_expr(args[0], old, now, binding)) else args[2]
            return eval_expr(chosen, old, now, binding)
        if head == "constant":
            return Constant(_num(eval_expr(args[0], old, now, binding)))
        if head == "linear":
            return Linear(_num(eval_expr(args[0], old, now, binding)),
                          _num(eval_expr(args[1], old, now, binding)),
                          _num(eval_expr(args[2], old, now, binding)))
        if head == "piecewise":
            pts = tuple((_num(eval_expr(t, old, now, binding)),
                         _num(eval_expr(vv, old, now, binding)))
                        for t, vv in args[0])
            return Piecewise(pts, _num(eval_expr(args[1], old, now, binding)))
        raise DomainError(f"unknown operator '{head}' in effect expression")
    raise DomainError(f"malformed effect expression: {expr!r}")


def _num(x) -> Fraction:
    if isinstance(x, Fraction) and not isinstance(x, bool):
        return x
    raise DomainError(f"expected a number, got {x!r}")


def _truth(x) -> bool:
    if isinstance(x, bool):
        return x
    raise DomainError(f"expected a boolean, got {x!r}")


def _eq(a, b) -> bool:
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    return a == b


# ---------------------------------------------------------------------------
# Macro expansion

def expand_macros(surface, d: Domain) -> tuple[object, Domain]:
    """Inline procedure calls and expand whenever/withCtrl/par/prio into the
    core constructs.

    Returns the core program together with a domain extended by the hidden
    flag fluents and setter actions the par/prio encodings introduce.  The
    output is validated against the extended domain.
    """
    taken = d.fluent_names() | set(d.actions)
    extra_discrete: dict = {}
    extra_actions: dict = {}
    extra_effects: list = []
    hidden_fluents = set(d.hidden_fluents)
    hidden_actions = set(d.hidden_actions)
    counter = [0]

    def fresh(base: str) -> str:
        while True:
            counter[0] += 1
            name = f"_{base}{counter[0]}"
            if name not in taken:
                taken.add(name)
                return name

    def make_flag() -> tuple[str, str]:
        flag = fresh("flg")
        setter = fresh("setFlg")
        extra_discrete[flag] = False
        extra_actions[setter] = ActionDecl(setter)
        extra_effects.append(EffectRule(setter, (), flag, True))
        hidden_fluents.add(flag)
        hidden_actions.add(setter)
        return flag, setter

    def walk(p, stack: tuple):
        if isinstance(p, Nil):
            return p
        if isinstance(p, Prim):
            a = p.action
            if isinstance(a, Act) and a.name in d.procedures:
                proc = d.procedures[a.name]
                if a.name in stack:
                    cycle = list(stack[stack.index(a.name):]) + [a.name]
                    raise DomainError("recursive procedure cycle: " + " -> ".join(cycle))
                if len(proc.params) != len(a.args):
                    raise DomainError(
                        f"procedure '{a.name}' expects {len(proc.params)} argument(s), got {len(a.args)}")
                body = _substitute(proc.body, dict(zip(proc.params, a.args)))
                return walk(body, stack + (a.name,))
            return p
        if isinstance(p, Test):
            return p
        if isinstance(p, Seq):
            return Seq(walk(p.first, stack), walk(p.second, stack))
        if isinstance(p, If):
            return If(p.cond, walk(p.then, stack), walk(p.orelse, stack))
        if isinstance(p, While):
            return While(p.cond, walk(p.body, stack))
        if isinstance(p, TryAll):
            return TryAll(walk(p.left, stack), walk(p.right, stack))
        if isinstance(p, WithPol):
            return WithPol(walk(p.policy, stack), walk(p.main, stack))
        if isinstance(p, Whenever):
            return While(Lit(True), Seq(Prim(WaitFor(p.cond)), walk(p.body, stack)))
        if isinstance(p, WithCtrl):
            return _guard(walk(p.body, stack), p.cond)
        if isinstance(p, Par):
            left = walk(p.left, stack)
            right = walk(p.right, stack)
            flag1, set1 = make_flag()
            flag2, set2 = make_flag()
            return TryAll(
                Seq(left, Seq(Prim(Act(set1)), Test(Cmp(flag2, "=", True)))),
                Seq(right, Seq(Prim(Act(set2)), Test(Cmp(flag1, "=", True)))))
        if isinstance(p, Prio):
            high = walk(p.high, stack)
            low = walk(p.low, stack)
            flag, setter = make_flag()
            return WithPol(Seq(high, Prim(Act(setter))),
                           Seq(low, Test(Cmp(flag, "=", True))))
        raise TypeError(f"not a program: {p!r}")

    core = walk(surface, ())
    extended = replace(
        d,
        discrete={**d.discrete, **extra_discrete},
        actions={**d.actions, **extra_actions},
        effects=d.effects + tuple(extra_effects),
        hidden_fluents=frozenset(hidden_fluents),
        hidden_actions=frozenset(hidden_actions))
    check_program(core, extended)
    return core, extended


def _guard(p, cond):
    # Every primitive action and test runs only while the guard holds;
    # a false guard blocks rather than skips.
    blocked = Test(Lit(False))
    if isinstance(p, Nil):
        return p
    if isinstance(p, Prim):
        return If(cond, p, blocked)
    if isinstance(p, Test):
        return If(cond, p, blocked)
    if isinstance(p, Seq):
        return Seq(_guard(p.first, cond), _guard(p.second, cond))
    if isinstance(p, If):
        return If(p.cond, _guard(p.then, cond), _guard(p.orelse, cond))
    if isinstance(p, While):
        return While(p.cond, _guard(p.body, cond))
    if isinstance(p, TryAll):
        return TryAll(_guard(p.left, cond), _guard(p.right, cond))
    if isinstance(p, WithPol):
        return WithPol(_guard(p.policy, cond), _guard(p.main, cond))
    raise TypeError(f"not a core program: {p!r}")


def _substitute(p, binding: dict):
    if isinstance(p, Nil):
        return p
    if isinstance(p, Prim):
        a = p.action
        if isinstance(a, WaitFor):
            return Prim(WaitFor(bind_formula(a.cond, binding)))
        args = tuple(binding.get(x, x) if isinstance(x, str) else x for x in a.args)
        return Prim(Act(a.name, args))
    if isinstance(p, Test):
        return Test(bind_formula(p.cond, binding))
    if isinstance(p, Seq):
        return Seq(_substitute(p.first, binding), _substitute(p.second, binding))
    if isinstance(p, If):
        return If(bind_formula(p.cond, binding),
                  _substitute(p.then, binding), _substitute(p.orelse, binding))
    if isinstance(p, While):
        return While(bind_formula(p.cond, binding), _substitute(p.body, binding))
    if isinstance(p, TryAll):
        return TryAll(_substitute(p.left, binding), _substitute(p.right, binding))
    if isinstance(p, WithPol):
        return WithPol(_substitute(p.policy, binding), _substitute(p.main, binding))
    if isinstance(p, Whenever):
        return Whenever(bind_formula(p.cond, binding), _substitute(p.body, binding))
    if isinstance(p, WithCtrl):
        return WithCtrl(bind_formula(p.cond, binding), _substitute(p.body, binding))
    if isinstance(p, Par):
        return Par(_substitute(p.left, binding), _substitute(p.right, binding))
    if isinstance(p, Prio):
        return Prio(_substitute(p.high, binding), _substitute(p.low, binding))
    raise TypeError(f"not a program: {p!r}")


# ---------------------------------------------------------------------------
# Core program checking

def check_program(p, d: Domain):
    """Validate a core program against a domain: declared actions with the
    right arity, declared fluents, and waitFor conditions that are pure
    continuous comparisons with rational bounds."""
    if isinstance(p, Nil):
        return
    if isinstance(p, Prim):
        a = p.action
        if isinstance(a, WaitFor):
            _check_tform(a.cond, d)
            return
        decl = d.actions.get(a.name)
        if decl is None:
            raise DomainError(f"undeclared action '{a.name}'")
        if len(decl.params) != len(a.args):
            raise DomainError(
                f"action '{a.name}' expects {len(decl.params)} argument(s), got {len(a.args)}")
        return
    if isinstance(p, Test):
        _check_formula_fluents(p.cond, d, "test condition")
        return
    if isinstance(p, (Seq, If, While, TryAll, WithPol)):
        if isinstance(p, (If, While)):
            _check_formula_fluents(p.cond, d, "condition")
        for child in _children(p):
            check_program(child, d)
        return
    raise DomainError(f"surface construct left after expansion: {p!r}")


def _check_tform(phi, d: Domain):
    if isinstance(phi, Cmp):
        if phi.fluent not in d.continuous:
            raise DomainError(
                f"waitFor condition must compare continuous fluents; '{phi.fluent}' is not one")
        if not isinstance(phi.value, Fraction) or isinstance(phi.value, bool):
            raise DomainError(
                f"waitFor comparison against a non-numeric bound: {phi.value!r}")
        return
    if isinstance(phi, Not):
        _check_tform(phi.arg, d)
        return
    if isinstance(phi, (And, Or)):
        _check_tform(phi.left, d)
        _check_tform(phi.right, d)
        return
    if isinstance(phi, Lit):
        raise DomainError("true/false literals are not allowed in waitFor conditions")
    raise DomainError(f"not a waitFor condition: {phi!r}")
