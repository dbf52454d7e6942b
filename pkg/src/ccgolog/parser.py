"""Parsers for the s-expression program and domain file formats.

Program grammar (prefix, ``;`` starts a comment to end of line)::

    nil | <action> | (<action> arg ...)
    (seq p1 p2 ...)            right-folded, (seq p) is p
    (if cond p1 p2)
    (while cond p)
    (tryAll p1 p2 ...)         right-folded
    (withPol p1 p2)
    (waitFor cond)
    (test cond)
    (whenever cond p)          surface: expands to a waitFor loop
    (withCtrl cond p)          surface: guards every action/test with cond
    (par p1 p2)  (prio p1 p2)  surface: flag encodings

    cond := true | false | <fluent>
          | (<op> fluent const)   with op in  <  <=  =  >=  >
          | (and c1 c2 ...) | (or c1 c2 ...) | (not c)

Domain files are sequences of declarations::

    (continuous name (constant x) | (linear x v t0) | (piecewise ((t v) ...) rate))
    (discrete name init)
    (action name (param ...) [(poss cond)])
    (effect (name param ...) fluent expr)
    (proc name (param ...) body)

Numbers are exact: ``20``, ``-3/2``, and ``46.5`` all parse to rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .domain import ActionDecl, Domain, EffectRule, Procedure
from .errors import ParseError
from .lang import (Act, And, Cmp, COMPARISONS, Constant, If, Linear, Lit,
                   NIL, Not, Or, Par, Piecewise, Prim, Prio, Seq, Test,
                   TryAll, WaitFor, Whenever, While, WithCtrl, WithPol)


@dataclass(frozen=True)
class Node:
    """An s-expression with its source position: value is a Fraction, bool,
    symbol string, or list of Nodes."""

    value: object
    line: int
    column: int

    @property
    def is_list(self) -> bool:
        return isinstance(self.value, list)


def _atom_value(text: str):
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        return text


def tokenize(text: str):
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c.isspace():
            col += 1
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            yield c, line, col
            col += 1
            i += 1
        else:
            start = i
            start_col = col
            while i < n and not text[i].isspace() and text[i] not in "();":
                i += 1
                col += 1
            yield text[start:i], line, start_col
    yield None, line, col  # end marker


def read_nodes(text: str) -> list[Node]:
    """Read all top-level s-expressions."""
    tokens = list(tokenize(text))
    pos = [0]

    def read_one() -> Node:
        tok, line, col = tokens[pos[0]]
        pos[0] += 1
        if tok == "(":
            items = []
            while True:
                nxt, l2, c2 = tokens[pos[0]]
                if nxt is None:
                    raise ParseError("unexpected end of input inside (...)", l2, c2)
                if nxt == ")":
                    pos[0] += 1
                    return Node(items, line, col)
                items.append(read_one())
        if tok == ")":
            raise ParseError("unexpected ')'", line, col)
        if tok is None:
            raise ParseError("unexpected end of input", line, col)
        return Node(_atom_value(tok), line, col)

    out = []
    while tokens[pos[0]][0] is not None:
        out.append(read_one())
    return out


def _strip(node: Node):
    if node.is_list:
        return tuple(_strip(x) for x in node.value)
    return node.value


def _err(node: Node, message: str) -> ParseError:
    return ParseError(message, node.line, node.column)


def _symbol(node: Node, what: str) -> str:
    if node.is_list or not isinstance(node.value, str):
        raise _err(node, f"expected {what}")
    return node.value


def _number(node: Node, what: str) -> Fraction:
    if not isinstance(node.value, Fraction):
        raise _err(node, f"expected a number for {what}")
    return node.value


def _need(node: Node, count: int, form: str):
    if len(node.value) != count:
        raise _err(node, f"{form} takes {count - 1} argument(s), got {len(node.value) - 1}")


# ---------------------------------------------------------------------------
# Conditions

def parse_condition(node: Node):
    if not node.is_list:
        v = node.value
        if v is True:
            return Lit(True)
        if v is False:
            return Lit(False)
        if isinstance(v, str):
            return Cmp(v, "=", True)
        raise _err(node, "a bare number is not a condition")
    if not node.value:
        raise _err(node, "empty condition")
    head = node.value[0]
    if head.is_list:
        raise _err(head, "expected a condition operator")
    op = head.value
    args = node.value[1:]
    if op in COMPARISONS:
        _need(node, 3, f"({op} ...)")
        fluent = _symbol(args[0], "a fluent name")
        value = args[1].value
        if args[1].is_list:
            raise _err(args[1], "comparison value must be a constant")
        return Cmp(fluent, op, value)
    if op == "and" or op == "or":
        if len(args) < 2:
            raise _err(node, f"({op} ...) needs at least 2 arguments")
        parts = [parse_condition(a) for a in args]
        make = And if op == "and" else Or
        out = parts[-1]
        for part in reversed(parts[:-1]):
            out = make(part, out)
        return out
    if op == "not":
        _need(node, 2, "(not ...)")
        return Not(parse_condition(args[0]))
    raise _err(head, f"unknown condition operator '{op}'")


# ---------------------------------------------------------------------------
# Programs

_PROGRAM_HEADS = {"seq", "if", "while", "tryAll", "withPol", "waitFor", "test",
                  "whenever", "withCtrl", "par", "prio"}


def parse_program_node(node: Node):
    if not node.is_list:
        name = node.value
        if name == "nil":
            return NIL
        if not isinstance(name, str):
            raise _err(node, "a bare constant is not a program")
        return Prim(Act(name))
    if not node.value:
        raise _err(node, "empty program form")
    head = node.value[0]
    if head.is_list:
        raise _err(head, "expected a construct or action name")
    op = head.value
    args = node.value[1:]
    if op == "seq" or op == "tryAll":
        if not args:
            if op == "seq":
                return NIL
            raise _err(node, "(tryAll) needs at least one program")
        parts = [parse_program_node(a) for a in args]
        out = parts[-1]
        make = Seq if op == "seq" else TryAll
        for part in reversed(parts[:-1]):
            out = make(part, out)
        return out
    if op == "if":
        _need(node, 4, "(if ...)")
        return If(parse_condition(args[0]),
                  parse_program_node(args[1]), parse_program_node(args[2]))
    if op == "while":
        _need(node, 3, "(while ...)")
        return While(parse_condition(args[0]), parse_program_node(args[1]))
    if op == "withPol":
        _need(node, 3, "(withPol ...)")
        return WithPol(parse_program_node(args[0]), parse_program_node(args[1]))
    if op == "waitFor":
        _need(node, 2, "(waitFor ...)")
        return Prim(WaitFor(parse_condition(args[0])))
    if op == "test":
        _need(node, 2, "(test ...)")
        return Test(parse_condition(args[0]))
    if op == "whenever":
        _need(node, 3, "(whenever ...)")
        return Whenever(parse_condition(args[0]), parse_program_node(args[1]))
    if op == "withCtrl":
        _need(node, 3, "(withCtrl ...)")
        return WithCtrl(parse_condition(args[0]), parse_program_node(args[1]))
    if op == "par":
        _need(node, 3, "(par ...)")
        return Par(parse_program_node(args[0]), parse_program_node(args[1]))
    if op == "prio":
        _need(node, 3, "(prio ...)")
        return Prio(parse_program_node(args[0]), parse_program_node(args[1]))
    # anything else is an action term (or a procedure call, resolved later)
    if not isinstance(op, str):
        raise _err(head, "expected a construct or action name")
    arg_values = []
    for a in args:
        if a.is_list:
            raise _err(a, "action arguments must be constants")
        arg_values.append(a.value)
    return Prim(Act(op, tuple(arg_values)))


def parse_program(text: str):
    """Parse one program; raises ParseError with source location."""
    nodes = read_nodes(text)
    if not nodes:
        raise ParseError("no program in input", 1, 1)
    if len(nodes) > 1:
        extra = nodes[1]
        raise _err(extra, "more than one top-level program form")
    return parse_program_node(nodes[0])


# ---------------------------------------------------------------------------
# Domains

def _parse_tfunction(node: Node):
    if not node.is_list or not node.value:
        raise _err(node, "expected (constant ...), (linear ...), or (piecewise ...)")
    head = node.value[0]
    op = head.value if not head.is_list else None
    args = node.value[1:]
    if op == "constant":
        _need(node, 2, "(constant ...)")
        return Constant(_number(args[0], "constant value"))
    if op == "linear":
        _need(node, 4, "(linear ...)")
        return Linear(_number(args[0], "linear value"),
                      _number(args[1], "linear rate"),
                      _number(args[2], "linear origin"))
    if op == "piecewise":
        _need(node, 3, "(piecewise ...)")
        if not args[0].is_list:
            raise _err(args[0], "expected a list of (time value) break points")
        breaks = []
        for pair in args[0].value:
            if not pair.is_list or len(pair.value) != 2:
                raise _err(pair, "expected a (time value) pair")
            breaks.append((_number(pair.value[0], "break time"),
                           _number(pair.value[1], "break value")))
        try:
            return Piecewise(tuple(breaks), _number(args[1], "final rate"))
        except ValueError as exc:
            raise _err(node, str(exc)) from None
    raise _err(node, "expected (constant ...), (linear ...), or (piecewise ...)")


def _parse_params(node: Node) -> tuple[str, ...]:
    if not node.is_list:
        raise _err(node, "expected a parameter list")
    return tuple(_symbol(p, "a parameter name") for p in node.value)


def parse_domain(text: str) -> Domain:
    """Parse a domain file into an unvalidated Domain."""
    continuous: dict = {}
    discrete: dict = {}
    actions: dict = {}
    effects: list = []
    procedures: dict = {}

    for node in read_nodes(text):
        if not node.is_list or not node.value:
            raise _err(node, "expected a declaration form")
        head = node.value[0]
        kind = head.value if not head.is_list else None
        args = node.value[1:]
        if kind == "continuous":
            _need(node, 3, "(continuous ...)")
            name = _symbol(args[0], "a fluent name")
            if name in continuous or name in discrete:
                raise _err(args[0], f"fluent '{name}' declared twice")
            continuous[name] = _parse_tfunction(args[1])
        elif kind == "discrete":
            _need(node, 3, "(discrete ...)")
            name = _symbol(args[0], "a fluent name")
            if name in continuous or name in discrete:
                raise _err(args[0], f"fluent '{name}' declared twice")
            if args[1].is_list:
                raise _err(args[1], "discrete initial value must be a constant")
            discrete[name] = args[1].value
        elif kind == "action":
            if len(node.value) not in (3, 4):
                raise _err(node, "(action name (params...) [(poss cond)])")
            name = _symbol(args[0], "an action name")
            if name in actions:
                raise _err(args[0], f"action '{name}' declared twice")
            params = _parse_params(args[1])
            precondition = Lit(True)
            if len(args) == 3:
                clause = args[2]
                if (not clause.is_list or len(clause.value) != 2
                        or clause.value[0].value != "poss"):
                    raise _err(clause, "expected (poss cond)")
                precondition = parse_condition(clause.value[1])
            actions[name] = ActionDecl(name, params, precondition)
        elif kind == "effect":
            _need(node, 4, "(effect ...)")
            pattern = args[0]
            if not pattern.is_list or not pattern.value:
                raise _err(pattern, "expected (action param ...)")
            action_name = _symbol(pattern.value[0], "an action name")
            params = tuple(_symbol(p, "a parameter name") for p in pattern.value[1:])
            fluent = _symbol(args[1], "a fluent name")
            effects.append(EffectRule(action_name, params, fluent, _strip(args[2])))
        elif kind == "proc":
            _need(node, 4, "(proc ...)")
            name = _symbol(args[0], "a procedure name")
            if name in procedures:
                raise _err(args[0], f"procedure '{name}' declared twice")
            procedures[name] = Procedure(name, _parse_params(args[1]),
                                         parse_program_node(args[2]))
        else:
            raise _err(node, f"unknown declaration '{kind}'")

    return Domain(continuous, discrete, actions, tuple(effects), procedures)
