"""Abstract syntax for robot-control programs.

Time points and all numeric constants are exact rationals
(:class:`fractions.Fraction`).  Whether a waited-for condition becomes true
at a closed or an open interval endpoint decides whether waiting is possible
at all, and floating point cannot make that call reliably.

Three layers of syntax live here:

* time functions (``Constant`` / ``Linear`` / ``Piecewise``) -- the values of
  continuous fluents;
* conditions -- comparisons of fluents against constants combined with
  and/or/not, used both as waitFor conditions (continuous atoms only) and as
  test/if/while conditions (discrete atoms and true/false literals allowed);
* programs -- the core constructs plus the surface constructs
  (``whenever``/``withCtrl``/``par``/``prio``) that the domain module
  expands away.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce an int, Fraction, or numeric string to an exact rational.

    Floats are rejected on purpose: they would smuggle rounding into a
    representation whose semantics depends on exact endpoint comparisons.
    """
    if isinstance(x, bool):
        raise TypeError(f"not an exact rational: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def rational_text(x: Fraction) -> str:
    """Render a rational in source syntax: ``20`` or ``5/2``."""
    return str(x)


# ---------------------------------------------------------------------------
# Time functions


@dataclass(frozen=True)
class Constant:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_rational(self.value))


@dataclass(frozen=True)
class Linear:
    """Value ``value + rate * (t - origin)`` at time ``t``."""

    value: Fraction
    rate: Fraction
    origin: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_rational(self.value))
        object.__setattr__(self, "rate", as_rational(self.rate))
        object.__setattr__(self, "origin", as_rational(self.origin))


@dataclass(frozen=True)
class Piecewise:
    """Polyline through ``breaks``; constant before the first break point,
    continuing at ``final_rate`` after the last."""

    breaks: tuple[tuple[Fraction, Fraction], ...]
    final_rate: Fraction

    def __post_init__(self):
        pts = tuple((as_rational(t), as_rational(v)) for t, v in self.breaks)
        if not pts:
            raise ValueError("piecewise function needs at least one break point")
        for (t0, _), (t1, _) in zip(pts, pts[1:]):
            if not t0 < t1:
                raise ValueError("piecewise break times must be strictly increasing")
        object.__setattr__(self, "breaks", pts)
        object.__setattr__(self, "final_rate", as_rational(self.final_rate))


TFunction = Constant | Linear | Piecewise


# ---------------------------------------------------------------------------
# Conditions

COMPARISONS = ("<", "<=", "=", ">=", ">")


@dataclass(frozen=True)
class Cmp:
    """Atomic comparison ``fluent op value``.

    For continuous fluents ``value`` must be rational; for discrete fluents
    it may be a rational, boolean, or symbol (plain string).
    """

    fluent: str
    op: str
    value: object

    def __post_init__(self):
        if self.op not in COMPARISONS:
            raise ValueError(f"unknown comparison operator {self.op!r}")
        if isinstance(self.value, int) and not isinstance(self.value, bool):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class Lit:
    """Constant truth value; allowed in test conditions, not in waitFor."""

    value: bool


TForm = Cmp | And | Or | Not
Formula = Cmp | And | Or | Not | Lit

_FLIPPED = {"<": ">=", "<=": ">", ">=": "<", ">": "<="}


def normalize_tform(phi):
    """Rewrite a condition so that no negation remains.

    De Morgan pushes ``not`` inward and negated atoms are absorbed by
    flipping the comparison; ``not (F = r)`` splits into ``F < r  or  F > r``.
    The result holds at exactly the same (valuation, time) pairs as the input.
    """
    if isinstance(phi, Cmp):
        return phi
    if isinstance(phi, And):
        return And(normalize_tform(phi.left), normalize_tform(phi.right))
    if isinstance(phi, Or):
        return Or(normalize_tform(phi.left), normalize_tform(phi.right))
    if isinstance(phi, Not):
        inner = phi.arg
        if isinstance(inner, Cmp):
            if inner.op == "=":
                return Or(Cmp(inner.fluent, "<", inner.value),
                          Cmp(inner.fluent, ">", inner.value))
            return Cmp(inner.fluent, _FLIPPED[inner.op], inner.value)
        if isinstance(inner, Not):
            return normalize_tform(inner.arg)
        if isinstance(inner, And):
            return Or(normalize_tform(Not(inner.left)), normalize_tform(Not(inner.right)))
        if isinstance(inner, Or):
            return And(normalize_tform(Not(inner.left)), normalize_tform(Not(inner.right)))
    raise TypeError(f"not a condition: {phi!r}")


# ---------------------------------------------------------------------------
# Actions


@dataclass(frozen=True)
class Act:
    """Named action term; args are constants (rationals, symbols, booleans)."""

    name: str
    args: tuple = ()

    def __post_init__(self):
        coerced = tuple(
            Fraction(a) if isinstance(a, int) and not isinstance(a, bool) else a
            for a in self.args
        )
        object.__setattr__(self, "args", coerced)


@dataclass(frozen=True)
class WaitFor:
    """The one time-advancing action: wait until the condition first holds."""

    cond: object


ActionTerm = Act | WaitFor


# ---------------------------------------------------------------------------
# Programs


@dataclass(frozen=True)
class Nil:
    pass


NIL = Nil()


@dataclass(frozen=True)
class Prim:
    action: object


@dataclass(frozen=True)
class Test:
    cond: object


@dataclass(frozen=True)
class Seq:
    first: object
    second: object


@dataclass(frozen=True)
class If:
    cond: object
    then: object
    orelse: object


@dataclass(frozen=True)
class While:
    cond: object
    body: object


@dataclass(frozen=True)
class TryAll:
    """Run both; the whole thing is done as soon as either side is."""

    left: object
    right: object


@dataclass(frozen=True)
class WithPol:
    """Run ``main`` under ``policy``; the policy wins simultaneous steps and
    the construct ends when ``main`` ends."""

    policy: object
    main: object


# Surface-only constructs, eliminated by macro expansion.


@dataclass(frozen=True)
class Whenever:
    cond: object
    body: object


@dataclass(frozen=True)
class WithCtrl:
    cond: object
    body: object


@dataclass(frozen=True)
class Par:
    left: object
    right: object


@dataclass(frozen=True)
class Prio:
    high: object
    low: object


Program = Nil | Prim | Test | Seq | If | While | TryAll | WithPol
SurfaceProgram = Program | Whenever | WithCtrl | Par | Prio

_CORE_TYPES = (Nil, Prim, Test, Seq, If, While, TryAll, WithPol)


def is_core(p) -> bool:
    """True iff ``p`` contains no surface constructs."""
    if isinstance(p, (Nil, Prim)):
        return True
    if isinstance(p, Test):
        return True
    if isinstance(p, Seq):
        return is_core(p.first) and is_core(p.second)
    if isinstance(p, If):
        return is_core(p.then) and is_core(p.orelse)
    if isinstance(p, While):
        return is_core(p.body)
    if isinstance(p, TryAll):
        return is_core(p.left) and is_core(p.right)
    if isinstance(p, WithPol):
        return is_core(p.policy) and is_core(p.main)
    return False


def program_equal(p, q) -> bool:
    """Structural equality up to exact rational equality of constants."""
    return p == q


# ---------------------------------------------------------------------------
# Printing (the inverse of the frontend parser)


def _const_text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return rational_text(v)
    return str(v)


def formula_text(phi) -> str:
    if isinstance(phi, Lit):
        return "true" if phi.value else "false"
    if isinstance(phi, Cmp):
        if phi.op == "=" and phi.value is True:
            return phi.fluent
        return f"({phi.op} {phi.fluent} {_const_text(phi.value)})"
    if isinstance(phi, And):
        return "(and " + " ".join(formula_text(x) for x in _spine(phi, And)) + ")"
    if isinstance(phi, Or):
        return "(or " + " ".join(formula_text(x) for x in _spine(phi, Or)) + ")"
    if isinstance(phi, Not):
        return f"(not {formula_text(phi.arg)})"
    raise TypeError(f"not a condition: {phi!r}")


def _spine(node, cls):
    # Flatten the right spine: And(a, And(b, c)) prints as (and a b c),
    # which the parser folds back to the identical tree.
    parts = [node.left]
    rest = node.right
    while isinstance(rest, cls):
        parts.append(rest.left)
        rest = rest.right
    parts.append(rest)
    return parts


def action_text(a) -> str:
    if isinstance(a, WaitFor):
        return f"(waitFor {formula_text(a.cond)})"
    if not a.args:
        return a.name
    return f"({a.name} " + " ".join(_const_text(x) for x in a.args) + ")"


def tfunction_text(f) -> str:
    if isinstance(f, Constant):
        return f"(constant {rational_text(f.value)})"
    if isinstance(f, Linear):
        return f"(linear {rational_text(f.value)} {rational_text(f.rate)} {rational_text(f.origin)})"
    if isinstance(f, Piecewise):
        pts = " ".join(f"({rational_text(t)} {rational_text(v)})" for t, v in f.breaks)
        return f"(piecewise ({pts}) {rational_text(f.final_rate)})"
    raise TypeError(f"not a time function: {f!r}")


def program_text(p) -> str:
    """Concrete syntax; ``parse_program(program_text(p))`` reproduces ``p``."""
    if isinstance(p, Nil):
        return "nil"
    if isinstance(p, Prim):
        return action_text(p.action)
    if isinstance(p, Test):
        return f"(test {formula_text(p.cond)})"
    if isinstance(p, Seq):
        parts = [p.first]
        rest = p.second
        while isinstance(rest, Seq):
            parts.append(rest.first)
            rest = rest.second
        parts.append(rest)
        return "(seq " + " ".join(program_text(x) for x in parts) + ")"
    if isinstance(p, If):
        return f"(if {formula_text(p.cond)} {program_text(p.then)} {program_text(p.orelse)})"
    if isinstance(p, While):
        return f"(while {formula_text(p.cond)} {program_text(p.body)})"
    if isinstance(p, TryAll):
        parts = [p.left]
        rest = p.right
        while isinstance(rest, TryAll):
            parts.append(rest.left)
            rest = rest.right
        parts.append(rest)
        return "(tryAll " + " ".join(program_text(x) for x in parts) + ")"
    if isinstance(p, WithPol):
        return f"(withPol {program_text(p.policy)} {program_text(p.main)})"
    if isinstance(p, Whenever):
        return f"(whenever {formula_text(p.cond)} {program_text(p.body)})"
    if isinstance(p, WithCtrl):
        return f"(withCtrl {formula_text(p.cond)} {program_text(p.body)})"
    if isinstance(p, Par):
        return f"(par {program_text(p.left)} {program_text(p.right)})"
    if isinstance(p, Prio):
        return f"(prio {program_text(p.high)} {program_text(p.low)})"
    raise TypeError(f"not a program: {p!r}")
