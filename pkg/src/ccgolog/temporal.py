"""Evaluation of time functions and conditions, and least time points.

A condition over piecewise-linear fluents holds on a finite union of
intervals with rational endpoints.  ``solve_tform`` computes that union in a
canonical form, and ``ltp`` reads the least *attained* time point off it:
waiting for ``F > r`` while F approaches r from below has an infimum but no
least element, so there is nothing to wait for.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .lang import (And, Cmp, Constant, Linear, Lit, Not, Or, Piecewise,
                   as_rational, normalize_tform)


# ---------------------------------------------------------------------------
# Intervals

@dataclass(frozen=True)
class Interval:
    """One interval; ``lo=None`` means unbounded below, ``hi=None`` above.

    Open/closed flags apply to finite endpoints only (infinite ends are
    stored as open).
    """

    lo: Fraction | None
    hi: Fraction | None
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        if self.lo is not None:
            object.__setattr__(self, "lo", as_rational(self.lo))
        else:
            object.__setattr__(self, "lo_open", True)
        if self.hi is not None:
            object.__setattr__(self, "hi", as_rational(self.hi))
        else:
            object.__setattr__(self, "hi_open", True)

    def is_empty(self) -> bool:
        if self.lo is None or self.hi is None:
            return False
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and (self.lo_open or self.hi_open)

    def contains(self, t: Fraction) -> bool:
        if self.lo is not None and (t < self.lo or (t == self.lo and self.lo_open)):
            return False
        if self.hi is not None and (t > self.hi or (t == self.hi and self.hi_open)):
            return False
        return True


FULL = Interval(None, None)


def point(t) -> Interval:
    return Interval(t, t)


def _lo_key(iv: Interval):
    # -inf sorts first; at equal bounds a closed start precedes an open one.
    if iv.lo is None:
        return (0, Fraction(0), False)
    return (1, iv.lo, iv.lo_open)


def _touches_or_overlaps(a: Interval, b: Interval) -> bool:
    # b starts at or after a (sorted order).  They fuse unless there is a gap,
    # or they meet at a single point that both sides exclude.
    if a.hi is None or b.lo is None:
        return True
    if a.hi > b.lo:
        return True
    if a.hi < b.lo:
        return False
    return not (a.hi_open and b.lo_open)


def _hi_max(a: Interval, b: Interval) -> tuple[Fraction | None, bool]:
    if a.hi is None or b.hi is None:
        return None, True
    if a.hi != b.hi:
        return (a.hi, a.hi_open) if a.hi > b.hi else (b.hi, b.hi_open)
    return a.hi, a.hi_open and b.hi_open


@dataclass(frozen=True)
class IntervalSet:
    """Disjoint, non-touching intervals in increasing order (canonical form)."""

    intervals: tuple[Interval, ...] = ()

    @staticmethod
    def of(items) -> "IntervalSet":
        """Canonicalize any iterable of intervals: sort, drop empties, and
        merge neighbours that overlap or share a covered endpoint."""
        pending = sorted((iv for iv in items if not iv.is_empty()), key=_lo_key)
        merged: list[Interval] = []
        for iv in pending:
            if merged and _touches_or_overlaps(merged[-1], iv):
                last = merged[-1]
                hi, hi_open = _hi_max(last, iv)
                merged[-1] = Interval(last.lo, hi, last.lo_open, hi_open)
            else:
                merged.append(iv)
        return IntervalSet(tuple(merged))

    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, t) -> bool:
        t = as_rational(t)
        return any(iv.contains(t) for iv in self.intervals)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet.of(self.intervals + other.intervals)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for a in self.intervals:
            for b in other.intervals:
                lo, lo_open = _max_lo(a, b)
                hi, hi_open = _min_hi(a, b)
                out.append(Interval(lo, hi, lo_open, hi_open))
        return IntervalSet.of(out)

    def complement(self) -> "IntervalSet":
        out = []
        lo: Fraction | None = None
        lo_open = True
        for iv in self.intervals:
            if not (lo is None and iv.lo is None):
                out.append(Interval(lo, iv.lo,
                                    (not lo_open) if lo is not None else True,
                                    (not iv.lo_open) if iv.lo is not None else True))
            if iv.hi is None:
                return IntervalSet.of(out)
            lo, lo_open = iv.hi, iv.hi_open
        out.append(Interval(lo, None, (not lo_open) if lo is not None else True, True))
        return IntervalSet.of(out)

    def least(self) -> Fraction | None:
        """The attained minimum, or None when empty or open at the bottom."""
        if not self.intervals:
            return None
        first = self.intervals[0]
        if first.lo is None or first.lo_open:
            return None
        return first.lo

    def infimum(self) -> Fraction | None:
        """Greatest lower bound regardless of attainment (None when empty or
        unbounded below)."""
        if not self.intervals:
            return None
        return self.intervals[0].lo


def _max_lo(a: Interval, b: Interval):
    if a.lo is None:
        return b.lo, b.lo_open
    if b.lo is None:
        return a.lo, a.lo_open
    if a.lo != b.lo:
        return (a.lo, a.lo_open) if a.lo > b.lo else (b.lo, b.lo_open)
    return a.lo, a.lo_open or b.lo_open


def _min_hi(a: Interval, b: Interval):
    if a.hi is None:
        return b.hi, b.hi_open
    if b.hi is None:
        return a.hi, a.hi_open
    if a.hi != b.hi:
        return (a.hi, a.hi_open) if a.hi < b.hi else (b.hi, b.hi_open)
    return a.hi, a.hi_open or b.hi_open


EMPTY = IntervalSet()
ALL_TIME = IntervalSet((FULL,))


# ---------------------------------------------------------------------------
# Valuations

@dataclass(frozen=True)
class Valuation:
    """Current value of every declared fluent: continuous fluents map to time
    functions, discrete fluents to constants.  Treated as immutable."""

    continuous: dict
    discrete: dict

    def updated(self, continuous=None, discrete=None) -> "Valuation":
        cont = dict(self.continuous)
        disc = dict(self.discrete)
        if continuous:
            cont.update(continuous)
        if discrete:
            disc.update(discrete)
        return Valuation(cont, disc)


# ---------------------------------------------------------------------------
# Evaluation

def val(f, t) -> Fraction:
    """Exact value of a time function at time ``t``."""
    t = as_rational(t)
    if isinstance(f, Constant):
        return f.value
    if isinstance(f, Linear):
        return f.value + f.rate * (t - f.origin)
    if isinstance(f, Piecewise):
        breaks = f.breaks
        if t <= breaks[0][0]:
            return breaks[0][1]
        for (t0, v0), (t1, v1) in zip(breaks, breaks[1:]):
            if t <= t1:
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        tn, vn = breaks[-1]
        return vn + f.final_rate * (t - tn)
    raise TypeError(f"not a time function: {f!r}")


def compare(a: Fraction, op: str, b: Fraction) -> bool:
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == "=":
        return a == b
    if op == ">=":
        return a >= b
    if op == ">":
        return a > b
    raise ValueError(f"unknown comparison operator {op!r}")


def holds(phi, v: Valuation, t) -> bool:
    """Truth value of a condition over continuous fluents at time ``t``."""
    t = as_rational(t)
    if isinstance(phi, Cmp):
        f = v.continuous.get(phi.fluent)
        if f is None:
            raise DomainError(f"unknown continuous fluent '{phi.fluent}'")
        return compare(val(f, t), phi.op, as_rational(phi.value))
    if isinstance(phi, And):
        return holds(phi.left, v, t) and holds(phi.right, v, t)
    if isinstance(phi, Or):
        return holds(phi.left, v, t) or holds(phi.right, v, t)
    if isinstance(phi, Not):
        return not holds(phi.arg, v, t)
    if isinstance(phi, Lit):
        raise DomainError("true/false literals are not allowed in waitFor conditions")
    raise TypeError(f"not a condition: {phi!r}")


# ---------------------------------------------------------------------------
# Solving

def _solve_linear_atom(value: Fraction, rate: Fraction, origin: Fraction,
                       op: str, bound: Fraction) -> IntervalSet:
    # Solution times of  value + rate*(t - origin)  op  bound  over all t.
    if rate == 0:
        return ALL_TIME if compare(value, op, bound) else EMPTY
    crossing = origin + (bound - value) / rate
    rising = rate > 0
    if op == "=":
        return IntervalSet.of([point(crossing)])
    if op in ("<", "<="):
        open_end = op == "<"
        if rising:
            return IntervalSet.of([Interval(None, crossing, True, open_end)])
        return IntervalSet.of([Interval(crossing, None, open_end, True)])
    # ">" / ">="
    open_end = op == ">"
    if rising:
        return IntervalSet.of([Interval(crossing, None, open_end, True)])
    return IntervalSet.of([Interval(None, crossing, True, open_end)])


def _piecewise_segments(f: Piecewise):
    # Closed segments covering all of time; neighbours agree at shared
    # endpoints because the polyline is continuous.
    breaks = f.breaks
    t0, v0 = breaks[0]
    yield Interval(None, t0), v0, Fraction(0), t0
    for (ta, va), (tb, vb) in zip(breaks, breaks[1:]):
        yield Interval(ta, tb), va, (vb - va) / (tb - ta), ta
    tn, vn = breaks[-1]
    yield Interval(tn, None), vn, f.final_rate, tn


def _solve_atom(phi: Cmp, v: Valuation) -> IntervalSet:
    f = v.continuous.get(phi.fluent)
    if f is None:
        raise DomainError(f"unknown continuous fluent '{phi.fluent}'")
    bound = as_rational(phi.value)
    if isinstance(f, Constant):
        return ALL_TIME if compare(f.value, phi.op, bound) else EMPTY
    if isinstance(f, Linear):
        return _solve_linear_atom(f.value, f.rate, f.origin, phi.op, bound)
    if isinstance(f, Piecewise):
        solution = EMPTY
        for domain, value, rate, origin in _piecewise_segments(f):
            piece = _solve_linear_atom(value, rate, origin, phi.op, bound)
            solution = solution.union(piece.intersect(IntervalSet.of([domain])))
        return solution
    raise TypeError(f"not a time function: {f!r}")


def solve_tform(phi, v: Valuation, window_start) -> IntervalSet:
    """Canonical set of times ``t >= window_start`` at which ``phi`` holds."""
    window = IntervalSet.of([Interval(as_rational(window_start), None)])
    return _solve(normalize_tform(phi), v).intersect(window)


def _solve(phi, v: Valuation) -> IntervalSet:
    if isinstance(phi, Cmp):
        return _solve_atom(phi, v)
    if isinstance(phi, And):
        return _solve(phi.left, v).intersect(_solve(phi.right, v))
    if isinstance(phi, Or):
        return _solve(phi.left, v).union(_solve(phi.right, v))
    raise TypeError(f"unexpected node after normalization: {phi!r}")


def ltp(phi, v: Valuation, start) -> Fraction | None:
    """Least time point at or after ``start`` where ``phi`` holds.

    None when the condition never holds, or when its solution set starts at
    an open endpoint so the infimum is never reached.
    """
    return solve_tform(phi, v, start).least()
