"""Trace documents: the user-facing rendering of a projection result."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .domain import Domain
from .engine import ProjectionResult
from .lang import (Act, Constant, Linear, Piecewise, WaitFor, formula_text,
                   rational_text, tfunction_text)


@dataclass(frozen=True)
class TraceDocument:
    status: str
    steps: int
    entries: tuple  # (time: Fraction, action name: str, args: tuple[str, ...])
    final_fluents: dict
    reason: str | None = None


def _arg_text(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return rational_text(x)
    return str(x)


def _entry(time: Fraction, action):
    if isinstance(action, WaitFor):
        return (time, "waitFor", (formula_text(action.cond),))
    return (time, action.name, tuple(_arg_text(a) for a in action.args))


def _fluent_value_text(value) -> str:
    if isinstance(value, (Constant, Linear, Piecewise)):
        return tfunction_text(value)
    return _arg_text(value)


def trace_document(result: ProjectionResult, domain: Domain) -> TraceDocument:
    """Render a projection result; hidden flag fluents introduced by macro
    expansion are left out of the final-state dump."""
    v = result.situation.valuation
    final = {}
    for name in sorted(v.continuous):
        if name not in domain.hidden_fluents:
            final[name] = _fluent_value_text(v.continuous[name])
    for name in sorted(v.discrete):
        if name not in domain.hidden_fluents:
            final[name] = _fluent_value_text(v.discrete[name])
    entries = tuple(_entry(e.time, e.action) for e in result.trace)
    return TraceDocument(result.status, result.steps, entries, final, result.reason)


def decimal_text(t: Fraction, places: int = 6) -> str:
    """Fixed-point decimal rendering, rounded to ``places`` digits."""
    scaled = t * 10 ** places
    n = round(scaled)
    sign = "-" if n < 0 else ""
    a = abs(n)
    return f"{sign}{a // 10 ** places}.{a % 10 ** places:0{places}d}"


def _action_call_text(name: str, args: tuple) -> str:
    if not args:
        return name
    return f"{name}(" + ", ".join(args) + ")"


def format_trace(doc: TraceDocument, fmt: str = "text") -> str:
    """Render a TraceDocument as tab-separated text or as JSON.

    Both carry the same entries, status, step count, and final fluent values;
    the JSON form adds exact rational timestamps next to the decimals.
    """
    if fmt == "json":
        payload = {
            "status": doc.status,
            "steps": doc.steps,
            "entries": [
                {
                    "t_rational": f"{t.numerator}/{t.denominator}",
                    "t": float(t),
                    "action": name,
                    "args": list(args),
                }
                for t, name, args in doc.entries
            ],
            "final": doc.final_fluents,
            "reason": doc.reason,
        }
        return json.dumps(payload, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown trace format {fmt!r}")
    lines = [
        f"{decimal_text(t)}\t{_action_call_text(name, args)}"
        for t, name, args in doc.entries
    ]
    lines.append(f"status: {doc.status}")
    lines.append(f"steps: {doc.steps}")
    if doc.reason:
        lines.append(f"reason: {doc.reason}")
    lines.append("final:")
    for name, value in doc.final_fluents.items():
        lines.append(f"  {name} = {value}")
    return "\n".join(lines) + "\n"
