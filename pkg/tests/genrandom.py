"""Seeded random generators shared by the property and acceptance tests."""

from fractions import Fraction

from ccgolog import (Act, ActionDecl, And, Cmp, Constant, Domain, EffectRule,
                     If, Linear, Lit, NIL, Not, Or, Piecewise, Prim, Seq,
                     Test, TryAll, WaitFor, While, WithPol, Valuation)

OPS = ("<", "<=", "=", ">=", ">")


def rational(rng, lo=-60, hi=60, max_den=8) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def tfunction(rng, kind=None):
    kind = kind or rng.choice(("constant", "linear", "piecewise"))
    if kind == "constant":
        return Constant(rational(rng))
    if kind == "linear":
        return Linear(rational(rng), rational(rng, -10, 10), rational(rng, 0, 20))
    times = sorted({rational(rng, 0, 40) for _ in range(rng.randint(2, 4))})
    while len(times) < 2:
        times = sorted({rational(rng, 0, 40) for _ in range(3)})
    breaks = tuple((t, rational(rng)) for t in times)
    return Piecewise(breaks, rational(rng, -10, 10))


def valuation(rng, fluents=("f", "g")) -> Valuation:
    return Valuation({name: tfunction(rng) for name in fluents}, {})


def tform(rng, fluents=("f", "g"), depth=3):
    if depth == 0 or rng.random() < 0.45:
        return Cmp(rng.choice(fluents), rng.choice(OPS), rational(rng))
    kind = rng.random()
    if kind < 0.4:
        return And(tform(rng, fluents, depth - 1), tform(rng, fluents, depth - 1))
    if kind < 0.8:
        return Or(tform(rng, fluents, depth - 1), tform(rng, fluents, depth - 1))
    return Not(tform(rng, fluents, depth - 1))


CONT = ("c1", "c2")
DISC = ("d1", "d2")


def domain(rng) -> Domain:
    continuous = {name: tfunction(rng) for name in CONT}
    discrete = {name: rng.random() < 0.5 for name in DISC}
    actions = {}
    effects = []
    for i in range(1, 5):
        name = f"act{i}"
        actions[name] = ActionDecl(name)
        if rng.random() < 0.6:
            fluent = rng.choice(CONT)
            if rng.random() < 0.5:
                value = ("linear", ("val", ("old", fluent), "newStart"),
                         rational(rng, -6, 6), "newStart")
            else:
                value = ("constant", ("val", ("old", fluent), "newStart"))
            effects.append(EffectRule(name, (), fluent, value))
        if rng.random() < 0.4:
            effects.append(EffectRule(name, (), rng.choice(DISC), rng.random() < 0.5))
    return Domain(continuous, discrete, actions, tuple(effects))


def formula(rng, depth=2):
    roll = rng.random()
    if depth == 0 or roll < 0.4:
        if rng.random() < 0.5:
            return Cmp(rng.choice(DISC), "=", rng.random() < 0.5)
        return Cmp(rng.choice(CONT), rng.choice(OPS), rational(rng))
    if roll < 0.5:
        return Lit(rng.random() < 0.7)
    if roll < 0.7:
        return And(formula(rng, depth - 1), formula(rng, depth - 1))
    if roll < 0.9:
        return Or(formula(rng, depth - 1), formula(rng, depth - 1))
    return Not(formula(rng, depth - 1))


def program(rng, depth=6):
    """Random core program; waitFor conditions stay shallow so a fair share
    of them are satisfiable."""
    if depth == 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.45:
            return Prim(Act(f"act{rng.randint(1, 4)}"))
        if roll < 0.75:
            return Prim(WaitFor(tform(rng, CONT, depth=1)))
        if roll < 0.9:
            return Test(formula(rng, 1))
        return NIL
    roll = rng.random()
    if roll < 0.45:
        return Seq(program(rng, depth - 1), program(rng, depth - 1))
    if roll < 0.6:
        return If(formula(rng, 1), program(rng, depth - 1), program(rng, depth - 1))
    if roll < 0.8:
        return TryAll(program(rng, depth - 1), program(rng, depth - 1))
    if roll < 0.95:
        return WithPol(program(rng, depth - 1), program(rng, depth - 1))
    return While(Cmp(rng.choice(DISC), "=", True), program(rng, depth - 1))
