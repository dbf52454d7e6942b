from fractions import Fraction

import pytest

from ccgolog import (Act, ActionDecl, And, Cmp, Constant, Domain, DomainError,
                     EffectRule, If, Linear, Lit, NIL, Not, Or, Par, Prim,
                     Prio, Procedure, Seq, Test, TryAll, Valuation, WaitFor,
                     Whenever, While, WithCtrl, WithPol, eval_formula,
                     expand_macros, lookup_effects, validate_domain)
from ccgolog.domain import eval_expr
from ccgolog.parser import parse_domain

F = Fraction

ROBOT1D = """
(continuous robotLoc (constant 0))
(action startGo (v))
(action endGo ())
(action say (what))
(effect (startGo v) robotLoc (linear (val (old robotLoc) newStart) v newStart))
(effect (endGo) robotLoc (constant (val (old robotLoc) newStart)))
"""


@pytest.fixture
def robot1d():
    return validate_domain(parse_domain(ROBOT1D))


def plain_domain(**kw):
    base = dict(continuous={}, discrete={}, actions={})
    base.update(kw)
    return Domain(**base)


# ---------------------------------------------------------------------------
# Macro expansion


def test_whenever_expansion():
    d = plain_domain(continuous={"f": Constant(0)},
                     actions={"a": ActionDecl("a")})
    phi = Cmp("f", ">=", 1)
    core, _ = expand_macros(Whenever(phi, Prim(Act("a"))), d)
    assert core == While(Lit(True), Seq(Prim(WaitFor(phi)), Prim(Act("a"))))


def test_withctrl_expansion():
    d = plain_domain(discrete={"wheels": True, "q": True},
                     actions={"a": ActionDecl("a")})
    wheels = Cmp("wheels", "=", True)
    q = Cmp("q", "=", True)
    core, _ = expand_macros(WithCtrl(wheels, Seq(Prim(Act("a")), Test(q))), d)
    blocked = Test(Lit(False))
    assert core == Seq(If(wheels, Prim(Act("a")), blocked),
                       If(wheels, Test(q), blocked))


def test_par_expansion_shape_and_flags():
    d = plain_domain(actions={"a": ActionDecl("a"), "b": ActionDecl("b")})
    core, d2 = expand_macros(Par(Prim(Act("a")), Prim(Act("b"))), d)
    assert isinstance(core, TryAll)
    flags = sorted(d2.hidden_fluents)
    setters = sorted(d2.hidden_actions)
    assert len(flags) == 2 and len(setters) == 2
    assert all(d2.discrete[f] is False for f in flags)
    # each branch: (seq program setter (test other-flag))
    left = core.left
    assert left.first == Prim(Act("a"))
    assert left.second.first == Prim(Act(setters[0]))
    assert left.second.second == Test(Cmp(flags[1], "=", True))
    right = core.right
    assert right.second.second == Test(Cmp(flags[0], "=", True))


def test_prio_expansion_shape():
    d = plain_domain(actions={"a": ActionDecl("a"), "b": ActionDecl("b")})
    core, d2 = expand_macros(Prio(Prim(Act("a")), Prim(Act("b"))), d)
    assert isinstance(core, WithPol)
    (flag,) = d2.hidden_fluents
    (setter,) = d2.hidden_actions
    assert core.policy == Seq(Prim(Act("a")), Prim(Act(setter)))
    assert core.main == Seq(Prim(Act("b")), Test(Cmp(flag, "=", True)))


def test_expansion_idempotent_on_core():
    d = plain_domain(continuous={"f": Constant(0)},
                     actions={"a": ActionDecl("a")})
    core = Seq(Prim(WaitFor(Cmp("f", ">=", 0))), Prim(Act("a")))
    out, d2 = expand_macros(core, d)
    assert out == core
    assert d2.hidden_fluents == frozenset()


def test_fresh_flags_avoid_declared_names():
    d = plain_domain(discrete={"_flg1": True, "_setFlg2": False},
                     actions={"a": ActionDecl("a"), "b": ActionDecl("b")})
    _, d2 = expand_macros(Par(Prim(Act("a")), Prim(Act("b"))), d)
    assert "_flg1" not in d2.hidden_fluents
    assert "_setFlg2" not in d2.hidden_actions
    assert len(d2.hidden_fluents) == 2


def test_procedure_inlining_with_args():
    d = plain_domain(
        continuous={"x": Constant(0)},
        actions={"go": ActionDecl("go", ("v",))},
        procedures={"dash": Procedure("dash", ("v", "lim"),
                                      Seq(Prim(Act("go", ("v",))),
                                          Prim(WaitFor(Cmp("x", ">=", "lim")))))})
    core, _ = expand_macros(Prim(Act("dash", (F(3), F(9)))), d)
    assert core == Seq(Prim(Act("go", (F(3),))),
                       Prim(WaitFor(Cmp("x", ">=", F(9)))))


def test_recursive_procedure_rejected():
    d = plain_domain(
        actions={"a": ActionDecl("a")},
        procedures={
            "p": Procedure("p", (), Prim(Act("q"))),
            "q": Procedure("q", (), Prim(Act("p"))),
        })
    with pytest.raises(DomainError, match="recursive procedure cycle"):
        validate_domain(d)
    with pytest.raises(DomainError, match="recursive procedure cycle"):
        expand_macros(Prim(Act("p")), d)


def test_undeclared_action_rejected():
    d = plain_domain(actions={"a": ActionDecl("a")})
    with pytest.raises(DomainError, match="undeclared action 'mystery'"):
        expand_macros(Prim(Act("mystery")), d)


def test_waitfor_condition_must_be_continuous():
    d = plain_domain(discrete={"flag": False}, actions={})
    with pytest.raises(DomainError, match="continuous"):
        expand_macros(Prim(WaitFor(Cmp("flag", "=", True))), d)


# ---------------------------------------------------------------------------
# Validation diagnostics


def test_validation_undeclared_fluent():
    d = plain_domain(actions={"a": ActionDecl("a", (), Cmp("ghost", "=", True))})
    with pytest.raises(DomainError, match="undeclared fluent 'ghost'"):
        validate_domain(d)


def test_validation_duplicate_rule():
    d = plain_domain(continuous={"f": Constant(0)},
                     actions={"a": ActionDecl("a")},
                     effects=(EffectRule("a", (), "f", ("constant", F(1))),
                              EffectRule("a", (), "f", ("constant", F(2)))))
    with pytest.raises(DomainError, match="duplicate effect rule"):
        validate_domain(d)


def test_validation_fluent_sort_clash():
    d = plain_domain(continuous={"f": Constant(0)}, discrete={"f": True})
    with pytest.raises(DomainError, match="both continuous and discrete"):
        validate_domain(d)


# ---------------------------------------------------------------------------
# Formula evaluation


def test_eval_formula_discrete_and_literals():
    v = Valuation({}, {"wheels": True, "loc": "a118"})
    assert eval_formula(Cmp("wheels", "=", True), v, 0)
    assert not eval_formula(Lit(False), v, 0)
    assert eval_formula(Cmp("loc", "=", "a118"), v, 0)
    assert not eval_formula(Cmp("loc", "=", "a113"), v, 0)


def test_eval_formula_continuous_at_time():
    v = Valuation({"robotLoc": Constant(0)}, {})
    assert eval_formula(Cmp("robotLoc", ">=", 0), v, 0)
    assert eval_formula(And(Lit(True), Not(Cmp("robotLoc", ">", 0))), v, 5)


def test_eval_formula_boolean_is_not_number():
    v = Valuation({}, {"n": F(1)})
    assert not eval_formula(Cmp("n", "=", True), v, 0)


def test_eval_formula_ordering_needs_numbers():
    v = Valuation({}, {"loc": "a118"})
    with pytest.raises(DomainError, match="ordering comparison"):
        eval_formula(Cmp("loc", "<", 3), v, 0)


# ---------------------------------------------------------------------------
# Effect rules


def test_lookup_effects_binds_parameters(robot1d):
    rules = lookup_effects(Act("startGo", (F(50),)), robot1d)
    assert len(rules) == 1
    fluent, expr, binding = rules[0]
    assert fluent == "robotLoc"
    assert binding == {"v": F(50)}
    out = eval_expr(expr, Valuation({"robotLoc": Constant(7)}, {}), F(2), binding)
    assert out == Linear(7, 50, 2)


def test_lookup_effects_waitfor_empty(robot1d):
    assert lookup_effects(WaitFor(Cmp("robotLoc", "=", 0)), robot1d) == []


def test_lookup_effects_effect_free_action(robot1d):
    assert lookup_effects(Act("say", ("hello",)), robot1d) == []


def test_eval_expr_stop_rule(robot1d):
    rules = lookup_effects(Act("endGo"), robot1d)
    (fluent, expr, binding), = rules
    v = Valuation({"robotLoc": Linear(0, 50, 0)}, {})
    assert eval_expr(expr, v, F(20), binding) == Constant(1000)


def test_eval_expr_arithmetic_and_conditional():
    v = Valuation({"f": Constant(10)}, {"mode": "fast"})
    expr = ("if", ("=", ("old", "mode"), "fast"),
            ("+", ("val", ("old", "f"), "newStart"), F(1), ("*", F(2), F(3))),
            F(0))
    assert eval_expr(expr, v, F(0), {}) == 17
    expr2 = ("if", ("=", ("old", "mode"), "slow"), F(1), ("-", F(5), F(2), F(1)))
    assert eval_expr(expr2, v, F(0), {}) == 2
    assert eval_expr(("/", F(7), F(2)), v, F(0), {}) == F(7, 2)


def test_eval_expr_division_by_zero():
    with pytest.raises(DomainError, match="division by zero"):
        eval_expr(("/", F(1), F(0)), Valuation({}, {}), F(0), {})


def test_eval_expr_piecewise_constructor():
    expr = ("piecewise", ((F(0), F(0)), (F(10), F(5))), F(1))
    out = eval_expr(expr, Valuation({}, {}), F(0), {})
    assert out.breaks == ((F(0), F(0)), (F(10), F(5)))
    assert out.final_rate == 1
