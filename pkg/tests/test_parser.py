import random

import pytest
from hypothesis import given, settings, strategies as st

from icasm import (
    ParseError, Signature, delta_sets, initial_state, load_program, make_time_explicit, parse, parse_rule,
    print_program, print_rule, run, Bounds, builtin_parity, InputStructure,
)
from icasm.randgen import RULE_SIGNATURE, random_rule
from icasm.syntax import App, Assign, Choose, Compr, Forall, Num, Par, Skip, Var, free_vars, substitute

SIG = Signature(dynamics=(("g", 1, False), ("f", 0, False)))


def test_skip_and_choose():
    assert parse_rule("skip") == Skip()
    r = parse_rule("choose x in Atoms do par g(x) := x f := x endpar enddo", SIG)
    assert isinstance(r, Choose) and isinstance(r.body, Par)


def test_top_rule_must_be_closed():
    with pytest.raises(ParseError, match="top rule not closed"):
        parse("sig dyn g/1; endsig g(x) := y")


def test_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse("sig dyn g/1; endsig\npar\n  g(Atoms) := \nendpar")
    assert exc.value.line == 4
    with pytest.raises(ParseError, match="unknown symbol"):
        parse("nope(Atoms) := empty")
    with pytest.raises(ParseError):
        parse("sig dyn g/1; endsig g(Atoms, Atoms) := empty")
    with pytest.raises(ParseError):
        parse("if true then skip")


def test_free_vars():
    assert free_vars(Var("x")) == {"x"}
    assert free_vars(Compr("v", Var("v"), Var("w"), App("true"))) == {"w"}
    r = Forall("v", App("Atoms"), Assign("g", (Var("v"),), App("empty")))
    assert free_vars(r) == set()


def test_substitution_avoids_capture():
    t = Compr("v", App("Pair", (Var("v"), Var("w"))), App("Atoms"), App("true"))
    s = substitute(t, {"w": Var("v")})
    # the bound variable is renamed, the substituted v stays free
    assert free_vars(s) == {"v"}
    assert s.var != "v"


def test_macros_enums_and_literals():
    p = load_program("""
        sig dyn mode/0; enum a, b, c; def inc(k) = Union(Pair(k, Pair(k, k))); endsig
        if mode = b then mode := inc(mode) else mode := 7 endif
    """)
    assert p.enums == (("a", 0), ("b", 1), ("c", 2))
    assert Num(1) == p.rule.cond.args[1]


def test_let_is_native_binding(u):
    sig = Signature(dynamics=(("f", 0, False), ("g", 1, False)))
    s = initial_state(InputStructure.naked(3), sig)
    via_let = delta_sets(s, {}, parse_rule("let x = Pair(Atoms, empty) in f := x endlet", sig))
    assert via_let == delta_sets(s, {}, parse_rule("f := Pair(Atoms, empty)", sig))
    # for an atom-valued binding the choose-over-Pair form agrees
    a = delta_sets(s, {}, parse_rule("forall y in Atoms do let x = y in g(x) := x endlet enddo", sig))
    b = delta_sets(s, {}, parse_rule("forall y in Atoms do choose x in Pair(y, y) do g(x) := x enddo enddo", sig))
    assert a == b


@pytest.mark.parametrize("k", [1, 2, 3])
def test_par_matches_forall_over_index_set(u, k):
    """par r1 .. rk endpar equals forall i in {0..k-1} do if i = j then rj ... enddo."""
    sig = Signature(dynamics=(("f", 0, False), ("g", 1, False)))
    s = initial_state(InputStructure.naked(3), sig)
    bodies = ["choose x in Atoms do g(x) := x enddo", "f := Atoms", "choose y in Atoms do f := y enddo"][:k]
    par = parse_rule("par " + " ".join(bodies) + " endpar", sig)
    branches = " ".join(f"if i = {j} then {b} endif" for j, b in enumerate(bodies))
    forall = parse_rule(f"forall i in {k} do par {branches} endpar enddo", sig)
    assert delta_sets(s, {}, par) == delta_sets(s, {}, forall)


def test_print_program_roundtrip():
    p = builtin_parity()
    text = print_program(p)
    q = load_program(text)
    assert q.rule == p.rule and q.signature == p.signature


@given(st.integers(0, 10**6))
@settings(max_examples=150, deadline=None)
def test_print_parse_roundtrip(seed):
    rng = random.Random(seed)
    r = random_rule(rng, 4)
    assert parse_rule(print_rule(r), RULE_SIGNATURE) == r


def test_make_time_explicit(u):
    p = make_time_explicit(builtin_parity())
    for n in range(5):
        res = run(p, InputStructure.naked(n), Bounds.unbounded())
        for k, state in enumerate(res.states):
            assert state.get("ct") == u.numeral(k)
        # the counter stops once Halt holds
        assert res.final.halted() and res.final.get("ct") == u.numeral(n + 2)
    with pytest.raises(ParseError):
        make_time_explicit(p)


def test_time_explicit_program_halting_at_once(u):
    p = make_time_explicit(load_program("par Output := true Halt := true endpar"))
    res = run(p, InputStructure.naked(1), Bounds.unbounded())
    # one step taken while Halt was false
    assert res.verdict.steps == 1
    assert res.final.get("ct") == u.one
