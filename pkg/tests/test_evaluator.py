import random

import pytest
from hypothesis import given, settings, strategies as st

from icasm import (
    EvaluationError, ExplosionError, InputStructure, Location, Permutation, Signature, State, Update,
    apply, builtin_parity, consistent, delta_sets, eval_term, initial_state, parse_rule, parse_term,
    perm_update_set, state_permute,
)
from icasm.insignificance import find_iso
from icasm.randgen import random_permutation, random_rule, random_state, random_structure

SIG = Signature(inputs=(("E", 2),), dynamics=(("g", 1, False), ("f", 0, False), ("h", 1, True)))


def state(n=3, store=None, u=None):
    from icasm import default_universe
    u = u or default_universe()
    inp = InputStructure(n, {"E": frozenset({(0, 1)})}, {"E": 2})
    return State(SIG, inp, u, store or {})


def val(text, s, env=None):
    return eval_term(s, env or {}, parse_term(text, SIG, tuple(env or ())))


def test_background(u):
    s = state()
    a, b, c = (u.atom(i) for i in range(3))
    env = {"x": u.set_of([a]), "y": u.set_of([a, b]), "z": u.set_of([a, u.set_of([b]), u.set_of([c])])}
    assert val("TheUnique(x)", s, env) == a
    assert val("TheUnique(y)", s, env) == u.empty
    assert val("Union(z)", s, env) == u.set_of([b, c])
    assert eval_term(s, {"a": a}, parse_term("Pair(a, a)", SIG, ("a",))) == u.set_of([a])
    assert val("Atoms", s) == u.set_of([a, b, c])
    env = {"s": u.set_of([a])}
    assert val("{ x | x in Atoms, x in s }", s, env) == u.set_of([a])


def test_booleans_and_relations(u):
    s = state()
    a0, a1 = u.atom(0), u.atom(1)
    assert eval_term(s, {"x": a0, "y": a1}, parse_term("E(x, y)", SIG, ("x", "y"))) == u.one
    assert eval_term(s, {"x": a0, "y": a1}, parse_term("E(y, x)", SIG, ("x", "y"))) == u.empty
    # non-atom arguments make an input relation false
    assert val("E(empty, Atoms)", s) == u.empty
    # a non-boolean argument makes a Boolean operator false
    assert val("not Atoms", s) == u.empty
    assert val("Atoms or true", s) == u.empty
    assert val("true -> false", s) == u.empty
    assert val("false -> Atoms", s) == u.empty
    assert val("c_g", s) == u.const("g")


def test_unbound_variable():
    with pytest.raises(EvaluationError):
        eval_term(state(), {}, parse_term("Pair(x, x)", SIG, ("x",)))


def test_rule_clauses(u):
    s = state(2)
    a0, a1 = u.atom(0), u.atom(1)
    assert delta_sets(s, {}, parse_rule("skip", SIG)) == {frozenset()}
    got = delta_sets(s, {"s": u.set_of([a0, a1])}, parse_rule("choose x in s do g(x) := true enddo", SIG))
    assert got == {frozenset({Update(Location("g", (a0,)), u.one)}),
                   frozenset({Update(Location("g", (a1,)), u.one)})}
    assert delta_sets(s, {}, parse_rule("choose x in empty do g(x) := x enddo", SIG)) == frozenset()
    got = delta_sets(s, {}, parse_rule("forall x in Atoms do g(x) := x enddo", SIG))
    assert got == {frozenset({Update(Location("g", (a0,)), a0), Update(Location("g", (a1,)), a1)})}
    # choose ignores non-atom members; an atom-valued range is empty
    got = delta_sets(s, {"s": u.set_of([a0, u.one])}, parse_rule("choose x in s do f := x enddo", SIG))
    assert got == {frozenset({Update(Location("f", ()), a0)})}
    assert delta_sets(s, {"s": a0}, parse_rule("forall x in s do f := x enddo", SIG)) == {frozenset()}
    # if selects the else branch unless the condition is 1
    assert delta_sets(s, {}, parse_rule("if Atoms then f := true else f := false endif", SIG)) == \
        {frozenset({Update(Location("f", ()), u.empty)})}


def test_forall_of_choice_is_a_product(u):
    s = state(2)
    got = delta_sets(s, {}, parse_rule("forall x in Atoms do choose y in Atoms do g(x) := y enddo enddo", SIG))
    assert len(got) == 4
    with pytest.raises(ExplosionError):
        delta_sets(s, {}, parse_rule("forall x in Atoms do choose y in Atoms do g(x) := y enddo enddo", SIG),
                   cap=3)


def test_relational_assignment_must_be_boolean(u):
    with pytest.raises(EvaluationError):
        delta_sets(state(), {}, parse_rule("h(Atoms) := Atoms", SIG))


def test_consistency_and_apply(u):
    loc = Location("f", ())
    assert consistent(frozenset())
    assert not consistent({Update(loc, u.one), Update(loc, u.empty)})
    assert consistent({Update(loc, u.one)})
    s = state()
    assert apply(s, frozenset()) == s
    t = apply(s, {Update(Location("Output", ()), u.one)})
    assert t.output() == u.one
    assert apply(s, {Update(loc, u.one), Update(loc, u.empty)}) == s


def test_perm_update_set(u):
    d = frozenset({Update(Location("g", (u.atom(0),)), u.atom(0))})
    s = Permutation.transposition(2, 0, 1)
    assert perm_update_set(Permutation.identity(2), d, u) == d
    assert perm_update_set(s, d, u) == {Update(Location("g", (u.atom(1),)), u.atom(1))}
    assert perm_update_set(s.inverse(), perm_update_set(s, d, u), u) == d


def test_evaluation_is_pure(u):
    s = state()
    t = parse_term("{ Pair(x, Atoms) | x in Atoms, not (x = empty) }", SIG)
    assert eval_term(s, {}, t) == eval_term(s, {}, t)


def test_choice_free_rules_are_deterministic(u):
    rng = random.Random(3)
    seen = 0
    for _ in range(300):
        r = random_rule(rng, 3)
        if "Choose" in repr(r):
            continue
        inp = random_structure(rng, rng.randint(0, 3))
        s = random_state(rng, inp)
        try:
            assert len(delta_sets(s, {}, r)) == 1
        except EvaluationError:
            continue
        seen += 1
    assert seen > 50


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_parity_progress_update_sets(u, k):
    p = builtin_parity()
    s = initial_state(InputStructure.naked(k), p.signature)
    s = apply(s, next(iter(delta_sets(s, {}, p.rule))))
    deltas = sorted(delta_sets(s, {}, p.rule), key=repr)
    assert len(deltas) == k
    for d in deltas[1:]:
        sigma = find_iso(deltas[0], d, k, u)
        assert sigma is not None and len(sigma.cycles()) == 1 and len(sigma.cycles()[0]) == 2


@given(st.integers(0, 10**9))
@settings(max_examples=200, deadline=None)
def test_equivariance(seed):
    rng = random.Random(seed)
    n = rng.randint(0, 4)
    inp = random_structure(rng, n)
    s = random_state(rng, inp)
    r = random_rule(rng, 4)
    sigma = random_permutation(rng, n)
    try:
        base = delta_sets(s, {}, r)
    except EvaluationError as exc:
        with pytest.raises(type(exc)):
            delta_sets(state_permute(sigma, s), {}, r)
        return
    u = s.universe
    assert delta_sets(state_permute(sigma, s), {}, r) == frozenset(perm_update_set(sigma, d, u) for d in base)
