import pytest
from hypothesis import given, settings, strategies as st

from icasm import Const, HFError, Permutation, Universe


def test_interning_examples(u):
    assert u.intern(()) == u.empty == u.intern(())
    assert u.intern((0, 0)) == u.intern((0,))
    assert u.intern(((), ())) == u.one
    assert u.intern((1, 0)) == u.intern((0, 1))


def test_constants_cannot_be_members(u):
    with pytest.raises(HFError):
        u.intern((Const("f"),))
    with pytest.raises(HFError):
        u.set_of([u.const("g")])
    with pytest.raises(HFError):
        u.intern(True)


def test_rank(u):
    assert u.rank(u.atom(3)) == 0
    assert u.rank(u.empty) == 0
    assert u.rank(u.one) == 1
    assert u.rank(u.intern((((),), 0))) == 2
    with pytest.raises(HFError):
        u.rank(u.const("f"))


def test_transitive_closure(u):
    a = u.atom(0)
    assert u.transitive_closure(a) == {a}
    assert u.transitive_closure(u.empty) == {u.empty}
    x = u.intern(((0,),))
    assert u.transitive_closure(x) == {x, u.intern((0,)), a}


def test_numerals_and_pairs(u):
    assert u.numeral(0) == u.empty
    assert u.numeral(1) == u.one
    three = u.numeral(3)
    assert u.members(three) == tuple(u.numeral(i) for i in range(3))
    assert u.successor(three) == u.numeral(4)
    assert u.rank(u.numeral(5)) == 5
    assert u.kpair(u.atom(0), u.atom(1)) != u.kpair(u.atom(1), u.atom(0))


def test_permutation_examples(u):
    s = Permutation.transposition(2, 0, 1)
    assert u.permute(s, u.intern((0,))) == u.intern((1,))
    assert u.permute(s, u.one) == u.one
    assert u.permute(s, u.intern((0, 1))) == u.intern((0, 1))
    assert u.permute(s, u.const("f")) == u.const("f")
    assert s.cycle_notation() == "(a0 a1)"
    assert Permutation.identity(3).cycle_notation() == "()"


def test_format_and_parse_roundtrip(u):
    x = u.intern((0, ((),), (1, (0,))))
    text = u.format(x)
    assert u.parse(text) == x
    assert u.format(u.const("f")) == "c_f"
    assert u.format(u.empty) == "{}"


def test_canonical_order(u):
    # atoms before sets, atoms by id
    assert u.sort_key(u.atom(5)) < u.sort_key(u.empty)
    assert u.sort_key(u.atom(0)) < u.sort_key(u.atom(1))
    assert u.sorted([u.one, u.atom(1), u.empty]) == [u.atom(1), u.empty, u.one]


# -- property tests -----------------------------------------------------------

N = 4
trees = st.recursive(
    st.integers(0, N - 1),
    lambda inner: st.lists(inner, max_size=3).map(tuple),
    max_leaves=10,
)
perms = st.permutations(list(range(N))).map(lambda xs: Permutation(tuple(xs)))


def _norm(t):
    if isinstance(t, int):
        return ("atom", t)
    return ("set", frozenset(_norm(c) for c in t))


@given(trees, trees)
def test_interning_soundness(x, y):
    u = Universe()
    assert (u.intern(x) == u.intern(y)) == (_norm(x) == _norm(y))


@given(trees)
def test_rank_and_closure_laws(x):
    u = Universe()
    h = u.intern(x)
    for m in u.members(h):
        assert u.rank(h) > u.rank(m)
    tc = u.transitive_closure(h)
    assert h in tc
    for y in tc:
        assert set(u.members(y)) <= tc


@given(trees, perms, perms)
@settings(max_examples=200)
def test_group_action(x, s, t):
    u = Universe()
    h = u.intern(x)
    assert u.permute(s.compose(t), h) == u.permute(s, u.permute(t, h))
    assert u.permute(Permutation.identity(N), h) == h
    assert u.rank(u.permute(s, h)) == u.rank(h)
    assert u.permute(s.inverse(), u.permute(s, h)) == h
