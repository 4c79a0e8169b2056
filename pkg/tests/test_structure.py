import pytest
from hypothesis import given, strategies as st

from icasm import (
    InputStructure, Location, Permutation, Signature, State, StructureError, format_structure,
    initial_state, parse_structure, state_permute,
)
from icasm.structure import lookup


def test_signature_reserved_names():
    sig = Signature(dynamics=(("f", 1, False),))
    assert sig.dynamic("Halt") == (0, True)
    assert sig.dynamic("Output") == (0, False)
    with pytest.raises(StructureError):
        Signature(inputs=(("f", 1),), dynamics=(("f", 1, False),))
    with pytest.raises(StructureError):
        Signature(dynamics=(("Halt", 1, False),))


def test_input_structure_validation():
    with pytest.raises(StructureError):
        InputStructure(2, {"E": frozenset({(0, 2)})}, {"E": 2})
    with pytest.raises(StructureError):
        InputStructure(2, {"E": frozenset({(0,)})}, {"E": 2})


def test_initial_state(u):
    s = initial_state(InputStructure.naked(3))
    assert not s.store
    assert s.get("Halt") == u.empty
    assert not s.halted()
    e = InputStructure(2, {"E": frozenset({(0, 1)})}, {"E": 2})
    s = initial_state(e)
    assert e.holds("E", (0, 1)) and not e.holds("E", (1, 0))
    assert not s.store


def test_lookup_and_update(u):
    sig = Signature(dynamics=(("g", 1, False),))
    s = initial_state(InputStructure.naked(2), sig)
    loc = Location("g", (u.atom(0),))
    assert lookup(s, loc) == u.empty
    s2 = s.updated([(Location("Output", ()), u.one)])
    assert lookup(s2, Location("Output", ())) == u.one
    assert s2.updated([(Location("Output", ()), u.empty)]) == s
    with pytest.raises(StructureError):
        lookup(s, Location("nope", ()))
    with pytest.raises(StructureError):
        lookup(s, Location("g", ()))


def test_state_permute(u):
    sig = Signature(dynamics=(("g", 1, False),))
    s = State(sig, InputStructure.naked(2), u, {Location("g", (u.atom(0),)): u.atom(1)})
    sigma = Permutation.transposition(2, 0, 1)
    t = state_permute(sigma, s)
    assert t.get("g", u.atom(1)) == u.atom(0)
    assert state_permute(Permutation.identity(2), s) == s
    assert state_permute(sigma.inverse(), t) == s


@given(st.permutations(range(3)), st.permutations(range(3)))
def test_state_permute_is_group_action(a, b):
    from icasm import default_universe
    u = default_universe()
    sig = Signature(dynamics=(("g", 1, False),))
    inp = InputStructure(3, {"E": frozenset({(0, 1), (2, 2)})}, {"E": 2})
    s = State(sig, inp, u, {Location("g", (u.atom(0),)): u.intern((1, 2))})
    p, q = Permutation(tuple(a)), Permutation(tuple(b))
    assert state_permute(p.compose(q), s) == state_permute(p, state_permute(q, s))


def test_structure_file_roundtrip():
    text = "atoms 4\n# comment\nrel E/2\nt 0 1\nt 1 2\nrel Red/1\nt 3\n"
    inp = parse_structure(text)
    assert inp.n == 4
    assert list(inp.relations) == ["E", "Red"]
    assert parse_structure(format_structure(inp)) == inp


@pytest.mark.parametrize("bad", ["rel E/2\n", "atoms 2\nt 0\n", "atoms 2\nrel E/2\nt 0 5\n", "atoms x\n"])
def test_structure_file_errors(bad):
    with pytest.raises(StructureError):
        parse_structure(bad)
