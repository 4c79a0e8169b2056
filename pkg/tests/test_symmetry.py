import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from icasm import InputStructure, Permutation, SearchLimitError
from icasm.symmetry import (
    automorphisms, closure, colours, image_of_set, is_support, min_support, orbit, support_profile,
)
from conftest import coloured


def cycle_structure(n):
    return InputStructure(n, {"E": frozenset((i, (i + 1) % n) for i in range(n))}, {"E": 2})


def test_aut_examples():
    assert automorphisms(InputStructure.naked(3)).order == 6
    assert automorphisms(coloured(3, [0])).order == 2
    assert automorphisms(cycle_structure(3)).order == 3
    assert automorphisms(cycle_structure(4)).order == 4
    assert automorphisms(InputStructure.naked(0)).order == 1


def test_aut_elements_preserve_relations():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(1, 5)
        edges = frozenset((a, b) for a in range(n) for b in range(n) if rng.random() < 0.3)
        inp = InputStructure(n, {"E": edges}, {"E": 2})
        aut = automorphisms(inp)
        expected = [p for p in itertools.permutations(range(n))
                    if frozenset((p[a], p[b]) for a, b in edges) == edges]
        assert aut.order == len(expected)
        assert len(closure(aut.generators, n)) == aut.order


def test_aut_limit():
    with pytest.raises(SearchLimitError):
        automorphisms(InputStructure.naked(9))
    assert automorphisms(InputStructure.naked(9), limit_n=9).order == 362880


def test_orbits(u):
    gens = automorphisms(InputStructure.naked(3)).generators
    assert orbit(u.atom(0), gens, u).members == {u.atom(i) for i in range(3)}
    pair = u.set_of([u.atom(0), u.atom(1)])
    assert len(orbit(pair, gens, u)) == 3
    assert len(orbit(u.one, gens, u)) == 1
    red_gens = automorphisms(coloured(3, [0])).generators
    assert orbit(u.atom(0), red_gens, u).members == {u.atom(0)}
    assert len(orbit(u.atom(1), red_gens, u)) == 2


def test_orbit_independent_of_representative(u):
    gens = automorphisms(cycle_structure(4)).generators
    y = u.set_of([u.atom(0), u.pair(u.atom(1), u.atom(2))])
    orb = orbit(y, gens, u)
    for z in orb.members:
        assert orbit(z, gens, u).members == orb.members


def test_is_support_examples(u):
    aut = automorphisms(InputStructure.naked(4))
    a = [u.atom(i) for i in range(4)]
    q = {u.set_of([a[0], a[1]])}
    assert is_support({0, 1}, q, aut, u)
    assert not is_support({0}, q, aut, u)
    assert is_support({2, 3}, q, aut, u)  # setwise: fixing the complement fixes {a0,a1}
    assert is_support(set(), {u.set_of(a)}, aut, u)
    assert is_support(set(range(4)), {a[0]}, aut, u)
    n2 = automorphisms(InputStructure.naked(2))
    assert not is_support(set(), {u.set_of([a[0]])}, n2, u)
    assert not is_support({2, 3}, {a[0], a[1]}, aut, u, pointwise=True)
    assert is_support({0, 1}, {a[0], a[1]}, aut, u, pointwise=True)


def test_min_support_examples(u):
    inp = InputStructure.naked(5)
    a = [u.atom(i) for i in range(5)]
    assert min_support({u.set_of([a[0], a[1]])}, inp, universe=u) == {0, 1}
    assert min_support({u.set_of(a)}, inp, universe=u) == frozenset()
    assert min_support({a[3]}, inp, universe=u) == {3}
    assert min_support({u.set_of([a[0]])}, inp, universe=u) == {0}
    singletons = orbit(u.set_of([a[0]]), automorphisms(inp).generators, u).members
    assert min_support(singletons, inp, universe=u) == frozenset()
    # {a0,a1,a2} is too big a support, but fixing the other two atoms also works
    assert min_support({u.set_of(a[:3])}, inp, universe=u) == {3, 4}
    red = coloured(6, [0, 1, 2])
    assert support_profile(min_support({u.atom(4)}, red, universe=u), red) == [0, 1]
    # colour classes of size two leave no room for a qualifying support
    assert min_support({a[0]}, coloured(4, [0, 1]), universe=u) is None


def test_colours():
    assert colours(coloured(4, [1, 3])) == [frozenset({0, 2}), frozenset({1, 3})]
    assert colours(InputStructure.naked(3)) == [frozenset({0, 1, 2})]


def _random_object(rng, u, n, depth=2):
    if depth == 0 or rng.random() < 0.3:
        return u.atom(rng.randrange(n)) if rng.random() < 0.8 else u.empty
    return u.set_of([_random_object(rng, u, n, depth - 1) for _ in range(rng.randint(0, 2))])


def test_small_supports_unique_and_minimal(u):
    """Any two qualifying supports intersect in a support."""
    rng = random.Random(11)
    cases = 0
    while cases < 100:
        n = rng.randint(1, 6)
        red = [a for a in range(n) if rng.random() < 0.3]
        inp = coloured(n, red)
        aut = automorphisms(inp)
        q = orbit(_random_object(rng, u, n), aut.generators, u).members
        cols = colours(inp)
        qualifying = [frozenset(xs) for k in range(n + 1) for xs in itertools.combinations(range(n), k)
                      if all(2 * len(set(xs) & c) < len(c) for c in cols)]
        supports = [xs for xs in qualifying if is_support(xs, q, aut, u)]
        for x, y in itertools.combinations(supports, 2):
            assert is_support(x & y, q, aut, u)
        supp = min_support(q, inp, aut, u)
        if supports:
            assert supp is not None and all(supp <= xs for xs in supports)
        else:
            assert supp is None
        cases += 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.data())
def test_support_covariance(n, data):
    """θ(Supp Q) = Supp(θQ) for any permutation θ of a naked set."""
    from icasm.hf import default_universe
    u = default_universe()
    inp = InputStructure.naked(n)
    aut = automorphisms(inp)
    members = data.draw(st.lists(st.sets(st.integers(0, n - 1), max_size=n), min_size=1, max_size=3))
    q = frozenset(u.set_of([u.atom(i) for i in m]) for m in members)
    theta = Permutation(tuple(data.draw(st.permutations(range(n)))))
    s1 = min_support(q, inp, aut, u)
    s2 = min_support(image_of_set(theta, q, u), inp, aut, u)
    if s1 is None:
        assert s2 is None
    else:
        assert frozenset(theta(x) for x in s1) == s2
