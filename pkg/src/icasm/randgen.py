"""Seeded random rules, states and small choice machines for property tests."""
from __future__ import annotations

import random
from typing import Sequence

from .hf import Permutation, Universe, default_universe
from .structure import InputStructure, Location, Signature, State
from .syntax import App, Assign, Choose, Compr, Forall, If, Let, Par, Skip, Var

__all__ = [
    "RULE_SIGNATURE",
    "random_term",
    "random_rule",
    "random_structure",
    "random_state",
    "random_permutation",
    "random_choice_machine",
]

RULE_SIGNATURE = Signature(
    inputs=(("R", 1), ("E", 2)),
    dynamics=(("f", 0, False), ("g", 1, False), ("h", 1, True)),
)


def random_term(rng: random.Random, depth: int, scope: Sequence[str], boolean: bool = False):
    if boolean:
        choices = ["in", "=", "R", "E", "h", "not", "and", "true"]
        kind = rng.choice(choices if depth > 0 else ["true", "R", "h"])
        if kind == "true":
            return App(rng.choice(["true", "false"]))
        if kind == "not":
            return App("not", (random_term(rng, depth - 1, scope, True),))
        if kind == "and":
            return App(rng.choice(["and", "or"]), (random_term(rng, depth - 1, scope, True),
                                                  random_term(rng, depth - 1, scope, True)))
        if kind in ("R", "h"):
            return App(kind, (random_term(rng, max(depth - 1, 0), scope),))
        if kind == "E":
            return App("E", (random_term(rng, 0, scope), random_term(rng, 0, scope)))
        return App(kind, (random_term(rng, depth - 1, scope), random_term(rng, depth - 1, scope)))
    # bound variables are weighted up so that choices show in the updates
    leaves = ["Atoms", "empty", "f"] + [f"var:{v}" for v in scope] * 3
    if depth <= 0:
        leaf = rng.choice(leaves)
        return Var(leaf[4:]) if leaf.startswith("var:") else App(leaf)
    kind = rng.choice(["leaf", "Pair", "Union", "TheUnique", "g", "compr", "bool"])
    if kind == "leaf":
        return random_term(rng, 0, scope)
    if kind == "Pair":
        return App("Pair", (random_term(rng, depth - 1, scope), random_term(rng, depth - 1, scope)))
    if kind in ("Union", "TheUnique", "g"):
        return App(kind, (random_term(rng, depth - 1, scope),))
    if kind == "bool":
        return random_term(rng, depth - 1, scope, True)
    var = f"v{len(scope)}"
    inner = [*scope, var]
    return Compr(var, random_term(rng, depth - 1, inner), random_term(rng, depth - 1, scope),
                 random_term(rng, depth - 1, inner, True))


def random_rule(rng: random.Random, depth: int = 4, scope: Sequence[str] = ()):
    if depth <= 0:
        return _random_assign(rng, scope)
    kind = rng.choice(["assign", "skip", "if", "forall", "choose", "choose", "choose", "par", "let"])
    if kind == "assign":
        return _random_assign(rng, scope)
    if kind == "skip":
        return Skip()
    if kind == "if":
        return If(random_term(rng, 1, scope, True), random_rule(rng, depth - 1, scope),
                  random_rule(rng, depth - 1, scope))
    if kind == "par":
        return Par(tuple(random_rule(rng, depth - 1, scope) for _ in range(rng.randint(2, 3))))
    var = f"v{len(scope)}"
    inner = [*scope, var]
    # ranges are mostly Atoms so that choices actually branch
    rng_term = App("Atoms") if rng.random() < 0.7 else random_term(rng, 1, scope)
    if kind == "forall":
        return Forall(var, rng_term, random_rule(rng, depth - 1, inner))
    if kind == "choose":
        return Choose(var, rng_term, random_rule(rng, depth - 1, inner))
    return Let(var, random_term(rng, 1, scope), random_rule(rng, depth - 1, inner))


def _random_assign(rng, scope):
    target = rng.choice(["f", "g", "h"])
    if target == "f":
        return Assign("f", (), random_term(rng, 2, scope))
    if target == "g":
        return Assign("g", (random_term(rng, 1, scope),), random_term(rng, 2, scope))
    return Assign("h", (random_term(rng, 1, scope),), random_term(rng, 1, scope, True))


def random_structure(rng: random.Random, n: int, density: float = 0.4) -> InputStructure:
    red = frozenset((a,) for a in range(n) if rng.random() < density)
    edges = frozenset((a, b) for a in range(n) for b in range(n) if rng.random() < density)
    return InputStructure(n, {"R": red, "E": edges}, {"R": 1, "E": 2})


def _object_pool(n: int, u: Universe) -> list[int]:
    atoms = [u.atom(i) for i in range(n)]
    pool = [u.empty, u.one, *atoms]
    pool += [u.set_of([a]) for a in atoms]
    pool += [u.set_of(atoms[i:i + 2]) for i in range(max(n - 1, 0))]
    if atoms:
        pool.append(u.set_of([atoms[0], u.one]))
    return pool


def random_state(rng: random.Random, inp: InputStructure, signature: Signature = RULE_SIGNATURE,
                 universe: Universe | None = None) -> State:
    u = universe or default_universe()
    pool = _object_pool(inp.n, u)
    store = {Location("f", ()): rng.choice(pool)}
    for _ in range(rng.randint(0, 4)):
        store[Location("g", (rng.choice(pool),))] = rng.choice(pool)
    for _ in range(rng.randint(0, 3)):
        store[Location("h", (rng.choice(pool),))] = u.one
    return State(signature, inp, u, store)


def random_permutation(rng: random.Random, n: int) -> Permutation:
    images = list(range(n))
    rng.shuffle(images)
    return Permutation(tuple(images))


_SET_TERMS = ["Atoms", "{ y | y in Atoms, R(y) }", "{ y | y in Atoms, not R(y) }"]
_STEP_UPDATES = [
    "acc := not acc",
    "acc := R(x)",
    "acc := acc or R(x)",
    "if R(x) then acc := not acc endif",
    "acc := { y | y in s, R(y) } = empty",
]
_OUTPUTS = ["acc", "not acc", "acc = (s = empty)"]


def random_choice_machine(rng: random.Random) -> str:
    """Program text: repeatedly choose and remove an atom, folding into ``acc``."""
    start = rng.choice(_SET_TERMS)
    step = rng.choice(_STEP_UPDATES)
    out = rng.choice(_OUTPUTS)
    return f"""# random choice machine
sig
  input R/1;
  dyn mode/0, s/0, acc/0 rel;
  enum fill, loop, done;
  def diff(X, Y) = {{ z | z in X, not (z in Y) }};
endsig
par
  if mode = fill then par s := {start} acc := false mode := loop endpar endif
  if mode = loop then
    if s != empty then
      choose x in s do par s := diff(s, Pair(x, x)) {step} endpar enddo
    else
      mode := done
    endif
  endif
  if mode = done then par Output := {out} Halt := true endpar endif
endpar
"""
