"""Built-in machines and their shipped bounds."""
from __future__ import annotations

from importlib import resources
from typing import Sequence

from .encoding import TuringMachine
from .runs import Bounds
from .structure import State
from .syntax import Program
from .transforms import load_program

__all__ = [
    "BUILTINS",
    "builtin",
    "builtin_parity",
    "builtin_matching",
    "builtin_red_choice",
    "builtin_order_and_simulate",
    "order_machine_source",
    "default_bounds",
    "order_bounds",
    "constructed_order",
    "tape_contents",
]


def _load(filename: str) -> Program:
    text = resources.files("icasm.machines").joinpath(filename).read_text()
    return load_program(text, filename.rsplit(".", 1)[0])


def builtin_parity() -> Program:
    return _load("parity.asm")


def builtin_matching() -> Program:
    return _load("matching.asm")


def builtin_red_choice() -> Program:
    return _load("red_choice.asm")


# Parity takes n+2 steps and touches 2n+2 objects; the slack is deliberate.
PARITY_BOUNDS = Bounds((4, 1), (8, 3))
# Matching: at most n augmentations, each a BFS over at most n layers plus a
# trace of the same length.  Numerals up to the largest enum dominate q.
MATCHING_BOUNDS = Bounds((10, 8, 2), (40, 12, 2))
RED_CHOICE_BOUNDS = Bounds((2,), (4, 1))


# -- polynomial helpers (coefficients lowest degree first) ---------------------

def _padd(a, b):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _pcompose(outer, inner):
    out, power = [0], [1]
    for c in outer:
        out = _padd(out, [c * x for x in power])
        power = _pmul(power, inner)
    return out


def _monomial(k: int) -> list[int]:
    return [0] * k + [1]


# -- the order, encode and simulate machine ---------------------------------------

_MOVE = {"R": "next(head)", "L": "Union(head)"}
_SYMBOL = {"_": 0, "0": 1, "1": 2}


def _relation_block(idx: int, name: str, k: int, follow: str) -> list[str]:
    """One cell per step, enumerating k-tuples with an odometer over d1..dk."""
    digits = [f"d{i}" for i in range(1, k + 1)]
    atom_args = ", ".join(f"atom_at({d})" for d in digits)
    test = f"{name}({atom_args})" if k else name
    write = [
        f"        if {test} then tape(pos) := 2 else tape(pos) := 1 endif",
        "        pos := next(pos)",
    ]
    lines = [f"  if mode = enc_{idx} then"]
    if k == 0:
        lines += ["    par", *write, f"        mode := {follow}", "    endpar"]
    else:
        # with no atoms there are no tuples to write
        lines += [f"    if count = 0 then mode := {follow} else", "    par", *write]
        all_last = " and ".join(f"{d} = Union(count)" for d in digits)
        lines.append(f"        if {all_last} then")
        lines.append("          par")
        lines.append(f"            mode := {follow}")
        lines += [f"            {d} := 0" for d in digits]
        lines.append("          endpar")
        closers = 1
        for pos in range(k - 1, -1, -1):
            d = digits[pos]
            reset = [f"{e} := 0" for e in digits[pos + 1:]]
            body = f"{d} := next({d})" if not reset else "par " + " ".join([f"{d} := next({d})", *reset]) + " endpar"
            if pos == 0:
                lines.append(f"        else {body}")
            else:
                lines.append(f"        else if {d} != Union(count) then {body}")
                closers += 1
        lines.append("        " + " ".join(["endif"] * closers))
        lines += ["    endpar", "    endif"]
    lines.append("  endif")
    return lines


def order_machine_source(tm: TuringMachine, inputs: Sequence[tuple[str, int]] = ()) -> str:
    """Program text for the order, encode and simulate machine of ``tm``.

    Phase one chooses atoms one at a time and records the order in the
    binary relation ``less`` together with ``idx`` / ``atom_at``.  Phase
    two writes the standard encoding onto ``tape`` (blank = 0, '0' = 1,
    '1' = 2).  Phase three steps the TM.
    """
    states = tm.ordered_states()
    code = {s: i for i, s in enumerate(states)}
    max_k = max((k for _, k in inputs), default=0)
    enc_modes = [f"enc_{i}" for i in range(len(inputs))]
    modes = ["init", "create_order", "build_tm", *enc_modes, "simulate_tm"]
    dyn = ["mode/0", "A/0", "Ac/0", "less/2 rel", "count/0", "idx/1", "atom_at/1",
           "pos/0", "tape/1", "head/0", "q/0", *[f"d{i}/0" for i in range(1, max_k + 1)]]
    lines = ["# Order the atoms by choice, write the standard encoding, simulate a TM.", "sig"]
    if inputs:
        lines.append("  input " + ", ".join(f"{n}/{k}" for n, k in inputs) + ";")
    lines += [
        "  dyn " + ", ".join(dyn) + ";",
        "  enum " + ", ".join(modes) + ";",
        "  def single(x) = Pair(x, x);",
        "  def union(X, Y) = Union(Pair(X, Y));",
        "  def diff(X, Y) = { z | z in X, not (z in Y) };",
        "  def next(k) = Union(Pair(k, Pair(k, k)));",
        "endsig",
        "par",
        "  if mode = init then",
        "    par mode := create_order A := Atoms Ac := empty endpar",
        "  endif",
        "  if mode = create_order then",
        "    if A != empty then",
        "      choose a in A do",
        "        par",
        "          forall b in Ac do less(b, a) := true enddo",
        "          A := diff(A, single(a))",
        "          Ac := union(Ac, single(a))",
        "          idx(a) := count",
        "          atom_at(count) := a",
        "          count := next(count)",
        "        endpar",
        "      enddo",
        "    else",
        "      mode := build_tm",
        "    endif",
        "  endif",
        "  if mode = build_tm then",
        "    par",
        "      forall a in Atoms do tape(idx(a)) := 2 enddo",
        "      tape(count) := 1",
        "      pos := next(count)",
        f"      mode := {enc_modes[0] if enc_modes else 'simulate_tm'}",
        "    endpar",
        "  endif",
    ]
    for i, (name, k) in enumerate(inputs):
        follow = enc_modes[i + 1] if i + 1 < len(enc_modes) else "simulate_tm"
        lines += _relation_block(i, name, k, follow)
    lines += [
        "  if mode = simulate_tm then",
        "    par",
        f"      if q = {code[tm.accept]} then par Output := true Halt := true endpar endif",
        f"      if q = {code[tm.reject]} then par Output := false Halt := true endpar endif",
    ]
    for (s, a), (s2, b, move) in tm.transitions.items():
        lines.append(
            f"      if q = {code[s]} and tape(head) = {_SYMBOL[a]} then"
            f" par q := {code[s2]} tape(head) := {_SYMBOL[b]} head := {_MOVE[move]} endpar endif"
        )
    lines += ["    endpar", "  endif", "endpar"]
    return "\n".join(lines) + "\n"


def builtin_order_and_simulate(tm: TuringMachine, inputs: Sequence[tuple[str, int]] = ()) -> Program:
    """The three-phase machine; ``inputs`` is the input signature it reads."""
    return load_program(order_machine_source(tm, inputs), "order_and_simulate")


def order_bounds(tm: TuringMachine, inputs: Sequence[tuple[str, int]] = (),
                 tm_time: Sequence[int] = (1, 1)) -> Bounds:
    """Bounds for the order machine given a TM time bound in the input length.

    ``tm_time`` bounds the TM's steps as a polynomial in the encoding length
    N(n) = n + 1 + Σ n^k.  Steps: (6 + #relations + n) + Σ n^k + T(N).
    Active objects: 3n for the atoms and the sets in A and Ac, numerals up
    to N + T(N), plus a constant for the enum and TM state numerals.
    """
    length = [1, 1]
    for _, k in inputs:
        length = _padd(length, _monomial(k))
    time = _pcompose(list(tm_time), length)
    steps = _padd([6 + len(inputs), 1], time)
    for _, k in inputs:
        steps = _padd(steps, _monomial(k))
    consts = 6 + len(inputs) + 4 + len(tm.states)
    active = _padd(_padd([consts, 3], length), time)
    return Bounds(tuple(steps), tuple(active))


def default_bounds(name: str) -> Bounds:
    return {"parity": PARITY_BOUNDS, "matching": MATCHING_BOUNDS, "red_choice": RED_CHOICE_BOUNDS}[name]


BUILTINS = {
    "parity": builtin_parity,
    "matching": builtin_matching,
    "red_choice": builtin_red_choice,
}


def builtin(name: str) -> Program:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)} or 'order'") from None


def constructed_order(state: State) -> list[int]:
    """Atom ids from smallest to largest, read from the ``less`` relation."""
    u = state.universe
    n = state.input.n
    below = {i: 0 for i in range(n)}
    for loc, value in state.store.items():
        if loc.fname == "less" and value == u.one:
            below[u.atom_id(loc.args[1])] += 1
    return sorted(range(n), key=lambda i: below[i])


def tape_contents(state: State) -> str:
    """The TM tape as a 0/1 string up to the last non-blank cell."""
    u = state.universe
    cells = {}
    for loc, value in state.store.items():
        if loc.fname == "tape":
            cells[u.rank(loc.args[0])] = {u.numeral(1): "0", u.numeral(2): "1"}[value]
    if not cells:
        return ""
    return "".join(cells.get(i, "_") for i in range(max(cells) + 1))
