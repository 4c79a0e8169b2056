"""Standard encodings of ordered structures and a single-tape Turing machine."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import StructureError
from .structure import InputStructure

__all__ = [
    "BLANK",
    "TuringMachine",
    "encode_ordered",
    "encoding_length",
    "parse_tm",
    "format_tm",
    "tm_run",
    "even_ones_tm",
    "length_mod3_tm",
]

BLANK = "_"
SYMBOLS = ("0", "1", BLANK)


def encode_ordered(inp: InputStructure, order: Sequence[int]) -> str:
    """``1^n 0`` followed by each relation's characteristic string.

    ``order`` lists the atoms from smallest to largest.  Relations appear
    in declaration order; k-tuples are enumerated lexicographically with
    respect to ``order``.
    """
    n = inp.n
    if sorted(order) != list(range(n)):
        raise StructureError(f"order {list(order)} is not a total order on {n} atoms")
    bits = ["1" * n, "0"]
    for name, tuples in inp.relations.items():
        k = inp.arities[name]
        bits.extend("1" if t in tuples else "0" for t in itertools.product(order, repeat=k))
    return "".join(bits)


def encoding_length(n: int, arities: Sequence[int]) -> int:
    return n + 1 + sum(n**k for k in arities)


@dataclass(frozen=True)
class TuringMachine:
    """Single tape, alphabet {0, 1, blank}, moves L or R.

    ``transitions`` maps ``(state, symbol)`` to ``(state, symbol, move)``.
    Moving left from cell 0 keeps the head on cell 0.
    """

    states: tuple[str, ...]
    start: str
    accept: str
    reject: str
    transitions: Mapping[tuple[str, str], tuple[str, str, str]]

    def __post_init__(self):
        if self.accept == self.reject:
            raise StructureError("accept and reject states must differ")
        for s in (self.start, self.accept, self.reject):
            if s not in self.states:
                raise StructureError(f"unknown state {s!r}")
        for (s, a), (t, b, move) in self.transitions.items():
            if s in (self.accept, self.reject):
                raise StructureError(f"transition out of terminal state {s!r}")
            if s not in self.states or t not in self.states:
                raise StructureError(f"transition {s}/{a} mentions an unknown state")
            if a not in SYMBOLS or b not in SYMBOLS or move not in ("L", "R"):
                raise StructureError(f"bad transition {s}/{a} -> {t}/{b}/{move}")
        for s in self.states:
            if s in (self.accept, self.reject):
                continue
            for a in SYMBOLS:
                if (s, a) not in self.transitions:
                    raise StructureError(f"transition function undefined on ({s}, {a})")

    def ordered_states(self) -> list[str]:
        """Start state first, then the rest in declaration order."""
        return [self.start] + [s for s in self.states if s != self.start]


def tm_run(tm: TuringMachine, word: str, step_cap: int = 1_000_000) -> str:
    """Returns ``'accept'``, ``'reject'`` or ``'cap'``."""
    tape = dict(enumerate(word))
    head, state = 0, tm.start
    for _ in range(step_cap):
        if state == tm.accept:
            return "accept"
        if state == tm.reject:
            return "reject"
        state, symbol, move = tm.transitions[(state, tape.get(head, BLANK))]
        if symbol == BLANK:
            tape.pop(head, None)
        else:
            tape[head] = symbol
        head = head + 1 if move == "R" else max(head - 1, 0)
    if state == tm.accept:
        return "accept"
    if state == tm.reject:
        return "reject"
    return "cap"


def tm_steps(tm: TuringMachine, word: str, step_cap: int = 1_000_000) -> int:
    """Number of transitions taken before reaching a terminal state."""
    tape = dict(enumerate(word))
    head, state = 0, tm.start
    for steps in range(step_cap):
        if state in (tm.accept, tm.reject):
            return steps
        state, symbol, move = tm.transitions[(state, tape.get(head, BLANK))]
        tape[head] = symbol
        head = head + 1 if move == "R" else max(head - 1, 0)
    return step_cap


def parse_tm(text: str) -> TuringMachine:
    """Lines ``state <name> [start|accept|reject]`` and ``t <q> <a> <q'> <b> <L|R>``."""
    states: list[str] = []
    roles: dict[str, str] = {}
    transitions = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "state" and len(words) in (2, 3):
            states.append(words[1])
            if len(words) == 3:
                if words[2] not in ("start", "accept", "reject") or words[2] in roles:
                    raise StructureError(f"line {lineno}: bad or repeated role {words[2]!r}")
                roles[words[2]] = words[1]
        elif words[0] == "t" and len(words) == 6:
            _, q, a, q2, b, move = words
            if (q, a) in transitions:
                raise StructureError(f"line {lineno}: duplicate transition for ({q}, {a})")
            transitions[(q, a)] = (q2, b, move)
        else:
            raise StructureError(f"line {lineno}: cannot parse {raw!r}")
    for role in ("start", "accept", "reject"):
        if role not in roles:
            raise StructureError(f"no {role} state declared")
    return TuringMachine(tuple(states), roles["start"], roles["accept"], roles["reject"], transitions)


def format_tm(tm: TuringMachine) -> str:
    roles = {tm.start: " start", tm.accept: " accept", tm.reject: " reject"}
    lines = [f"state {s}{roles.get(s, '')}" for s in tm.states]
    for (q, a), (q2, b, move) in tm.transitions.items():
        lines.append(f"t {q} {a} {q2} {b} {move}")
    return "\n".join(lines) + "\n"


def even_ones_tm() -> TuringMachine:
    """Accepts iff the input contains an even number of 1s."""
    return parse_tm("""
        state even start
        state odd
        state yes accept
        state no reject
        t even 0 even 0 R
        t even 1 odd 1 R
        t even _ yes _ R
        t odd 0 odd 0 R
        t odd 1 even 1 R
        t odd _ no _ R
    """)


def length_mod3_tm() -> TuringMachine:
    """Accepts iff the input length is divisible by 3."""
    return parse_tm("""
        state r0 start
        state r1
        state r2
        state yes accept
        state no reject
        t r0 0 r1 0 R
        t r0 1 r1 1 R
        t r0 _ yes _ R
        t r1 0 r2 0 R
        t r1 1 r2 1 R
        t r1 _ no _ R
        t r2 0 r0 0 R
        t r2 1 r0 1 R
        t r2 _ no _ R
    """)
