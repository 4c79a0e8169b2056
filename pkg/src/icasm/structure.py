"""Signatures, input structures, locations and states."""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple

from .errors import StructureError
from .hf import Permutation, Universe, default_universe

__all__ = [
    "InputStructure",
    "Location",
    "Signature",
    "State",
    "initial_state",
    "lookup",
    "state_permute",
    "parse_structure",
    "format_structure",
    "permute_structure",
]

OUTPUT = "Output"
HALT = "Halt"


@dataclass(frozen=True)
class Signature:
    """Input relation names and dynamic function names of a machine.

    ``Output`` and ``Halt`` are always present; ``Halt`` is a nullary
    relational name, ``Output`` is nullary unless declared otherwise.
    """

    inputs: tuple[tuple[str, int], ...] = ()
    dynamics: tuple[tuple[str, int, bool], ...] = ()

    def __post_init__(self):
        dyn = list(self.dynamics)
        names = [d[0] for d in dyn]
        if OUTPUT not in names:
            dyn.append((OUTPUT, 0, False))
        if HALT not in names:
            dyn.append((HALT, 0, True))
        object.__setattr__(self, "dynamics", tuple(dyn))
        all_names = [n for n, _ in self.inputs] + [d[0] for d in dyn]
        if len(set(all_names)) != len(all_names):
            raise StructureError(f"duplicate names in signature: {all_names}")
        halt = self.dynamic(HALT)
        if halt != (0, True):
            raise StructureError("Halt must be a nullary relational name")

    def input_arity(self, name: str) -> int | None:
        for n, k in self.inputs:
            if n == name:
                return k
        return None

    def dynamic(self, name: str) -> tuple[int, bool] | None:
        """``(arity, relational)`` for a dynamic name, or ``None``."""
        for n, k, rel in self.dynamics:
            if n == name:
                return k, rel
        return None

    def with_dynamic(self, name: str, arity: int, relational: bool = False) -> Signature:
        return Signature(self.inputs, self.dynamics + ((name, arity, relational),))


@dataclass(frozen=True)
class InputStructure:
    """A finite structure over atoms ``0..n-1`` and input relations.

    ``relations`` keeps declaration order, which the standard encoding
    relies on.
    """

    n: int
    relations: Mapping[str, frozenset[tuple[int, ...]]] = field(default_factory=dict)
    arities: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise StructureError("negative atom count")
        rels = {}
        arities = dict(self.arities)
        for name, tuples in self.relations.items():
            tuples = frozenset(tuple(t) for t in tuples)
            if name not in arities:
                if not tuples:
                    raise StructureError(f"cannot infer arity of empty relation {name}")
                arities[name] = len(next(iter(tuples)))
            for t in tuples:
                if len(t) != arities[name]:
                    raise StructureError(f"tuple {t} does not match arity {arities[name]} of {name}")
                if any(not 0 <= a < self.n for a in t):
                    raise StructureError(f"tuple {t} of {name} mentions an atom outside [0, {self.n})")
            rels[name] = tuples
        for name in arities:
            rels.setdefault(name, frozenset())
        object.__setattr__(self, "relations", MappingProxyType(rels))
        object.__setattr__(self, "arities", MappingProxyType(arities))

    @classmethod
    def naked(cls, n: int) -> InputStructure:
        return cls(n)

    def holds(self, name: str, args: tuple[int, ...]) -> bool:
        return args in self.relations[name]

    def check_signature(self, sig: Signature) -> None:
        for name, k in sig.inputs:
            if name not in self.arities:
                raise StructureError(f"input structure lacks relation {name}/{k}")
            if self.arities[name] != k:
                raise StructureError(f"relation {name} has arity {self.arities[name]}, signature says {k}")

    def __eq__(self, other):
        if not isinstance(other, InputStructure):
            return NotImplemented
        return self.n == other.n and dict(self.relations) == dict(other.relations)

    def __hash__(self):
        return hash((self.n, frozenset(self.relations.items())))

    def __repr__(self):
        rels = ", ".join(f"{k}={sorted(v)}" for k, v in self.relations.items())
        return f"InputStructure(n={self.n}{', ' + rels if rels else ''})"


def permute_structure(sigma: Permutation, inp: InputStructure) -> InputStructure:
    rels = {name: frozenset(tuple(sigma(a) for a in t) for t in ts) for name, ts in inp.relations.items()}
    return InputStructure(inp.n, rels, dict(inp.arities))


class Location(NamedTuple):
    fname: str
    args: tuple[int, ...]


class State:
    """An ASM state: input structure plus a finite store of non-∅ locations.

    States are treated as immutable values; equality ignores the universe
    and compares input and store.
    """

    __slots__ = ("signature", "input", "universe", "_store", "_key", "_hash")

    def __init__(self, signature: Signature, inp: InputStructure, universe: Universe,
                 store: Mapping[Location, int] | None = None):
        self.signature = signature
        self.input = inp
        self.universe = universe
        self._store = {loc: v for loc, v in (store or {}).items() if v != universe.empty}
        self._key = None
        self._hash = None

    @property
    def store(self) -> Mapping[Location, int]:
        return MappingProxyType(self._store)

    @property
    def key(self) -> frozenset:
        if self._key is None:
            self._key = frozenset(self._store.items())
        return self._key

    def get(self, fname: str, *args: int) -> int:
        return self._store.get(Location(fname, tuple(args)), self.universe.empty)

    def halted(self) -> bool:
        return self.get(HALT) == self.universe.one

    def output(self) -> int:
        return self.get(OUTPUT)

    def updated(self, changes: Iterable[tuple[Location, int]]) -> State:
        store = dict(self._store)
        empty = self.universe.empty
        for loc, value in changes:
            if value == empty:
                store.pop(loc, None)
            else:
                store[loc] = value
        out = State.__new__(State)
        out.signature, out.input, out.universe = self.signature, self.input, self.universe
        out._store, out._key, out._hash = store, None, None
        return out

    def __eq__(self, other):
        if not isinstance(other, State):
            return NotImplemented
        return self.input == other.input and self.key == other.key

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def format(self) -> str:
        u = self.universe
        items = sorted(
            (loc.fname, tuple(u.sort_key(a) for a in loc.args), loc, v) for loc, v in self._store.items()
        )
        parts = []
        for _, _, loc, v in items:
            args = ",".join(u.format(a) for a in loc.args)
            parts.append(f"{loc.fname}({args})={u.format(v)}")
        return "{" + "; ".join(parts) + "}"

    def __repr__(self):
        return f"State({self.format()})"


def initial_state(inp: InputStructure, signature: Signature | None = None,
                  universe: Universe | None = None) -> State:
    """State(I): every dynamic function has empty domain."""
    signature = signature or Signature(tuple(inp.arities.items()))
    inp.check_signature(signature)
    return State(signature, inp, universe or default_universe())


def lookup(state: State, loc: Location) -> int:
    decl = state.signature.dynamic(loc.fname)
    if decl is None:
        raise StructureError(f"unknown dynamic name {loc.fname!r}")
    if decl[0] != len(loc.args):
        raise StructureError(f"{loc.fname} expects {decl[0]} arguments, got {len(loc.args)}")
    return state._store.get(loc, state.universe.empty)


def state_permute(sigma: Permutation, state: State) -> State:
    """σ·S: locations and values mapped through σ, input relations tuplewise."""
    u = state.universe
    memo: dict[int, int] = {}
    store = {
        Location(loc.fname, tuple(u.permute(sigma, a, memo) for a in loc.args)): u.permute(sigma, v, memo)
        for loc, v in state.store.items()
    }
    return State(state.signature, permute_structure(sigma, state.input), u, store)


# -- structure file format -------------------------------------------------

def parse_structure(text: str) -> InputStructure:
    """Parse ``atoms <n>`` / ``rel <name>/<arity>`` / ``t <i1> ... <ik>`` lines."""
    n = None
    rels: dict[str, set] = {}
    arities: dict[str, int] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        try:
            if head == "atoms":
                if n is not None or len(words) != 2:
                    raise StructureError("expected a single 'atoms <n>' line")
                n = int(words[1])
            elif head == "rel":
                if len(words) != 2 or "/" not in words[1]:
                    raise StructureError("expected 'rel <name>/<arity>'")
                name, k = words[1].rsplit("/", 1)
                if name in arities:
                    raise StructureError(f"relation {name} declared twice")
                arities[name] = int(k)
                rels[name] = set()
                current = name
            elif head == "t":
                if current is None:
                    raise StructureError("tuple line before any 'rel' line")
                t = tuple(int(w) for w in words[1:])
                if len(t) != arities[current]:
                    raise StructureError(f"tuple {t} does not match arity of {current}")
                rels[current].add(t)
            else:
                raise StructureError(f"unknown directive {head!r}")
        except (StructureError, ValueError) as exc:
            raise StructureError(f"line {lineno}: {exc}") from None
    if n is None:
        raise StructureError("missing 'atoms <n>' line")
    return InputStructure(n, {k: frozenset(v) for k, v in rels.items()}, arities)


def format_structure(inp: InputStructure) -> str:
    lines = [f"atoms {inp.n}"]
    for name, tuples in inp.relations.items():
        lines.append(f"rel {name}/{inp.arities[name]}")
        for t in sorted(tuples):
            lines.append(" ".join(["t", *map(str, t)]))
    return "\n".join(lines) + "\n"
