"""Hereditarily finite sets over atoms, hash-consed into a `Universe`.

Every object of the base set HF(A) ∪ K lives in a universe table and is
referred to by its handle, a plain ``int``.  Structurally equal objects
share a handle, so equality is ``==`` on ints.

Handles are only meaningful relative to the universe that produced them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import HFError

__all__ = [
    "Const",
    "Permutation",
    "Universe",
    "default_universe",
]


@dataclass(frozen=True)
class Const:
    """Description of the static constant c_f for a dynamic name ``f``."""

    name: str


# Entry kinds in the intern table.
_ATOM, _SET, _CONST = 0, 1, 2


@dataclass(frozen=True)
class Permutation:
    """A bijection on atom ids ``0..n-1``; ids outside the range are fixed."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise HFError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> Permutation:
        images = list(range(n))
        images[i], images[j] = j, i
        return cls(tuple(images))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> Permutation:
        images = list(range(n))
        for cycle in cycles:
            for k, a in enumerate(cycle):
                images[a] = cycle[(k + 1) % len(cycle)]
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i] if i < len(self.images) else i

    def compose(self, other: Permutation) -> Permutation:
        """``self ∘ other``: apply ``other`` first."""
        n = max(self.n, other.n)
        return Permutation(tuple(self(other(i)) for i in range(n)))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(self.n):
            if start in seen or self.images[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self.images[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self.images[nxt]
            out.append(tuple(cycle))
        return out

    def cycle_notation(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(f"a{i}" for i in c) + ")" for c in cycles)

    def __repr__(self) -> str:
        return f"Permutation{self.cycle_notation()}"


class Universe:
    """Append-only intern table for atoms, sets and constants.

    Sets store their members as a tuple of handles sorted by the canonical
    order: atoms first (by id), then sets compared lexicographically on
    their sorted member sequences, then constants by name.
    """

    def __init__(self):
        self._kind: list[int] = []
        self._data: list = []  # atom id | member tuple | const name
        self._key: list[tuple] = []
        self._rank: list[int] = []
        self._index: dict[tuple, int] = {}
        self._tc: dict[int, frozenset[int]] = {}
        self.empty = self._intern_set(())
        self.one = self._intern_set((self.empty,))

    def __len__(self) -> int:
        return len(self._kind)

    # -- construction ------------------------------------------------------

    def atom(self, i: int) -> int:
        if i < 0:
            raise HFError(f"negative atom id {i}")
        key = (_ATOM, i)
        h = self._index.get(key)
        if h is None:
            h = self._append(_ATOM, i, key, 0)
        return h

    def const(self, name: str) -> int:
        key = (_CONST, name)
        h = self._index.get(key)
        if h is None:
            h = self._append(_CONST, name, (_CONST, name), 0)
        return h

    def set_of(self, members: Iterable[int]) -> int:
        """Intern the set whose members are the given handles."""
        uniq = set(members)
        for m in uniq:
            if self._kind[m] == _CONST:
                raise HFError(f"constant {self._data[m]!r} cannot be a set member")
        ordered = tuple(sorted(uniq, key=self._key.__getitem__))
        return self._intern_set(ordered)

    def _intern_set(self, ordered: tuple[int, ...]) -> int:
        key = (_SET, ordered)
        h = self._index.get(key)
        if h is not None:
            return h
        rank = 1 + max(self._rank[m] for m in ordered) if ordered else 0
        skey = (_SET, tuple(self._key[m] for m in ordered))
        h = len(self._kind)
        self._kind.append(_SET)
        self._data.append(ordered)
        self._key.append(skey)
        self._rank.append(rank)
        self._index[key] = h
        return h

    def _append(self, kind, data, key, rank) -> int:
        h = len(self._kind)
        self._kind.append(kind)
        self._data.append(data)
        self._key.append(key)
        self._rank.append(rank)
        self._index[key] = h
        return h

    def intern(self, description) -> int:
        """Intern a literal description.

        An ``int`` is an atom id, a ``Const`` is a constant, and any
        set/frozenset/list/tuple is a set of descriptions.
        """
        if isinstance(description, bool):
            raise HFError("booleans are not HF descriptions; use sets")
        if isinstance(description, int):
            return self.atom(description)
        if isinstance(description, Const):
            return self.const(description.name)
        if isinstance(description, (set, frozenset, list, tuple)):
            members = []
            for d in description:
                if isinstance(d, Const):
                    raise HFError(f"constant {d.name!r} nested in a set")
                members.append(self.intern(d))
            return self.set_of(members)
        raise HFError(f"malformed description: {description!r}")

    def numeral(self, k: int) -> int:
        """The von Neumann numeral k = {0, ..., k-1}."""
        h = self.empty
        for _ in range(k):
            h = self.successor(h)
        return h

    def successor(self, h: int) -> int:
        return self.set_of(self.members(h) + (h,))

    def pair(self, a: int, b: int) -> int:
        return self.set_of((a, b))

    def kpair(self, a: int, b: int) -> int:
        """Kuratowski ordered pair {{a}, {a, b}}."""
        return self.set_of((self.set_of((a,)), self.set_of((a, b))))

    def ktuple(self, items: Sequence[int]) -> int:
        """Kuratowski tuple: (x1, ..., xn) = (x1, (x2, ..., xn)); 1-tuples are the item."""
        if not items:
            return self.empty
        h = items[-1]
        for x in reversed(items[:-1]):
            h = self.kpair(x, h)
        return h

    # -- inspection --------------------------------------------------------

    def is_atom(self, h: int) -> bool:
        return self._kind[h] == _ATOM

    def is_set(self, h: int) -> bool:
        return self._kind[h] == _SET

    def is_const(self, h: int) -> bool:
        return self._kind[h] == _CONST

    def atom_id(self, h: int) -> int:
        if self._kind[h] != _ATOM:
            raise HFError(f"handle {h} is not an atom")
        return self._data[h]

    def const_name(self, h: int) -> str:
        if self._kind[h] != _CONST:
            raise HFError(f"handle {h} is not a constant")
        return self._data[h]

    def members(self, h: int) -> tuple[int, ...]:
        """Members in canonical order; atoms and constants have none."""
        return self._data[h] if self._kind[h] == _SET else ()

    def contains(self, container: int, h: int) -> bool:
        return self._kind[container] == _SET and h in self._data[container]

    def is_boolean(self, h: int) -> bool:
        return h == self.empty or h == self.one

    def sort_key(self, h: int) -> tuple:
        return self._key[h]

    def sorted(self, handles: Iterable[int]) -> list[int]:
        return sorted(handles, key=self._key.__getitem__)

    def rank(self, h: int) -> int:
        if self._kind[h] == _CONST:
            raise HFError("constants have no rank")
        return self._rank[h]

    def transitive_closure(self, h: int) -> frozenset[int]:
        """TC(h): the least transitive set containing h as a member."""
        cached = self._tc.get(h)
        if cached is not None:
            return cached
        out = {h}
        stack = [h]
        while stack:
            for m in self.members(stack.pop()):
                if m not in out:
                    out.add(m)
                    stack.append(m)
        result = frozenset(out)
        self._tc[h] = result
        return result

    def atoms_of(self, h: int) -> frozenset[int]:
        """Atom ids occurring anywhere in h."""
        return frozenset(self._data[x] for x in self.transitive_closure(h) if self._kind[x] == _ATOM)

    def iter_nodes(self) -> Iterator[int]:
        return iter(range(len(self._kind)))

    # -- permutation action ----------------------------------------------

    def permute(self, sigma: Permutation, h: int, memo: dict[int, int] | None = None) -> int:
        if memo is None:
            memo = {}
        return self._permute(sigma, h, memo)

    def _permute(self, sigma, h, memo):
        out = memo.get(h)
        if out is not None:
            return out
        kind = self._kind[h]
        if kind == _ATOM:
            out = self.atom(sigma(self._data[h]))
        elif kind == _CONST or self._rank[h] == 0 or not self._data[h]:
            out = h
        else:
            out = self.set_of(self._permute(sigma, m, memo) for m in self._data[h])
        memo[h] = out
        return out

    # -- rendering ---------------------------------------------------------

    def format(self, h: int) -> str:
        """Canonical brace syntax: atoms ``a3``, sets ``{a0,{}}``, constants ``c_f``."""
        kind = self._kind[h]
        if kind == _ATOM:
            return f"a{self._data[h]}"
        if kind == _CONST:
            return f"c_{self._data[h]}"
        return "{" + ",".join(self.format(m) for m in self._data[h]) + "}"

    def describe(self, h: int):
        """Inverse of `intern`: atoms as ints, sets as frozensets."""
        kind = self._kind[h]
        if kind == _ATOM:
            return self._data[h]
        if kind == _CONST:
            return Const(self._data[h])
        return frozenset(self.describe(m) for m in self._data[h])

    def parse(self, text: str) -> int:
        """Read the canonical brace syntax back into a handle."""
        pos = 0

        def skip():
            nonlocal pos
            while pos < len(text) and text[pos].isspace():
                pos += 1

        def item():
            nonlocal pos
            skip()
            if text.startswith("{", pos):
                pos += 1
                members = []
                skip()
                if text.startswith("}", pos):
                    pos += 1
                    return self.empty
                while True:
                    members.append(item())
                    skip()
                    if text.startswith(",", pos):
                        pos += 1
                    elif text.startswith("}", pos):
                        pos += 1
                        return self.set_of(members)
                    else:
                        raise HFError(f"expected ',' or '}}' at {pos} in {text!r}")
            if text.startswith("c_", pos):
                end = pos + 2
                while end < len(text) and (text[end].isalnum() or text[end] == "_"):
                    end += 1
                name, pos = text[pos + 2:end], end
                return self.const(name)
            if text.startswith("a", pos):
                end = pos + 1
                while end < len(text) and text[end].isdigit():
                    end += 1
                if end == pos + 1:
                    raise HFError(f"bad atom at {pos} in {text!r}")
                i, pos = int(text[pos + 1:end]), end
                return self.atom(i)
            raise HFError(f"unexpected input at {pos} in {text!r}")

        h = item()
        skip()
        if pos != len(text):
            raise HFError(f"trailing input at {pos} in {text!r}")
        return h


_DEFAULT: Universe | None = None


def default_universe() -> Universe:
    """Process-wide universe used when callers do not supply their own."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Universe()
    return _DEFAULT
