"""Automorphism groups of small input structures, orbits and supports."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import SearchLimitError, SupportError
from .hf import Permutation, Universe, default_universe
from .structure import InputStructure

__all__ = [
    "AutGroup",
    "Orbit",
    "automorphisms",
    "closure",
    "orbit",
    "image_of_set",
    "is_support",
    "colours",
    "min_support",
    "support_profile",
]


def closure(generators: Iterable[Permutation], n: int) -> list[Permutation]:
    """The group generated by ``generators`` on n atoms, identity first."""
    gens = [g for g in generators]
    ident = Permutation.identity(n)
    seen = {ident.images: ident}
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = g.compose(p)
            if q.images not in seen:
                seen[q.images] = q
                queue.append(q)
    return list(seen.values())


@dataclass
class AutGroup:
    n: int
    elements: list[Permutation]
    _generators: list[Permutation] | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p: Permutation) -> bool:
        return p in set(self.elements)

    @property
    def generators(self) -> list[Permutation]:
        """A small generating set, picked greedily."""
        if self._generators is None:
            gens: list[Permutation] = []
            span = {Permutation.identity(self.n).images}
            for p in self.elements:
                if p.images not in span:
                    gens.append(p)
                    span = {q.images for q in closure(gens, self.n)}
            self._generators = gens
        return self._generators

    def fixing(self, xs: Iterable[int]) -> list[Permutation]:
        """Elements fixing every atom in ``xs``."""
        xs = list(xs)
        return [p for p in self.elements if all(p(x) == x for x in xs)]


def automorphisms(inp: InputStructure, limit_n: int = 8) -> AutGroup:
    """All atom permutations mapping each input relation onto itself."""
    n = inp.n
    if n > limit_n:
        raise SearchLimitError(f"automorphism search limited to n <= {limit_n}, got {n}")
    rels = [(inp.arities[name], ts) for name, ts in inp.relations.items()]
    # tuples whose largest atom is i, checked once atom i is mapped
    by_max: list[list[tuple[int, tuple[int, ...], frozenset]]] = [[] for _ in range(n)]
    for k, ts in rels:
        for t in itertools.product(range(n), repeat=k):
            if t:
                by_max[max(t)].append((k, t, ts))
    images = [-1] * n
    used = [False] * n
    found: list[Permutation] = []

    def extend(i: int):
        if i == n:
            found.append(Permutation(tuple(images)))
            return
        for j in range(n):
            if used[j]:
                continue
            images[i] = j
            ok = all((t in ts) == (tuple(images[a] for a in t) in ts) for _, t, ts in by_max[i])
            if ok:
                used[j] = True
                extend(i + 1)
                used[j] = False
        images[i] = -1

    # nullary relations are fixed by every permutation
    extend(0)
    found.sort(key=lambda p: (not p.is_identity(), p.images))
    return AutGroup(n, found)


@dataclass(frozen=True)
class Orbit:
    representative: int
    generators: tuple[Permutation, ...]
    members: frozenset[int]

    def __len__(self):
        return len(self.members)


def orbit(y: int, generators: Sequence[Permutation], universe: Universe | None = None) -> Orbit:
    """Closure of {y} under the generators."""
    u = universe or default_universe()
    seen = {y}
    queue = deque([y])
    memos = [dict() for _ in generators]
    while queue:
        z = queue.popleft()
        for g, memo in zip(generators, memos):
            w = u.permute(g, z, memo)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return Orbit(y, tuple(generators), frozenset(seen))


def image_of_set(theta: Permutation, q: Iterable[int], universe: Universe) -> frozenset[int]:
    memo: dict = {}
    return frozenset(universe.permute(theta, x, memo) for x in q)


def is_support(xs: Iterable[int], q: Iterable[int], aut: AutGroup, universe: Universe | None = None,
               *, pointwise: bool = False) -> bool:
    """Every automorphism fixing ``xs`` pointwise maps ``q`` onto itself.

    ``pointwise=True`` asks for every member of ``q`` to be fixed instead.
    """
    u = universe or default_universe()
    q = frozenset(q)
    for theta in aut.fixing(xs):
        if pointwise:
            memo: dict = {}
            if any(u.permute(theta, x, memo) != x for x in q):
                return False
        elif image_of_set(theta, q, u) != q:
            return False
    return True


def colours(inp: InputStructure) -> list[frozenset[int]]:
    """Atoms grouped by their membership in the unary relations."""
    unary = [ts for name, ts in inp.relations.items() if inp.arities[name] == 1]
    groups: dict[tuple[bool, ...], set[int]] = {}
    for a in range(inp.n):
        groups.setdefault(tuple((a,) in ts for ts in unary), set()).add(a)
    return [frozenset(g) for _, g in sorted(groups.items(), key=lambda kv: min(kv[1]))]


def _qualifies(xs: frozenset[int], cols: list[frozenset[int]]) -> bool:
    return all(2 * len(xs & c) < len(c) for c in cols)


def min_support(q: Iterable[int], inp: InputStructure, aut: AutGroup | None = None,
                universe: Universe | None = None) -> frozenset[int] | None:
    """Intersection of all supports X with |X ∩ c| < |c|/2 for each colour c.

    Returns None when no such support exists.  Subsets are enumerated by
    size so the smallest supports are found first.
    """
    u = universe or default_universe()
    aut = aut or automorphisms(inp)
    q = frozenset(q)
    cols = colours(inp)
    supports = []
    for size in range(inp.n + 1):
        for xs in itertools.combinations(range(inp.n), size):
            xs = frozenset(xs)
            if _qualifies(xs, cols) and is_support(xs, q, aut, u):
                supports.append(xs)
    if not supports:
        return None
    meet = frozenset.intersection(*supports)
    if not is_support(meet, q, aut, u):
        raise SupportError(f"intersection {sorted(meet)} of supports is not a support")
    return meet


def support_profile(support: frozenset[int], inp: InputStructure) -> list[int]:
    """|Supp ∩ c| for each colour c."""
    return [len(support & c) for c in colours(inp)]
