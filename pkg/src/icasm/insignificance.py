"""Local insignificance checking and a brute-force global oracle.

The local condition at a state S with update sets Δ₀, ..., Δₘ:

(i)  every Δᵢ is the image σᵢΔ₀ of one fixed Δ₀ under an atom permutation;
(ii) the successor S + Δᵢ offers exactly the update sets σᵢ·Δ(S + Δ₀).

Halted states offer no update sets.  A state that has not halted but
offers no update set fails (i): there is no Δ₀ to write Δ(S) from.  The
permutation search tries the
identity, then transpositions, then (optionally) every permutation; for
condition (ii) the first σ that passes both conditions is kept.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .errors import SearchLimitError
from .evaluator import DEFAULT_CAP, apply, delta_sets, format_update_set, perm_update_set, update_set_key
from .hf import Permutation, Universe
from .runs import Bounds, Outcome, RunTree, explore
from .structure import InputStructure, State
from .syntax import Program

__all__ = [
    "IsoSearchStrategy",
    "TRANSPOSITIONS",
    "FULL",
    "InsignificanceReport",
    "find_iso",
    "iter_isos",
    "check_state_local_ic",
    "check_run_local_ic",
    "brute_force_global_ic",
    "layer_isomorphic",
    "layer_witnesses",
    "maps_some_pair",
]


@dataclass(frozen=True)
class IsoSearchStrategy:
    mode: str = "transpositions"  # or "full"
    max_n: int = 7

    def __post_init__(self):
        if self.mode not in ("transpositions", "full"):
            raise ValueError(f"unknown strategy {self.mode!r}")

    @classmethod
    def transpositions_only(cls) -> IsoSearchStrategy:
        return cls("transpositions")

    @classmethod
    def full_permutations(cls, max_n: int = 7) -> IsoSearchStrategy:
        return cls("full", max_n)

    def candidates(self, n: int) -> Iterator[Permutation]:
        if self.mode == "full" and n > self.max_n:
            raise SearchLimitError(f"full permutation search limited to n <= {self.max_n}, got {n}")
        yield Permutation.identity(n)
        for i, j in itertools.combinations(range(n), 2):
            yield Permutation.transposition(n, i, j)
        if self.mode == "full":
            for images in itertools.permutations(range(n)):
                moved = sum(1 for i, j in enumerate(images) if i != j)
                if moved > 2:
                    yield Permutation(images)


TRANSPOSITIONS = IsoSearchStrategy("transpositions")
FULL = IsoSearchStrategy("full")


def _profile(delta, u: Universe):
    """Invariants preserved by any atom permutation."""
    return sorted((loc.fname, tuple(u.rank(a) if not u.is_const(a) else -1 for a in loc.args),
                   u.rank(v) if not u.is_const(v) else -1) for loc, v in delta)


def iter_isos(d1, d2, n: int, universe: Universe, strat: IsoSearchStrategy = TRANSPOSITIONS) -> Iterator[Permutation]:
    """Every σ in the strategy's search space with σΔ₁ = Δ₂, in search order."""
    d1, d2 = frozenset(d1), frozenset(d2)
    if len(d1) != len(d2) or _profile(d1, universe) != _profile(d2, universe):
        return
    for sigma in strat.candidates(n):
        if perm_update_set(sigma, d1, universe) == d2:
            yield sigma


def find_iso(d1, d2, n: int, universe: Universe, strat: IsoSearchStrategy = TRANSPOSITIONS) -> Permutation | None:
    for sigma in iter_isos(d1, d2, n, universe, strat):
        # re-verify before handing the witness out
        assert perm_update_set(sigma, d1, universe) == frozenset(d2)
        return sigma
    return None


@dataclass
class InsignificanceReport:
    passed: bool
    condition: str | None = None  # "i" or "ii"
    state_id: int | None = None
    state: State | None = None
    pair: tuple[frozenset, frozenset] | None = None
    witnesses: list[Permutation] = field(default_factory=list)
    states_checked: int = 0

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        u = self.state.universe if self.state is not None else None
        pair = None
        if self.pair is not None and u is not None:
            pair = [format_update_set(d, u) for d in self.pair]
        return {
            "verdict": self.verdict,
            "condition": self.condition,
            "state": self.state_id,
            "pair": pair,
            "witness": [s.cycle_notation() for s in self.witnesses],
            "states_checked": self.states_checked,
        }


def _successor_deltas(state: State, program: Program, cap: int) -> frozenset:
    if state.halted():
        return frozenset()
    return delta_sets(state, {}, program.rule, cap=cap)


def check_state_local_ic(program: Program, state: State, strat: IsoSearchStrategy = TRANSPOSITIONS, *,
                         deltas: frozenset | None = None,
                         successor_deltas: Callable[[State], frozenset] | None = None,
                         cap: int = DEFAULT_CAP) -> InsignificanceReport:
    u = state.universe
    n = state.input.n
    if deltas is None:
        deltas = _successor_deltas(state, program, cap)
    if successor_deltas is None:
        def successor_deltas(s):
            return _successor_deltas(s, program, cap)
    if not deltas and not state.halted():
        return InsignificanceReport(False, "i", None, state, None, [], 1)
    if len(deltas) <= 1:
        return InsignificanceReport(True, states_checked=1)
    ordered = sorted(deltas, key=lambda d: update_set_key(d, u))
    d0 = ordered[0]
    base = successor_deltas(apply(state, d0))
    witnesses = [Permutation.identity(n)]
    for di in ordered[1:]:
        found_i = False
        chosen = None
        target = successor_deltas(apply(state, di))
        for sigma in iter_isos(d0, di, n, u, strat):
            found_i = True
            memo: dict = {}
            image = frozenset(perm_update_set(sigma, d, u, memo) for d in base)
            if image == target:
                chosen = sigma
                break
        if chosen is None:
            return InsignificanceReport(False, "i" if not found_i else "ii", None, state, (d0, di),
                                        witnesses, 1)
        witnesses.append(chosen)
    return InsignificanceReport(True, witnesses=witnesses, states_checked=1)


def check_run_local_ic(program: Program, inp: InputStructure, bounds: Bounds,
                       strat: IsoSearchStrategy = TRANSPOSITIONS, *, tree: RunTree | None = None,
                       node_cap: int = 200_000, cap: int = DEFAULT_CAP) -> InsignificanceReport:
    """Check every reachable non-terminal state, breadth first.

    Stuck leaves are checked too (and fail); leaves cut off by a bound are
    not.  The first failure in (depth, node id) order is reported.
    """
    if tree is None:
        tree = explore(program, inp, bounds, cap=cap, node_cap=node_cap)
    if not tree.complete:
        raise SearchLimitError(f"run tree exceeds {node_cap} nodes")
    known = {node.state: node.deltas for node in tree.nodes if not node.is_leaf}

    def successor_deltas(s: State) -> frozenset:
        hit = known.get(s)
        if hit is None:
            hit = known[s] = _successor_deltas(s, program, cap)
        return hit

    checked = 0
    for node in sorted(tree.nodes, key=lambda nd: (nd.depth, nd.id)):
        if node.is_leaf and node.outcome is not Outcome.STUCK:
            continue
        report = check_state_local_ic(program, node.state, strat, deltas=node.deltas,
                                      successor_deltas=successor_deltas, cap=cap)
        checked += 1
        if not report.passed:
            report.state_id = node.id
            report.states_checked = checked
            return report
    return InsignificanceReport(True, states_checked=checked)


def brute_force_global_ic(program: Program, inp: InputStructure, bounds: Bounds | None = None, *,
                          node_cap: int = 200_000, cap: int = DEFAULT_CAP,
                          with_reason: bool = False):
    """True, False, or None when the tree does not fit the caps.

    True iff every maximal run halts, all halting runs agree on Output, and
    from every reachable state every update set can still be continued to a
    halting run with that Output.
    """
    def result(value, reason):
        return (value, reason) if with_reason else value

    bounds = bounds or Bounds.unbounded()
    tree = explore(program, inp, bounds, cap=cap, node_cap=node_cap)
    if not tree.complete or tree.verdicts[Outcome.CAP_EXCEEDED]:
        return result(None, "caps exceeded")
    if tree.has_cycle:
        return result(False, "a run never halts (cycle)")
    for leaf in tree.leaves():
        if not leaf.state.halted():
            return result(False, f"maximal run ends without halting ({leaf.outcome})")
    outs: dict[int, frozenset] = {}

    # children may sit at any depth (deduplication), so evaluate by DFS
    def outputs(nid: int) -> frozenset:
        stack = [nid]
        while stack:
            cur = stack[-1]
            if cur in outs:
                stack.pop()
                continue
            node = tree.nodes[cur]
            if node.is_leaf:
                outs[cur] = frozenset({node.state.output()})
                stack.pop()
                continue
            pending = [c for _, c in node.children if c not in outs]
            if pending:
                stack.extend(pending)
                continue
            outs[cur] = frozenset().union(*(outs[c] for _, c in node.children))
            stack.pop()
        return outs[nid]

    overall = outputs(0)
    if len(overall) != 1:
        return result(False, "halting runs disagree on Output")
    for node in tree.nodes:
        for _, child in node.children:
            if not outputs(child) & overall:
                return result(False, f"update set at node {node.id} cannot reach the common Output")
    return result(True, "all runs halt with the same Output")


def layer_isomorphic(tree: RunTree, depth: int, strat: IsoSearchStrategy = FULL):
    """None if all update sets applied at ``depth`` are pairwise isomorphic, else a failing pair."""
    u = tree.root.state.universe
    n = tree.input.n
    deltas = sorted(tree.layer_update_sets(depth), key=lambda d: update_set_key(d, u))
    for a, b in itertools.combinations(deltas, 2):
        if find_iso(a, b, n, u, strat) is None:
            return a, b
    return None


def layer_witnesses(tree: RunTree, depth: int) -> set[Permutation]:
    """Transpositions g with gΔ = Δ' for distinct update sets Δ, Δ' at ``depth``."""
    u = tree.root.state.universe
    n = tree.input.n
    deltas = set(tree.layer_update_sets(depth))
    out = set()
    for i, j in itertools.combinations(range(n), 2):
        g = Permutation.transposition(n, i, j)
        memo: dict = {}
        for d in deltas:
            image = perm_update_set(g, d, u, memo)
            if image != d and image in deltas:
                out.add(g)
                break
    return out


def maps_some_pair(tree: RunTree, depth: int, g: Permutation) -> bool:
    u = tree.root.state.universe
    deltas = set(tree.layer_update_sets(depth))
    memo: dict = {}
    return any(perm_update_set(g, d, u, memo) in deltas and perm_update_set(g, d, u, memo) != d
               for d in deltas)
