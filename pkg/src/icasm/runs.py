"""Runs of PTIME-bounded machines: verdicts, active objects, traces.

A single run follows one update set per step (`LEAST_ATOM` or
`FIRST_FOUND`).  `EXHAUSTIVE` explores every update set at every step,
deduplicating states, and yields a `RunTree`.
"""
from __future__ import annotations

import enum
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .evaluator import DEFAULT_CAP, Update, apply, delta_sets, format_update_set, update_set_key
from .hf import Universe, default_universe
from .structure import InputStructure, State, initial_state
from .syntax import Program

__all__ = [
    "Bounds",
    "Outcome",
    "RunVerdict",
    "SchedulingMode",
    "RunResult",
    "RunTree",
    "TreeNode",
    "TraceEntry",
    "critical_objects",
    "active_objects",
    "run",
    "explore",
    "export_trace",
    "format_trace",
]


def _poly(coeffs: Sequence[int], n: int) -> int:
    return sum(c * n**i for i, c in enumerate(coeffs))


@dataclass(frozen=True)
class Bounds:
    """Polynomials as coefficient tuples, lowest degree first."""

    p: tuple[int, ...]
    q: tuple[int, ...]
    step_cap: int = 100_000
    per_state_active: bool = False

    def __post_init__(self):
        for c in (*self.p, *self.q):
            if c < 0:
                raise ValueError("polynomial coefficients must be non-negative")

    def steps(self, n: int) -> int:
        return _poly(self.p, n)

    def active(self, n: int) -> int:
        return _poly(self.q, n)

    @classmethod
    def unbounded(cls, step_cap: int = 100_000) -> Bounds:
        return cls((step_cap,), (10**12,), step_cap)


class Outcome(enum.Enum):
    ACCEPTED = "Accepted"
    REJECTED = "Rejected"
    STEP_BOUND_EXCEEDED = "StepBoundExceeded"
    ACTIVE_BOUND_EXCEEDED = "ActiveBoundExceeded"
    STUCK = "Stuck"
    CAP_EXCEEDED = "CapExceeded"

    def __str__(self):
        return self.value


class SchedulingMode(enum.Enum):
    LEAST_ATOM = "least-atom"
    FIRST_FOUND = "first"
    EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True)
class RunVerdict:
    outcome: Outcome
    steps: int
    active_total: int


def critical_objects(state: State) -> frozenset[int]:
    """Atoms, 0, 1, stored values, and argument components of stored locations."""
    u = state.universe
    out = {u.atom(i) for i in range(state.input.n)}
    out.add(u.empty)
    out.add(u.one)
    for loc, value in state.store.items():
        out.add(value)
        out.update(loc.args)
    return frozenset(out)


def active_objects(state: State) -> frozenset[int]:
    u = state.universe
    out: set[int] = set()
    for c in critical_objects(state):
        if not u.is_const(c):
            out |= u.transitive_closure(c)
        else:
            out.add(c)
    return frozenset(out)


def _verdict_of_halted(state: State) -> Outcome:
    u = state.universe
    return Outcome.ACCEPTED if state.output() == u.one else Outcome.REJECTED


@dataclass
class RunResult:
    verdict: RunVerdict
    states: list[State]
    deltas: list[frozenset]

    @property
    def final(self) -> State:
        return self.states[-1]

    @property
    def outcome(self) -> Outcome:
        return self.verdict.outcome


def _pick(deltas: frozenset, mode: SchedulingMode, u: Universe) -> frozenset:
    if len(deltas) == 1:
        return next(iter(deltas))
    return min(deltas, key=lambda d: update_set_key(d, u))


def run(program: Program, inp: InputStructure, bounds: Bounds,
        mode: SchedulingMode = SchedulingMode.LEAST_ATOM, *,
        universe: Universe | None = None, cap: int = DEFAULT_CAP):
    """Run ``program`` on ``inp``.

    Returns a `RunResult` for the single-run modes and a `RunTree` for
    `SchedulingMode.EXHAUSTIVE`.
    """
    if mode is SchedulingMode.EXHAUSTIVE:
        return explore(program, inp, bounds, universe=universe, cap=cap)
    n = inp.n
    max_steps, max_active = bounds.steps(n), bounds.active(n)
    state = initial_state(inp, program.signature, universe or default_universe())
    states, deltas = [state], []
    seen = set(active_objects(state))

    def verdict(outcome):
        return RunResult(RunVerdict(outcome, len(deltas), len(seen)), states, deltas)

    while True:
        if len(seen) > max_active:
            return verdict(Outcome.ACTIVE_BOUND_EXCEEDED)
        if state.halted():
            return verdict(_verdict_of_halted(state))
        if len(deltas) >= bounds.step_cap:
            return verdict(Outcome.CAP_EXCEEDED)
        if len(deltas) >= max_steps:
            return verdict(Outcome.STEP_BOUND_EXCEEDED)
        options = delta_sets(state, {}, program.rule, least_atom=mode is SchedulingMode.LEAST_ATOM, cap=cap)
        if not options:
            return verdict(Outcome.STUCK)
        delta = _pick(options, mode, state.universe)
        state = apply(state, delta)
        states.append(state)
        deltas.append(delta)
        current = active_objects(state)
        if bounds.per_state_active:
            seen = set(current)
        else:
            seen |= current


# -- exhaustive exploration --------------------------------------------------

@dataclass
class TreeNode:
    id: int
    state: State
    depth: int
    active: frozenset[int]
    parent: int | None
    deltas: frozenset = frozenset()
    children: list[tuple[frozenset, int]] = field(default_factory=list)
    outcome: Outcome | None = None  # set on leaves

    @property
    def is_leaf(self) -> bool:
        return self.outcome is not None


@dataclass
class RunTree:
    """Reachable states of a machine on one input, with the update sets between them.

    Nodes are deduplicated by state; a node's depth is the length of the
    shortest run reaching it (breadth-first discovery).
    """

    program: Program
    input: InputStructure
    nodes: list[TreeNode]
    verdicts: Counter
    complete: bool
    has_cycle: bool = False

    @property
    def root(self) -> TreeNode:
        return self.nodes[0]

    def leaves(self) -> list[TreeNode]:
        return [node for node in self.nodes if node.is_leaf]

    def layer(self, depth: int) -> list[TreeNode]:
        return [node for node in self.nodes if node.depth == depth]

    def layer_update_sets(self, depth: int) -> set[frozenset]:
        """Update sets applied to states at the given depth."""
        out = set()
        for node in self.layer(depth):
            if not node.is_leaf:
                out |= node.deltas
        return out

    @property
    def max_depth(self) -> int:
        return max(node.depth for node in self.nodes)

    def outputs(self) -> set[int]:
        return {node.state.output() for node in self.leaves() if node.state.halted()}


def explore(program: Program, inp: InputStructure, bounds: Bounds, *,
            universe: Universe | None = None, cap: int = DEFAULT_CAP,
            node_cap: int = 200_000) -> RunTree:
    n = inp.n
    max_steps, max_active = bounds.steps(n), bounds.active(n)
    s0 = initial_state(inp, program.signature, universe or default_universe())
    root = TreeNode(0, s0, 0, active_objects(s0), None)
    nodes = [root]
    index = {s0: 0}
    verdicts: Counter = Counter()
    queue = deque([root])
    complete = True
    while queue:
        node = queue.popleft()
        state = node.state
        if len(node.active) > max_active:
            node.outcome = Outcome.ACTIVE_BOUND_EXCEEDED
        elif state.halted():
            node.outcome = _verdict_of_halted(state)
        elif node.depth >= bounds.step_cap:
            node.outcome = Outcome.CAP_EXCEEDED
        elif node.depth >= max_steps:
            node.outcome = Outcome.STEP_BOUND_EXCEEDED
        if node.outcome is not None:
            verdicts[node.outcome] += 1
            continue
        node.deltas = delta_sets(state, {}, program.rule, cap=cap)
        if not node.deltas:
            node.outcome = Outcome.STUCK
            verdicts[node.outcome] += 1
            continue
        for delta in sorted(node.deltas, key=lambda d: update_set_key(d, state.universe)):
            succ = apply(state, delta)
            child = index.get(succ)
            if child is None:
                if len(nodes) >= node_cap:
                    complete = False
                    verdicts[Outcome.CAP_EXCEEDED] += 1
                    continue
                current = active_objects(succ)
                active = current if bounds.per_state_active else node.active | current
                new = TreeNode(len(nodes), succ, node.depth + 1, active, node.id)
                nodes.append(new)
                index[succ] = new.id
                queue.append(new)
                child = new.id
            node.children.append((delta, child))
    tree = RunTree(program, inp, nodes, verdicts, complete)
    tree.has_cycle = _has_cycle(tree)
    if tree.has_cycle:
        # Runs around a cycle never halt; within bounds they end at p(n).
        verdicts[Outcome.STEP_BOUND_EXCEEDED] += 1
    return tree


def _has_cycle(tree: RunTree) -> bool:
    WHITE, GREY, BLACK = 0, 1, 2
    color = [WHITE] * len(tree.nodes)
    for start in range(len(tree.nodes)):
        if color[start] != WHITE:
            continue
        stack = [(start, iter(tree.nodes[start].children))]
        color[start] = GREY
        while stack:
            nid, it = stack[-1]
            advanced = False
            for _, child in it:
                if color[child] == GREY:
                    return True
                if color[child] == WHITE:
                    color[child] = GREY
                    stack.append((child, iter(tree.nodes[child].children)))
                    advanced = True
                    break
            if not advanced:
                color[nid] = BLACK
                stack.pop()
    return False


# -- trace export --------------------------------------------------------------

@dataclass(frozen=True)
class TraceEntry:
    step: int
    fname: str
    args: tuple[int, ...]
    value: int
    update_set: int | None  # index j of the update set applied to S_j, or None


def export_trace(result: RunResult) -> list[TraceEntry]:
    """For every step i and location with non-∅ value y in S_i, one entry.

    The update-set id is ``i-1`` when the update set applied to S_{i-1}
    contains the update, else ``None``.
    """
    entries = []
    for i, state in enumerate(result.states):
        written = result.deltas[i - 1] if i > 0 else frozenset()
        u = state.universe
        for loc, value in sorted(state.store.items(),
                                 key=lambda kv: (kv[0].fname, tuple(u.sort_key(a) for a in kv[0].args))):
            z = i - 1 if Update(loc, value) in written else None
            entries.append(TraceEntry(i, loc.fname, loc.args, value, z))
    return entries


def format_trace(entries: Iterable[TraceEntry], universe: Universe) -> str:
    lines = []
    for e in entries:
        args = "(" + ",".join(universe.format(a) for a in e.args) + ")"
        z = "-" if e.update_set is None else str(e.update_set)
        lines.append(f"{e.step}\t{e.fname}\t{args}\t{universe.format(e.value)}\t{z}")
    return "\n".join(lines) + ("\n" if lines else "")


def describe_deltas(deltas: Iterable[frozenset], universe: Universe) -> list[str]:
    return [format_update_set(d, universe) for d in sorted(deltas, key=lambda d: update_set_key(d, universe))]
