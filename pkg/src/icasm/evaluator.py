"""Term evaluation and the update-set semantics of rules.

`delta_sets` computes the set of update sets a rule yields in a state for
a variable assignment.  Update sets are frozensets of `Update`, so the
result is a frozenset of frozensets and set equality is exact.
"""
from __future__ import annotations

from typing import Iterable, Mapping, NamedTuple

from .errors import EvaluationError, ExplosionError, HFError
from .hf import Permutation, Universe, default_universe
from .structure import Location, State
from .syntax import App, Assign, Choose, Compr, Forall, If, Let, Num, Par, Skip, Var, free_vars

__all__ = [
    "DEFAULT_CAP",
    "Update",
    "UpdateSet",
    "Evaluator",
    "eval_term",
    "delta_sets",
    "consistent",
    "apply",
    "perm_update_set",
    "format_update_set",
    "update_set_key",
]

DEFAULT_CAP = 10**6


class Update(NamedTuple):
    loc: Location
    value: int


UpdateSet = frozenset  # of Update

_EMPTY_DELTA: frozenset = frozenset()
_SKIP: frozenset = frozenset({_EMPTY_DELTA})

# id(term) -> (term, free variables); the term is kept alive so ids are not reused.
_FV_CACHE: dict[int, tuple[object, tuple[str, ...]]] = {}


def _fv(term) -> tuple[str, ...]:
    hit = _FV_CACHE.get(id(term))
    if hit is not None and hit[0] is term:
        return hit[1]
    fv = tuple(sorted(free_vars(term)))
    _FV_CACHE[id(term)] = (term, fv)
    return fv


class Evaluator:
    """Evaluates terms and rules in one fixed state.

    Term values are memoised on the values of their free variables, which
    is sound because evaluation is a pure function of state and bindings.
    ``least_atom`` restricts every choice to the smallest available atom.
    """

    def __init__(self, state: State, *, least_atom: bool = False, cap: int = DEFAULT_CAP):
        self.state = state
        self.u: Universe = state.universe
        self.sig = state.signature
        self.inp = state.input
        self.least_atom = least_atom
        self.cap = cap
        self._memo: dict = {}
        self._atoms = None

    # -- terms ------------------------------------------------------------

    def atoms(self) -> int:
        if self._atoms is None:
            self._atoms = self.u.set_of(self.u.atom(i) for i in range(self.inp.n))
        return self._atoms

    def term(self, t, env: Mapping[str, int]) -> int:
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise EvaluationError(f"unbound variable {t.name!r}") from None
        fv = _fv(t)
        try:
            key = (id(t), tuple(env[v] for v in fv))
        except KeyError as exc:
            raise EvaluationError(f"unbound variable {exc.args[0]!r}") from None
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        value = self._term(t, env)
        self._memo[key] = value
        return value

    def _bool(self, b: bool) -> int:
        return self.u.one if b else self.u.empty

    def _term(self, t, env) -> int:
        u = self.u
        if isinstance(t, Num):
            return u.numeral(t.value)
        if isinstance(t, Compr):
            rng = self.term(t.range, env)
            out = []
            trivial_guard = isinstance(t.guard, App) and t.guard.fname == "true"
            inner = dict(env)
            for m in u.members(rng):
                inner[t.var] = m
                if trivial_guard or self.term(t.guard, inner) == u.one:
                    out.append(self.term(t.body, inner))
            try:
                return u.set_of(out)
            except HFError as exc:
                raise EvaluationError(str(exc)) from None
        if not isinstance(t, App):
            raise EvaluationError(f"not a term: {t!r}")
        name = t.fname
        args = [self.term(a, env) for a in t.args]
        if name == "=":
            return self._bool(args[0] == args[1])
        if name == "in":
            return self._bool(u.contains(args[1], args[0]))
        if name in ("and", "or", "->", "not"):
            if not all(u.is_boolean(a) for a in args):
                return u.empty
            vals = [a == u.one for a in args]
            if name == "and":
                return self._bool(vals[0] and vals[1])
            if name == "or":
                return self._bool(vals[0] or vals[1])
            if name == "->":
                return self._bool(not vals[0] or vals[1])
            return self._bool(not vals[0])
        if name == "true":
            return u.one
        if name in ("false", "empty"):
            return u.empty
        if name == "Atoms":
            return self.atoms()
        if name == "Union":
            members = set()
            for m in u.members(args[0]):
                members.update(u.members(m))
            return u.set_of(members)
        if name == "TheUnique":
            members = u.members(args[0])
            return members[0] if len(members) == 1 else u.empty
        if name == "Pair":
            try:
                return u.set_of(args)
            except HFError as exc:
                raise EvaluationError(str(exc)) from None
        arity = self.sig.input_arity(name)
        if arity is not None:
            if not all(u.is_atom(a) for a in args):
                return u.empty
            return self._bool(self.inp.holds(name, tuple(u.atom_id(a) for a in args)))
        decl = self.sig.dynamic(name)
        if decl is not None:
            return self.state.get(name, *args)
        if name.startswith("c_") and self.sig.dynamic(name[2:]) is not None:
            return u.const(name[2:])
        raise EvaluationError(f"unknown function name {name!r} (enum names need desugaring)")

    # -- rules ------------------------------------------------------------

    def rule(self, r, env: Mapping[str, int]) -> frozenset:
        u = self.u
        if isinstance(r, Skip):
            return _SKIP
        if isinstance(r, Assign):
            decl = self.sig.dynamic(r.fname)
            if decl is None:
                raise EvaluationError(f"assignment to non-dynamic name {r.fname!r}")
            if decl[0] != len(r.args):
                raise EvaluationError(f"{r.fname} expects {decl[0]} arguments")
            args = tuple(self.term(a, env) for a in r.args)
            value = self.term(r.rhs, env)
            if decl[1] and not u.is_boolean(value):
                raise EvaluationError(f"relational {r.fname} assigned non-boolean {u.format(value)}")
            return frozenset({frozenset({Update(Location(r.fname, args), value)})})
        if isinstance(r, If):
            branch = r.then if self.term(r.cond, env) == u.one else r.else_
            return self.rule(branch, env)
        if isinstance(r, Forall):
            rng = self.term(r.range, env)
            inner = dict(env)
            parts = []
            for m in u.members(rng):
                inner[r.var] = m
                parts.append(self.rule(r.body, inner))
            return self.product(parts)
        if isinstance(r, Par):
            return self.product([self.rule(x, env) for x in r.rules])
        if isinstance(r, Choose):
            rng = self.term(r.range, env)
            candidates = [m for m in u.members(rng) if u.is_atom(m)]
            if self.least_atom and candidates:
                candidates = [min(candidates, key=u.atom_id)]
            inner = dict(env)
            out: set = set()
            for a in candidates:
                inner[r.var] = a
                out |= self.rule(r.body, inner)
                if len(out) > self.cap:
                    raise ExplosionError(f"more than {self.cap} update sets")
            return frozenset(out)
        if isinstance(r, Let):
            value = self.term(r.binding, env)
            inner = dict(env)
            inner[r.var] = value
            return self.rule(r.body, inner)
        raise EvaluationError(f"not a rule: {r!r}")

    def product(self, parts: list[frozenset]) -> frozenset:
        """All unions picking one update set from each part."""
        acc = _SKIP
        for part in parts:
            if not part:
                return frozenset()
            if len(part) == 1:
                (only,) = part
                if only:
                    acc = frozenset(a | only for a in acc)
                continue
            if len(acc) * len(part) > self.cap:
                raise ExplosionError(f"forall product exceeds {self.cap} update sets")
            acc = frozenset(a | b for a in acc for b in part)
        return acc


def eval_term(state: State, env: Mapping[str, int], t) -> int:
    return Evaluator(state).term(t, env)


def delta_sets(state: State, env: Mapping[str, int] | None, r, *, least_atom: bool = False,
               cap: int = DEFAULT_CAP) -> frozenset:
    return Evaluator(state, least_atom=least_atom, cap=cap).rule(r, env or {})


def consistent(delta: Iterable[Update]) -> bool:
    seen: dict[Location, int] = {}
    for loc, value in delta:
        if seen.setdefault(loc, value) != value:
            return False
    return True


def apply(state: State, delta: Iterable[Update]) -> State:
    """S + Δ; an inconsistent Δ leaves the state unchanged."""
    delta = tuple(delta)
    if not delta or not consistent(delta):
        return state
    return state.updated(delta)


def perm_update_set(sigma: Permutation, delta: Iterable[Update], universe: Universe | None = None,
                    memo: dict | None = None) -> frozenset:
    u = universe or default_universe()
    memo = {} if memo is None else memo
    return frozenset(
        Update(Location(loc.fname, tuple(u.permute(sigma, a, memo) for a in loc.args)),
               u.permute(sigma, value, memo))
        for loc, value in delta
    )


def update_set_key(delta: Iterable[Update], universe: Universe) -> tuple:
    """A total, universe-independent sort key for update sets."""
    return tuple(sorted(
        (loc.fname, tuple(universe.sort_key(a) for a in loc.args), universe.sort_key(v))
        for loc, v in delta
    ))


def format_update_set(delta: Iterable[Update], universe: Universe) -> str:
    items = sorted(delta, key=lambda up: (up.loc.fname, tuple(universe.sort_key(a) for a in up.loc.args),
                                          universe.sort_key(up.value)))
    parts = []
    for loc, v in items:
        args = ",".join(universe.format(a) for a in loc.args)
        parts.append(f"(({loc.fname},({args})),{universe.format(v)})")
    return "{" + ",".join(parts) + "}"
