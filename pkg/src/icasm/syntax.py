"""Abstract syntax of terms and rules, with printing and free variables."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Union

from .structure import Signature

__all__ = [
    "Var", "App", "Compr", "Num", "Term",
    "Skip", "Assign", "If", "Forall", "Choose", "Par", "Let", "Rule",
    "Program",
    "BACKGROUND",
    "free_vars",
    "substitute",
    "print_term",
    "print_rule",
    "print_program",
]


# -- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    fname: str
    args: tuple = ()


@dataclass(frozen=True)
class Compr:
    """``{ body | var in range, guard }``."""

    var: str
    body: "Term"
    range: "Term"
    guard: "Term"


@dataclass(frozen=True)
class Num:
    """The von Neumann numeral ``value``."""

    value: int


Term = Union[Var, App, Compr, Num]

# name -> arity; all of these are interpreted by the evaluator.
BACKGROUND = {
    "=": 2,
    "in": 2,
    "and": 2,
    "or": 2,
    "not": 1,
    "->": 2,
    "true": 0,
    "false": 0,
    "empty": 0,
    "Atoms": 0,
    "Union": 1,
    "TheUnique": 1,
    "Pair": 2,
}

BOOLEAN_OPS = frozenset({"=", "in", "and", "or", "not", "->", "true", "false"})


# -- rules -----------------------------------------------------------------

@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Assign:
    fname: str
    args: tuple
    rhs: Term


@dataclass(frozen=True)
class If:
    cond: Term
    then: "Rule"
    else_: "Rule" = Skip()


@dataclass(frozen=True)
class Forall:
    var: str
    range: Term
    body: "Rule"


@dataclass(frozen=True)
class Choose:
    """Choice among the atoms of ``range``."""

    var: str
    range: Term
    body: "Rule"


@dataclass(frozen=True)
class Par:
    rules: tuple


@dataclass(frozen=True)
class Let:
    var: str
    binding: Term
    body: "Rule"


Rule = Union[Skip, Assign, If, Forall, Choose, Par, Let]


@dataclass(frozen=True)
class Program:
    signature: Signature
    rule: Rule
    enums: tuple[tuple[str, int], ...] = ()
    name: str = field(default="", compare=False)

    def enum_value(self, name: str) -> int:
        return dict(self.enums)[name]


# -- free variables ----------------------------------------------------------

def free_vars(node) -> frozenset[str]:
    if isinstance(node, Var):
        return frozenset({node.name})
    if isinstance(node, App):
        return frozenset().union(*(free_vars(a) for a in node.args))
    if isinstance(node, Num) or isinstance(node, Skip):
        return frozenset()
    if isinstance(node, Compr):
        inner = free_vars(node.body) | free_vars(node.range) | free_vars(node.guard)
        return inner - {node.var}
    if isinstance(node, Assign):
        return frozenset().union(free_vars(node.rhs), *(free_vars(a) for a in node.args))
    if isinstance(node, If):
        return free_vars(node.cond) | free_vars(node.then) | free_vars(node.else_)
    if isinstance(node, (Forall, Choose)):
        return free_vars(node.range) | (free_vars(node.body) - {node.var})
    if isinstance(node, Let):
        return free_vars(node.binding) | (free_vars(node.body) - {node.var})
    if isinstance(node, Par):
        return frozenset().union(*(free_vars(r) for r in node.rules))
    raise TypeError(f"not a term or rule: {node!r}")


_fresh = itertools.count()


def _fresh_name(base: str, avoid: frozenset[str]) -> str:
    while True:
        name = f"{base.rstrip('_0123456789') or 'v'}_{next(_fresh)}"
        if name not in avoid:
            return name


def substitute(term: Term, mapping: dict[str, Term]) -> Term:
    """Capture-avoiding substitution of terms for free variables."""
    if not mapping:
        return term
    if isinstance(term, Var):
        return mapping.get(term.name, term)
    if isinstance(term, Num):
        return term
    if isinstance(term, App):
        return App(term.fname, tuple(substitute(a, mapping) for a in term.args))
    if isinstance(term, Compr):
        rng = substitute(term.range, mapping)
        inner = {k: v for k, v in mapping.items() if k != term.var}
        incoming = frozenset().union(*(free_vars(v) for v in inner.values())) if inner else frozenset()
        var, body, guard = term.var, term.body, term.guard
        if var in incoming:
            new = _fresh_name(var, incoming | free_vars(body) | free_vars(guard))
            body = substitute(body, {var: Var(new)})
            guard = substitute(guard, {var: Var(new)})
            var = new
        return Compr(var, substitute(body, inner), rng, substitute(guard, inner))
    raise TypeError(f"not a term: {term!r}")


# -- printing ----------------------------------------------------------------

_INFIX = {"=": "=", "in": "in", "and": "and", "or": "or", "->": "->"}


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Num):
        return str(t.value)
    if isinstance(t, Compr):
        return (f"{{ {print_term(t.body)} | {t.var} in {print_term(t.range)}, "
                f"{print_term(t.guard)} }}")
    if t.fname in _INFIX and len(t.args) == 2:
        return f"({print_term(t.args[0])} {_INFIX[t.fname]} {print_term(t.args[1])})"
    if t.fname == "not":
        return f"(not {print_term(t.args[0])})"
    if not t.args:
        return t.fname
    return f"{t.fname}({', '.join(print_term(a) for a in t.args)})"


def print_rule(r: Rule, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(r, Skip):
        return pad + "skip"
    if isinstance(r, Assign):
        target = r.fname + (f"({', '.join(print_term(a) for a in r.args)})" if r.args else "")
        return f"{pad}{target} := {print_term(r.rhs)}"
    if isinstance(r, If):
        lines = [f"{pad}if {print_term(r.cond)} then", print_rule(r.then, indent + 1)]
        if not isinstance(r.else_, Skip):
            lines += [pad + "else", print_rule(r.else_, indent + 1)]
        lines.append(pad + "endif")
        return "\n".join(lines)
    if isinstance(r, (Forall, Choose)):
        kw = "forall" if isinstance(r, Forall) else "choose"
        return "\n".join([
            f"{pad}{kw} {r.var} in {print_term(r.range)} do",
            print_rule(r.body, indent + 1),
            pad + "enddo",
        ])
    if isinstance(r, Par):
        return "\n".join([pad + "par", *(print_rule(x, indent + 1) for x in r.rules), pad + "endpar"])
    if isinstance(r, Let):
        return "\n".join([
            f"{pad}let {r.var} = {print_term(r.binding)} in",
            print_rule(r.body, indent + 1),
            pad + "endlet",
        ])
    raise TypeError(f"not a rule: {r!r}")


def print_program(p: Program) -> str:
    sig = p.signature
    lines = ["sig"]
    if sig.inputs:
        lines.append("  input " + ", ".join(f"{n}/{k}" for n, k in sig.inputs) + ";")
    lines.append("  dyn " + ", ".join(f"{n}/{k}{' rel' if rel else ''}" for n, k, rel in sig.dynamics) + ";")
    if p.enums:
        lines.append("  enum " + ", ".join(n for n, _ in sorted(p.enums, key=lambda e: e[1])) + ";")
    lines.append("endsig")
    lines.append(print_rule(p.rule))
    return "\n".join(lines) + "\n"
