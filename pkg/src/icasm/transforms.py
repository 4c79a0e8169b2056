"""Program transformations: enum desugaring and the time-explicit counter."""
from __future__ import annotations

from .errors import ParseError
from .parser import parse
from .syntax import (
    App, Assign, Choose, Compr, Forall, If, Let, Num, Par, Program, Skip, Var,
)

__all__ = ["desugar", "load_program", "make_time_explicit", "map_terms"]

COUNTER = "ct"


def map_terms(node, fn):
    """Rebuild ``node`` bottom-up, passing every term through ``fn``."""
    if isinstance(node, (Var, Num)):
        return fn(node)
    if isinstance(node, App):
        return fn(App(node.fname, tuple(map_terms(a, fn) for a in node.args)))
    if isinstance(node, Compr):
        return fn(Compr(node.var, map_terms(node.body, fn), map_terms(node.range, fn),
                        map_terms(node.guard, fn)))
    if isinstance(node, Skip):
        return node
    if isinstance(node, Assign):
        return Assign(node.fname, tuple(map_terms(a, fn) for a in node.args), map_terms(node.rhs, fn))
    if isinstance(node, If):
        return If(map_terms(node.cond, fn), map_terms(node.then, fn), map_terms(node.else_, fn))
    if isinstance(node, Forall):
        return Forall(node.var, map_terms(node.range, fn), map_terms(node.body, fn))
    if isinstance(node, Choose):
        return Choose(node.var, map_terms(node.range, fn), map_terms(node.body, fn))
    if isinstance(node, Let):
        return Let(node.var, map_terms(node.binding, fn), map_terms(node.body, fn))
    if isinstance(node, Par):
        return Par(tuple(map_terms(r, fn) for r in node.rules))
    raise TypeError(f"not a term or rule: {node!r}")


def desugar(p: Program) -> Program:
    """Replace enum names by distinct numerals, in declaration order from 0.

    ``par`` and ``let`` stay native; the evaluator gives them their
    forall-union and binding semantics.
    """
    if not p.enums:
        return p
    values = dict(p.enums)

    def fn(t):
        if isinstance(t, App) and not t.args and t.fname in values:
            return Num(values[t.fname])
        return t

    return Program(p.signature, map_terms(p.rule, fn), p.enums, p.name)


def load_program(text: str, name: str = "") -> Program:
    p = desugar(parse(text))
    return Program(p.signature, p.rule, p.enums, name)


def make_time_explicit(p: Program) -> Program:
    """Run ``ct := ct ∪ {ct}`` alongside the rule while Halt is false."""
    if p.signature.dynamic(COUNTER) is not None or p.signature.input_arity(COUNTER) is not None:
        raise ParseError(f"name clash: program already uses {COUNTER!r}")
    ct = App(COUNTER)
    tick = If(
        App("=", (App("Halt"), App("false"))),
        Assign(COUNTER, (), App("Union", (App("Pair", (ct, App("Pair", (ct, ct)))),))),
    )
    sig = p.signature.with_dynamic(COUNTER, 0)
    return Program(sig, Par((p.rule, tick)), p.enums, p.name)
