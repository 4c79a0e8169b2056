"""Recursive-descent parser for machine programs.

A program is an optional ``sig ... endsig`` header followed by one rule::

    sig
      input E/2;
      dyn mode/0, set/0, parity/0 rel;
      enum init, progress;
      def diff(X, Y) = { y | y in X, not (y in Y) };
    endsig
    par ... endpar

``def`` introduces a term macro, expanded at parse time.  Integer
literals denote von Neumann numerals; ``true``/``false`` are 1 and 0.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .structure import Signature
from .syntax import (
    BACKGROUND, App, Assign, Choose, Compr, Forall, If, Let, Num, Par, Program, Skip, Term, Var,
    free_vars, substitute,
)

__all__ = ["parse", "parse_term", "parse_rule"]

KEYWORDS = frozenset("""
    sig endsig input dyn rel enum def
    skip if then else endif forall choose in do enddo par endpar let endlet
    and or not
""".split())

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|->|!=|[(){}|,;=/])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # 'int' | 'name' | 'kw' | 'op' | 'eof'
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "name":
            word = m.group()
            tokens.append(Token("kw" if word in KEYWORDS else "name", word, line, col))
        elif kind in ("int", "op"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class _Macro:
    params: tuple[str, ...]
    body: Term


class _Parser:
    def __init__(self, text: str, signature: Signature | None = None,
                 enums: dict[str, int] | None = None):
        self.tokens = tokenize(text)
        self.i = 0
        self.inputs: dict[str, int] = {}
        self.dynamics: dict[str, tuple[int, bool]] = {"Output": (0, False), "Halt": (0, True)}
        self.enums: dict[str, int] = dict(enums or {})
        self.macros: dict[str, _Macro] = {}
        self.scope: list[str] = []
        if signature is not None:
            self.inputs = dict(signature.inputs)
            self.dynamics = {n: (k, rel) for n, k, rel in signature.dynamics}

    # -- token helpers --------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("kw", "op")

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            shown = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}")
        return self.advance()

    def expect_name(self) -> Token:
        if self.tok.kind != "name":
            shown = self.tok.text or "end of input"
            raise self.error(f"expected a name, found {shown!r}")
        return self.advance()

    def expect_int(self) -> int:
        if self.tok.kind != "int":
            raise self.error("expected an integer")
        return int(self.advance().text)

    # -- header ---------------------------------------------------------

    def program(self) -> Program:
        if self.at("sig"):
            self.advance()
            while not self.at("endsig"):
                self.declaration()
            self.advance()
        rule = self.rule()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r} after the top rule")
        fv = free_vars(rule)
        if fv:
            raise ParseError(f"top rule not closed: free variables {', '.join(sorted(fv))}")
        sig = Signature(
            tuple(self.inputs.items()),
            tuple((n, k, rel) for n, (k, rel) in self.dynamics.items()),
        )
        return Program(sig, rule, tuple(self.enums.items()))

    def _declare(self, tok: Token):
        name = tok.text
        if (name in self.inputs or name in self.dynamics or name in self.enums
                or name in self.macros or name in BACKGROUND):
            raise self.error(f"name {name!r} declared twice", tok)

    def declaration(self):
        if self.at("input"):
            self.advance()
            while True:
                tok = self.expect_name()
                self._declare(tok)
                self.expect("/")
                self.inputs[tok.text] = self.expect_int()
                if not self.at(","):
                    break
                self.advance()
            self.expect(";")
        elif self.at("dyn"):
            self.advance()
            while True:
                tok = self.expect_name()
                if tok.text not in ("Output", "Halt"):
                    self._declare(tok)
                self.expect("/")
                arity = self.expect_int()
                rel = False
                if self.at("rel"):
                    self.advance()
                    rel = True
                self.dynamics[tok.text] = (arity, rel)
                if not self.at(","):
                    break
                self.advance()
            self.expect(";")
        elif self.at("enum"):
            self.advance()
            while True:
                tok = self.expect_name()
                self._declare(tok)
                self.enums[tok.text] = len(self.enums)
                if not self.at(","):
                    break
                self.advance()
            self.expect(";")
        elif self.at("def"):
            self.advance()
            tok = self.expect_name()
            self._declare(tok)
            params: list[str] = []
            if self.at("("):
                self.advance()
                while True:
                    params.append(self.expect_name().text)
                    if not self.at(","):
                        break
                    self.advance()
                self.expect(")")
            self.expect("=")
            saved, self.scope = self.scope, list(params)
            body = self.term()
            self.scope = saved
            stray = free_vars(body) - set(params)
            if stray:
                raise self.error(f"macro {tok.text} has free variables {', '.join(sorted(stray))}", tok)
            self.macros[tok.text] = _Macro(tuple(params), body)
            self.expect(";")
        else:
            raise self.error(f"expected a declaration, found {self.tok.text!r}")

    # -- rules ----------------------------------------------------------

    def rule(self):
        tok = self.tok
        if self.at("skip"):
            self.advance()
            return Skip()
        if self.at("if"):
            self.advance()
            cond = self.term()
            self.expect("then")
            then = self.rule()
            else_ = Skip()
            if self.at("else"):
                self.advance()
                else_ = self.rule()
            self.expect("endif")
            return If(cond, then, else_)
        if self.at("forall") or self.at("choose"):
            kind = self.advance().text
            var = self.expect_name().text
            self.expect("in")
            rng = self.term()
            self.expect("do")
            body = self.bound(var, self.rule)
            self.expect("enddo")
            return (Forall if kind == "forall" else Choose)(var, rng, body)
        if self.at("par"):
            self.advance()
            rules = []
            while not self.at("endpar"):
                if self.tok.kind == "eof":
                    raise self.error("unterminated par block", tok)
                rules.append(self.rule())
            self.advance()
            return Par(tuple(rules))
        if self.at("let"):
            self.advance()
            var = self.expect_name().text
            self.expect("=")
            binding = self.term(allow_in=False)
            self.expect("in")
            body = self.bound(var, self.rule)
            self.expect("endlet")
            return Let(var, binding, body)
        if tok.kind == "name":
            return self.assignment()
        raise self.error(f"expected a rule, found {tok.text or 'end of input'!r}")

    def assignment(self):
        tok = self.advance()
        name = tok.text
        decl = self.dynamics.get(name)
        if decl is None:
            if name in self.inputs:
                raise self.error(f"input name {name!r} cannot be assigned", tok)
            raise self.error(f"unknown symbol {name!r}: assignment target must be a dynamic name", tok)
        args: tuple = ()
        if self.at("("):
            args = self.arguments()
        if len(args) != decl[0]:
            raise self.error(f"{name} expects {decl[0]} arguments, got {len(args)}", tok)
        self.expect(":=")
        return Assign(name, args, self.term())

    def bound(self, var: str, parse_fn, *args):
        self.scope.append(var)
        try:
            return parse_fn(*args)
        finally:
            self.scope.pop()

    # -- terms ----------------------------------------------------------

    def term(self, allow_in: bool = True):
        left = self.disjunction(allow_in)
        if self.at("->"):
            self.advance()
            return App("->", (left, self.term(allow_in)))
        return left

    def disjunction(self, allow_in):
        left = self.conjunction(allow_in)
        while self.at("or"):
            self.advance()
            left = App("or", (left, self.conjunction(allow_in)))
        return left

    def conjunction(self, allow_in):
        left = self.negation(allow_in)
        while self.at("and"):
            self.advance()
            left = App("and", (left, self.negation(allow_in)))
        return left

    def negation(self, allow_in):
        if self.at("not"):
            self.advance()
            return App("not", (self.negation(allow_in),))
        return self.comparison(allow_in)

    def comparison(self, allow_in):
        left = self.primary()
        if self.at("="):
            self.advance()
            return App("=", (left, self.primary()))
        if self.at("!="):
            self.advance()
            return App("not", (App("=", (left, self.primary())),))
        if allow_in and self.at("in"):
            self.advance()
            return App("in", (left, self.primary()))
        return left

    def arguments(self) -> tuple:
        self.expect("(")
        args = []
        if not self.at(")"):
            while True:
                args.append(self.term())
                if not self.at(","):
                    break
                self.advance()
        self.expect(")")
        return tuple(args)

    def primary(self):
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return Num(int(tok.text))
        if self.at("("):
            self.advance()
            t = self.term()
            self.expect(")")
            return t
        if self.at("{"):
            self.advance()
            start = self.i
            # The body mentions the bound variable, which is only known after '|'.
            depth = 0
            while True:
                t = self.tok
                if t.kind == "eof":
                    raise self.error("unterminated comprehension", tok)
                if t.text in ("{", "(") and t.kind == "op":
                    depth += 1
                elif t.text in ("}", ")") and t.kind == "op":
                    depth -= 1
                elif t.text == "|" and t.kind == "op" and depth == 0:
                    break
                self.i += 1
            self.advance()
            var = self.expect_name().text
            self.expect("in")
            rng = self.term()
            after_range = self.i
            self.i = start
            body = self.bound(var, self.term)
            self.expect("|")
            self.i = after_range
            guard = App("true")
            if self.at(","):
                self.advance()
                guard = self.bound(var, self.term)
            self.expect("}")
            return Compr(var, body, rng, guard)
        if tok.kind == "name":
            return self.name_term()
        raise self.error(f"expected a term, found {tok.text or 'end of input'!r}")

    def name_term(self):
        tok = self.advance()
        name = tok.text
        has_args = self.at("(")
        if name in self.scope and not has_args:
            return Var(name)
        if name in self.macros:
            macro = self.macros[name]
            args = self.arguments() if has_args else ()
            if len(args) != len(macro.params):
                raise self.error(f"macro {name} expects {len(macro.params)} arguments, got {len(args)}", tok)
            return substitute(macro.body, dict(zip(macro.params, args)))
        arity = None
        if name in self.enums:
            arity = 0
        elif name in BACKGROUND:
            arity = BACKGROUND[name]
        elif name in self.inputs:
            arity = self.inputs[name]
        elif name in self.dynamics:
            arity = self.dynamics[name][0]
        elif name.startswith("c_") and name[2:] in self.dynamics:
            arity = 0
        if arity is None:
            if has_args:
                raise self.error(f"unknown symbol {name!r}", tok)
            return Var(name)
        args = self.arguments() if has_args else ()
        if len(args) != arity:
            raise self.error(f"{name} expects {arity} arguments, got {len(args)}", tok)
        return App(name, args)


def parse(text: str) -> Program:
    """Parse a program text; enum names are left unresolved (see `desugar`)."""
    return _Parser(text).program()


def parse_term(text: str, signature: Signature | None = None, bound: tuple[str, ...] = ()) -> Term:
    p = _Parser(text, signature)
    p.scope = list(bound)
    t = p.term()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return t


def parse_rule(text: str, signature: Signature | None = None):
    p = _Parser(text, signature)
    r = p.rule()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    return r
