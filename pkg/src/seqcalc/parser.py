"""Recursive-descent parser for formulas, sequents, and corpus files.

Concrete syntax, loosest to tightest binding:

    imp   := or ("=>" imp)?            right associative
    or    := and ("|" and)*            left associative
    and   := unary ("&" unary)*        left associative
    unary := "~" unary
           | "forall" ident "." imp
           | "exists" ident "." imp
           | atom
    atom  := "top" | "bot" | ident ("(" term ("," term)* ")")? | "(" imp ")"
    term  := ident ("(" term ("," term)* ")")?

`~A` is sugar for `A => bot`.  Identifiers are lowercase; variables exist
only under a binder, so an unbound identifier is a constant (or a predicate,
in formula position).  Capitalized identifiers are rejected: that spelling
is reserved for printed metavariables.  A sequent is written
`ante |- succ` with comma-separated, possibly empty sides.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    BOT,
    TOP,
    And,
    App,
    Atom,
    Bound,
    Const,
    Exists,
    Forall,
    Formula,
    Imp,
    Or,
    Sequent,
    Term,
    neg,
)


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan, source: str | None = None):
        self.message = message
        self.span = span
        self.source = source
        super().__init__(self._render())

    def _render(self) -> str:
        if self.source is None:
            return f"{self.message} (at offset {self.span.start})"
        line = self.source.count("\n", 0, self.span.start) + 1
        bol = self.source.rfind("\n", 0, self.span.start) + 1
        col = self.span.start - bol + 1
        return f"{self.message} (line {line}, column {col})"


_TOKEN = re.compile(
    r"""(?P<ws>\s+)
      | (?P<ident>[a-z][A-Za-z0-9_]*)
      | (?P<capident>[A-Z][A-Za-z0-9_]*)
      | (?P<turnstile>\|-)
      | (?P<imp>=>)
      | (?P<lparen>\()
      | (?P<rparen>\))
      | (?P<comma>,)
      | (?P<dot>\.)
      | (?P<amp>&)
      | (?P<pipe>\|)
      | (?P<tilde>~)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"forall", "exists", "top", "bot"}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    span: SourceSpan


def _tokenize(source: str) -> list[_Token]:
    out: list[_Token] = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", SourceSpan(pos, pos + 1), source)
        kind = m.lastgroup or ""
        if kind == "capident":
            raise ParseError(
                f"capitalized identifier {m.group()!r} (that spelling is reserved for metavariables)",
                SourceSpan(m.start(), m.end()),
                source,
            )
        if kind != "ws":
            text = m.group()
            if kind == "ident" and text in _KEYWORDS:
                kind = text
            out.append(_Token(kind, text, SourceSpan(m.start(), m.end())))
        pos = m.end()
    out.append(_Token("eof", "", SourceSpan(len(source), len(source))))
    return out


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0
        self.binders: list[str] = []  # innermost last

    # -- token helpers ----------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.error(f"expected {what}, found {tok.text!r}" if tok.kind != "eof" else f"expected {what}, found end of input", tok)
        return self.next()

    def error(self, message: str, tok: _Token) -> ParseError:
        return ParseError(message, tok.span, self.source)

    # -- grammar ----------------------------------------------------------

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek().kind == "imp":
            self.next()
            return Imp(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek().kind == "pipe":
            self.next()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek().kind == "amp":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "tilde":
            self.next()
            return neg(self.unary())
        if tok.kind in ("forall", "exists"):
            self.next()
            name = self.expect("ident", "a bound variable name").text
            self.expect("dot", "'.' after the bound variable")
            self.binders.append(name)
            try:
                body = self.formula()
            finally:
                self.binders.pop()
            return Forall(body, name) if tok.kind == "forall" else Exists(body, name)
        return self.atom()

    def atom(self) -> Formula:
        tok = self.next()
        if tok.kind == "top":
            return TOP
        if tok.kind == "bot":
            return BOT
        if tok.kind == "lparen":
            f = self.formula()
            self.expect("rparen", "')'")
            return f
        if tok.kind == "ident":
            if self._bound_index(tok.text) is not None:
                raise self.error(f"bound variable {tok.text!r} used as a formula", tok)
            args: tuple[Term, ...] = ()
            if self.peek().kind == "lparen":
                args = self.arglist()
            return Atom(tok.text, args)
        raise self.error(f"expected a formula, found {tok.text!r}" if tok.kind != "eof" else "expected a formula, found end of input", tok)

    def arglist(self) -> tuple[Term, ...]:
        self.expect("lparen", "'('")
        args = [self.term()]
        while self.peek().kind == "comma":
            self.next()
            args.append(self.term())
        self.expect("rparen", "')'")
        return tuple(args)

    def term(self) -> Term:
        tok = self.expect("ident", "a term")
        idx = self._bound_index(tok.text)
        if idx is not None:
            if self.peek().kind == "lparen":
                raise self.error(f"bound variable {tok.text!r} cannot take arguments", tok)
            return Bound(idx)
        if self.peek().kind == "lparen":
            return App(tok.text, self.arglist())
        return Const(tok.text)

    def _bound_index(self, name: str) -> int | None:
        for depth, binder in enumerate(reversed(self.binders)):
            if binder == name:
                return depth
        return None

    # -- entry points -----------------------------------------------------

    def parse_formula(self) -> Formula:
        f = self.formula()
        self.expect("eof", "end of input")
        return f

    def parse_sequent(self) -> Sequent:
        ante = self.formula_list(stop={"turnstile"})
        self.expect("turnstile", "'|-'")
        succ = self.formula_list(stop={"eof"})
        self.expect("eof", "end of input")
        return Sequent(tuple(ante), tuple(succ))

    def formula_list(self, stop: set[str]) -> list[Formula]:
        if self.peek().kind in stop:
            return []
        out = [self.formula()]
        while self.peek().kind == "comma":
            self.next()
            out.append(self.formula())
        return out


def parse_formula(source: str) -> Formula:
    return _Parser(source).parse_formula()


def parse_term(source: str) -> Term:
    p = _Parser(source)
    t = p.term()
    p.expect("eof", "end of input")
    return t


def parse_sequent(source: str) -> Sequent:
    return _Parser(source).parse_sequent()


# ---------------------------------------------------------------------------
# corpus files


@dataclass(frozen=True)
class CorpusEntry:
    """One benchmark line: a named sequent with expected verdicts per logic."""

    name: str
    sequent: Sequent
    classical: bool
    intuitionistic: bool
    uniform: bool
    line: int = 0

    def expected(self, logic: str) -> bool:
        try:
            return {"c": self.classical, "i": self.intuitionistic, "o": self.uniform}[logic]
        except KeyError:
            raise ValueError(f"unknown logic {logic!r}; expected 'c', 'i', or 'o'") from None


def _parse_verdict(field: str, key: str, line_no: int, offset: int, source: str) -> bool:
    field = field.strip()
    if field == f"{key}=yes":
        return True
    if field == f"{key}=no":
        return False
    raise ParseError(
        f"expected '{key}=yes' or '{key}=no', found {field!r}",
        SourceSpan(offset, offset + max(len(field), 1)),
        source,
    )


def parse_corpus(source: str) -> list[CorpusEntry]:
    """Parse a corpus file: `name ; sequent ; C=... ; I=... ; O=...` per line.

    Blank lines and lines starting with '#' are skipped; a trailing
    '# comment' on an entry line is allowed.
    """
    entries: list[CorpusEntry] = []
    seen: set[str] = set()
    offset = 0
    for line_no, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            parts = line.split(";")
            if len(parts) != 5:
                raise ParseError(
                    f"expected 5 ';'-separated fields, found {len(parts)}",
                    SourceSpan(offset, offset + len(raw)),
                    source,
                )
            name = parts[0].strip()
            if not name:
                raise ParseError("empty entry name", SourceSpan(offset, offset + len(raw)), source)
            if name in seen:
                raise ParseError(f"duplicate entry name {name!r}", SourceSpan(offset, offset + len(raw)), source)
            seen.add(name)
            try:
                sequent = parse_sequent(parts[1].strip())
            except ParseError as exc:
                raise ParseError(f"line {line_no}: {exc.message}", exc.span, parts[1]) from exc
            entries.append(
                CorpusEntry(
                    name=name,
                    sequent=sequent,
                    classical=_parse_verdict(parts[2], "C", line_no, offset, source),
                    intuitionistic=_parse_verdict(parts[3], "I", line_no, offset, source),
                    uniform=_parse_verdict(parts[4], "O", line_no, offset, source),
                    line=line_no,
                )
            )
        offset += len(raw) + 1
    return entries
