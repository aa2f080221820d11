"""Core syntax: first-order terms, formulas, and multiset sequents.

Bound variables are stored as nameless (de Bruijn) indices; each binder keeps
a display-name hint that equality, hashing and ordering ignore, so
alpha-equivalent formulas compare equal.  Sequents keep both sides as
multisets in a canonical sorted order, which makes multiset equality plain
tuple equality.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from typing import Iterable, Union

# ---------------------------------------------------------------------------
# terms


def _cache_hashes(cls):
    """Terms and formulas serve as multiset members and memo keys, so they are
    hashed far more often than they are built; frozen dataclasses recompute the
    structural hash on every call, so stash it on first use instead."""
    generated = cls.__hash__

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = generated(self)
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__
    return cls


@_cache_hashes
@dataclass(frozen=True)
class Var:
    """Free named variable.  Built programmatically; the parser never emits one."""

    name: str


@_cache_hashes
@dataclass(frozen=True)
class Bound:
    """Occurrence of a bound variable, as the de Bruijn index of its binder."""

    index: int


@_cache_hashes
@dataclass(frozen=True)
class Const:
    name: str


@_cache_hashes
@dataclass(frozen=True)
class App:
    name: str
    args: tuple["Term", ...]


@_cache_hashes
@dataclass(frozen=True)
class Meta:
    """Unification placeholder used by the classical prover.  Prints as X<ident>."""

    ident: int

    @property
    def name(self) -> str:
        return f"X{self.ident}"


Term = Union[Var, Bound, Const, App, Meta]

# ---------------------------------------------------------------------------
# formulas


@_cache_hashes
@dataclass(frozen=True)
class Top:
    pass


@_cache_hashes
@dataclass(frozen=True)
class Bot:
    pass


@_cache_hashes
@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()


@_cache_hashes
@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@_cache_hashes
@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@_cache_hashes
@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@_cache_hashes
@dataclass(frozen=True)
class Forall:
    body: "Formula"
    hint: str = field(default="x", compare=False)


@_cache_hashes
@dataclass(frozen=True)
class Exists:
    body: "Formula"
    hint: str = field(default="x", compare=False)


Formula = Union[Top, Bot, Atom, And, Or, Imp, Forall, Exists]

TOP = Top()
BOT = Bot()


def neg(f: Formula) -> Formula:
    """Negation, desugared as an implication into bottom."""
    return Imp(f, BOT)


def is_atomic(f: Formula) -> bool:
    return isinstance(f, Atom)


def is_quantifier_free(f: Formula) -> bool:
    match f:
        case Forall() | Exists():
            return False
        case And(l, r) | Or(l, r) | Imp(l, r):
            return is_quantifier_free(l) and is_quantifier_free(r)
        case _:
            return True


def connective_count(f: Formula) -> int:
    match f:
        case And(l, r) | Or(l, r) | Imp(l, r):
            return 1 + connective_count(l) + connective_count(r)
        case Forall(body=b) | Exists(body=b):
            return 1 + connective_count(b)
        case _:
            return 0


# ---------------------------------------------------------------------------
# de Bruijn plumbing


def shift_term(t: Term, by: int, cutoff: int = 0) -> Term:
    match t:
        case Bound(i):
            return Bound(i + by) if i >= cutoff else t
        case App(name, args):
            return App(name, tuple(shift_term(a, by, cutoff) for a in args))
        case _:
            return t


def _shift(f: Formula, by: int, cutoff: int) -> Formula:
    match f:
        case Atom(p, args):
            return Atom(p, tuple(shift_term(a, by, cutoff) for a in args))
        case And(l, r):
            return And(_shift(l, by, cutoff), _shift(r, by, cutoff))
        case Or(l, r):
            return Or(_shift(l, by, cutoff), _shift(r, by, cutoff))
        case Imp(l, r):
            return Imp(_shift(l, by, cutoff), _shift(r, by, cutoff))
        case Forall(b, h):
            return Forall(_shift(b, by, cutoff + 1), h)
        case Exists(b, h):
            return Exists(_shift(b, by, cutoff + 1), h)
        case _:
            return f


def _replace_bound_term(t: Term, depth: int, repl: Term) -> Term:
    match t:
        case Bound(i) if i == depth:
            return shift_term(repl, depth)
        case Bound(i) if i > depth:
            return Bound(i - 1)
        case App(name, args):
            return App(name, tuple(_replace_bound_term(a, depth, repl) for a in args))
        case _:
            return t


def _replace_bound(f: Formula, depth: int, repl: Term) -> Formula:
    match f:
        case Atom(p, args):
            return Atom(p, tuple(_replace_bound_term(a, depth, repl) for a in args))
        case And(l, r):
            return And(_replace_bound(l, depth, repl), _replace_bound(r, depth, repl))
        case Or(l, r):
            return Or(_replace_bound(l, depth, repl), _replace_bound(r, depth, repl))
        case Imp(l, r):
            return Imp(_replace_bound(l, depth, repl), _replace_bound(r, depth, repl))
        case Forall(b, h):
            return Forall(_replace_bound(b, depth + 1, repl), h)
        case Exists(b, h):
            return Exists(_replace_bound(b, depth + 1, repl), h)
        case _:
            return f


def instantiate(q: Formula, t: Term) -> Formula:
    """Open a quantifier: the body with the bound variable replaced by t.

    t must be locally closed (no stray Bound indices of its own).
    """
    if not isinstance(q, (Forall, Exists)):
        raise TypeError(f"not a quantified formula: {q!r}")
    return _replace_bound(q.body, 0, t)


def _abstract_term(t: Term, name: str, depth: int) -> Term:
    match t:
        case Var(n) if n == name:
            return Bound(depth)
        case App(fn, args):
            return App(fn, tuple(_abstract_term(a, name, depth) for a in args))
        case _:
            return t


def _abstract(f: Formula, name: str, depth: int) -> Formula:
    match f:
        case Atom(p, args):
            return Atom(p, tuple(_abstract_term(a, name, depth) for a in args))
        case And(l, r):
            return And(_abstract(l, name, depth), _abstract(r, name, depth))
        case Or(l, r):
            return Or(_abstract(l, name, depth), _abstract(r, name, depth))
        case Imp(l, r):
            return Imp(_abstract(l, name, depth), _abstract(r, name, depth))
        case Forall(b, h):
            return Forall(_abstract(b, name, depth + 1), h)
        case Exists(b, h):
            return Exists(_abstract(b, name, depth + 1), h)
        case _:
            return f


def forall(name: str, f: Formula) -> Formula:
    """Bind every free Var(name) in f under a new universal quantifier."""
    return Forall(_abstract(f, name, 0), name)


def exists(name: str, f: Formula) -> Formula:
    """Bind every free Var(name) in f under a new existential quantifier."""
    return Exists(_abstract(f, name, 0), name)


# ---------------------------------------------------------------------------
# substitution over free named variables


def substitute_term(t: Term, name: str, repl: Term) -> Term:
    match t:
        case Var(n) if n == name:
            return repl
        case App(fn, args):
            return App(fn, tuple(substitute_term(a, name, repl) for a in args))
        case _:
            return t


def substitute(t: Term, name: str, f: Formula) -> Formula:
    """Replace every free Var(name) in f by t.

    Capture cannot occur: binders are nameless, so any binder in f leaves
    the replacement term untouched.
    """
    match f:
        case Atom(p, args):
            return Atom(p, tuple(substitute_term(a, name, t) for a in args))
        case And(l, r):
            return And(substitute(t, name, l), substitute(t, name, r))
        case Or(l, r):
            return Or(substitute(t, name, l), substitute(t, name, r))
        case Imp(l, r):
            return Imp(substitute(t, name, l), substitute(t, name, r))
        case Forall(b, h):
            return Forall(substitute(t, name, b), h)
        case Exists(b, h):
            return Exists(substitute(t, name, b), h)
        case _:
            return f


def rename_constant_term(t: Term, old: str, new: str) -> Term:
    match t:
        case Const(n) if n == old:
            return Const(new)
        case App(fn, args):
            args2 = tuple(rename_constant_term(a, old, new) for a in args)
            return App(new if fn == old else fn, args2)
        case _:
            return t


def rename_constant(f: Formula, old: str, new: str) -> Formula:
    """Rename a constant or function symbol everywhere in f."""
    match f:
        case Atom(p, args):
            return Atom(p, tuple(rename_constant_term(a, old, new) for a in args))
        case And(l, r):
            return And(rename_constant(l, old, new), rename_constant(r, old, new))
        case Or(l, r):
            return Or(rename_constant(l, old, new), rename_constant(r, old, new))
        case Imp(l, r):
            return Imp(rename_constant(l, old, new), rename_constant(r, old, new))
        case Forall(b, h):
            return Forall(rename_constant(b, old, new), h)
        case Exists(b, h):
            return Exists(rename_constant(b, old, new), h)
        case _:
            return f


# ---------------------------------------------------------------------------
# symbol collection


def _term_symbols(t: Term, out: set[str]) -> None:
    match t:
        case Const(n):
            out.add(n)
        case Var(n):
            out.add(n)
        case Meta():
            out.add(t.name)
        case App(fn, args):
            out.add(fn)
            for a in args:
                _term_symbols(a, out)
        case _:
            pass


def _formula_symbols(f: Formula, out: set[str]) -> None:
    match f:
        case Atom(_, args):
            for a in args:
                _term_symbols(a, out)
        case And(l, r) | Or(l, r) | Imp(l, r):
            _formula_symbols(l, out)
            _formula_symbols(r, out)
        case Forall(body=b) | Exists(body=b):
            _formula_symbols(b, out)
        case _:
            pass


def free_symbols(x) -> frozenset[str]:
    """Constant, function, free-variable and metavariable names occurring in x.

    Predicate names and bound variables are not included.  x may be a term,
    a formula, a sequent, or an iterable of any of these.
    """
    out: set[str] = set()
    _collect_symbols(x, out)
    return frozenset(out)


def _collect_symbols(x, out: set[str]) -> None:
    if isinstance(x, (Var, Bound, Const, App, Meta)):
        _term_symbols(x, out)
    elif isinstance(x, (Top, Bot, Atom, And, Or, Imp, Forall, Exists)):
        _formula_symbols(x, out)
    elif isinstance(x, Sequent):
        for f in x.ante:
            _formula_symbols(f, out)
        for f in x.succ:
            _formula_symbols(f, out)
    else:
        for item in x:
            _collect_symbols(item, out)


def predicate_names(f: Formula) -> frozenset[str]:
    out: set[str] = set()

    def walk(g: Formula) -> None:
        match g:
            case Atom(p, _):
                out.add(p)
            case And(l, r) | Or(l, r) | Imp(l, r):
                walk(l)
                walk(r)
            case Forall(body=b) | Exists(body=b):
                walk(b)
            case _:
                pass

    walk(f)
    return frozenset(out)


def metas_in(x) -> frozenset[int]:
    """Idents of metavariables occurring in a term, formula, sequent or iterable."""
    out: set[int] = set()

    def term(t: Term) -> None:
        match t:
            case Meta(i):
                out.add(i)
            case App(_, args):
                for a in args:
                    term(a)
            case _:
                pass

    def walk(y) -> None:
        if isinstance(y, (Var, Bound, Const, App, Meta)):
            term(y)
        elif isinstance(y, Atom):
            for a in y.args:
                term(a)
        elif isinstance(y, (And, Or, Imp)):
            walk(y.left)
            walk(y.right)
        elif isinstance(y, (Forall, Exists)):
            walk(y.body)
        elif isinstance(y, (Top, Bot)):
            pass
        elif isinstance(y, Sequent):
            for f in y.ante:
                walk(f)
            for f in y.succ:
                walk(f)
        else:
            for item in y:
                walk(item)

    walk(x)
    return frozenset(out)


def ground_subterms(x) -> frozenset[Term]:
    """All subterms of atom arguments in x that contain no Meta, Var or Bound."""
    out: set[Term] = set()

    def term(t: Term) -> bool:
        match t:
            case Const():
                out.add(t)
                return True
            case App(_, args):
                ok = all([term(a) for a in args])
                if ok:
                    out.add(t)
                return ok
            case _:
                return False

    def walk(y) -> None:
        if isinstance(y, (Var, Bound, Const, App, Meta)):
            term(y)
        elif isinstance(y, Atom):
            for a in y.args:
                term(a)
        elif isinstance(y, (And, Or, Imp)):
            walk(y.left)
            walk(y.right)
        elif isinstance(y, (Forall, Exists)):
            walk(y.body)
        elif isinstance(y, (Top, Bot)):
            pass
        elif isinstance(y, Sequent):
            for f in y.ante:
                walk(f)
            for f in y.succ:
                walk(f)
        else:
            for item in y:
                walk(item)

    walk(x)
    return frozenset(out)


def fresh_name(base: str, taken: Iterable[str]) -> str:
    """base, or base followed by the first counter that avoids taken."""
    used = set(taken)
    if base not in used:
        return base
    i = 0
    while f"{base}{i}" in used:
        i += 1
    return f"{base}{i}"


# ---------------------------------------------------------------------------
# structural ordering


@functools.lru_cache(maxsize=None)
def term_key(t: Term) -> tuple:
    match t:
        case Bound(i):
            return (0, i)
        case Var(n):
            return (1, n)
        case Const(n):
            return (2, n)
        case Meta(i):
            return (3, i)
        case App(fn, args):
            return (4, fn, tuple(term_key(a) for a in args))
    raise TypeError(f"not a term: {t!r}")


@functools.lru_cache(maxsize=None)
def formula_key(f: Formula) -> tuple:
    """Total structural order on formulas; ignores binder display names."""
    match f:
        case Top():
            return (0,)
        case Bot():
            return (1,)
        case Atom(p, args):
            return (2, p, tuple(term_key(a) for a in args))
        case And(l, r):
            return (3, formula_key(l), formula_key(r))
        case Or(l, r):
            return (4, formula_key(l), formula_key(r))
        case Imp(l, r):
            return (5, formula_key(l), formula_key(r))
        case Forall(body=b):
            return (6, formula_key(b))
        case Exists(body=b):
            return (7, formula_key(b))
    raise TypeError(f"not a formula: {f!r}")


def term_size(t: Term) -> int:
    match t:
        case App(_, args):
            return 1 + sum(term_size(a) for a in args)
        case _:
            return 1


# ---------------------------------------------------------------------------
# sequents


@_cache_hashes
@dataclass(frozen=True)
class Sequent:
    """A multiset sequent.  Both sides are stored sorted, so == is multiset equality."""

    ante: tuple[Formula, ...] = ()
    succ: tuple[Formula, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "ante", tuple(sorted(self.ante, key=formula_key)))
        object.__setattr__(self, "succ", tuple(sorted(self.succ, key=formula_key)))

    def plus(self, ante: Iterable[Formula] = (), succ: Iterable[Formula] = ()) -> "Sequent":
        return Sequent(self.ante + tuple(ante), self.succ + tuple(succ))

    def without_ante(self, index: int) -> "Sequent":
        return Sequent(self.ante[:index] + self.ante[index + 1 :], self.succ)

    def without_succ(self, index: int) -> "Sequent":
        return Sequent(self.ante, self.succ[:index] + self.succ[index + 1 :])

    def is_singleton_succ(self) -> bool:
        return len(self.succ) == 1

    def __str__(self) -> str:
        return format_sequent(self)

    def __repr__(self) -> str:
        return f"Sequent({format_sequent(self)!r})"


def multiset_minus(xs: tuple[Formula, ...], ys: Iterable[Formula]) -> tuple[Formula, ...] | None:
    """Remove one occurrence of each y from xs; None if some y is missing."""
    rest = list(xs)
    for y in ys:
        try:
            rest.remove(y)
        except ValueError:
            return None
    return tuple(rest)


def multiset_union(*parts: Iterable[Formula]) -> tuple[Formula, ...]:
    out: list[Formula] = []
    for p in parts:
        out.extend(p)
    return tuple(sorted(out, key=formula_key))


# ---------------------------------------------------------------------------
# printing (parser-compatible concrete syntax)

_RESERVED = {"forall", "exists", "top", "bot"}
_IDENT = re.compile(r"[a-z][A-Za-z0-9_]*")


def format_term(t: Term) -> str:
    match t:
        case Var(n):
            return n
        case Bound(i):
            return f"#{i}"  # only visible for ill-scoped fragments, never from the API
        case Const(n):
            return n
        case Meta():
            return t.name
        case App(fn, args):
            return f"{fn}({', '.join(format_term(a) for a in args)})"
    raise TypeError(f"not a term: {t!r}")


def _binder_names(f: Formula) -> set[str]:
    """Names that a freshly chosen binder name must avoid inside f."""
    out: set[str] = set()
    _collect_symbols(f, out)
    return out | predicate_names(f) | _RESERVED


def _format(f: Formula, prec: int, avoid: set[str]) -> str:
    # precedence levels: 0 imp (right assoc), 1 or, 2 and, 3 unary/atom
    match f:
        case Top():
            return "top"
        case Bot():
            return "bot"
        case Atom(p, args):
            if not args:
                return p
            return f"{p}({', '.join(format_term(a) for a in args)})"
        case Imp(l, r):
            s = f"{_format(l, 1, avoid)} => {_format(r, 0, avoid)}"
            return f"({s})" if prec > 0 else s
        case Or(l, r):
            # left-associative: chains print without parens on the left
            s = f"{_format(l, 1, avoid)} | {_format(r, 2, avoid)}"
            return f"({s})" if prec > 1 else s
        case And(l, r):
            s = f"{_format(l, 2, avoid)} & {_format(r, 3, avoid)}"
            return f"({s})" if prec > 2 else s
        case Forall(body=b, hint=h) | Exists(body=b, hint=h):
            kw = "forall" if isinstance(f, Forall) else "exists"
            base = h if _IDENT.fullmatch(h or "") and h not in _RESERVED else "x"
            name = fresh_name(base, avoid | _binder_names(b))
            opened = _replace_bound(b, 0, Var(name))
            s = f"{kw} {name}. {_format(opened, 0, avoid | {name})}"
            return f"({s})" if prec > 0 else s
    raise TypeError(f"not a formula: {f!r}")


def format_formula(f: Formula) -> str:
    """Concrete syntax that the parser reads back to an equal formula."""
    return _format(f, 0, set())


def format_sequent(s: Sequent) -> str:
    left = ", ".join(format_formula(f) for f in s.ante)
    right = ", ".join(format_formula(f) for f in s.succ)
    return f"{left} |- {right}".strip()
