"""Proof search: classical, intuitionistic, goal-directed and restart provers.

Three engines share this module:

* The classical prover works on the contraction-free multiset calculus.
  Quantifier witnesses are metavariables resolved by unification (with an
  occurs check); eigenvariables for the fresh-constant rules are function
  terms over the metavariables alive at that point, so the occurs check
  doubles as the freshness proviso.  Iterative deepening raises the number of
  instantiations allowed per quantified formula per branch.  Quantifier-free
  inputs take a saturation path that decides the sequent outright.

* The intuitionistic prover searches the contraction-free single-succedent
  calculus on ground sequents: invertible rules apply eagerly, the remaining
  choices (disjunction side, witnesses, implication-left) are tried under
  depth and instantiation budgets, with a loop check on canonicalized states.
  Quantifier-free inputs are decided.

* The goal-directed prover restricts the same ground search so a compound
  goal is always introduced by its right rule, and emits proofs over the
  plain rules: backchaining steps contract the clause explicitly so it stays
  available.  The restart variant adds a restart rule and a restart-aware
  disjunction-left rule aimed at a fixed goal formula.  These goal-directed
  searches report Proved or NotProvedWithinLimits, never Refuted.
"""

from __future__ import annotations

import sys
import threading
from dataclasses import dataclass
from typing import Iterator, Union

from .calculus import Proof, ProofClass, RuleId, is_axiom, restart_class
from .syntax import (
    BOT,
    And,
    App,
    Atom,
    Bot,
    Bound,
    Const,
    Exists,
    Forall,
    Formula,
    Imp,
    Meta,
    Or,
    Sequent,
    Term,
    Top,
    Var,
    exists as bind_exists,
    forall as bind_forall,
    free_symbols,
    ground_subterms,
    instantiate,
    is_quantifier_free,
    metas_in,
    predicate_names,
    term_key,
    term_size,
)

# ---------------------------------------------------------------------------
# substitutions and unification


class Subst:
    """Immutable metavariable substitution."""

    __slots__ = ("_map",)

    def __init__(self, mapping: dict[int, Term] | None = None):
        self._map: dict[int, Term] = mapping or {}

    def bind(self, ident: int, t: Term) -> "Subst":
        m = dict(self._map)
        m[ident] = t
        return Subst(m)

    def walk(self, t: Term) -> Term:
        """Follow bindings at the head of t."""
        while isinstance(t, Meta):
            nxt = self._map.get(t.ident)
            if nxt is None:
                return t
            t = nxt
        return t

    def resolve_term(self, t: Term) -> Term:
        t = self.walk(t)
        if isinstance(t, App):
            return App(t.name, tuple(self.resolve_term(a) for a in t.args))
        return t

    def resolve_formula(self, f: Formula) -> Formula:
        match f:
            case Atom(p, args):
                return Atom(p, tuple(self.resolve_term(a) for a in args))
            case And(l, r):
                return And(self.resolve_formula(l), self.resolve_formula(r))
            case Or(l, r):
                return Or(self.resolve_formula(l), self.resolve_formula(r))
            case Imp(l, r):
                return Imp(self.resolve_formula(l), self.resolve_formula(r))
            case Forall(b, h):
                return Forall(self.resolve_formula(b), h)
            case Exists(b, h):
                return Exists(self.resolve_formula(b), h)
            case _:
                return f

    def resolve_sequent(self, s: Sequent) -> Sequent:
        return Sequent(
            tuple(self.resolve_formula(f) for f in s.ante),
            tuple(self.resolve_formula(f) for f in s.succ),
        )


def _occurs_or_captures(ident: int, t: Term, subst: Subst) -> bool:
    """True if metavariable ident occurs in t, or t is not locally closed."""
    t = subst.walk(t)
    match t:
        case Meta(i):
            return i == ident
        case Bound():
            return True
        case App(_, args):
            return any(_occurs_or_captures(ident, a, subst) for a in args)
        case _:
            return False


def unify(a: Term, b: Term, subst: Subst) -> Subst | None:
    """Most general extension of subst unifying a with b, or None."""
    a = subst.walk(a)
    b = subst.walk(b)
    if isinstance(a, Meta) and isinstance(b, Meta) and a.ident == b.ident:
        return subst
    if isinstance(a, Meta):
        return None if _occurs_or_captures(a.ident, b, subst) else subst.bind(a.ident, b)
    if isinstance(b, Meta):
        return None if _occurs_or_captures(b.ident, a, subst) else subst.bind(b.ident, a)
    match (a, b):
        case (Const(x), Const(y)) | (Var(x), Var(y)):
            return subst if x == y else None
        case (Bound(i), Bound(j)):
            return subst if i == j else None
        case (App(f, xs), App(g, ys)) if f == g and len(xs) == len(ys):
            for x, y in zip(xs, ys):
                nxt = unify(x, y, subst)
                if nxt is None:
                    return None
                subst = nxt
            return subst
        case _:
            return None


def unify_formulas(f: Formula, g: Formula, subst: Subst) -> Subst | None:
    """Structural unification of formulas; binder display names are irrelevant."""
    match (f, g):
        case (Top(), Top()) | (Bot(), Bot()):
            return subst
        case (Atom(p, xs), Atom(q, ys)) if p == q and len(xs) == len(ys):
            for x, y in zip(xs, ys):
                nxt = unify(x, y, subst)
                if nxt is None:
                    return None
                subst = nxt
            return subst
        case (And(a, b), And(c, d)) | (Or(a, b), Or(c, d)) | (Imp(a, b), Imp(c, d)):
            nxt = unify_formulas(a, c, subst)
            return None if nxt is None else unify_formulas(b, d, nxt)
        case (Forall(body=a), Forall(body=b)) | (Exists(body=a), Exists(body=b)):
            return unify_formulas(a, b, subst)
        case _:
            return None


# ---------------------------------------------------------------------------
# herbrandization


def herbrandize(s: Sequent) -> Sequent:
    """Replace strong quantifiers by fresh function terms over the weak ones.

    Strong means universal on the right or existential on the left.  Each
    strong quantifier is dropped and its variable replaced by a fresh
    function symbol applied to the variables of the weak quantifiers it sits
    under (a fresh constant when there are none).  Classical provability is
    preserved, and the result has no eigenvariable rules left to apply.
    """
    taken = _symbols_everywhere(s)
    fn_counter = 0
    var_counter = 0

    def fresh_fn() -> str:
        nonlocal fn_counter
        while f"h{fn_counter}" in taken:
            fn_counter += 1
        name = f"h{fn_counter}"
        fn_counter += 1
        return name

    def herb(f: Formula, positive: bool, weak: tuple[str, ...]) -> Formula:
        nonlocal var_counter
        match f:
            case And(l, r):
                return And(herb(l, positive, weak), herb(r, positive, weak))
            case Or(l, r):
                return Or(herb(l, positive, weak), herb(r, positive, weak))
            case Imp(l, r):
                return Imp(herb(l, not positive, weak), herb(r, positive, weak))
            case Forall() | Exists():
                strong = positive if isinstance(f, Forall) else not positive
                if strong:
                    name = fresh_fn()
                    t: Term = App(name, tuple(Var(v) for v in weak)) if weak else Const(name)
                    return herb(instantiate(f, t), positive, weak)
                v = f"_w{var_counter}"
                var_counter += 1
                body = herb(instantiate(f, Var(v)), positive, weak + (v,))
                binder = bind_forall if isinstance(f, Forall) else bind_exists
                rebound = binder(v, body)
                return type(f)(rebound.body, f.hint)
            case _:
                return f

    return Sequent(
        tuple(herb(f, False, ()) for f in s.ante),
        tuple(herb(f, True, ()) for f in s.succ),
    )


# ---------------------------------------------------------------------------
# limits and outcomes


@dataclass(frozen=True)
class SearchLimits:
    """Budgets for proof search.

    depth bounds rule applications per branch in the ground searches;
    quantifier-free inputs are decided by saturation or loop-checked search
    and ignore it.  quantifier_budget caps how often any one quantified
    formula may be instantiated per branch (the classical prover deepens
    iteratively on this).  node_budget bounds total expansions per call.
    strengthened_axioms lets closures match any shared formula rather than
    only shared atoms and bottom.
    """

    depth: int = 40
    quantifier_budget: int = 3
    node_budget: int = 1_000_000
    strengthened_axioms: bool = False


@dataclass(frozen=True)
class Proved:
    proof: Proof
    proof_class: ProofClass


@dataclass(frozen=True)
class Refuted:
    pass


@dataclass(frozen=True)
class NotProvedWithinLimits:
    pass


SearchOutcome = Union[Proved, Refuted, NotProvedWithinLimits]


class _OutOfNodes(Exception):
    pass


# lowlink value meaning "no cycle detected in this subtree"
_NO_CYCLE = 10**9


class _Budget:
    __slots__ = ("left",)

    def __init__(self, nodes: int):
        self.left = nodes

    def tick(self) -> None:
        if self.left <= 0:
            raise _OutOfNodes
        self.left -= 1


def _mentions_bound(t: Term) -> bool:
    if type(t) is Bound:
        return True
    if type(t) is App:
        return any(_mentions_bound(a) for a in t.args)
    return False


def _reserved_prefix(base: str, taken: set[str]) -> str:
    """A prefix such that prefix+digits collides with nothing in taken."""
    prefix = base
    while any(t.startswith(prefix) and t[len(prefix) :].isdigit() for t in taken):
        prefix += base
    return prefix


def _symbols_everywhere(s: Sequent) -> set[str]:
    out = set(free_symbols(s))
    for f in s.ante + s.succ:
        out |= predicate_names(f)
    return out


def is_quantifier_free_sequent(s: Sequent) -> bool:
    return all(is_quantifier_free(f) for f in s.ante + s.succ)


# ---------------------------------------------------------------------------
# classical prover


@dataclass
class _Skel:
    """Proof node under construction; sequents may still contain metavariables."""

    rule: RuleId
    seq: Sequent
    premises: tuple["_Skel", ...] = ()
    side: str | None = None
    pformula: Formula | None = None
    witness: Term | None = None
    eigen: str | None = None


class _ClassicalProver:
    def __init__(self, root: Sequent, limits: SearchLimits):
        self.root = root
        self.limits = limits
        self.budget = _Budget(limits.node_budget)
        taken = _symbols_everywhere(root)
        self.eigen_prefix = _reserved_prefix("e", taken)
        self.const_prefix = _reserved_prefix("c", taken)
        self.next_meta = 0
        self.next_eigen = 0
        self.dynamic_eigens: set[str] = set()

    # -- quantifier-free decision -------------------------------------------

    def decide(self, s: Sequent) -> Proof | None:
        """Saturation decision: every propositional rule here is invertible,
        so one principal per sequent suffices and a failed leaf refutes."""
        self.budget.tick()
        if is_axiom(s, self.limits.strengthened_axioms):
            return Proof(RuleId.AXIOM, s)
        if BOT in s.ante and s.succ:
            premise = Proof(RuleId.AXIOM, s.without_succ(0).plus(succ=(BOT,)))
            return Proof(RuleId.BOT_R, s, (premise,), ("succ", 0))

        for i, f in enumerate(s.ante):
            rest = s.without_ante(i)
            match f:
                case And(l, r):
                    sub = self.decide(rest.plus(ante=(l, r)))
                    return None if sub is None else Proof(RuleId.AND_L_STAR, s, (sub,), ("ante", i))
                case Or(l, r):
                    sub1 = self.decide(rest.plus(ante=(l,)))
                    if sub1 is None:
                        return None
                    sub2 = self.decide(rest.plus(ante=(r,)))
                    return None if sub2 is None else Proof(RuleId.OR_L, s, (sub1, sub2), ("ante", i))
                case Imp(l, r):
                    sub1 = self.decide(Sequent(rest.ante, s.succ + (l,)))
                    if sub1 is None:
                        return None
                    sub2 = self.decide(Sequent(rest.ante + (r,), s.succ))
                    return (
                        None if sub2 is None else Proof(RuleId.IMP_L_STAR, s, (sub1, sub2), ("ante", i))
                    )
                case _:
                    pass
        for i, f in enumerate(s.succ):
            rest = s.without_succ(i)
            match f:
                case And(l, r):
                    sub1 = self.decide(rest.plus(succ=(l,)))
                    if sub1 is None:
                        return None
                    sub2 = self.decide(rest.plus(succ=(r,)))
                    return None if sub2 is None else Proof(RuleId.AND_R, s, (sub1, sub2), ("succ", i))
                case Or(l, r):
                    sub = self.decide(rest.plus(succ=(l, r)))
                    return None if sub is None else Proof(RuleId.OR_R_STAR, s, (sub,), ("succ", i))
                case Imp(l, r):
                    sub = self.decide(rest.plus(ante=(l,), succ=(r,)))
                    return None if sub is None else Proof(RuleId.IMP_R, s, (sub,), ("succ", i))
                case _:
                    pass
        return None

    # -- metavariable search --------------------------------------------------

    def fresh_meta(self) -> Meta:
        m = Meta(self.next_meta)
        self.next_meta += 1
        return m

    def fresh_eigen(self) -> str:
        name = f"{self.eigen_prefix}{self.next_eigen}"
        self.next_eigen += 1
        self.dynamic_eigens.add(name)
        return name

    def _axiom_pairs(self, s: Sequent) -> Iterator[tuple[Formula, Formula]]:
        strengthened = self.limits.strengthened_axioms
        for a in s.ante:
            if not (strengthened or isinstance(a, (Atom, Bot))):
                continue
            for b in s.succ:
                if isinstance(a, Atom) and isinstance(b, Atom):
                    if a.pred == b.pred and len(a.args) == len(b.args):
                        yield a, b
                elif type(a) is type(b):
                    yield a, b

    def solve(
        self, s: Sequent, subst: Subst, counts: dict[Formula, int], mult: int
    ) -> Iterator[tuple[Subst, _Skel]]:
        """Yield substitution/skeleton pairs that close every branch over s."""
        self.budget.tick()

        # definitive closures: no metavariable bindings involved
        if any(isinstance(f, Top) for f in s.succ):
            yield subst, _Skel(RuleId.AXIOM, s)
            return
        if BOT in s.ante and s.succ:
            inner = _Skel(RuleId.AXIOM, s.without_succ(0).plus(succ=(BOT,)))
            yield subst, _Skel(RuleId.BOT_R, s, (inner,), "succ", s.succ[0])
            return
        for a, b in self._axiom_pairs(s):
            if subst.resolve_formula(a) == subst.resolve_formula(b):
                yield subst, _Skel(RuleId.AXIOM, s)
                return

        # closures that commit to bindings: alternatives, not definitive
        for a, b in self._axiom_pairs(s):
            nxt = unify_formulas(a, b, subst)
            if nxt is not None and nxt is not subst:
                yield nxt, _Skel(RuleId.AXIOM, s)

        # one invertible step, when available
        for i, f in enumerate(s.ante):
            rest = s.without_ante(i)
            match f:
                case And(l, r):
                    for sb, sk in self.solve(rest.plus(ante=(l, r)), subst, counts, mult):
                        yield sb, _Skel(RuleId.AND_L_STAR, s, (sk,), "ante", f)
                    return
                case Or(l, r):
                    p1, p2 = rest.plus(ante=(l,)), rest.plus(ante=(r,))
                    for sb1, sk1 in self.solve(p1, subst, counts, mult):
                        for sb2, sk2 in self.solve(p2, sb1, counts, mult):
                            yield sb2, _Skel(RuleId.OR_L, s, (sk1, sk2), "ante", f)
                    return
                case Imp(l, r):
                    p1 = Sequent(rest.ante, s.succ + (l,))
                    p2 = Sequent(rest.ante + (r,), s.succ)
                    for sb1, sk1 in self.solve(p1, subst, counts, mult):
                        for sb2, sk2 in self.solve(p2, sb1, counts, mult):
                            yield sb2, _Skel(RuleId.IMP_L_STAR, s, (sk1, sk2), "ante", f)
                    return
                case Exists():
                    name = self.fresh_eigen()
                    live = sorted(metas_in(subst.resolve_sequent(s)))
                    t: Term = App(name, tuple(Meta(m) for m in live)) if live else Const(name)
                    prem = rest.plus(ante=(instantiate(f, t),))
                    for sb, sk in self.solve(prem, subst, counts, mult):
                        yield sb, _Skel(RuleId.EXISTS_L, s, (sk,), "ante", f, eigen=name)
                    return
                case _:
                    pass
        for i, f in enumerate(s.succ):
            rest = s.without_succ(i)
            match f:
                case And(l, r):
                    p1, p2 = rest.plus(succ=(l,)), rest.plus(succ=(r,))
                    for sb1, sk1 in self.solve(p1, subst, counts, mult):
                        for sb2, sk2 in self.solve(p2, sb1, counts, mult):
                            yield sb2, _Skel(RuleId.AND_R, s, (sk1, sk2), "succ", f)
                    return
                case Or(l, r):
                    for sb, sk in self.solve(rest.plus(succ=(l, r)), subst, counts, mult):
                        yield sb, _Skel(RuleId.OR_R_STAR, s, (sk,), "succ", f)
                    return
                case Imp(l, r):
                    for sb, sk in self.solve(rest.plus(ante=(l,), succ=(r,)), subst, counts, mult):
                        yield sb, _Skel(RuleId.IMP_R, s, (sk,), "succ", f)
                    return
                case Forall():
                    name = self.fresh_eigen()
                    live = sorted(metas_in(subst.resolve_sequent(s)))
                    t = App(name, tuple(Meta(m) for m in live)) if live else Const(name)
                    prem = rest.plus(succ=(instantiate(f, t),))
                    for sb, sk in self.solve(prem, subst, counts, mult):
                        yield sb, _Skel(RuleId.FORALL_R, s, (sk,), "succ", f, eigen=name)
                    return
                case _:
                    pass

        # quantifier instantiations: the only genuine proof-shape choices left
        for f in s.ante:
            if isinstance(f, Forall) and counts.get(f, 0) < mult:
                m = self.fresh_meta()
                c2 = dict(counts)
                c2[f] = c2.get(f, 0) + 1
                prem = s.plus(ante=(instantiate(f, m),))
                for sb, sk in self.solve(prem, subst, c2, mult):
                    yield sb, _Skel(RuleId.FORALL_L_STAR, s, (sk,), "ante", f, witness=m)
        for f in s.succ:
            if isinstance(f, Exists) and counts.get(f, 0) < mult:
                m = self.fresh_meta()
                c2 = dict(counts)
                c2[f] = c2.get(f, 0) + 1
                prem = s.plus(succ=(instantiate(f, m),))
                for sb, sk in self.solve(prem, subst, c2, mult):
                    yield sb, _Skel(RuleId.EXISTS_R_STAR, s, (sk,), "succ", f, witness=m)

    # -- grounding -------------------------------------------------------------

    def _ground(self, skel: _Skel, subst: Subst) -> Proof:
        leftovers: set[int] = set()
        symbols: set[str] = set(_symbols_everywhere(self.root)) | self.dynamic_eigens

        def scan(sk: _Skel) -> None:
            resolved = subst.resolve_sequent(sk.seq)
            leftovers.update(metas_in(resolved))
            symbols.update(free_symbols(resolved))
            if sk.witness is not None:
                w = subst.resolve_term(sk.witness)
                leftovers.update(metas_in(w))
                symbols.update(free_symbols(w))
            for p in sk.premises:
                scan(p)

        scan(skel)
        k = 0
        while f"{self.const_prefix}{k}" in symbols:
            k += 1
        blank = Const(f"{self.const_prefix}{k}")
        fill = Subst({i: blank for i in leftovers})

        def gterm(t: Term) -> Term:
            t = fill.resolve_term(subst.resolve_term(t))
            return self._collapse(t)

        def gformula(f: Formula) -> Formula:
            f = fill.resolve_formula(subst.resolve_formula(f))
            return self._collapse_formula(f)

        def build(sk: _Skel) -> Proof:
            seq = Sequent(
                tuple(gformula(f) for f in sk.seq.ante),
                tuple(gformula(f) for f in sk.seq.succ),
            )
            principal = None
            if sk.pformula is not None:
                pf = gformula(sk.pformula)
                formulas = seq.ante if sk.side == "ante" else seq.succ
                principal = (sk.side, formulas.index(pf))
            witness = None if sk.witness is None else gterm(sk.witness)
            return Proof(sk.rule, seq, tuple(build(p) for p in sk.premises), principal, witness, sk.eigen)

        return build(skel)

    def _collapse(self, t: Term) -> Term:
        match t:
            case App(name, args):
                if name in self.dynamic_eigens:
                    return Const(name)
                return App(name, tuple(self._collapse(a) for a in args))
            case _:
                return t

    def _collapse_formula(self, f: Formula) -> Formula:
        match f:
            case Atom(p, args):
                return Atom(p, tuple(self._collapse(a) for a in args))
            case And(l, r):
                return And(self._collapse_formula(l), self._collapse_formula(r))
            case Or(l, r):
                return Or(self._collapse_formula(l), self._collapse_formula(r))
            case Imp(l, r):
                return Imp(self._collapse_formula(l), self._collapse_formula(r))
            case Forall(b, h):
                return Forall(self._collapse_formula(b), h)
            case Exists(b, h):
                return Exists(self._collapse_formula(b), h)
            case _:
                return f

    def run(self) -> SearchOutcome:
        if is_quantifier_free_sequent(self.root):
            try:
                proof = self.decide(self.root)
            except _OutOfNodes:
                return NotProvedWithinLimits()
            if proof is None:
                return Refuted()
            return Proved(proof, ProofClass("cstar"))
        try:
            for mult in range(1, self.limits.quantifier_budget + 1):
                for subst, skel in self.solve(self.root, Subst(), {}, mult):
                    return Proved(self._ground(skel, subst), ProofClass("cstar"))
        except _OutOfNodes:
            pass
        return NotProvedWithinLimits()


# ---------------------------------------------------------------------------
# intuitionistic / goal-directed / restart prover


class _GroundProver:
    """Single-succedent search.  uniform=False searches the contraction-free
    starred calculus; uniform=True restricts to goal-directed order and emits
    plain rules; a restart goal additionally enables the restart rules."""

    def __init__(self, root: Sequent, limits: SearchLimits, uniform: bool, restart_goal: Formula | None = None):
        self.root = root
        self.limits = limits
        self.uniform = uniform
        self.rgoal = restart_goal
        self.budget = _Budget(limits.node_budget)
        self.root_symbols = _symbols_everywhere(root)
        self.name_prefix = _reserved_prefix("c", self.root_symbols)
        self.counter = 0
        self.blank = Const(self._fresh())
        self.truncated = False
        # definitive failures per canonical state, each recorded with the
        # depth and instantiation tallies it failed under
        self.failed: dict = {}
        self._heads_memo: dict[Formula, tuple] = {}
        self._tmpl_memo: dict[Formula, tuple] = {}
        self._wit_memo: dict[Sequent, list] = {}
        # loop check: canonical keys of the states on the current path, each
        # with its position; `_low` tracks the shallowest position any cycle
        # in the subtree under exploration closed back to.  A failure inside
        # a cycle is provisional (it assumed the ancestor it looped to would
        # fail), parked in `_pending`, and committed to `failed` only once
        # the node the cycle closed on completes without a proof
        self._path: dict[str, int] = {}
        self._low = _NO_CYCLE
        self._pending: list[tuple] = []
        self.prunes = 0

    def _fresh(self) -> str:
        name = f"{self.name_prefix}{self.counter}"
        self.counter += 1
        return name

    # -- loop-check keys ------------------------------------------------------

    def _template(self, f: Formula) -> tuple:
        """Serialize f once: a flat token string with constants outside the
        root vocabulary replaced by per-formula hole numbers, plus the hole
        fillers in first-occurrence order.  Memoized; canonical state keys
        are assembled from these without revisiting formula structure."""
        got = self._tmpl_memo.get(f)
        if got is not None:
            return got
        root = self.root_symbols
        holes: dict[str, int] = {}

        def cterm(t: Term) -> str:
            k = type(t)
            if k is Const:
                n = t.name
                if n in root:
                    return n
                i = holes.get(n)
                if i is None:
                    i = len(holes)
                    holes[n] = i
                return f"!{i}"
            if k is App:
                return t.name + "(" + ",".join(cterm(a) for a in t.args) + ")"
            if k is Bound:
                return f"#{t.index}"
            return t.name

        def cform(g: Formula) -> str:
            k = type(g)
            if k is Atom:
                if not g.args:
                    return g.pred
                return g.pred + "(" + ",".join(cterm(a) for a in g.args) + ")"
            if k is And:
                return "&(" + cform(g.left) + "," + cform(g.right) + ")"
            if k is Or:
                return "|(" + cform(g.left) + "," + cform(g.right) + ")"
            if k is Imp:
                return ">(" + cform(g.left) + "," + cform(g.right) + ")"
            if k is Forall:
                return "A." + cform(g.body)
            if k is Exists:
                return "E." + cform(g.body)
            return "T" if k is Top else "F"

        got = (cform(f), tuple(holes))
        self._tmpl_memo[f] = got
        return got

    def _canon(self, s: Sequent, counts: dict[Formula, int] | None = None):
        """Canonical state key: constants outside the root vocabulary are
        renamed by first occurrence over the sorted templates, so isomorphic
        states tend to compare equal (and equal states always do).  With
        counts given, also returns the instantiation tallies under the same
        renaming."""
        items = sorted(self._template(f) for f in s.ante)
        gt, gcs = self._template(s.succ[0])
        mapping: dict[str, str] = {}

        def rename(consts: tuple) -> str:
            out = []
            for c in consts:
                r = mapping.get(c)
                if r is None:
                    r = f"!{len(mapping)}"
                    mapping[c] = r
                out.append(r)
            return ",".join(out)

        parts = [t + "/" + rename(cs) if cs else t for t, cs in items]
        goal = gt + "/" + rename(gcs) if gcs else gt
        # the loop check collapses duplicates (contraction is admissible, and
        # set-states are what make quantifier-free search terminate); the
        # failure cache must not, since multiplicity affects what is provable
        # within fixed resources
        loop_key = ";".join(dict.fromkeys(parts)) + "|-" + goal
        if counts is None:
            return loop_key
        state_key = ";".join(parts) + "|-" + goal
        tallies = tuple(sorted(kv for kv in counts.items() if kv[1]))
        return loop_key, (state_key, tallies)

    # -- witness candidates -----------------------------------------------------

    def _witnesses(self, s: Sequent) -> list[Term]:
        got = self._wit_memo.get(s)
        if got is None:
            terms = set(ground_subterms(s))
            terms.add(self.blank)
            got = sorted(terms, key=lambda t: (term_size(t), term_key(t)))
            self._wit_memo[s] = got
        return got

    # -- relevance --------------------------------------------------------------

    def _formula_heads(self, f: Formula) -> tuple:
        """Atoms in positive position within f, argument slots a left-rule
        instantiation could fill wildcarded to None.  Bottom in positive
        position appears as the pair ("", ()): it lets any goal close."""
        got = self._heads_memo.get(f)
        if got is not None:
            return got
        acc: set = set()
        stack = [f]
        while stack:
            g = stack.pop()
            k = type(g)
            if k is Atom:
                acc.add((g.pred, tuple(None if _mentions_bound(a) else a for a in g.args)))
            elif k is Bot:
                acc.add(("", ()))
            elif k is And or k is Or:
                stack.append(g.left)
                stack.append(g.right)
            elif k is Imp:
                stack.append(g.right)
            elif k is Forall or k is Exists:
                stack.append(g.body)
        got = tuple(acc)
        self._heads_memo[f] = got
        return got

    def _attainable(self, s: Sequent, goal: Formula) -> bool:
        """Whether left rules could ever close this atomic or bottom goal:
        every formula the left rules add to the antecedent instantiates a
        positive-position subformula of one already there, so a goal no
        antecedent head matches is hopeless."""
        if type(goal) is Atom:
            pred, args = goal.pred, goal.args
        else:
            pred, args = "", ()
        for f in s.ante:
            for hp, ha in self._formula_heads(f):
                if hp == "":
                    return True
                if hp != pred or len(ha) != len(args):
                    continue
                if all(a is None or a == b for a, b in zip(ha, args)):
                    return True
        return False

    # -- search -----------------------------------------------------------------

    def search(self, s: Sequent, depth: int, counts: dict[Formula, int]) -> Proof | None:
        self.budget.tick()
        goal = s.succ[0]
        strengthened = self.limits.strengthened_axioms

        # closures; goal-directed proofs may only close at an exempt goal
        if is_axiom(s, strengthened):
            if not self.uniform or isinstance(goal, (Atom, Top, Bot)):
                return Proof(RuleId.AXIOM, s)
        if (
            BOT in s.ante
            and not isinstance(goal, Bot)
            and (not self.uniform or isinstance(goal, Atom))
        ):
            inner = Proof(RuleId.AXIOM, Sequent(s.ante, (BOT,)))
            return Proof(RuleId.BOT_R, s, (inner,), ("succ", 0))

        loop_key, cache_key = self._canon(s, counts)
        seen_at = self._path.get(loop_key)
        if seen_at is not None:
            # cycle; note how far up it closes so the levels in between know
            # their failures are not ancestor-independent
            if seen_at < self._low:
                self._low = seen_at
            self.prunes += 1
            return None
        # a recorded failure of the same state with the same tallies subsumes
        # this visit when it had at least as much depth available
        failed_depth = self.failed.get(cache_key)
        if failed_depth is not None and depth <= failed_depth:
            return None
        if depth <= 0:
            self.truncated = True
            return None

        level = len(self._path)
        self._path[loop_key] = level
        outer_low, self._low = self._low, _NO_CYCLE
        mark = len(self._pending)
        try:
            if self.uniform:
                result = self._search_uniform(s, goal, depth - 1, counts)
            else:
                result = self._search_starred(s, goal, depth - 1, counts)
        finally:
            del self._path[loop_key]
        if result is not None:
            # a proof voids the subtree's provisional failures: they assumed
            # ancestors with no proof
            del self._pending[mark:]
            self._low = outer_low
            return result
        if self._low >= level:
            # no cycle escapes this node, so its failure and every
            # provisional failure beneath it are final
            for key, d in self._pending[mark:]:
                prev = self.failed.get(key)
                if prev is None or prev < d:
                    self.failed[key] = d
            del self._pending[mark:]
            if failed_depth is None or failed_depth < depth:
                self.failed[cache_key] = depth
            self._low = outer_low
        else:
            self._pending.append((cache_key, depth))
            if outer_low < self._low:
                self._low = outer_low
        return None

    # invertible-first search over the starred single-succedent rules
    def _search_starred(self, s, goal, depth, counts) -> Proof | None:
        # both branches of imp-l*-int keep an atomic goal, so an unmatchable
        # one dooms the whole subtree
        if type(goal) in (Atom, Bot) and not self._attainable(s, goal):
            return None
        for i, f in enumerate(s.ante):
            match f:
                case And(l, r):
                    prem = s.without_ante(i).plus(ante=(l, r))
                    sub = self.search(prem, depth, counts)
                    return None if sub is None else Proof(RuleId.AND_L_STAR, s, (sub,), ("ante", i))
                case Exists():
                    c = self._fresh()
                    prem = s.without_ante(i).plus(ante=(instantiate(f, Const(c)),))
                    sub = self.search(prem, depth, counts)
                    return None if sub is None else Proof(RuleId.EXISTS_L, s, (sub,), ("ante", i), eigen=c)
                case Or(l, r):
                    rest = s.without_ante(i)
                    sub1 = self.search(rest.plus(ante=(l,)), depth, counts)
                    if sub1 is None:
                        return None
                    sub2 = self.search(rest.plus(ante=(r,)), depth, counts)
                    return None if sub2 is None else Proof(RuleId.OR_L, s, (sub1, sub2), ("ante", i))
                case _:
                    pass
        match goal:
            case And(l, r):
                sub1 = self.search(Sequent(s.ante, (l,)), depth, counts)
                if sub1 is None:
                    return None
                sub2 = self.search(Sequent(s.ante, (r,)), depth, counts)
                return None if sub2 is None else Proof(RuleId.AND_R, s, (sub1, sub2), ("succ", 0))
            case Imp(l, r):
                sub = self.search(Sequent(s.ante + (l,), (r,)), depth, counts)
                return None if sub is None else Proof(RuleId.IMP_R, s, (sub,), ("succ", 0))
            case Forall():
                c = self._fresh()
                sub = self.search(Sequent(s.ante, (instantiate(goal, Const(c)),)), depth, counts)
                return None if sub is None else Proof(RuleId.FORALL_R, s, (sub,), ("succ", 0), eigen=c)
            case _:
                pass

        # genuine choice points, in a fixed order
        if isinstance(goal, Or):
            for rule, kept in ((RuleId.OR_R_LEFT, goal.left), (RuleId.OR_R_RIGHT, goal.right)):
                sub = self.search(Sequent(s.ante, (kept,)), depth, counts)
                if sub is not None:
                    return Proof(rule, s, (sub,), ("succ", 0))
        if isinstance(goal, Exists):
            key = self._template(goal)[0]
            if counts.get(key, 0) < self.limits.quantifier_budget:
                c2 = dict(counts)
                c2[key] = c2.get(key, 0) + 1
                for t in self._witnesses(s):
                    sub = self.search(Sequent(s.ante, (instantiate(goal, t),)), depth, c2)
                    if sub is not None:
                        return Proof(RuleId.EXISTS_R, s, (sub,), ("succ", 0), witness=t)
        for i, f in enumerate(s.ante):
            if isinstance(f, Imp):
                sub1 = self.search(Sequent(s.ante, (f.left,)), depth, counts)
                if sub1 is not None:
                    prem2 = s.without_ante(i).plus(ante=(f.right,))
                    sub2 = self.search(prem2, depth, counts)
                    if sub2 is not None:
                        return Proof(RuleId.IMP_L_STAR_INT, s, (sub1, sub2), ("ante", i))
        for i, f in enumerate(s.ante):
            if not isinstance(f, Forall):
                continue
            key = self._template(f)[0]
            if counts.get(key, 0) >= self.limits.quantifier_budget:
                continue
            c2 = dict(counts)
            c2[key] = c2.get(key, 0) + 1
            ante_set = set(s.ante)
            for t in self._witnesses(s):
                inst = instantiate(f, t)
                if inst in ante_set:
                    continue
                sub = self.search(s.plus(ante=(inst,)), depth, c2)
                if sub is not None:
                    return Proof(RuleId.FORALL_L_STAR, s, (sub,), ("ante", i), witness=t)
        return None

    # goal-directed search emitting plain rules
    def _search_uniform(self, s, goal, depth, counts) -> Proof | None:
        match goal:
            case And(l, r):
                sub1 = self.search(Sequent(s.ante, (l,)), depth, counts)
                if sub1 is None:
                    return None
                sub2 = self.search(Sequent(s.ante, (r,)), depth, counts)
                return None if sub2 is None else Proof(RuleId.AND_R, s, (sub1, sub2), ("succ", 0))
            case Imp(l, r):
                sub = self.search(Sequent(s.ante + (l,), (r,)), depth, counts)
                return None if sub is None else Proof(RuleId.IMP_R, s, (sub,), ("succ", 0))
            case Forall():
                c = self._fresh()
                sub = self.search(Sequent(s.ante, (instantiate(goal, Const(c)),)), depth, counts)
                return None if sub is None else Proof(RuleId.FORALL_R, s, (sub,), ("succ", 0), eigen=c)
            case Or(l, r):
                for rule, kept in ((RuleId.OR_R_LEFT, l), (RuleId.OR_R_RIGHT, r)):
                    sub = self.search(Sequent(s.ante, (kept,)), depth, counts)
                    if sub is not None:
                        return Proof(rule, s, (sub,), ("succ", 0))
                return None
            case Exists():
                key = self._template(goal)[0]
                if counts.get(key, 0) >= self.limits.quantifier_budget:
                    return None
                c2 = dict(counts)
                c2[key] = c2.get(key, 0) + 1
                for t in self._witnesses(s):
                    sub = self.search(Sequent(s.ante, (instantiate(goal, t),)), depth, c2)
                    if sub is not None:
                        return Proof(RuleId.EXISTS_R, s, (sub,), ("succ", 0), witness=t)
                return None
            case _:
                pass

        # atomic (or bottom) goal: a goal no antecedent head can produce is
        # hopeless here, and only a restart can rescue it
        if not self._attainable(s, goal):
            if self.rgoal is not None and goal != self.rgoal:
                sub = self.search(Sequent(s.ante, (self.rgoal,)), depth, counts)
                if sub is not None:
                    return Proof(RuleId.RESTART, s, (sub,))
            return None

        # invertible consuming steps commit first: splitting a disjunction or
        # opening an existential at an exempt goal loses no proofs (with a
        # restart goal the disjunction step is a genuine choice and stays in
        # the backchain loop below)
        for i, f in enumerate(s.ante):
            k = type(f)
            if k is Exists:
                c = self._fresh()
                prem = s.without_ante(i).plus(ante=(instantiate(f, Const(c)),))
                sub = self.search(prem, depth, counts)
                return None if sub is None else Proof(RuleId.EXISTS_L, s, (sub,), ("ante", i), eigen=c)
            if k is Or and self.rgoal is None:
                rest = s.without_ante(i)
                sub1 = self.search(rest.plus(ante=(f.left,)), depth, counts)
                if sub1 is None:
                    return None
                sub2 = self.search(rest.plus(ante=(f.right,)), depth, counts)
                return None if sub2 is None else Proof(RuleId.OR_L, s, (sub1, sub2), ("ante", i))

        if self.rgoal is not None:
            # the restart split is a genuine choice, but each disjunct alone
            # must still carry the goal: replacing the disjunction by either
            # side maps any proof to a proof (a restart step absorbs the
            # goal swap at the split's second branch), so one failing
            # projection dooms the node
            for i, f in enumerate(s.ante):
                if type(f) is not Or:
                    continue
                rest = s.without_ante(i)
                if self.search(rest.plus(ante=(f.left,)), depth, counts) is None:
                    return None
                if self.search(rest.plus(ante=(f.right,)), depth, counts) is None:
                    return None
                break

        # backchain on the antecedent
        for i, f in enumerate(s.ante):
            match f:
                case Imp(l, r):
                    sub1 = self.search(Sequent(s.ante, (l,)), depth, counts)
                    if sub1 is None:
                        continue
                    sub2 = self.search(s.plus(ante=(r,)), depth, counts)
                    if sub2 is None:
                        continue
                    return self._contracted(s, f, RuleId.IMP_L, (sub1, sub2))
                case And(l, r):
                    for rule, kept in ((RuleId.AND_L_LEFT, l), (RuleId.AND_L_RIGHT, r)):
                        if kept in s.ante:
                            continue
                        sub = self.search(s.plus(ante=(kept,)), depth, counts)
                        if sub is not None:
                            return self._contracted(s, f, rule, (sub,))
                case Forall():
                    key = self._template(f)[0]
                    if counts.get(key, 0) >= self.limits.quantifier_budget:
                        continue
                    c2 = dict(counts)
                    c2[key] = c2.get(key, 0) + 1
                    ante_set = set(s.ante)
                    for t in self._witnesses(s):
                        inst = instantiate(f, t)
                        if inst in ante_set:
                            continue
                        sub = self.search(s.plus(ante=(inst,)), depth, c2)
                        if sub is not None:
                            return self._contracted(s, f, RuleId.FORALL_L, (sub,), witness=t)
                case Or(l, r):
                    # only reached with a restart goal; the plain split
                    # happened eagerly above
                    rest = s.without_ante(i)
                    sub1 = self.search(rest.plus(ante=(l,)), depth, counts)
                    if sub1 is None:
                        continue
                    sub2 = self.search(Sequent(rest.ante + (r,), (self.rgoal,)), depth, counts)
                    if sub2 is None:
                        continue
                    return Proof(RuleId.OR_L_RESTART, s, (sub1, sub2), ("ante", i))
                case _:
                    pass
        if self.rgoal is not None and goal != self.rgoal:
            sub = self.search(Sequent(s.ante, (self.rgoal,)), depth, counts)
            if sub is not None:
                return Proof(RuleId.RESTART, s, (sub,))
        return None

    def _contracted(self, s: Sequent, f: Formula, rule: RuleId, premises, witness: Term | None = None) -> Proof:
        """Wrap a keep-the-clause left step as contraction plus the plain rule."""
        doubled = s.plus(ante=(f,))
        inner = Proof(rule, doubled, premises, ("ante", doubled.ante.index(f)), witness)
        return Proof(RuleId.CONTR_L, s, (inner,), ("ante", s.ante.index(f)))

    def run(self) -> SearchOutcome:
        qf = is_quantifier_free_sequent(self.root)
        depth = 10**9 if qf else self.limits.depth
        # quantifier-free search has no depth bound (the loop check is what
        # terminates it), so paths can recurse past the default interpreter
        # limits; give the search its own deep stack
        box: list = []

        def go() -> None:
            try:
                box.append(self.search(self.root, depth, {}))
            except BaseException as exc:  # re-raised below
                box.append(exc)

        old_limit = sys.getrecursionlimit()
        threading.stack_size(256 * 1024 * 1024)
        sys.setrecursionlimit(200_000)
        worker = threading.Thread(target=go)
        try:
            worker.start()
            worker.join()
        finally:
            sys.setrecursionlimit(old_limit)
            threading.stack_size(0)
        out_of_nodes = False
        proof = box[0]
        if isinstance(proof, _OutOfNodes):
            proof, out_of_nodes = None, True
        elif isinstance(proof, BaseException):
            raise proof
        if proof is not None:
            if self.rgoal is not None:
                return Proved(proof, restart_class(self.rgoal))
            return Proved(proof, ProofClass("o" if self.uniform else "istar"))
        if not self.uniform and qf and not self.truncated and not out_of_nodes:
            return Refuted()
        return NotProvedWithinLimits()


# ---------------------------------------------------------------------------
# entry points


def prove(s: Sequent, logic: str = "c", limits: SearchLimits | None = None) -> SearchOutcome:
    """Search for a proof of s in the given logic: c, i, or o.

    Classical outcomes for quantifier-free sequents are definitive (Proved or
    Refuted); quantified sequents may come back NotProvedWithinLimits.  The
    i logic decides quantifier-free sequents too.  The o (goal-directed)
    logic never refutes.
    """
    limits = limits or SearchLimits()
    if logic == "c":
        return _ClassicalProver(s, limits).run()
    if logic in ("i", "o"):
        if len(s.succ) != 1:
            raise ValueError(f"logic {logic!r} needs exactly one succedent formula, got {s}")
        return _GroundProver(s, limits, uniform=(logic == "o")).run()
    raise ValueError(f"unknown logic {logic!r} (expected c, i, or o)")


def prove_restart(s: Sequent, limits: SearchLimits | None = None) -> SearchOutcome:
    """Goal-directed search with restart: the succedent formula is the restart goal."""
    if len(s.succ) != 1:
        raise ValueError(f"restart search needs exactly one succedent formula, got {s}")
    return _GroundProver(s, limits or SearchLimits(), uniform=True, restart_goal=s.succ[0]).run()
