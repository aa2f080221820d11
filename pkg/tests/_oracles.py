"""Independent reference implementations and generators used by the tests.

Everything here is deliberately written against the public data types only,
by a different mechanism than the library code uses: validity is decided by
truth tables, grammar membership by bottom-up set construction from
production tables, and the generators build formulas directly from those
same tables.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from seqcalc.syntax import (
    And,
    Atom,
    Bot,
    Bound,
    Const,
    Exists,
    Forall,
    Formula,
    Imp,
    Or,
    Sequent,
    Top,
    Var,
    forall,
    exists,
    substitute,
)

# ---------------------------------------------------------------------------
# truth tables


def _subformulas(f: Formula):
    yield f
    if isinstance(f, (And, Or, Imp)):
        yield from _subformulas(f.left)
        yield from _subformulas(f.right)
    elif isinstance(f, (Forall, Exists)):
        raise ValueError("truth tables cover quantifier-free formulas only")


def _eval(f: Formula, env: dict) -> bool:
    if isinstance(f, Atom):
        return env[(f.pred, f.args)]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, And):
        return _eval(f.left, env) and _eval(f.right, env)
    if isinstance(f, Or):
        return _eval(f.left, env) or _eval(f.right, env)
    if isinstance(f, Imp):
        return (not _eval(f.left, env)) or _eval(f.right, env)
    raise ValueError(f"cannot evaluate {f!r}")


def truth_table_valid(s: Sequent) -> bool:
    """Classical validity of a quantifier-free sequent, by enumeration.

    Ground atoms are propositional variables keyed by predicate and
    argument tuple.
    """
    atoms = sorted(
        {
            (g.pred, g.args)
            for member in s.ante + s.succ
            for g in _subformulas(member)
            if isinstance(g, Atom)
        }
    )
    for bits in itertools.product((False, True), repeat=len(atoms)):
        env = dict(zip(atoms, bits))
        if all(_eval(f, env) for f in s.ante) and not any(_eval(f, env) for f in s.succ):
            return False
    return True


# ---------------------------------------------------------------------------
# exhaustive propositional enumeration

PROP_LEAVES: tuple[Formula, ...] = (Atom("q"), Atom("s"), Atom("t"), Top(), Bot())


@lru_cache(maxsize=None)
def formulas_with_connectives(n: int, leaves: tuple[Formula, ...] = PROP_LEAVES) -> tuple[Formula, ...]:
    """Every formula with exactly n binary connectives over the leaf pool."""
    if n == 0:
        return tuple(leaves)
    out = []
    for i in range(n):
        for l in formulas_with_connectives(i, leaves):
            for r in formulas_with_connectives(n - 1 - i, leaves):
                out.append(And(l, r))
                out.append(Or(l, r))
                out.append(Imp(l, r))
    return tuple(out)


def connective_count(f: Formula) -> int:
    if isinstance(f, (And, Or, Imp)):
        return 1 + connective_count(f.left) + connective_count(f.right)
    if isinstance(f, (Forall, Exists)):
        return 1 + connective_count(f.body)
    return 0


def random_propositional(rng: random.Random, n: int, leaves: tuple[Formula, ...] = PROP_LEAVES) -> Formula:
    """A uniformly shaped random formula with exactly n binary connectives."""
    if n == 0:
        return rng.choice(leaves)
    i = rng.randrange(n)
    l = random_propositional(rng, i, leaves)
    r = random_propositional(rng, n - 1 - i, leaves)
    return rng.choice((And, Or, Imp))(l, r)


def random_propositional_sequent(rng: random.Random, max_connectives: int = 6) -> Sequent:
    """A random quantifier-free sequent with a bounded connective total."""
    n_ante = rng.randrange(3)
    n_succ = rng.randrange(1, 3)
    budget = rng.randrange(max_connectives + 1)
    sizes = [0] * (n_ante + n_succ)
    for _ in range(budget):
        sizes[rng.randrange(len(sizes))] += 1
    members = [random_propositional(rng, k) for k in sizes]
    return Sequent(tuple(members[:n_ante]), tuple(members[n_ante:]))


# ---------------------------------------------------------------------------
# fragment grammars as production tables
#
# Roles are grammar nonterminals.  A production is either "leaf" or a
# constructor name plus the roles of its operands; quantifier productions
# take one operand role.  These tables are the membership definition the
# library predicates are compared against.

GRAMMAR_PRODUCTIONS: dict[tuple[str, str], tuple] = {
    ("f1", "goal"): (
        ("leaf",),
        ("and", "goal", "goal"),
        ("or", "goal", "goal"),
        ("forall", "goal"),
        ("exists", "goal"),
    ),
    ("f1", "clause"): (
        ("leaf",),
        ("imp", "goal", "clause"),
        ("and", "clause", "clause"),
        ("forall", "clause"),
        ("exists", "clause"),
    ),
    ("f2", "goal"): (
        ("leaf",),
        ("and", "goal", "goal"),
        ("or", "goal", "goal"),
        ("exists", "goal"),
    ),
    ("f2", "clause"): (
        ("leaf",),
        ("imp", "goal", "clause"),
        ("and", "clause", "clause"),
        ("or", "clause", "clause"),
        ("forall", "clause"),
        ("exists", "clause"),
    ),
    ("f3", "goal"): (
        ("leaf",),
        ("and", "goal", "goal"),
        ("or", "goal", "goal"),
        ("forall", "goal"),
        ("exists", "goal"),
    ),
    ("f3", "clause"): (
        ("leaf",),
        ("imp", "goal", "clause"),
        ("and", "clause", "clause"),
        ("or", "clause", "clause"),
        ("exists", "clause"),
    ),
    ("f4", "goal"): (
        ("leaf",),
        ("and", "goal", "goal"),
        ("imp", "clause", "goal"),
        ("forall", "goal"),
    ),
    ("f4", "clause"): (
        ("leaf",),
        ("and", "clause", "clause"),
        ("or", "clause", "clause"),
        ("forall", "clause"),
        ("exists", "clause"),
    ),
    ("lp-int", "goal"): (
        ("leaf",),
        ("and", "goal", "goal"),
        ("or", "goal", "goal"),
        ("imp", "clause", "goal"),
        ("forall", "goal"),
        ("exists", "goal"),
    ),
    ("lp-int", "clause"): (
        ("leaf",),
        ("imp", "goal", "clause"),
        ("and", "clause", "clause"),
        ("forall", "clause"),
    ),
    ("lp-cls", "base-goal"): (
        ("leaf",),
        ("and", "base-goal", "base-goal"),
        ("or", "base-goal", "base-goal"),
        ("forall", "base-goal"),
        ("exists", "base-goal"),
    ),
    ("lp-cls", "goal"): (
        ("base-goal",),
        ("imp", "clause", "goal"),
        ("and", "goal", "goal"),
        ("forall", "goal"),
    ),
    ("lp-cls", "clause"): (
        ("leaf",),
        ("imp", "base-goal", "clause"),
        ("and", "clause", "clause"),
        ("forall", "clause"),
    ),
}

FRAGMENT_ROLES = {
    "f1": ("goal", "clause"),
    "f2": ("goal", "clause"),
    "f3": ("goal", "clause"),
    "f4": ("goal", "clause"),
    "lp-int": ("goal", "clause"),
    "lp-cls": ("base-goal", "clause", "goal"),
}

_BINARY = {"and": And, "or": Or, "imp": Imp}


def grammar_members(fragment: str, max_connectives: int, leaves: tuple[Formula, ...]) -> dict[str, set]:
    """Bottom-up member sets per role, up to a connective budget.

    Roles are filled size by size; within a size, roles are processed in
    table order so same-size unit productions (goal := base-goal) see the
    source role already populated.
    """
    roles = FRAGMENT_ROLES[fragment]
    by_size: dict[str, list[set]] = {role: [set() for _ in range(max_connectives + 1)] for role in roles}
    for n in range(max_connectives + 1):
        for role in roles:
            bucket = by_size[role][n]
            for prod in GRAMMAR_PRODUCTIONS[(fragment, role)]:
                head = prod[0]
                if head == "leaf":
                    if n == 0:
                        bucket.update(leaves)
                elif head in _BINARY:
                    _, lrole, rrole = prod
                    for i in range(n):
                        for l in by_size[lrole][i]:
                            for r in by_size[rrole][n - 1 - i]:
                                bucket.add(_BINARY[head](l, r))
                elif head in ("forall", "exists"):
                    if n > 0:
                        quant = forall if head == "forall" else exists
                        bucket.update(quant("x", b) for b in by_size[prod[1]][n - 1])
                else:  # unit production from another role
                    bucket.update(by_size[head][n])
    return {role: set().union(*by_size[role]) for role in roles}


def formula_universe(max_connectives: int, leaves: tuple[Formula, ...]) -> list[Formula]:
    """All formulas over the leaves with and/or/imp/forall/exists, by size."""
    tiers: list[list[Formula]] = [list(leaves)]
    for n in range(1, max_connectives + 1):
        tier: list[Formula] = []
        for i in range(n):
            for l in tiers[i]:
                for r in tiers[n - 1 - i]:
                    tier.extend((And(l, r), Or(l, r), Imp(l, r)))
        tier.extend(forall("x", b) for b in tiers[n - 1])
        tier.extend(exists("x", b) for b in tiers[n - 1])
        tiers.append(tier)
    return [f for tier in tiers for f in tier]


# ---------------------------------------------------------------------------
# random in-grammar generation


def random_in_grammar(
    rng: random.Random,
    fragment: str,
    role: str,
    budget: int,
    leaves: tuple[Formula, ...],
) -> Formula:
    """A random member of the given grammar role with at most `budget` connectives."""
    options = [p for p in GRAMMAR_PRODUCTIONS[(fragment, role)]]
    if budget == 0:
        options = [p for p in options if p[0] == "leaf" or (p[0] not in _BINARY and p[0] not in ("forall", "exists"))]
    prod = rng.choice(options)
    head = prod[0]
    if head == "leaf":
        return rng.choice(leaves)
    if head in _BINARY:
        split = rng.randrange(budget)
        l = random_in_grammar(rng, fragment, prod[1], split, leaves)
        r = random_in_grammar(rng, fragment, prod[2], budget - 1 - split, leaves)
        return _BINARY[head](l, r)
    if head in ("forall", "exists"):
        body = random_in_grammar(rng, fragment, prod[1], budget - 1, leaves)
        return (forall if head == "forall" else exists)("x", body)
    return random_in_grammar(rng, fragment, head, budget, leaves)


#: small mixed leaf pool: three propositional letters, a unary predicate
#: over a bindable variable and over a constant, and the units
def mixed_leaves() -> tuple[Formula, ...]:
    return (
        Atom("q"),
        Atom("s"),
        Atom("t"),
        Atom("p", (Var("x"),)),
        Atom("p", (Const("a"),)),
        Top(),
        Bot(),
    )


def _grounded(f: Formula) -> Formula:
    """Replace any x the quantifier productions left unbound by a constant."""
    return substitute(Const("a"), "x", f)


def random_fragment_sequent(
    rng: random.Random, fragment: str, n_clauses: int, goal_budget: int, clause_budget: int
) -> Sequent:
    """An in-fragment sequent; the goal's atoms are seeded into the clauses
    often enough that a useful share is classically provable."""
    leaves = mixed_leaves()
    goal = _grounded(random_in_grammar(rng, fragment, "goal", goal_budget, leaves))
    clauses = [
        _grounded(random_in_grammar(rng, fragment, "clause", clause_budget, leaves))
        for _ in range(n_clauses)
    ]
    # bias toward provability: sometimes assert one of the goal's atoms
    goal_atoms = [g for g in _walk_all(goal) if isinstance(g, Atom) and not _has_bound(g)]
    if goal_atoms and rng.random() < 0.7:
        clauses.append(rng.choice(goal_atoms))
    return Sequent(tuple(clauses), (goal,))


def _walk_all(f: Formula):
    yield f
    if isinstance(f, (And, Or, Imp)):
        yield from _walk_all(f.left)
        yield from _walk_all(f.right)
    elif isinstance(f, (Forall, Exists)):
        yield from _walk_all(f.body)


def _has_bound(g: Atom) -> bool:
    def scan(t):
        if isinstance(t, Bound):
            return True
        return any(scan(a) for a in getattr(t, "args", ()))

    return any(scan(a) for a in g.args)


# ---------------------------------------------------------------------------
# Horn-like sequents


def random_horn_sequent(rng: random.Random) -> Sequent:
    """Facts plus definite clauses over a tiny signature, with an atomic or
    existential goal; a large share is classically provable."""
    preds = ("p", "q", "r")
    consts = (Const("a"), Const("b"), Const("c"))

    def atom(term=None):
        pred = rng.choice(preds)
        t = term if term is not None else rng.choice(consts)
        return Atom(pred, (t,))

    clauses: list[Formula] = []
    for _ in range(rng.randrange(1, 4)):
        clauses.append(atom())
    for _ in range(rng.randrange(0, 3)):
        body = atom(Var("x"))
        head = atom(Var("x"))
        if rng.random() < 0.4:
            body = And(body, atom(Var("x")))
        clauses.append(forall("x", Imp(body, head)))
    goal: Formula = atom()
    if rng.random() < 0.4:
        goal = exists("x", atom(Var("x")))
    elif rng.random() < 0.3:
        goal = And(goal, atom())
    return Sequent(tuple(clauses), (goal,))


# ---------------------------------------------------------------------------
# contraction decoration


def decorate_with_contractions(rng: random.Random, proof, n: int):
    """Insert n antecedent/succedent contraction nodes at random positions.

    Each insertion picks a node, duplicates one formula of its conclusion
    into the subproof by weakening, and closes with the matching contraction,
    so the decorated tree still proves the same end sequent.
    """
    from seqcalc.calculus import Proof, RuleId
    from seqcalc.transform import weaken

    def nodes(p, path=()):
        yield path
        for i, q in enumerate(p.premises):
            yield from nodes(q, path + (i,))

    def get(p, path):
        for i in path:
            p = p.premises[i]
        return p

    def set_node(p, path, new):
        if not path:
            return new
        i = path[0]
        prems = list(p.premises)
        prems[i] = set_node(prems[i], path[1:], new)
        return Proof(p.rule, p.conclusion, tuple(prems), p.principal, p.witness, p.eigen)

    for _ in range(n):
        path = rng.choice(list(nodes(proof)))
        target = get(proof, path)
        s = target.conclusion
        sides = [("ante", i) for i in range(len(s.ante))] + [("succ", i) for i in range(len(s.succ))]
        if not sides:
            continue
        side, idx = rng.choice(sides)
        if side == "ante":
            f = s.ante[idx]
            widened = weaken(target, extra_ante=(f,))
            node = Proof(RuleId.CONTR_L, s, (widened,), ("ante", s.ante.index(f)))
        else:
            f = s.succ[idx]
            widened = weaken(target, extra_succ=(f,))
            node = Proof(RuleId.CONTR_R, s, (widened,), ("succ", s.succ.index(f)))
        proof = set_node(proof, path, node)
    return proof
