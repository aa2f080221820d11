"""Structural transformations on proof objects.

All operations are pure functions from valid proofs to valid proofs:

* ``weaken`` widens every sequent in a proof by extra context formulas
  without increasing its height, renaming eigenvariables when the new
  formulas would capture them.
* ``eliminate_contractions`` removes contraction nodes from a proof in the
  starred calculus, by induction on the contracted formula and the height of
  the contraction-free subproof above, using height-preserving inversion.
* ``expand_starred`` rewrites each starred rule application into its plain
  decomposition (the underlying rule plus explicit contractions), so starred
  classical proofs become plain classical proofs and starred
  single-succedent proofs become plain single-succedent proofs.
* ``extract_intuitionistic`` turns an eligible classical proof into a
  single-succedent proof: either by picking one succedent member per branch
  (possible when implication-right and disjunction-left are absent), or by
  the starred round trip (possible when implication-left, disjunction-right
  and exists-right are absent and the end sequent has one succedent formula).
* ``augment`` adds the negation of the goal to the antecedent.

Transformations detect malformed inputs lazily and raise TransformError.
"""

from __future__ import annotations

from dataclasses import replace

from .calculus import Proof, RuleId, is_axiom, rule_family, rule_usage
from .syntax import (
    BOT,
    And,
    Atom,
    Bot,
    Const,
    Exists,
    Forall,
    Formula,
    Imp,
    Or,
    Sequent,
    Term,
    Top,
    format_formula,
    free_symbols,
    fresh_name,
    instantiate,
    multiset_minus,
    predicate_names,
    rename_constant,
    rename_constant_term,
)


class TransformError(Exception):
    """A proof transformation met an input it cannot handle."""


# ---------------------------------------------------------------------------
# node helpers


def _principal_formula(p: Proof) -> Formula:
    if p.principal is None:
        raise TransformError(f"rule {p.rule.value} node is missing its principal formula")
    side, idx = p.principal
    formulas = p.conclusion.ante if side == "ante" else p.conclusion.succ
    if not 0 <= idx < len(formulas):
        raise TransformError(f"principal index {idx} out of range in {p.conclusion}")
    return formulas[idx]


def _node(
    rule: RuleId,
    conclusion: Sequent,
    premises,
    side: str | None = None,
    formula: Formula | None = None,
    witness: Term | None = None,
    eigen: str | None = None,
) -> Proof:
    """Build a node, locating the principal formula in the (re-sorted) sequent."""
    principal = None
    if formula is not None:
        formulas = conclusion.ante if side == "ante" else conclusion.succ
        try:
            principal = (side, formulas.index(formula))
        except ValueError:
            raise TransformError(
                f"principal {format_formula(formula)} does not occur in {conclusion}"
            ) from None
    return Proof(rule, conclusion, tuple(premises), principal, witness, eigen)


def _tree_symbols(p: Proof) -> set[str]:
    out: set[str] = set()
    stack = [p]
    while stack:
        n = stack.pop()
        out |= free_symbols(n.conclusion)
        if n.witness is not None:
            out |= free_symbols(n.witness)
        if n.eigen:
            out.add(n.eigen)
        stack.extend(n.premises)
    return out


def _rename_seq(s: Sequent, old: str, new: str) -> Sequent:
    return Sequent(
        tuple(rename_constant(f, old, new) for f in s.ante),
        tuple(rename_constant(f, old, new) for f in s.succ),
    )


def _rename_eigen_subtree(p: Proof, old: str, new: str) -> Proof:
    """Rename a constant throughout a subtree, eigen bindings included.

    Sound on valid proofs: reuse of an eigenvariable name deeper in the tree
    is only possible where the outer name no longer occurs, so a blanket
    rename cannot conflate distinct binders.
    """
    concl = _rename_seq(p.conclusion, old, new)
    principal = None
    if p.principal is not None:
        side, idx = p.principal
        src = p.conclusion.ante if side == "ante" else p.conclusion.succ
        pf = rename_constant(src[idx], old, new)
        dst = concl.ante if side == "ante" else concl.succ
        principal = (side, dst.index(pf))
    witness = rename_constant_term(p.witness, old, new) if p.witness is not None else None
    eigen = new if p.eigen == old else p.eigen
    premises = tuple(_rename_eigen_subtree(q, old, new) for q in p.premises)
    return Proof(p.rule, concl, premises, principal, witness, eigen)


def _avoid_eigens(p: Proof, avoid: set[str], taken: set[str]) -> Proof:
    if p.eigen and p.eigen in avoid:
        new = fresh_name(p.eigen, taken | avoid)
        taken.add(new)
        p = _rename_eigen_subtree(p, p.eigen, new)
    if not p.premises:
        return p
    return replace(p, premises=tuple(_avoid_eigens(q, avoid, taken) for q in p.premises))


def _freshen_eigens(p: Proof, avoid: set[str]) -> Proof:
    """Rename every eigenvariable of p that collides with a name in avoid."""
    return _avoid_eigens(p, set(avoid), _tree_symbols(p))


# ---------------------------------------------------------------------------
# weakening


def weaken(p: Proof, extra_ante=(), extra_succ=()) -> Proof:
    """Widen every sequent of p by the extra formulas; height never grows.

    Eigenvariables that occur in the added formulas are renamed first, so
    the freshness provisos keep holding.  Succedent weakening is rejected on
    restart-rule nodes, whose goal premise admits no extra succedent context,
    and on single-succedent implication-left nodes, whose left premise drops
    the succedent outright.
    """
    extra_ante = tuple(extra_ante)
    extra_succ = tuple(extra_succ)
    if not extra_ante and not extra_succ:
        return p
    if extra_succ and RuleId.IMP_L_STAR_INT in rule_usage(p):
        raise TransformError(
            "cannot weaken the succedent through a single-succedent implication-left rule"
        )
    avoid = set(free_symbols(extra_ante)) | set(free_symbols(extra_succ))
    if avoid:
        p = _freshen_eigens(p, avoid)
    return _widen(p, extra_ante, extra_succ)


def _widen(p: Proof, ea: tuple, es: tuple) -> Proof:
    s = p.conclusion
    t = s.plus(ante=ea, succ=es)
    rule = p.rule
    if rule is RuleId.AXIOM:
        return Proof(RuleId.AXIOM, t)
    if rule in (RuleId.RESTART, RuleId.OR_L_RESTART) and es:
        raise TransformError("cannot weaken the succedent of a restart-rule node")

    if rule in (RuleId.IMP_L, RuleId.IMP_L_STAR_INT):
        premises = (_widen(p.premises[0], ea, ()), _widen(p.premises[1], ea, es))
    elif rule is RuleId.OR_L_RESTART:
        premises = (_widen(p.premises[0], ea, ()), _widen(p.premises[1], ea, ()))
    elif rule in (RuleId.RESTART, RuleId.M_IMP_R, RuleId.M_FORALL_R):
        premises = (_widen(p.premises[0], ea, ()),)
    elif rule is RuleId.M_OR_L:
        premises = tuple(_widen(q, ea, ()) for q in p.premises)
    else:
        premises = tuple(_widen(q, ea, es) for q in p.premises)

    formula = _principal_formula(p) if p.principal is not None else None
    side = p.principal[0] if p.principal is not None else None
    return _node(rule, t, premises, side, formula, p.witness, p.eigen)


# ---------------------------------------------------------------------------
# identity proofs (eta expansion)


def identity_proof(f: Formula) -> Proof:
    """A starred-calculus proof of ⟨f ⊢ f⟩ closing only on atomic axioms."""
    s = Sequent((f,), (f,))
    match f:
        case Atom() | Top() | Bot():
            return Proof(RuleId.AXIOM, s)
        case And(l, r):
            left = _node(
                RuleId.AND_L_STAR,
                Sequent((f,), (l,)),
                [weaken(identity_proof(l), extra_ante=(r,))],
                "ante",
                f,
            )
            right = _node(
                RuleId.AND_L_STAR,
                Sequent((f,), (r,)),
                [weaken(identity_proof(r), extra_ante=(l,))],
                "ante",
                f,
            )
            return _node(RuleId.AND_R, s, [left, right], "succ", f)
        case Or(l, r):
            pl = _node(
                RuleId.OR_R_STAR,
                Sequent((l,), (f,)),
                [weaken(identity_proof(l), extra_succ=(r,))],
                "succ",
                f,
            )
            pr = _node(
                RuleId.OR_R_STAR,
                Sequent((r,), (f,)),
                [weaken(identity_proof(r), extra_succ=(l,))],
                "succ",
                f,
            )
            return _node(RuleId.OR_L, s, [pl, pr], "ante", f)
        case Imp(l, r):
            p1 = weaken(identity_proof(l), extra_succ=(r,))
            p2 = weaken(identity_proof(r), extra_ante=(l,))
            inner = _node(RuleId.IMP_L_STAR, Sequent((f, l), (r,)), [p1, p2], "ante", f)
            return _node(RuleId.IMP_R, s, [inner], "succ", f)
        case Forall():
            c = fresh_name("c", free_symbols(f) | predicate_names(f))
            inst = instantiate(f, Const(c))
            core = weaken(identity_proof(inst), extra_ante=(f,))
            fl = _node(
                RuleId.FORALL_L_STAR, Sequent((f,), (inst,)), [core], "ante", f, witness=Const(c)
            )
            return _node(RuleId.FORALL_R, s, [fl], "succ", f, eigen=c)
        case Exists():
            c = fresh_name("c", free_symbols(f) | predicate_names(f))
            inst = instantiate(f, Const(c))
            core = weaken(identity_proof(inst), extra_succ=(f,))
            er = _node(
                RuleId.EXISTS_R_STAR, Sequent((inst,), (f,)), [core], "succ", f, witness=Const(c)
            )
            return _node(RuleId.EXISTS_L, s, [er], "ante", f, eigen=c)
    raise TransformError(f"cannot build an identity proof for {format_formula(f)}")


# ---------------------------------------------------------------------------
# height-preserving inversion


def _inverted_sequent(s: Sequent, side: str, f: Formula, which: int, eigen: str | None) -> Sequent:
    """The sequent obtained by replacing one occurrence of f with its premise parts."""
    if side == "ante":
        rest = multiset_minus(s.ante, (f,))
        if rest is None:
            raise TransformError(f"{format_formula(f)} does not occur in the antecedent of {s}")
        match f:
            case And(l, r):
                return Sequent(rest + (l, r), s.succ)
            case Or(l, r):
                return Sequent(rest + ((l,) if which == 0 else (r,)), s.succ)
            case Imp(l, r):
                if which == 0:
                    return Sequent(rest, s.succ + (l,))
                return Sequent(rest + (r,), s.succ)
            case Exists():
                return Sequent(rest + (instantiate(f, Const(eigen)),), s.succ)
    else:
        rest = multiset_minus(s.succ, (f,))
        if rest is None:
            raise TransformError(f"{format_formula(f)} does not occur in the succedent of {s}")
        match f:
            case And(l, r):
                return Sequent(s.ante, rest + ((l,) if which == 0 else (r,)))
            case Or(l, r):
                return Sequent(s.ante, rest + (l, r))
            case Imp(l, r):
                return Sequent(s.ante + (l,), rest + (r,))
            case Forall():
                return Sequent(s.ante, rest + (instantiate(f, Const(eigen)),))
    raise TransformError(f"no invertible rule applies to {format_formula(f)} on the {side} side")


def _rebind_eigen(q: Proof, old: str, new: str) -> Proof:
    if old == new:
        return q
    q = _freshen_eigens(q, {new})
    return _rename_eigen_subtree(q, old, new)


def _invert_once(p: Proof, side: str, f: Formula, which: int = 0, eigen: str | None = None) -> Proof:
    """Replace one occurrence of f in p's conclusion by its rule premise parts.

    Height-preserving on contraction-free starred proofs, except where a
    bottom-right node forces a rebuild through weakening (still bounded by
    the input height) or a shared-compound axiom needs eta expansion first.
    """
    s = p.conclusion
    rule = p.rule

    if rule in (RuleId.CONTR_L, RuleId.CONTR_R):
        raise TransformError("inversion expects a contraction-free proof")

    if rule is RuleId.AXIOM:
        t = _inverted_sequent(s, side, f, which, eigen)
        if is_axiom(t, strengthened=True):
            return Proof(RuleId.AXIOM, t)
        for g in s.ante:
            if g in s.succ:
                ga = multiset_minus(s.ante, (g,))
                gs = multiset_minus(s.succ, (g,))
                expanded = weaken(identity_proof(g), ga, gs)
                return _invert_once(expanded, side, f, which, eigen)
        raise TransformError(f"axiom {s} lost its closing pair under inversion")

    pf = _principal_formula(p) if p.principal is not None else None
    pside = p.principal[0] if p.principal is not None else None

    if pf == f and pside == side:
        # the node acts on the very formula being inverted
        if rule is RuleId.AND_L_STAR:
            return p.premises[0]
        if rule is RuleId.AND_R:
            return p.premises[which]
        if rule is RuleId.OR_L:
            return p.premises[which]
        if rule is RuleId.OR_R_STAR:
            return p.premises[0]
        if rule is RuleId.IMP_L_STAR:
            return p.premises[which]
        if rule is RuleId.IMP_L_STAR_INT:
            if which == 0:
                raise TransformError("the goal premise of the single-succedent rule is not invertible")
            return p.premises[1]
        if rule is RuleId.IMP_R:
            return p.premises[0]
        if rule in (RuleId.EXISTS_L, RuleId.FORALL_R):
            return _rebind_eigen(p.premises[0], p.eigen, eigen)
        if rule is RuleId.BOT_R:
            # not invertible: rebuild by weakening the bottom premise
            t = _inverted_sequent(s, side, f, which, eigen)
            parts_succ = multiset_minus(t.succ, multiset_minus(s.succ, (f,)))
            parts_ante = multiset_minus(t.ante, s.ante)
            head = parts_succ[0]
            q = _widen_or_keep(p.premises[0], parts_ante, multiset_minus(parts_succ, (head,)))
            return _node(RuleId.BOT_R, t, [q], "succ", head)
        # keep-style rules fall through to the context case below

    # f is context for this node: premises all carry it
    t = _inverted_sequent(s, side, f, which, eigen)
    premises = tuple(_invert_once(q, side, f, which, eigen) for q in p.premises)
    return _node(rule, t, premises, pside, pf, p.witness, p.eigen)


def _widen_or_keep(p: Proof, ea, es) -> Proof:
    if not ea and not es:
        return p
    return weaken(p, ea, es)


# ---------------------------------------------------------------------------
# contraction elimination


_ANTE_CONSUMING = {RuleId.AND_L_STAR, RuleId.OR_L, RuleId.IMP_L_STAR, RuleId.IMP_L_STAR_INT, RuleId.EXISTS_L}
_SUCC_CONSUMING = {RuleId.AND_R, RuleId.OR_R_STAR, RuleId.IMP_R, RuleId.FORALL_R, RuleId.BOT_R}


def _contract_once(p: Proof, side: str, f: Formula) -> Proof:
    """From a contraction-free proof of a sequent holding two copies of f,
    build a contraction-free proof with one copy, by induction on the size
    of f and the height of p."""
    s = p.conclusion
    if side == "ante":
        rest = multiset_minus(s.ante, (f,))
        if rest is None:
            raise TransformError(f"{format_formula(f)} missing from the antecedent of {s}")
        target = Sequent(rest, s.succ)
    else:
        rest = multiset_minus(s.succ, (f,))
        if rest is None:
            raise TransformError(f"{format_formula(f)} missing from the succedent of {s}")
        target = Sequent(s.ante, rest)

    rule = p.rule
    if rule in (RuleId.CONTR_L, RuleId.CONTR_R):
        raise TransformError("contraction elimination expects contraction-free subproofs")
    if rule is RuleId.AXIOM:
        if is_axiom(target, strengthened=True):
            return Proof(RuleId.AXIOM, target)
        raise TransformError(f"axiom {s} is no longer closed after contraction")

    pf = _principal_formula(p) if p.principal is not None else None
    pside = p.principal[0] if p.principal is not None else None
    consuming = pf == f and pside == side and (
        rule in _ANTE_CONSUMING if side == "ante" else rule in _SUCC_CONSUMING
    )

    if not consuming:
        premises = tuple(_contract_once(q, side, f) for q in p.premises)
        return _node(rule, target, premises, pside, pf, p.witness, p.eigen)

    match rule:
        case RuleId.AND_L_STAR:
            q = _invert_once(p.premises[0], "ante", f)
            q = _contract_once(q, "ante", f.left)
            q = _contract_once(q, "ante", f.right)
            return _node(rule, target, [q], "ante", f)
        case RuleId.OR_L:
            a = _contract_once(_invert_once(p.premises[0], "ante", f, which=0), "ante", f.left)
            b = _contract_once(_invert_once(p.premises[1], "ante", f, which=1), "ante", f.right)
            return _node(rule, target, [a, b], "ante", f)
        case RuleId.IMP_L_STAR:
            a = _contract_once(_invert_once(p.premises[0], "ante", f, which=0), "succ", f.left)
            b = _contract_once(_invert_once(p.premises[1], "ante", f, which=1), "ante", f.right)
            return _node(rule, target, [a, b], "ante", f)
        case RuleId.IMP_L_STAR_INT:
            a = _contract_once(p.premises[0], "ante", f)
            b = _contract_once(_invert_once(p.premises[1], "ante", f, which=1), "ante", f.right)
            return _node(rule, target, [a, b], "ante", f)
        case RuleId.EXISTS_L:
            c = p.eigen
            q = _freshen_eigens(p.premises[0], {c})
            q = _invert_once(q, "ante", f, eigen=c)
            q = _contract_once(q, "ante", instantiate(f, Const(c)))
            return _node(rule, target, [q], "ante", f, eigen=c)
        case RuleId.AND_R:
            a = _contract_once(_invert_once(p.premises[0], "succ", f, which=0), "succ", f.left)
            b = _contract_once(_invert_once(p.premises[1], "succ", f, which=1), "succ", f.right)
            return _node(rule, target, [a, b], "succ", f)
        case RuleId.OR_R_STAR:
            q = _invert_once(p.premises[0], "succ", f)
            q = _contract_once(q, "succ", f.left)
            q = _contract_once(q, "succ", f.right)
            return _node(rule, target, [q], "succ", f)
        case RuleId.IMP_R:
            q = _invert_once(p.premises[0], "succ", f)
            q = _contract_once(q, "ante", f.left)
            q = _contract_once(q, "succ", f.right)
            return _node(rule, target, [q], "succ", f)
        case RuleId.FORALL_R:
            c = p.eigen
            q = _freshen_eigens(p.premises[0], {c})
            q = _invert_once(q, "succ", f, eigen=c)
            q = _contract_once(q, "succ", instantiate(f, Const(c)))
            return _node(rule, target, [q], "succ", f, eigen=c)
        case RuleId.BOT_R:
            # the premise proves the target with an extra bottom on the right
            return _drop_bot_succ(p.premises[0])
    raise TransformError(f"cannot contract past rule {rule.value}")


def _drop_bot_succ(p: Proof) -> Proof:
    """Remove one succedent bottom from every sequent along the proof."""
    s = p.conclusion
    rest = multiset_minus(s.succ, (BOT,))
    if rest is None:
        raise TransformError(f"no bottom to drop in {s}")
    target = Sequent(s.ante, rest)
    rule = p.rule

    if rule in (RuleId.CONTR_L, RuleId.CONTR_R):
        raise TransformError("bottom removal expects a contraction-free proof")
    if rule is RuleId.AXIOM:
        if is_axiom(target, strengthened=True):
            return Proof(RuleId.AXIOM, target)
        if BOT in s.ante and target.succ:
            head = target.succ[0]
            inner_seq = Sequent(s.ante, multiset_minus(target.succ, (head,)) + (BOT,))
            return _node(RuleId.BOT_R, target, [Proof(RuleId.AXIOM, inner_seq)], "succ", head)
        raise TransformError(f"removing the bottom from {s} leaves an unprovable sequent")

    pf = _principal_formula(p) if p.principal is not None else None
    if rule is RuleId.BOT_R and isinstance(pf, Bot):
        # degenerate bottom-for-bottom node: premise proves the same sequent
        return _drop_bot_succ(p.premises[0])

    premises = tuple(_drop_bot_succ(q) for q in p.premises)
    pside = p.principal[0] if p.principal is not None else None
    return _node(rule, target, premises, pside, pf, p.witness, p.eigen)


def eliminate_contractions(p: Proof) -> Proof:
    """Rewrite a starred-calculus proof with contraction nodes into one
    without, preserving the end sequent.  Contractions are removed topmost
    first, so each removal works on a contraction-free subproof."""
    premises = tuple(eliminate_contractions(q) for q in p.premises)
    if p.rule in (RuleId.CONTR_L, RuleId.CONTR_R):
        side = "ante" if p.rule is RuleId.CONTR_L else "succ"
        return _contract_once(premises[0], side, _principal_formula(p))
    if premises == p.premises:
        return p
    return replace(p, premises=premises)


# ---------------------------------------------------------------------------
# starred-rule expansion


def expand_starred(p: Proof) -> Proof:
    """Replace every starred node by its plain decomposition with explicit
    contractions.  Succedent cardinalities are preserved, so single-succedent
    inputs expand to single-succedent outputs."""
    premises = tuple(expand_starred(q) for q in p.premises)
    s = p.conclusion
    rule = p.rule

    if rule is RuleId.AND_L_STAR:
        f = _principal_formula(p)
        rest = multiset_minus(s.ante, (f,))
        step_r = _node(RuleId.AND_L_RIGHT, Sequent(rest + (f.left, f), s.succ), [premises[0]], "ante", f)
        step_l = _node(RuleId.AND_L_LEFT, Sequent(rest + (f, f), s.succ), [step_r], "ante", f)
        return _node(RuleId.CONTR_L, s, [step_l], "ante", f)

    if rule is RuleId.OR_R_STAR:
        f = _principal_formula(p)
        rest = multiset_minus(s.succ, (f,))
        step_r = _node(RuleId.OR_R_RIGHT, Sequent(s.ante, rest + (f.left, f)), [premises[0]], "succ", f)
        step_l = _node(RuleId.OR_R_LEFT, Sequent(s.ante, rest + (f, f)), [step_r], "succ", f)
        return _node(RuleId.CONTR_R, s, [step_l], "succ", f)

    if rule is RuleId.FORALL_L_STAR:
        f = _principal_formula(p)
        inner = _node(
            RuleId.FORALL_L, s.plus(ante=(f,)), [premises[0]], "ante", f, witness=p.witness
        )
        return _node(RuleId.CONTR_L, s, [inner], "ante", f)

    if rule is RuleId.EXISTS_R_STAR:
        f = _principal_formula(p)
        inner = _node(
            RuleId.EXISTS_R, s.plus(succ=(f,)), [premises[0]], "succ", f, witness=p.witness
        )
        return _node(RuleId.CONTR_R, s, [inner], "succ", f)

    if rule is RuleId.IMP_L_STAR_INT:
        f = _principal_formula(p)
        doubled = s.plus(ante=(f,))
        second = weaken(premises[1], extra_ante=(f,))
        inner = _node(RuleId.IMP_L, doubled, [premises[0], second], "ante", f)
        return _node(RuleId.CONTR_L, s, [inner], "ante", f)

    if rule is RuleId.IMP_L_STAR:
        f = _principal_formula(p)
        doubled_ante = s.ante + (f,)
        first = weaken(premises[0], extra_ante=(f,))
        second = weaken(premises[1], extra_ante=(f,))
        cur = _node(RuleId.IMP_L, Sequent(doubled_ante, s.succ + s.succ), [first, second], "ante", f)
        acc = list(s.succ + s.succ)
        for d in s.succ:
            acc.remove(d)
            cur = _node(RuleId.CONTR_R, Sequent(doubled_ante, tuple(acc)), [cur], "succ", d)
        return _node(RuleId.CONTR_L, s, [cur], "ante", f)

    if premises == p.premises:
        return p
    return replace(p, premises=premises)


# ---------------------------------------------------------------------------
# classical to single-succedent extraction


_SOME_GOAL_FORBIDDEN = frozenset({"imp-r", "or-l"})
_ROUND_TRIP_FORBIDDEN = frozenset({"imp-l", "or-r", "exists-r"})
_STARRED_RULES = frozenset(
    {
        RuleId.AND_L_STAR,
        RuleId.OR_R_STAR,
        RuleId.FORALL_L_STAR,
        RuleId.EXISTS_R_STAR,
        RuleId.IMP_L_STAR,
        RuleId.IMP_L_STAR_INT,
    }
)


def _starify(p: Proof) -> Proof:
    """Convert plain rule applications to their starred forms, weakening the
    subproofs so the kept principal is available in the premises."""
    premises = tuple(_starify(q) for q in p.premises)
    s = p.conclusion
    rule = p.rule

    if rule in (RuleId.AND_L_LEFT, RuleId.AND_L_RIGHT):
        f = _principal_formula(p)
        other = f.right if rule is RuleId.AND_L_LEFT else f.left
        q = weaken(premises[0], extra_ante=(other,))
        return _node(RuleId.AND_L_STAR, s, [q], "ante", f)
    if rule is RuleId.FORALL_L:
        f = _principal_formula(p)
        q = weaken(premises[0], extra_ante=(f,))
        return _node(RuleId.FORALL_L_STAR, s, [q], "ante", f, witness=p.witness)
    if rule in (RuleId.OR_R_LEFT, RuleId.OR_R_RIGHT):
        f = _principal_formula(p)
        other = f.right if rule is RuleId.OR_R_LEFT else f.left
        q = weaken(premises[0], extra_succ=(other,))
        return _node(RuleId.OR_R_STAR, s, [q], "succ", f)
    if rule is RuleId.EXISTS_R:
        f = _principal_formula(p)
        q = weaken(premises[0], extra_succ=(f,))
        return _node(RuleId.EXISTS_R_STAR, s, [q], "succ", f, witness=p.witness)
    if rule is RuleId.IMP_L:
        f = _principal_formula(p)
        delta1 = multiset_minus(p.premises[0].conclusion.succ, (f.left,))
        if delta1 is None:
            raise TransformError(f"malformed implication-left node at {s}")
        theta = p.premises[1].conclusion.succ
        q1 = weaken(premises[0], extra_succ=theta)
        q2 = weaken(premises[1], extra_succ=delta1)
        return _node(RuleId.IMP_L_STAR, s, [q1, q2], "ante", f)

    if premises == p.premises:
        return p
    return replace(p, premises=premises)


def _extract_some_goal(p: Proof) -> Proof:
    """Pick one succedent member per branch, turning a classical proof that
    avoids implication-right and disjunction-left into a single-succedent
    proof of one of its goals.  Antecedents are preserved exactly."""
    s = p.conclusion
    rule = p.rule

    if rule is RuleId.AXIOM:
        for g in s.succ:
            if isinstance(g, Top):
                return Proof(RuleId.AXIOM, Sequent(s.ante, (g,)))
        for g in s.succ:
            if g in s.ante:
                return Proof(RuleId.AXIOM, Sequent(s.ante, (g,)))
        raise TransformError(f"axiom node is not closed: {s}")

    if rule is RuleId.CONTR_L:
        f = _principal_formula(p)
        q = _extract_some_goal(p.premises[0])
        return _node(rule, Sequent(s.ante, q.conclusion.succ), [q], "ante", f)
    if rule is RuleId.CONTR_R:
        return _extract_some_goal(p.premises[0])
    if rule is RuleId.BOT_R:
        f = _principal_formula(p)
        q = _extract_some_goal(p.premises[0])
        if q.conclusion.succ[0] in set(s.succ):
            return q
        return _node(rule, Sequent(s.ante, (f,)), [q], "succ", f)

    if rule in (RuleId.AND_L_LEFT, RuleId.AND_L_RIGHT, RuleId.FORALL_L, RuleId.EXISTS_L):
        f = _principal_formula(p)
        q = _extract_some_goal(p.premises[0])
        return _node(
            rule, Sequent(s.ante, q.conclusion.succ), [q], "ante", f, p.witness, p.eigen
        )

    if rule is RuleId.AND_R:
        f = _principal_formula(p)
        others = set(multiset_minus(s.succ, (f,)))
        q1 = _extract_some_goal(p.premises[0])
        if q1.conclusion.succ[0] in others:
            return q1
        q2 = _extract_some_goal(p.premises[1])
        if q2.conclusion.succ[0] in others:
            return q2
        return _node(rule, Sequent(s.ante, (f,)), [q1, q2], "succ", f)

    if rule in (RuleId.OR_R_LEFT, RuleId.OR_R_RIGHT, RuleId.EXISTS_R, RuleId.FORALL_R):
        f = _principal_formula(p)
        others = set(multiset_minus(s.succ, (f,)))
        q = _extract_some_goal(p.premises[0])
        if q.conclusion.succ[0] in others:
            return q
        return _node(rule, Sequent(s.ante, (f,)), [q], "succ", f, p.witness, p.eigen)

    if rule is RuleId.IMP_L:
        f = _principal_formula(p)
        delta1 = multiset_minus(p.premises[0].conclusion.succ, (f.left,))
        if delta1 is None:
            raise TransformError(f"malformed implication-left node at {s}")
        q1 = _extract_some_goal(p.premises[0])
        if q1.conclusion.succ[0] in set(delta1):
            return weaken(q1, extra_ante=(f,))
        q2 = _extract_some_goal(p.premises[1])
        return _node(rule, Sequent(s.ante, q2.conclusion.succ), [q1, q2], "ante", f)

    raise TransformError(f"rule {rule.value} cannot appear in this extraction")


def extract_intuitionistic(p: Proof) -> Proof:
    """Extract a single-succedent proof from an eligible classical proof.

    When the proof avoids implication-right and disjunction-left, the result
    proves ⟨Γ ⊢ G⟩ for some member G of the original succedent.  When it
    avoids implication-left, disjunction-right and exists-right and ends in a
    single-succedent sequent, the result proves that same sequent.  Raises
    TransformError naming the offending rule families otherwise.

    Starred inputs are expanded to their plain decompositions first, so
    search output can be fed in directly.
    """
    if _STARRED_RULES & set(rule_usage(p)):
        p = expand_starred(p)
    fams = {rule_family(r) for r in rule_usage(p)}
    if not fams & _SOME_GOAL_FORBIDDEN:
        return _extract_some_goal(p)
    if not fams & _ROUND_TRIP_FORBIDDEN:
        if len(p.conclusion.succ) != 1:
            raise TransformError(
                "the starred round-trip extraction needs a single-succedent end sequent"
            )
        return expand_starred(eliminate_contractions(_starify(p)))
    blocking = sorted(fams & (_SOME_GOAL_FORBIDDEN | _ROUND_TRIP_FORBIDDEN))
    raise TransformError(f"proof uses {', '.join(blocking)}; no extraction path applies")


# ---------------------------------------------------------------------------
# augmentation


def augment(s: Sequent) -> Sequent:
    """Add the goal's negation-as-implication to the antecedent."""
    if len(s.succ) != 1:
        raise ValueError(f"augmentation needs exactly one succedent formula, got {s}")
    return s.plus(ante=(Imp(s.succ[0], BOT),))
