"""Proof objects and proof checking for the sequent calculi.

A proof is a tree of rule applications.  Each node records its conclusion
sequent, the rule used, which formula was principal (side and index into the
canonical sequent), plus a witness term or eigenvariable name where the rule
needs one.  `check_proof` replays the tree bottom-up against one of the
calculus classes:

    c           classical multiset calculus with explicit contraction
    i           the same rules restricted to singleton succedents
    o           class i plus goal-directedness: a compound succedent formula
                must be introduced by its right rule
    cstar       contraction-free classical calculus (starred left/right rules
                keep or re-add their principal as needed)
    istar       contraction-free singleton-succedent calculus
    ig / og     class i / o with the disjunction-left rule replaced by a
                restart-aware variant and an explicit restart rule targeting
                a fixed goal formula
    mi-or       contraction-free multi-succedent calculus whose disjunction-left,
                implication-right rules force singleton premises
    mi-forall   same idea with forall-right instead of disjunction-left
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

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
    format_term,
    free_symbols,
    instantiate,
    metas_in,
    multiset_minus,
    multiset_union,
)


class RuleId(enum.Enum):
    AXIOM = "axiom"
    CONTR_L = "contr-l"
    CONTR_R = "contr-r"
    BOT_R = "bot-r"
    AND_L_LEFT = "and-l-left"
    AND_L_RIGHT = "and-l-right"
    OR_L = "or-l"
    AND_R = "and-r"
    OR_R_LEFT = "or-r-left"
    OR_R_RIGHT = "or-r-right"
    IMP_L = "imp-l"
    IMP_R = "imp-r"
    FORALL_L = "forall-l"
    EXISTS_R = "exists-r"
    EXISTS_L = "exists-l"
    FORALL_R = "forall-r"
    AND_L_STAR = "and-l*"
    OR_R_STAR = "or-r*"
    IMP_L_STAR = "imp-l*"
    FORALL_L_STAR = "forall-l*"
    EXISTS_R_STAR = "exists-r*"
    IMP_L_STAR_INT = "imp-l*-int"
    OR_L_RESTART = "or-l-restart"
    RESTART = "restart"
    M_OR_L = "m-or-l"
    M_IMP_R = "m-imp-r"
    M_FORALL_R = "m-forall-r"


_BY_VALUE = {r.value: r for r in RuleId}


def rule_from_string(s: str) -> RuleId:
    try:
        return _BY_VALUE[s]
    except KeyError:
        raise ValueError(f"unknown rule name {s!r}") from None


#: family name used for rule-usage profiles: the two conjunction-left
#: projections count as one rule, likewise disjunction-right injections.
_FAMILY = {
    RuleId.AND_L_LEFT: "and-l",
    RuleId.AND_L_RIGHT: "and-l",
    RuleId.AND_L_STAR: "and-l",
    RuleId.OR_R_LEFT: "or-r",
    RuleId.OR_R_RIGHT: "or-r",
    RuleId.OR_R_STAR: "or-r",
    RuleId.FORALL_L_STAR: "forall-l",
    RuleId.EXISTS_R_STAR: "exists-r",
    RuleId.IMP_L_STAR: "imp-l",
    RuleId.IMP_L_STAR_INT: "imp-l",
}


def rule_family(rule: RuleId) -> str:
    return _FAMILY.get(rule, rule.value)


@dataclass(frozen=True)
class Proof:
    rule: RuleId
    conclusion: Sequent
    premises: tuple["Proof", ...] = ()
    principal: tuple[str, int] | None = None  # ("ante"|"succ", index)
    witness: Term | None = None
    eigen: str | None = None


def proof_height(p: Proof) -> int:
    """Nodes on the longest root-to-leaf path: a lone axiom has height 1."""
    best = 1
    stack = [(p, 1)]
    while stack:
        node, h = stack.pop()
        if not node.premises:
            best = max(best, h)
        for q in node.premises:
            stack.append((q, h + 1))
    return best


def proof_size(p: Proof) -> int:
    n = 0
    stack = [p]
    while stack:
        node = stack.pop()
        n += 1
        stack.extend(node.premises)
    return n


def rule_usage(p: Proof) -> frozenset[RuleId]:
    out: set[RuleId] = set()
    stack = [p]
    while stack:
        node = stack.pop()
        out.add(node.rule)
        stack.extend(node.premises)
    return frozenset(out)


def rule_profile(p: Proof) -> frozenset[str]:
    """Rule families used in p (axiom excluded), for reduction-condition checks."""
    return frozenset(rule_family(r) for r in rule_usage(p) if r is not RuleId.AXIOM)


# ---------------------------------------------------------------------------
# proof classes


_KINDS = ("c", "i", "o", "cstar", "istar", "ig", "og", "mi-or", "mi-forall")

_PLAIN_RULES = frozenset(
    {
        RuleId.AXIOM,
        RuleId.CONTR_L,
        RuleId.CONTR_R,
        RuleId.BOT_R,
        RuleId.AND_L_LEFT,
        RuleId.AND_L_RIGHT,
        RuleId.OR_L,
        RuleId.AND_R,
        RuleId.OR_R_LEFT,
        RuleId.OR_R_RIGHT,
        RuleId.IMP_L,
        RuleId.IMP_R,
        RuleId.FORALL_L,
        RuleId.EXISTS_R,
        RuleId.EXISTS_L,
        RuleId.FORALL_R,
    }
)

_CSTAR_RULES = frozenset(
    {
        RuleId.AXIOM,
        RuleId.BOT_R,
        RuleId.AND_L_STAR,
        RuleId.OR_L,
        RuleId.AND_R,
        RuleId.OR_R_STAR,
        RuleId.IMP_L_STAR,
        RuleId.IMP_R,
        RuleId.FORALL_L_STAR,
        RuleId.EXISTS_R_STAR,
        RuleId.EXISTS_L,
        RuleId.FORALL_R,
    }
)

_ISTAR_RULES = frozenset(
    {
        RuleId.AXIOM,
        RuleId.BOT_R,
        RuleId.AND_L_STAR,
        RuleId.OR_L,
        RuleId.AND_R,
        RuleId.OR_R_LEFT,
        RuleId.OR_R_RIGHT,
        RuleId.IMP_R,
        RuleId.IMP_L_STAR_INT,
        RuleId.FORALL_L_STAR,
        RuleId.EXISTS_R,
        RuleId.EXISTS_L,
        RuleId.FORALL_R,
    }
)

_RULESETS: dict[str, frozenset[RuleId]] = {
    "c": _PLAIN_RULES,
    "i": _PLAIN_RULES,
    "o": _PLAIN_RULES,
    "cstar": _CSTAR_RULES,
    "istar": _ISTAR_RULES,
    "ig": (_PLAIN_RULES - {RuleId.OR_L}) | {RuleId.OR_L_RESTART, RuleId.RESTART},
    "og": (_PLAIN_RULES - {RuleId.OR_L}) | {RuleId.OR_L_RESTART, RuleId.RESTART},
    "mi-or": (_CSTAR_RULES - {RuleId.OR_L, RuleId.IMP_R}) | {RuleId.M_OR_L, RuleId.M_IMP_R},
    "mi-forall": (_CSTAR_RULES - {RuleId.FORALL_R, RuleId.IMP_R}) | {RuleId.M_FORALL_R, RuleId.M_IMP_R},
}

_SINGLETON_KINDS = {"i", "o", "istar", "ig", "og"}
_UNIFORM_KINDS = {"o", "og"}
_RESTART_KINDS = {"ig", "og"}


@dataclass(frozen=True)
class ProofClass:
    """A calculus to check against; restart classes carry their goal formula."""

    kind: str
    goal: Formula | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown proof class {self.kind!r}")
        if self.kind in _RESTART_KINDS and self.goal is None:
            raise ValueError(f"proof class {self.kind!r} needs a goal formula")
        if self.kind not in _RESTART_KINDS and self.goal is not None:
            raise ValueError(f"proof class {self.kind!r} does not take a goal")

    def __str__(self) -> str:
        if self.goal is not None:
            return f"{self.kind}[{format_formula(self.goal)}]"
        return self.kind


CLASSICAL = ProofClass("c")
INTUITIONISTIC = ProofClass("i")
UNIFORM = ProofClass("o")
CLASSICAL_STAR = ProofClass("cstar")
INTUITIONISTIC_STAR = ProofClass("istar")
MULTI_OR = ProofClass("mi-or")
MULTI_FORALL = ProofClass("mi-forall")


def restart_class(goal: Formula, uniform: bool = True) -> ProofClass:
    return ProofClass("og" if uniform else "ig", goal)


# ---------------------------------------------------------------------------
# checking


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    message: str = ""
    path: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def is_axiom(s: Sequent, strengthened: bool = False) -> bool:
    """Closure test: top on the right, or a shared antecedent/succedent formula.

    The standard form only accepts a shared atom or bottom; the strengthened
    form accepts any shared formula.
    """
    for f in s.succ:
        if isinstance(f, Top):
            return True
    succ_set = set(s.succ)
    for f in s.ante:
        if f in succ_set and (strengthened or isinstance(f, (Atom, Bot))):
            return True
    return False


def _uniform_violation(node: Proof) -> str | None:
    succ = node.conclusion.succ
    if len(succ) != 1:
        return "goal-directed proofs need singleton succedents"
    goal = succ[0]
    if isinstance(goal, (Atom, Top, Bot)):
        return None
    wanted = {
        And: {RuleId.AND_R},
        Or: {RuleId.OR_R_LEFT, RuleId.OR_R_RIGHT},
        Imp: {RuleId.IMP_R},
        Forall: {RuleId.FORALL_R},
        Exists: {RuleId.EXISTS_R},
    }[type(goal)]
    if node.rule not in wanted:
        return (
            f"compound goal {format_formula(goal)} must be introduced by its "
            f"right rule, not {node.rule.value}"
        )
    return None


def _principal(node: Proof, side: str) -> Formula | str:
    """The principal formula, or an error message."""
    if node.principal is None:
        return f"rule {node.rule.value} needs a principal formula"
    got_side, index = node.principal
    if got_side != side:
        return f"rule {node.rule.value} expects its principal on the {side} side"
    formulas = node.conclusion.ante if side == "ante" else node.conclusion.succ
    if not 0 <= index < len(formulas):
        return f"principal index {index} out of range"
    return formulas[index]


def _expect_premises(node: Proof, *wanted: Sequent) -> str | None:
    got = tuple(q.conclusion for q in node.premises)
    if got == wanted:
        return None
    want_text = "; ".join(str(s) for s in wanted)
    got_text = "; ".join(str(s) for s in got)
    return f"{node.rule.value}: expected premises [{want_text}], found [{got_text}]"


def _check_node(node: Proof, cls: ProofClass, strengthened: bool) -> str | None:
    """Validate one rule application (premise sequents, not their subtrees)."""
    rule = node.rule
    s = node.conclusion

    if metas_in(s):
        return "sequent contains unresolved metavariables"
    if node.witness is not None and metas_in(node.witness):
        return "witness term contains unresolved metavariables"

    match rule:
        case RuleId.AXIOM:
            if node.premises:
                return "axiom must not have premises"
            if not is_axiom(s, strengthened):
                return f"not an axiom: {s}"
            return None

        case RuleId.RESTART:
            if cls.kind not in _RESTART_KINDS:
                return "restart outside a restart class"
            if len(node.premises) != 1:
                return "restart takes one premise"
            if len(s.succ) != 1:
                return "restart needs a singleton succedent"
            return _expect_premises(node, Sequent(s.ante, (cls.goal,)))

        case RuleId.CONTR_L | RuleId.CONTR_R:
            side = "ante" if rule is RuleId.CONTR_L else "succ"
            f = _principal(node, side)
            if isinstance(f, str):
                return f
            extra = ((f,), ()) if side == "ante" else ((), (f,))
            return _expect_premises(node, s.plus(*extra))

        case RuleId.BOT_R:
            f = _principal(node, "succ")
            if isinstance(f, str):
                return f
            idx = node.principal[1]
            return _expect_premises(node, s.without_succ(idx).plus(succ=(BOT,)))

        case RuleId.AND_L_LEFT | RuleId.AND_L_RIGHT:
            f = _principal(node, "ante")
            if isinstance(f, str):
                return f
            if not isinstance(f, And):
                return f"principal of {rule.value} must be a conjunction"
            kept = f.left if rule is RuleId.AND_L_LEFT else f.right
            idx = node.principal[1]
            return _expect_premises(node, s.without_ante(idx).plus(ante=(kept,)))

        case RuleId.AND_L_STAR:
            f = _principal(node, "ante")
            if isinstance(f, str):
                return f
            if not isinstance(f, And):
                return f"principal of {rule.value} must be a conjunction"
            idx = node.principal[1]
            return _expect_premises(node, s.without_ante(idx).plus(ante=(f.left, f.right)))

        case RuleId.OR_L:
            f = _principal(node, "ante")
            if isinstance(f, str):
                return f
            if not isinstance(f, Or):
                return f"principal of {rule.value} must be a disjunction"
            idx = node.principal[1]
            rest = s.without_ante(idx)
            return _expect_premises(node, rest.plus(ante=(f.left,)), rest.plus(ante=(f.right,)))

        case RuleId.OR_L_RESTART:
            if cls.kind not in _RESTART_KINDS:
                return "or-l-restart outside a restart class"
            f = _principal(node, "ante")
            if isinstance(f, str):
                return f
            if not isinstance(f, Or):
                return f"principal of {rule.value} must be a disjunction"
            idx = node.principal[1]
            rest = s.without_ante(idx)
            return _expect_premises(
                node,
                rest.plus(ante=(f.left,)),
                Sequent(rest.ante + (f.right,), (cls.goal,)),
            )

        case RuleId.AND_R:
            f = _principal(node, "succ")
            if isinstance(f, str):
                return f
            if not isinstance(f, And):
                return f"principal of {rule.value} must be a conjunction"
            idx = node.principal[1]
            rest = s.without_succ(idx)
            return _expect_premises(node, rest.plus(succ=(f.left,)), rest.plus(succ=(f.right,)))

        case RuleId.OR_R_LEFT | RuleId.OR_R_RIGHT:
            f = _principal(node, "succ")
            if isinstance(f, str):
                return f
            if not isinstance(f, Or):
                return f"principal of {rule.value} must be a disjunction"
            kept = f.left if rule is RuleId.OR_R_LEFT else f.right
            idx = node.principal[1]
            return _expect_premises(node, s.without_succ(idx).plus(succ=(kept,)))

        case RuleId.OR_R_STAR:
            f = _principal(node, "succ")
            if isinstance(f, str):
                return f
            if not isinstance(f, Or):
                return f"principal of {rule.value} must be a disjunction"
            idx = node.principal[1]
            return _expect_premises(node, s.without_succ(idx).plus(succ=(f.left, f.right)))

        case RuleId.IMP_L:
            f = _principal(node, "ante")
            if isinstance(f, str):
                return f
            if not isinstance(f, Imp):
                return f"principal of {rule.value} must be an implication"
            if len(node.premises) != 2:
                return "imp-l takes two premises"
            idx = node.principal[1]
            rest = s.without_ante(idx)
            p1, p2 = (q.conclusion for q in node.premises)
            if p1.ante != rest.ante:
                return "imp-l: first premise must keep the remaining antecedent"
            delta1 = multiset_minus(p1.succ, (f.left,))
            if delta1 is None:
                return "imp-l: first premise must add the implication antecedent to the succedent"
            if p2.ante != multiset_union(rest.ante, (f.right,)):
                return "imp-l: second premise must add the implication consequent to the antecedent"
            if multiset_union(delta1, p2.succ) != s.succ:
                return "imp-l: premise succedents must split the conclusion succedent"
            return None

        case RuleId.IMP_L_STAR:
            f = _principal(node, "ante")
            if isinstance(f, str):
                return f
            if not isinstance(f, Imp):
                return f"principal of {rule.value} must be an implication"
            idx = node.principal[1]
            rest = s.without_ante(idx)
            return _expect_premises(
                node,
                Sequent(rest.ante, multiset_union(s.succ, (f.left,))),
                Sequent(multiset_union(rest.ante, (f.right,)), s.succ),
            )

        case RuleId.IMP_L_STAR_INT:
            f = _principal(node, "ante")
            if isinstance(f, str):
                return f
            if not isinstance(f, Imp):
                return f"principal of {rule.value} must be an implication"
            idx = node.principal[1]
            rest = s.without_ante(idx)
            return _expect_premises(
                node,
                Sequent(s.ante, (f.left,)),
                Sequent(multiset_union(rest.ante, (f.right,)), s.succ),
            )

        case RuleId.IMP_R:
            f = _principal(node, "succ")
            if isinstance(f, str):
                return f
            if not isinstance(f, Imp):
                return f"principal of {rule.value} must be an implication"
            idx = node.principal[1]
            return _expect_premises(node, s.without_succ(idx).plus(ante=(f.left,), succ=(f.right,)))

        case RuleId.M_IMP_R:
            f = _principal(node, "succ")
            if isinstance(f, str):
                return f
            if not isinstance(f, Imp):
                return f"principal of {rule.value} must be an implication"
            return _expect_premises(node, Sequent(s.ante + (f.left,), (f.right,)))

        case RuleId.M_OR_L:
            f = _principal(node, "ante")
            if isinstance(f, str):
                return f
            if not isinstance(f, Or):
                return f"principal of {rule.value} must be a disjunction"
            if len(node.premises) != 2:
                return "m-or-l takes two premises"
            idx = node.principal[1]
            rest = s.without_ante(idx)
            p1, p2 = (q.conclusion for q in node.premises)
            if len(p1.succ) != 1 or p1.succ != p2.succ:
                return "m-or-l: premises must share one succedent formula"
            if p1.succ[0] not in s.succ:
                return "m-or-l: the premise goal must occur in the conclusion succedent"
            if p1.ante != multiset_union(rest.ante, (f.left,)):
                return "m-or-l: first premise must replace the principal by its left disjunct"
            if p2.ante != multiset_union(rest.ante, (f.right,)):
                return "m-or-l: second premise must replace the principal by its right disjunct"
            return None

        case RuleId.FORALL_L | RuleId.EXISTS_R | RuleId.FORALL_L_STAR | RuleId.EXISTS_R_STAR:
            on_ante = rule in (RuleId.FORALL_L, RuleId.FORALL_L_STAR)
            keeps = rule in (RuleId.FORALL_L_STAR, RuleId.EXISTS_R_STAR)
            f = _principal(node, "ante" if on_ante else "succ")
            if isinstance(f, str):
                return f
            want_type = Forall if on_ante else Exists
            if not isinstance(f, want_type):
                return f"principal of {rule.value} must be a {want_type.__name__.lower()} formula"
            if node.witness is None:
                return f"rule {rule.value} needs a witness term"
            inst = instantiate(f, node.witness)
            idx = node.principal[1]
            base = s if keeps else (s.without_ante(idx) if on_ante else s.without_succ(idx))
            extra = ((inst,), ()) if on_ante else ((), (inst,))
            return _expect_premises(node, base.plus(*extra))

        case RuleId.EXISTS_L | RuleId.FORALL_R | RuleId.M_FORALL_R:
            on_ante = rule is RuleId.EXISTS_L
            f = _principal(node, "ante" if on_ante else "succ")
            if isinstance(f, str):
                return f
            want_type = Exists if on_ante else Forall
            if not isinstance(f, want_type):
                return f"principal of {rule.value} must be a {want_type.__name__.lower()} formula"
            if not node.eigen:
                return f"rule {rule.value} needs an eigenvariable"
            if node.eigen in free_symbols(s):
                return f"eigenvariable {node.eigen!r} already occurs in the conclusion"
            if cls.kind in _RESTART_KINDS and node.eigen in free_symbols(cls.goal):
                return f"eigenvariable {node.eigen!r} occurs in the restart goal"
            inst = instantiate(f, Const(node.eigen))
            idx = node.principal[1]
            if rule is RuleId.EXISTS_L:
                return _expect_premises(node, s.without_ante(idx).plus(ante=(inst,)))
            if rule is RuleId.FORALL_R:
                return _expect_premises(node, s.without_succ(idx).plus(succ=(inst,)))
            return _expect_premises(node, Sequent(s.ante, (inst,)))

    return f"rule {rule.value} not handled"


def check_proof(proof: Proof, cls: ProofClass, strengthened_axioms: bool = False) -> CheckReport:
    """Validate a proof tree against a calculus class.

    Returns a report whose truth value says whether the proof is valid; on
    failure the report carries the first violating node as a path of premise
    indices from the root.
    """
    allowed = _RULESETS[cls.kind]
    singleton = cls.kind in _SINGLETON_KINDS
    uniform = cls.kind in _UNIFORM_KINDS

    stack: list[tuple[Proof, tuple[int, ...]]] = [(proof, ())]
    while stack:
        node, path = stack.pop()
        if node.rule not in allowed:
            return CheckReport(False, f"rule {node.rule.value} is not part of class {cls}", path)
        if singleton and len(node.conclusion.succ) != 1:
            return CheckReport(
                False, f"class {cls} needs singleton succedents, found {node.conclusion}", path
            )
        if uniform:
            msg = _uniform_violation(node)
            if msg:
                return CheckReport(False, msg, path)
        msg = _check_node(node, cls, strengthened_axioms)
        if msg:
            return CheckReport(False, msg, path)
        for i, q in enumerate(node.premises):
            stack.append((q, path + (i,)))
    return CheckReport(True)


# ---------------------------------------------------------------------------
# JSON round trip


def _node_to_json(p: Proof) -> dict:
    return {
        "rule": p.rule.value,
        "sequent": {
            "ante": [format_formula(f) for f in p.conclusion.ante],
            "succ": [format_formula(f) for f in p.conclusion.succ],
        },
        "principal": None if p.principal is None else {"side": p.principal[0], "index": p.principal[1]},
        "witness": None if p.witness is None else format_term(p.witness),
        "eigen": p.eigen,
        "premises": [_node_to_json(q) for q in p.premises],
    }


def proof_to_json(p: Proof, cls: ProofClass) -> dict:
    doc = {"class": cls.kind}
    if cls.goal is not None:
        doc["goal"] = format_formula(cls.goal)
    doc.update(_node_to_json(p))
    return doc


def _node_from_json(data: dict, parse_formula, parse_term) -> Proof:
    try:
        rule = rule_from_string(data["rule"])
        seq = data["sequent"]
        conclusion = Sequent(
            tuple(parse_formula(f) for f in seq["ante"]),
            tuple(parse_formula(f) for f in seq["succ"]),
        )
        principal = data.get("principal")
        if principal is not None:
            side, index = principal["side"], principal["index"]
            if side not in ("ante", "succ") or not isinstance(index, int):
                raise ValueError(f"bad principal {principal!r}")
            principal = (side, index)
        witness = data.get("witness")
        if witness is not None:
            witness = parse_term(witness)
        eigen = data.get("eigen")
        if eigen is not None and not isinstance(eigen, str):
            raise ValueError(f"bad eigenvariable {eigen!r}")
        premises = tuple(_node_from_json(q, parse_formula, parse_term) for q in data.get("premises", ()))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed proof node: {exc}") from exc
    return Proof(rule, conclusion, premises, principal, witness, eigen)


def proof_from_json(data: dict) -> tuple[Proof, ProofClass]:
    from .parser import parse_formula, parse_term

    if not isinstance(data, dict):
        raise ValueError("proof document must be a JSON object")
    kind = data.get("class")
    if kind not in _KINDS:
        raise ValueError(f"unknown proof class {kind!r}")
    goal = data.get("goal")
    cls = ProofClass(kind, parse_formula(goal) if goal is not None else None)
    return _node_from_json(data, parse_formula, parse_term), cls


def dump_proof(p: Proof, cls: ProofClass, indent: int | None = 2) -> str:
    return json.dumps(proof_to_json(p, cls), indent=indent)


def load_proof(text: str) -> tuple[Proof, ProofClass]:
    return proof_from_json(json.loads(text))
