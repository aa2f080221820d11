"""Proof checking: rule schemata, class constraints, metrics, JSON round trip."""

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqcalc.calculus import (
    CLASSICAL,
    CLASSICAL_STAR,
    INTUITIONISTIC,
    INTUITIONISTIC_STAR,
    UNIFORM,
    Proof,
    ProofClass,
    RuleId,
    check_proof,
    dump_proof,
    is_axiom,
    load_proof,
    proof_height,
    proof_size,
    restart_class,
    rule_family,
    rule_from_string,
    rule_profile,
    rule_usage,
)
from seqcalc.parser import parse_sequent
from seqcalc.search import Proved, prove, prove_restart
from seqcalc.syntax import (
    And,
    Atom,
    Bot,
    Const,
    Imp,
    Or,
    Sequent,
    Top,
    Var,
    forall,
)

from _oracles import random_propositional_sequent

Q, S, T = Atom("q"), Atom("s"), Atom("t")


def axiom(ante, succ):
    return Proof(RuleId.AXIOM, Sequent(tuple(ante), tuple(succ)))


# ---------------------------------------------------------------------------
# axiom recognition


def test_atomic_axiom():
    assert is_axiom(Sequent((Atom("p", (Const("a"),)),), (Atom("p", (Const("a"),)),)))


def test_shared_compound_needs_strengthening():
    f = And(Atom("p", (Const("a"),)), Q)
    s = Sequent((f,), (f,))
    assert not is_axiom(s)
    assert is_axiom(s, strengthened=True)


def test_top_on_right_closes():
    assert is_axiom(Sequent((), (Top(), Bot())))


def test_shared_bot_closes():
    assert is_axiom(Sequent((Bot(),), (Bot(),)))


def test_unrelated_atoms_do_not_close():
    assert not is_axiom(Sequent((Q,), (S,)), strengthened=True)


# ---------------------------------------------------------------------------
# node-level checking


def test_single_axiom_is_classical():
    assert check_proof(axiom([Q], [Q]), CLASSICAL)


def test_two_formula_succedent_rejected_in_singleton_class():
    rep = check_proof(axiom([Q], [Q, S]), INTUITIONISTIC)
    assert not rep
    assert "singleton" in rep.message


def test_compound_goal_must_match_its_right_rule_in_uniform_class():
    # the node is schema-correct (it passes as a classical inference), but a
    # goal-directed proof may only attack a disjunctive goal with or-r
    seq = Sequent((Imp(Q, S),), (Or(Q, S),))
    node = Proof(
        RuleId.IMP_L,
        seq,
        (axiom([], [Q, Or(Q, S)]), axiom([S], [])),
        principal=("ante", 0),
    )
    rep = check_proof(node, UNIFORM)
    assert not rep and rep.path == ()
    assert "right rule" in rep.message and "imp-l" in rep.message
    rep_c = check_proof(node, CLASSICAL)
    assert not rep_c and rep_c.path != ()  # the root itself is fine classically


def test_starred_rules_confined_to_starred_classes():
    node = Proof(
        RuleId.AND_L_STAR,
        Sequent((And(Q, S),), (Q,)),
        (axiom([Q, S], [Q]),),
        principal=("ante", 0),
    )
    assert check_proof(node, CLASSICAL_STAR)
    rep = check_proof(node, CLASSICAL)
    assert not rep and "and-l*" in rep.message


def test_contraction_rejected_in_starred_classes():
    node = Proof(
        RuleId.CONTR_L,
        Sequent((Q,), (Q,)),
        (axiom([Q, Q], [Q]),),
        principal=("ante", 0),
    )
    assert check_proof(node, CLASSICAL)
    assert not check_proof(node, CLASSICAL_STAR)


def test_wrong_premise_shape_rejected():
    f = And(Q, S)
    node = Proof(
        RuleId.AND_R,
        Sequent((), (f,)),
        (axiom([], [Q]), axiom([], [Q])),  # right premise should conclude s
        principal=("succ", 0),
    )
    rep = check_proof(node, CLASSICAL)
    assert not rep and "expected premises" in rep.message


def test_principal_index_out_of_range():
    node = Proof(RuleId.AND_R, Sequent((), (And(Q, S),)), (), principal=("succ", 3))
    rep = check_proof(node, CLASSICAL)
    assert not rep and "out of range" in rep.message


def test_missing_principal_rejected():
    node = Proof(RuleId.AND_R, Sequent((), (And(Q, S),)), ())
    assert "principal" in check_proof(node, CLASSICAL).message


def test_failure_path_names_the_offending_premise():
    good = axiom([Q], [Q])
    bad = axiom([Q], [S])
    node = Proof(
        RuleId.AND_R,
        Sequent((Q,), (And(Q, S),)),
        (good, bad),
        principal=("succ", 0),
    )
    rep = check_proof(node, CLASSICAL)
    assert not rep and rep.path == (1,)


# ---------------------------------------------------------------------------
# eigenvariable provisos


PX = forall("x", Atom("p", (Var("x"),)))


def _forall_r(conclusion_extra, eigen):
    inst = Atom("p", (Const(eigen),))
    return Proof(
        RuleId.FORALL_R,
        Sequent(conclusion_extra, (PX,)),
        (axiom(conclusion_extra, [inst]),),
        principal=("succ", 0),
        eigen=eigen,
    )


def test_fresh_eigenvariable_accepted():
    node = _forall_r((Atom("p", (Const("b"),)),), "c")
    rep = check_proof(node, CLASSICAL)
    assert not rep.ok and "not an axiom" in rep.message  # leaf fails, rule is fine
    assert rep.path == (0,)


def test_eigenvariable_clash_with_conclusion_rejected():
    node = _forall_r((Atom("p", (Const("a"),)),), "a")
    rep = check_proof(node, CLASSICAL)
    assert not rep and "already occurs" in rep.message


def test_eigenvariable_clash_with_restart_goal_rejected():
    node = _forall_r((), "a")
    cls = ProofClass("og", goal=Atom("p", (Const("a"),)))
    rep = check_proof(node, cls)
    assert not rep and "restart goal" in rep.message


# ---------------------------------------------------------------------------
# restart classes


def test_restart_classes_require_goal():
    with pytest.raises(ValueError):
        ProofClass("og")
    with pytest.raises(ValueError):
        ProofClass("ig")


def test_plain_classes_reject_goal():
    with pytest.raises(ValueError):
        ProofClass("c", goal=Q)


def test_unknown_class_rejected():
    with pytest.raises(ValueError):
        ProofClass("og2")


def test_restart_class_helper():
    assert restart_class(Q).kind == "og"
    assert restart_class(Q, uniform=False).kind == "ig"
    assert str(restart_class(Q)) == "og[q]"


def test_restart_node_reproves_the_goal():
    cls = ProofClass("og", goal=Q)
    node = Proof(RuleId.RESTART, Sequent((Q,), (T,)), (axiom([Q], [Q]),))
    assert check_proof(node, cls)
    assert check_proof(node, ProofClass("ig", goal=Q))
    wrong = ProofClass("og", goal=S)
    assert not check_proof(node, wrong)


def test_plain_or_l_banned_in_restart_classes():
    f = Or(Q, Q)
    node = Proof(
        RuleId.OR_L,
        Sequent((f,), (Q,)),
        (axiom([Q], [Q]), axiom([Q], [Q])),
        principal=("ante", 0),
    )
    assert check_proof(node, CLASSICAL)
    rep = check_proof(node, ProofClass("og", goal=Q))
    assert not rep and "or-l" in rep.message


def test_or_l_restart_second_branch_swaps_goal():
    # antecedent position is multiset-canonical, so look the indexes up
    cls = ProofClass("og", goal=Q)
    f, imp = Or(Q, S), Imp(S, Q)
    conclusion = Sequent((f, imp), (Q,))
    second = Sequent((imp, S), (Q,))
    node = Proof(
        RuleId.OR_L_RESTART,
        conclusion,
        (
            axiom([Q, imp], [Q]),
            Proof(
                RuleId.IMP_L,
                second,
                (axiom([S], [S]), axiom([Q, S], [Q])),
                principal=("ante", second.ante.index(imp)),
            ),
        ),
        principal=("ante", conclusion.ante.index(f)),
    )
    assert check_proof(node, cls)
    # same tree with the restart goal changed: second premise no longer fits
    assert not check_proof(node, ProofClass("og", goal=T))


# ---------------------------------------------------------------------------
# metrics and profiles


def test_height_and_size_of_a_leaf():
    p = axiom([Q], [Q])
    assert proof_height(p) == 1
    assert proof_size(p) == 1


def test_height_takes_the_longest_branch():
    leaf = axiom([Q], [Q])
    tall = Proof(
        RuleId.CONTR_L,
        Sequent((Q,), (Q,)),
        (Proof(RuleId.CONTR_L, Sequent((Q,), (Q,)), (axiom([Q, Q, Q], [Q]),), principal=("ante", 0)),),
        principal=("ante", 0),
    )
    node = Proof(RuleId.AND_R, Sequent((Q,), (And(Q, Q),)), (leaf, tall), principal=("succ", 0))
    assert proof_height(node) == 4
    assert proof_size(node) == 5


def test_rule_usage_is_a_set_of_rule_ids():
    node = Proof(
        RuleId.IMP_R,
        Sequent((), (Imp(Q, Q),)),
        (axiom([Q], [Q]),),
        principal=("succ", 0),
    )
    assert rule_usage(node) == frozenset({RuleId.IMP_R, RuleId.AXIOM})
    assert rule_usage(axiom([Q], [Q])) == frozenset({RuleId.AXIOM})


def test_rule_profile_excludes_axiom_and_merges_families():
    node = Proof(
        RuleId.AND_L_LEFT,
        Sequent((And(Q, S),), (Q,)),
        (axiom([Q], [Q]),),
        principal=("ante", 0),
    )
    assert rule_profile(node) == frozenset({"and-l"})


@pytest.mark.parametrize(
    "rule,family",
    [
        (RuleId.AND_L_LEFT, "and-l"),
        (RuleId.AND_L_RIGHT, "and-l"),
        (RuleId.AND_L_STAR, "and-l"),
        (RuleId.OR_R_LEFT, "or-r"),
        (RuleId.OR_R_STAR, "or-r"),
        (RuleId.IMP_L_STAR, "imp-l"),
        (RuleId.IMP_L_STAR_INT, "imp-l"),
        (RuleId.FORALL_L_STAR, "forall-l"),
        (RuleId.EXISTS_R_STAR, "exists-r"),
        (RuleId.OR_L, "or-l"),
        (RuleId.RESTART, "restart"),
        (RuleId.AXIOM, "axiom"),
    ],
)
def test_rule_family_table(rule, family):
    assert rule_family(rule) == family


def test_rule_name_round_trip():
    for r in RuleId:
        assert rule_from_string(r.value) is r
    with pytest.raises(ValueError):
        rule_from_string("and-l-star")


# ---------------------------------------------------------------------------
# prover output profiles


def test_disjunction_swap_uses_or_rules_on_both_sides():
    res = prove(parse_sequent("q | s |- s | q"), "i")
    assert isinstance(res, Proved)
    fams = {rule_family(r) for r in rule_usage(res.proof)}
    assert {"or-l", "or-r"} <= fams


def test_peirce_uses_both_implication_rules():
    res = prove(parse_sequent("|- ((q => s) => q) => q"), "c")
    assert isinstance(res, Proved)
    fams = {rule_family(r) for r in rule_usage(res.proof)}
    assert {"imp-r", "imp-l"} <= fams


def test_subproof_usage_is_monotone():
    res = prove(parse_sequent("q | s |- s | q"), "i")
    whole = rule_usage(res.proof)

    def walk(node):
        assert rule_usage(node) <= whole
        for p in node.premises:
            walk(p)

    walk(res.proof)


# ---------------------------------------------------------------------------
# class hierarchy on emitted proofs


def test_uniform_proofs_are_intuitionistic_and_classical():
    res = prove(parse_sequent("|- q & s => s & q"), "o")
    assert isinstance(res, Proved)
    assert res.proof_class == UNIFORM
    for cls in (UNIFORM, INTUITIONISTIC, CLASSICAL):
        assert check_proof(res.proof, cls, strengthened_axioms=True)


def test_restart_proofs_check_in_both_restart_classes():
    s = parse_sequent("q | s, q => t, s => t |- t")
    res = prove_restart(s)
    assert isinstance(res, Proved)
    assert res.proof_class.kind == "og"
    goal = res.proof_class.goal
    assert check_proof(res.proof, ProofClass("og", goal), strengthened_axioms=True)
    assert check_proof(res.proof, ProofClass("ig", goal), strengthened_axioms=True)


@given(st.integers(0, 10_000))
def test_random_provable_sequents_check_in_their_declared_class(seed):
    import random

    s = random_propositional_sequent(random.Random(seed))
    for mode in ("c", "i"):
        res = prove(s if mode == "c" else Sequent(s.ante, s.succ[:1]), mode)
        if isinstance(res, Proved):
            assert check_proof(res.proof, res.proof_class, strengthened_axioms=True)


# ---------------------------------------------------------------------------
# JSON round trip


def test_round_trip_plain_class():
    res = prove(parse_sequent("|- ((q => s) => q) => q"), "c")
    text = dump_proof(res.proof, res.proof_class)
    p, cls = load_proof(text)
    assert p == res.proof and cls == res.proof_class


def test_round_trip_restart_class_keeps_goal():
    res = prove_restart(parse_sequent("q | s, q => t, s => t |- t"))
    p, cls = load_proof(dump_proof(res.proof, res.proof_class))
    assert p == res.proof and cls == res.proof_class
    assert cls.goal == Atom("t")


def test_json_schema_keys():
    res = prove_restart(parse_sequent("q | s, q => t, s => t |- t"))
    data = json.loads(dump_proof(res.proof, res.proof_class))
    assert {"rule", "sequent", "principal", "witness", "eigen", "premises", "class", "goal"} <= set(
        data
    )
    assert set(data["sequent"]) == {"ante", "succ"}
    for child in data["premises"]:
        assert {"rule", "sequent", "premises"} <= set(child)
        assert "class" not in child


def test_load_rejects_unknown_rule():
    res = prove(parse_sequent("q |- q"), "c")
    data = json.loads(dump_proof(res.proof, res.proof_class))
    data["rule"] = "axiom2"
    with pytest.raises(ValueError):
        load_proof(json.dumps(data))


def test_quantified_round_trip_keeps_witness_and_eigen():
    res = prove(parse_sequent("forall x. p(x) |- exists y. p(y)"), "c")
    assert isinstance(res, Proved)
    p, cls = load_proof(dump_proof(res.proof, res.proof_class))
    assert p == res.proof and cls == res.proof_class
    used = rule_usage(p)
    assert {rule_family(r) for r in used} & {"forall-l", "exists-r"}
