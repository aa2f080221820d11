"""Sequent calculus toolkit: provers, proof checking, and proof transformations.

The package covers a family of first-order multiset sequent calculi (classical,
intuitionistic, goal-directed, contraction-free and restart variants), with:

* parsing and printing of formulas, sequents and corpus files,
* proof objects with a replay checker per calculus class,
* proof search for each calculus,
* structural transformations between calculi (contraction elimination,
  starred-rule expansion, classical-to-intuitionistic extraction),
* formula-fragment classification and reduction-condition analysis.
"""

from .calculus import (
    CheckReport,
    Proof,
    ProofClass,
    RuleId,
    check_proof,
    dump_proof,
    is_axiom,
    load_proof,
    proof_from_json,
    proof_height,
    proof_size,
    proof_to_json,
    restart_class,
    rule_family,
    rule_from_string,
    rule_profile,
    rule_usage,
)
from .fragments import (
    FragmentId,
    FragmentGuarantee,
    ReductionKind,
    Role,
    classify,
    fragment_guarantee,
    guarantee_for,
    implies_intuitionistic,
    reduction_conditions,
)
from .parser import CorpusEntry, ParseError, parse_corpus, parse_formula, parse_sequent, parse_term
from .search import (
    NotProvedWithinLimits,
    Proved,
    Refuted,
    SearchLimits,
    SearchOutcome,
    Subst,
    herbrandize,
    prove,
    prove_restart,
    unify,
    unify_formulas,
)
from .syntax import (
    BOT,
    TOP,
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
    exists,
    forall,
    format_formula,
    format_sequent,
    format_term,
    instantiate,
    neg,
)
from .transform import (
    TransformError,
    augment,
    eliminate_contractions,
    expand_starred,
    extract_intuitionistic,
    weaken,
)

__all__ = [
    "And",
    "App",
    "Atom",
    "BOT",
    "Bot",
    "Bound",
    "CheckReport",
    "Const",
    "CorpusEntry",
    "Exists",
    "Forall",
    "Formula",
    "FragmentGuarantee",
    "FragmentId",
    "Imp",
    "Meta",
    "NotProvedWithinLimits",
    "Or",
    "ParseError",
    "Proof",
    "ProofClass",
    "Proved",
    "ReductionKind",
    "Refuted",
    "Role",
    "RuleId",
    "SearchLimits",
    "SearchOutcome",
    "Sequent",
    "Subst",
    "Term",
    "TOP",
    "Top",
    "TransformError",
    "Var",
    "augment",
    "check_proof",
    "classify",
    "dump_proof",
    "eliminate_contractions",
    "exists",
    "expand_starred",
    "extract_intuitionistic",
    "forall",
    "format_formula",
    "format_sequent",
    "format_term",
    "fragment_guarantee",
    "guarantee_for",
    "herbrandize",
    "implies_intuitionistic",
    "instantiate",
    "is_axiom",
    "load_proof",
    "neg",
    "parse_corpus",
    "parse_formula",
    "parse_sequent",
    "parse_term",
    "proof_from_json",
    "proof_height",
    "proof_size",
    "proof_to_json",
    "prove",
    "prove_restart",
    "reduction_conditions",
    "restart_class",
    "rule_family",
    "rule_from_string",
    "rule_profile",
    "rule_usage",
    "unify",
    "unify_formulas",
    "weaken",
]

__version__ = "0.1.0"
