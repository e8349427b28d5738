import pytest

from ordaccept import (Rpo, SearchConfig, infer_call_set, is_rigid_on, parse_query, parse_source,
                       prove, prove_well_moded, solve_meta, TypeGrammar)
from ordaccept.interarg import InterargRelation, facts_for, tp_reduce, verify_relation
from ordaccept.ordering import Axiomatic, Reasoner, render_spec
from ordaccept.search import LiftedReasoner, clause_facts

from conftest import entries, load

DER, MUL, ADD = ("der", 1), ("*", 2), ("+", 2)


def test_prove_permute():
    p, e, g = entries("permute")
    out = prove(p, e, g)
    assert out.proved
    assert isinstance(out.witness, Axiomatic)
    props = render_spec(out.witness)["properties"]
    assert {"subterm ./2#2", "monotone ./2#2", "monotone delete/3#2"} <= set(props)
    assert InterargRelation.single(("delete", 3), 2, ">", 3) in out.relations


def test_prove_dist_rpo():
    p, e, g = entries("dist")
    out = prove(p, e, g)
    assert out.proved and isinstance(out.witness, Rpo)
    assert out.witness.precedence.greater(MUL, ADD)


def test_prove_derivative_der_maximal():
    p, e, g = entries("derivative")
    out = prove(p, e, g)
    assert out.proved and isinstance(out.witness, Rpo)
    assert out.witness.precedence.maximal(DER)
    assert InterargRelation.single(("d", 2), 1, ">", 2) in out.relations


def test_incompleteness_example_unknown():
    p, e, g = entries("incomplete")
    out = prove(p, e, g)
    assert out.status == "unknown"
    assert "ignored" in out.reason


def test_conf_unknown():
    p, e, g = entries("conf")
    assert prove(p, e, g).status == "unknown"


def test_well_moded_perm_ap():
    out = prove_well_moded(load("perm_ap"))
    assert out.proved
    assert any(d.strategy == "unfold-fold" for d in out.discharged)


def test_well_moded_pa_rejected():
    out = prove_well_moded(load("pa"))
    assert out.status == "unknown" and "not well-moded" in out.reason


def test_well_moded_output_dependence():
    out = prove_well_moded(load("outdep"))
    assert out.status == "unknown"
    assert "ignored" in out.reason


def test_meta_pairs():
    out = solve_meta(load("solve"), load("pairs"))
    assert out.proved and out.kind_label == "lifted"


def test_meta_empty_and_dist():
    assert solve_meta(load("solve"), load("empty")).proved
    assert solve_meta(load("solve"), load("dist")).proved


def test_meta_requires_vanilla_interpreter():
    p = parse_source("solve(true). solve(A) :- solve(A).")
    assert solve_meta(p, load("pairs")).status == "unknown"


def test_lifted_conjunction_comparison():
    p, e, g = entries("pairs")
    out = prove(p, e, g)
    r = LiftedReasoner(out.witness, predicates=p.predicates())
    lhs = parse_query("p([X,Y|T])")[0]
    rhs = parse_query("(p([Y|T]), p(T))")[0]
    assert r.greater(lhs, rhs)
    assert not r.greater(rhs, lhs)
    body = clause_facts(p)[0].head.args[1]
    assert r.greater(lhs, body)


def test_witness_is_rigid_and_rechecks():
    for name in ("permute", "dist", "derivative"):
        p, e, g = entries(name)
        out = prove(p, e, g)
        assert out.proved
        for cp in infer_call_set(p, e, g):
            assert is_rigid_on(out.witness, cp, g), (name, cp)
        by_pred = {r.pred: r for r in out.relations}
        for d in out.discharged:
            facts = [f for a in d.obligation.premises if a.indicator in by_pred
                     for f in facts_for(a, by_pred[a.indicator].disjuncts[0])]
            r = Reasoner(out.witness, facts, p.predicates())
            assert r.greater(d.obligation.lhs, d.obligation.rhs), d.obligation.render()
        for rel in out.relations:
            assert verify_relation(tp_reduce(rel, p), out.witness, p.predicates()).ok


def test_deterministic_outcomes():
    for name in ("permute", "dist", "derivative", "conf"):
        p, e, g = entries(name)
        a, b = prove(p, e, g), prove(p, e, g)
        assert (a.status, a.witness, a.relations, a.reason) == \
            (b.status, b.witness, b.relations, b.reason)


def test_larger_budgets_keep_proofs():
    for name in ("permute", "dist", "derivative"):
        p, e, g = entries(name)
        small = prove(p, e, g, SearchConfig(max_precedences=16, max_chain_backtracks=8))
        big = prove(p, e, g, SearchConfig(max_precedences=256, max_chain_backtracks=512,
                                          timeout_ms=60000))
        assert not small.proved or big.proved


def test_restricted_menu():
    p, e, g = entries("dist")
    assert prove(p, e, g, SearchConfig(menu=("list-length",))).status == "unknown"


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(max_precedences=0)
    with pytest.raises(ValueError):
        SearchConfig(menu=("lexicographic",))


def test_grammar_defaults_from_program():
    p = load("permute")
    assert prove(p, p.entries).proved
    assert TypeGrammar.from_program(p).names
