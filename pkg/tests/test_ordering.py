from ordaccept import (Axiomatic, CompareResult, NormBased, OrderingConstraintStore, Precedence,
                       RigidityFilter, Rpo, compare, is_rigid_on, parse_source, parse_term,
                       store_consistent, TypeGrammar, infer_call_set, rigidity_filter)
from ordaccept.abstract import VAR, CallPattern, ground_of

from conftest import entries

GT, EQ, UNKNOWN = CompareResult.GT, CompareResult.EQ, CompareResult.UNKNOWN
MUL, ADD = ("*", 2), ("+", 2)


def test_rpo_distributivity():
    spec = Rpo(Precedence(frozenset({(MUL, ADD)})))
    assert compare(spec, parse_term("T1*(T2+T3)"), parse_term("T1*T2 + T1*T3")) == GT


def test_subterm_any_spec():
    s, t = parse_term("der(der(X))"), parse_term("der(X)")
    store = OrderingConstraintStore(subterm=frozenset({("der", 1, 1)}))
    for spec in (Rpo(), NormBased("term-size"), Axiomatic(store)):
        assert compare(spec, s, t) == GT


def test_rpo_incomparable_constants():
    assert compare(Rpo(), parse_term("a"), parse_term("b")) == UNKNOWN


def test_list_length_with_cons_filter():
    spec = NormBased("list-length", RigidityFilter(frozenset({(".", 2, 1)})))
    assert compare(spec, parse_term("[a,b]"), parse_term("[c]")) == GT


def test_filtered_atoms_equivalent():
    spec = Rpo(filter=RigidityFilter(frozenset({("p", 1, 1)})))
    assert compare(spec, parse_term("p(a)"), parse_term("p(b)"), [("p", 1)]) == EQ


def test_rigid_on_permute_calls():
    p, e, g = entries("permute")
    flt = rigidity_filter(infer_call_set(p, e, g), g)
    spec = Rpo(filter=flt)
    for cp in infer_call_set(p, e, g):
        assert is_rigid_on(spec, cp, g)


def test_not_rigid_with_var_and_empty_filter():
    p, e, g = entries("permute")
    assert not is_rigid_on(Rpo(), e[0], g)


def test_ground_pattern_over_var_free_grammar():
    g = TypeGrammar.from_program(parse_source(":- type nat ::= 0 ; s(nat)."))
    assert is_rigid_on(Rpo(), CallPattern(("p", 1), (ground_of("nat"),)), g)
    assert not is_rigid_on(Rpo(), CallPattern(("p", 1), (VAR,)), g)


def test_store_inconsistent_rigidity_clash():
    a, b = parse_term("p(a)"), parse_term("p(b)")
    store = OrderingConstraintStore(ignored=RigidityFilter(frozenset({("p", 1, 1)})),
                                    facts=((a, b),))
    ok, witness = store_consistent(store)
    assert not ok
    assert witness == ["p(a) > p(b)", "p(b) ~ p(a)"]


def test_store_consistency_basic():
    assert store_consistent(OrderingConstraintStore()) == (True, [])
    cyc = OrderingConstraintStore(Precedence(frozenset({(MUL, ADD), (ADD, MUL)})))
    ok, witness = store_consistent(cyc)
    assert not ok and len(witness) == 2
