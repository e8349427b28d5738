import random
import time

import pytest

from ordaccept import (InterargRelation, NormBased, Precedence, Rpo, candidate_relations,
                       prove, prove_well_moded, tp_reduce, verify_relation)
from ordaccept.interarg import bottom_up, holds_ground
from ordaccept.ordering import OrderingConstraintStore, Axiomatic
from ordaccept.search import SearchConfig
from ordaccept.parser import parse_source
from ordaccept.terms import Program, Struct, is_ground

from conftest import entries, load
from oracles import (ELEMENTS, LISTS, ground_atoms, list_length, lpo, sample_next_level,
                     satisfies)

R_DELETE = InterargRelation.single(("delete", 3), 2, ">", 3)
R_D = InterargRelation.single(("d", 2), 1, ">", 2)
CONS2 = frozenset({(".", 2, 2)})


def test_candidates_demand_first():
    assert candidate_relations(("delete", 3), [(2, 3)])[0] == R_DELETE
    ap1 = candidate_relations(("ap1", 3), [(3, 1)])
    assert InterargRelation.single(("ap1", 3), 3, ">=", 1) in ap1[:2]
    assert candidate_relations(("p", 1)) == []


def test_candidates_complete():
    rels = candidate_relations(("q", 3))
    assert len(rels) == 3 * 2 * 2
    assert len(set(rels)) == len(rels)


def test_reduce_delete():
    red = tp_reduce(R_DELETE, load("permute"))
    assert red.render() == ["[t1|t2] > t2", "t3 > t4 => [t2|t3] > [t2|t4]"]


def test_reduce_derivative():
    red = tp_reduce(R_D, load("derivative"))
    assert len(red.implications) == 5
    assert "der(t1) > t3 & der(t3) > t2 => der(der(t1)) > t2" in red.render()


def test_reduce_trivial_relation():
    rel = InterargRelation.single(("delete", 3), 1, "~", 1)
    red = tp_reduce(rel, load("permute"))
    assert red.render() == ["t1 ~ t1", "t1 ~ t1 => t1 ~ t1"]
    assert verify_relation(red, NormBased("list-length")).ok


def test_one_implication_per_clause_and_disjunct():
    rel = InterargRelation(("delete", 3), ((R_DELETE.disjuncts[0][0],),
                                           (InterargRelation.single(("delete", 3), 2, ">=", 3)
                                            .disjuncts[0][0],)))
    assert len(tp_reduce(rel, load("permute")).implications) == 2 * 2


def test_verify_delete():
    red = tp_reduce(R_DELETE, load("permute"))
    store = OrderingConstraintStore(monotone=CONS2, subterm=CONS2)
    assert verify_relation(red, Axiomatic(store)).ok
    cons1 = NormBased("term-size").filter.__class__(frozenset({(".", 2, 1)}))
    assert verify_relation(red, NormBased("term-size", cons1)).ok
    assert verify_relation(red, NormBased("term-size")).ok


def test_verify_derivative_with_der_maximal():
    red = tp_reduce(R_D, load("derivative"))
    der = ("der", 1)
    edges = {(der, g) for g in [("*", 2), ("+", 2), ("0", 0), ("1", 0)]} | {(("*", 2), ("+", 2))}
    assert verify_relation(red, Rpo(Precedence(frozenset(edges)))).ok


def test_verify_reports_failing_implication():
    p = load("incomplete")
    red = tp_reduce(InterargRelation.single(("q", 2), 1, ">", 2), p)
    res = verify_relation(red, Rpo())
    assert not res.ok
    assert res.failing.render() == "a > b"


# --- oracle equivalence ------------------------------------------------------------

def _lpo_for(spec):
    return lpo(spec.precedence.greater)


def test_delete_relation_on_derivable_atoms():
    p, e, g = entries("permute")
    out = prove(p, e, g)
    assert out.proved and R_DELETE in out.relations
    atoms = ground_atoms(p, ("delete", 3), 5, LISTS + ELEMENTS)
    assert atoms
    for a in atoms:
        assert satisfies(a, R_DELETE, lambda s, t: list_length(s) > list_length(t),
                         lambda s, t: list_length(s) >= list_length(t)), a
        assert holds_ground(out.witness, a, R_DELETE, p.predicates())


def _derivative_with_numbers():
    p = load("derivative")
    return Program(tuple(p.clauses) + tuple(parse_source("number(0). number(1).").clauses))


def test_derivative_relation_on_derivable_atoms():
    p, e, g = entries("derivative")
    out = prove(p, e, g)
    assert out.proved
    gt = _lpo_for(out.witness)
    ge = lambda s, t: s == t or gt(s, t)
    level4 = bottom_up(_derivative_with_numbers(), 4)
    atoms = [a for a in level4 if a.indicator == ("d", 2)]
    assert len(atoms) > 6000 and all(is_ground(a) for a in atoms)
    for a in atoms:
        assert satisfies(a, R_D, gt, ge), a
    # one more level is about 10^8 atoms; sample it instead
    rng = random.Random(5)
    for a in sample_next_level(_derivative_with_numbers(), level4, 20000, rng):
        if a.indicator == ("d", 2):
            assert satisfies(a, R_D, gt, ge), a
    for a in rng.sample(atoms, 300):
        assert holds_ground(out.witness, a, R_D, p.predicates())


@pytest.mark.xfail(raises=RuntimeError, strict=True,
                   reason="exhaustive depth-5 evaluation of the derivative program is ~10^8 atoms")
def test_derivative_exhaustive_depth_five():
    bottom_up(_derivative_with_numbers(), 5, limit=200_000)


def test_append_relations_verifier_agrees_with_oracle():
    started = time.monotonic()
    p = load("perm_ap")
    out = prove_well_moded(p, None, SearchConfig(strategies=("option1", "unfold-fold")))
    assert out.proved
    length_gt = lambda s, t: list_length(s) > list_length(t)
    length_ge = lambda s, t: list_length(s) >= list_length(t)
    checks = [InterargRelation.single(("ap2", 3), 3, ">", 1),
              InterargRelation.single(("ap2", 3), 3, ">=", 1),
              InterargRelation.single(("ap1", 3), 3, ">=", 1),
              InterargRelation.single(("ap1", 3), 3, ">=", 2)]
    specs = [out.witness, NormBased("list-length")]
    for rel in checks:
        atoms = ground_atoms(p, rel.pred, 5, LISTS + ELEMENTS)
        oracle = all(satisfies(a, rel, length_gt, length_ge) for a in atoms)
        for spec in specs:
            if verify_relation(tp_reduce(rel, p), spec, p.predicates()).ok:
                assert oracle, (rel.render(), spec)
                assert all(holds_ground(spec, a, rel, p.predicates()) for a in atoms)
    # the ap2 half of the documented chain assignment is not a model
    bad = checks[0]
    assert Struct("ap2", (Struct("[]"),) * 3) in ground_atoms(p, bad.pred, 1, LISTS)
    assert not any(verify_relation(tp_reduce(bad, p), spec, p.predicates()).ok for spec in specs)
    assert all(verify_relation(tp_reduce(rel, p), NormBased("list-length"), p.predicates()).ok
               for rel in checks[1:])
    assert time.monotonic() - started < 30
