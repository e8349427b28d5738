import pytest

from ordaccept import (RigidityFilter, chain_decompose, gen_model_obligations, gen_rigid_obligations,
                       infer_call_set, parse_query, parse_source, rigidity_filter,
                       unfold_fold_group)
from ordaccept.interarg import bottom_up
from ordaccept.modes import modes_of
from ordaccept.obligations import NotWellModed, anonymize, join_atoms, split_atom
from ordaccept.terms import apply, dependency_graph, is_ground, match

from conftest import entries, load
from oracles import instances, ELEMENTS, LISTS


def _rigid(name):
    p, e, g = entries(name)
    return p, gen_rigid_obligations(p, rigidity_filter(infer_call_set(p, e, g), g))


def test_permute_obligations():
    p, obs = _rigid("permute")
    rendered = sorted(o.render() for o in obs)
    assert rendered == ["delete(v1,[H|T],v2) ≻ delete(v3,T,v4)", "permute(L,v1) ≻ permute(L1,v2)"]
    perm = next(o for o in obs if o.lhs.name == "permute")
    assert [str(a) for a in perm.premises] == ["delete(El,L,L1)"]


def test_derivative_obligations():
    p, obs = _rigid("derivative")
    assert len(obs) == 6
    assert any(o.render() == "d(der(der(X)),v1) ≻ d(der(DX),v2)" and len(o.premises) == 1
               for o in obs)


def test_non_recursive_program_has_no_obligations():
    p = parse_source("p(X) :- q(X). q(a).")
    assert gen_rigid_obligations(p, RigidityFilter()) == []


def test_obligations_are_within_recursion_classes():
    for name in ("permute", "derivative", "dist", "conf"):
        p, obs = _rigid(name)
        g = dependency_graph(p)
        assert all(g.mutually_recursive(o.lhs.indicator, o.rhs.indicator) for o in obs)


def test_anonymize_idempotent():
    a = parse_query("delete(X, [H|T], T1)")[0]
    pos = {("delete", 3, 1), ("delete", 3, 3)}
    once, _ = anonymize(a, pos)
    twice, _ = anonymize(once, pos)
    assert once == twice
    assert once.args[0] != once.args[2]


def test_model_obligations_perm_ap():
    p = load("perm_ap")
    obs = gen_model_obligations(p, modes_of(p))
    perm = [o for o in obs if o.lhs.name == "perm" and o.rhs.name == "perm"]
    assert len(perm) == 1
    assert perm[0].render() == "perm(L,v1) ≻ perm(W,v2)"
    assert [str(a) for a in perm[0].premises] == ["ap2(V,[H|U],L)", "ap1(V,U,W)"]


def test_model_obligations_reject_pa():
    p = load("pa")
    with pytest.raises(NotWellModed):
        gen_model_obligations(p, modes_of(p))


def test_model_obligations_facts_only():
    p = parse_source(":- mode p(in, out).\np(a, b). p(X, X).")
    assert gen_model_obligations(p, modes_of(p)) == []


def test_chain_perm_ap_documented_sequence():
    p = load("perm_ap")
    ob = next(o for o in gen_model_obligations(p, modes_of(p)) if o.rhs.name == "perm")
    assigns = chain_decompose(ob)
    seqs = [", ".join(str(t) for t in a.terms) for a in assigns]
    assert seqs[0] == "L, V, W"
    first = assigns[0].render()
    assert "ap2/3: #3 > #1" in first
    for a in assigns:
        assert sum(l.strict for l in a.links) == 1


def test_chain_single_premise_is_option_two():
    p, obs = _rigid("permute")
    ob = next(o for o in obs if o.lhs.name == "permute")
    first = chain_decompose(ob)[0]
    assert len(first.links) == 1
    assert first.relations[("delete", 3)].render() == "delete/3: #2 > #3"


def test_unfold_fold_perm_ap():
    gp = unfold_fold_group(load("perm_ap"), parse_query("ap2(V,[H|U],L), ap1(V,U,W)"))
    assert gp.pred == ("ap2&ap1", 6)
    assert len(gp.clauses) == 2
    base = gp.render()[0]
    assert base == "(ap2([],[H|L2],[H|L2]), ap1([],L2,L2))."
    assert gp.clauses[1].body[0].indicator == ("ap2&ap1", 6)


def test_unfold_fold_undefined_predicate():
    with pytest.warns(UserWarning):
        gp = unfold_fold_group(load("perm_ap"), parse_query("ap2(V,[H|U],L), zz(V)"))
    assert gp.clauses == [] and gp.warnings


def _one_step(clauses, atom, model) -> bool:
    for c in clauses:
        s = match(c.head, atom)
        if s is None:
            continue
        body = [apply(b, s) for b in c.body]
        if all(is_ground(b) for b in body) and all(b in model for b in body):
            return True
    return False


def test_unfold_fold_preserves_one_step_semantics():
    p = load("perm_ap")
    conj = parse_query("ap2(V,[H|U],L), ap1(V,U,W)")
    gp = unfold_fold_group(p, conj)
    model = {a for a in bottom_up(p, 3) for a in instances(a, LISTS + ELEMENTS)}
    grouped_model = set()
    # ground conjunction instances held in the model, as grouped atoms
    for x in instances(join_atoms(conj), LISTS + ELEMENTS, limit=20000):
        parts = split_atom(x, conj)
        if all(q in model for q in parts):
            grouped_model.add(x)
    checked = 0
    for x in instances(join_atoms(conj), LISTS[:2] + ELEMENTS[:1], limit=20000):
        parts = split_atom(x, conj)
        images = all(_one_step(p.clauses, q, model) for q in parts)
        folded = _one_step(gp.clauses, x, model | grouped_model)
        assert images == folded, x
        checked += 1
    assert checked > 100
