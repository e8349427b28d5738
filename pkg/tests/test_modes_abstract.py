import random

from hypothesis import given, settings, strategies as st

from ordaccept import (CallPattern, Mode, check_simply_moded, check_well_moded,
                       infer_call_set, parse_source, rigidity_filter, TypeGrammar)
from ordaccept.abstract import TOP, VAR, ground_of
from ordaccept.modes import modes_of
from ordaccept.oracle import QuerySampler, ld_explore, sample_queries
from ordaccept.ordering import erase
from ordaccept.terms import Struct, Var, apply, variables

from conftest import entries, load


def _modes(*specs):
    out = []
    for name, *markers in specs:
        out.append(Mode((name, len(markers)), tuple(markers)))
    return out


def test_perm_ap_well_moded():
    ok, violations = check_well_moded(load("perm_ap"), _modes(
        ("perm", "in", "out"), ("ap1", "in", "in", "out"), ("ap2", "out", "out", "in")))
    assert ok and violations == []


def test_pa_not_well_moded():
    ok, violations = check_well_moded(load("pa"), _modes(("p", "in"), ("q", "in")))
    assert not ok
    assert violations[0].clause == 1
    assert "q" in violations[0].atom


def test_empty_program_well_moded():
    assert check_well_moded(parse_source(""), [])[0]


def test_outdep_not_simply_moded():
    ok, violations = check_simply_moded(load("outdep"), modes_of(load("outdep")))
    assert not ok
    assert "g(X)" in str(violations[0])


def test_permute_simply_moded():
    ok, _ = check_simply_moded(load("permute"), _modes(
        ("permute", "in", "out"), ("delete", "out", "in", "out")))
    assert ok


def test_facts_simply_moded():
    p = parse_source("p(a, b). p(f(X), Y).")
    assert check_simply_moded(p, _modes(("p", "in", "out")))[0]


def test_call_set_permute():
    p, e, g = entries("permute")
    calls = infer_call_set(p, e, g)
    assert set(calls) == {
        CallPattern(("permute", 2), (ground_of("list"), VAR)),
        CallPattern(("delete", 3), (VAR, ground_of("list"), VAR)),
    }


def test_call_set_no_clauses():
    g = TypeGrammar.from_program(parse_source(":- type list ::= [] ; [any|list]."))
    s = [CallPattern(("p", 1), (ground_of("list"),))]
    assert infer_call_set(parse_source(""), s, g) == s


def test_call_set_dist():
    p, e, g = entries("dist")
    assert infer_call_set(p, e, g) == e


def test_rigidity_filters():
    p, e, g = entries("permute")
    assert rigidity_filter(infer_call_set(p, e, g), g).render() == [
        "ignore ./2#1", "ignore delete/3#1", "ignore delete/3#3", "ignore permute/2#2"]
    p, e, g = entries("derivative")
    assert rigidity_filter(infer_call_set(p, e, g), g).render() == ["ignore d/2#2"]
    p, e, g = entries("dist")
    f = rigidity_filter([CallPattern(("dist", 2), (ground_of("expr"), ground_of("expr")))], g)
    assert f.render() == []


def _covers(g, pat, atom) -> bool:
    if pat.pred != atom.indicator:
        return False
    for a, t in zip(pat.args, atom.args):
        if a == VAR:
            if not isinstance(t, Var):
                return False
        elif a != TOP and not g.fits(t, {}, a.type, a.kind == "ground"):
            return False
    return True


def test_call_set_covers_selected_atoms():
    for name, size in (("permute", 3), ("derivative", 2), ("dist", 3)):
        p, e, g = entries(name)
        calls = infer_call_set(p, e, g)
        for q in sample_queries(QuerySampler(e[0], g, size, max_queries=300)):
            seen = []
            ld_explore(p, q, 20000, trace=seen)
            for atom in seen:
                assert any(_covers(g, c, atom) for c in calls), (name, atom)


def test_call_set_monotone_in_entries():
    p, e, g = entries("permute")
    small = infer_call_set(p, [], g)
    big = infer_call_set(p, e, g)
    assert set(small) <= set(big)


def test_rigidity_filter_erases_instantiable_positions():
    p, e, g = entries("permute")
    flt = rigidity_filter(infer_call_set(p, e, g), g)
    rng = random.Random(7)
    for q in sample_queries(QuerySampler(e[0], g, 3)):
        seen = []
        ld_explore(p, q, 20000, trace=seen)
        for atom in seen:
            th = {v: rng.choice([Struct("a"), Struct("f", (Var("Q"),)), Var("R")])
                  for v in variables(atom)}
            assert erase(atom, flt) == erase(apply(atom, th), flt)


# --- well-modedness against a direct evaluation ----------------------------------

def _direct_well_moded(p, table) -> bool:
    for c in p.clauses:
        mh = table[c.head.indicator]
        known = {v for i in mh.inputs() for v in variables(c.head.args[i - 1])}
        for b in c.body:
            mb = table[b.indicator]
            need = {v for i in mb.inputs() for v in variables(b.args[i - 1])}
            if not need <= known:
                return False
            known |= {v for i in mb.outputs() for v in variables(b.args[i - 1])}
        if not {v for i in mh.outputs() for v in variables(c.head.args[i - 1])} <= known:
            return False
    return True


_arg = st.sampled_from(["X", "Y", "Z", "a", "f(X)", "g(Y,Z)"])


@settings(max_examples=400, deadline=None)
@given(st.lists(st.tuples(_arg, _arg, st.lists(st.tuples(st.sampled_from("pq"), _arg, _arg),
                                                 max_size=3)), min_size=1, max_size=3),
       st.sampled_from([("in", "out"), ("out", "in"), ("in", "in"), ("out", "out")]),
       st.sampled_from([("in", "out"), ("out", "in"), ("in", "in"), ("out", "out")]))
def test_well_moded_agrees_with_direct_check(clauses, mp, mq):
    src = []
    for a, b, body in clauses:
        head = f"p({a}, {b})"
        atoms = [f"{n}({x}, {y})" for n, x, y in body]
        src.append(head + (" :- " + ", ".join(atoms) if atoms else "") + ".")
    p = parse_source("\n".join(src))
    table = {("p", 2): Mode(("p", 2), mp), ("q", 2): Mode(("q", 2), mq)}
    assert check_well_moded(p, table)[0] == _direct_well_moded(p, table)
