from hypothesis import given, settings, strategies as st

from ordaccept import soundness_check
from ordaccept.parser import parse_source

from programs import random_program, random_programs


def test_generator_respects_bounds():
    for _, text, p in random_programs(100):
        preds = p.defined()
        assert 1 <= len(preds) <= 4
        assert all(len(p.clauses_for(q)) <= 3 for q in preds)
        assert len(p.symbols()) <= 5, text


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_proved_programs_terminate(seed):
    text = random_program(seed)
    rep = soundness_check(parse_source(text), max_size=4, budget=100000, max_queries=2000)
    assert rep.ok, (text, rep.alarms[:3])
