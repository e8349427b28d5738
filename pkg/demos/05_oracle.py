"""
Checking proofs against bounded execution
=========================================

The oracle runs Prolog's leftmost selection with a node budget. Every query
sampled from the entry patterns of a proved program must finish.
"""

from ordaccept import (QuerySampler, TypeGrammar, corpus_path, ld_explore, parse_file,
                       parse_query, parse_source, sample_queries, soundness_check)

permute = parse_file(corpus_path("permute"))
for q in ("permute([],X)", "permute([a,b],X)", "permute([a,b,c],X)"):
    print(q, "->", ld_explore(permute, parse_query(q)[0], 100000))

pa = parse_file(corpus_path("pa"))
print("p(a) ->", ld_explore(pa, parse_query("p(a)")[0], 1000))

g = TypeGrammar.from_program(permute)
queries = sample_queries(QuerySampler(g.pattern(permute.entries[0]), g, max_size=2))
print("\nsampled:", ", ".join(map(str, queries)))

rep = soundness_check(permute)
print(f"permute: {rep.outcome.status}, {rep.queries} queries, {len(rep.alarms)} alarms")

# a deliberately unsound prover must be caught
loop = parse_source(":- type nat ::= 0 ; s(nat).\n:- entry p(ground(nat)).\np(X) :- p(X).")
broken = soundness_check(loop, budget=1000, fault="drop-strictness")
print(f"with strictness dropped: {broken.outcome.status}, alarms: {broken.alarms[:2]}")
