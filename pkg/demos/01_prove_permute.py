"""
Proving permute/delete terminating
==================================

Walks the rigid pipeline step by step: call set, rigidity filter,
decrease obligations, then the proof search and its report.
"""

from ordaccept import (TypeGrammar, build_report, corpus_path, gen_rigid_obligations,
                       infer_call_set, parse_file, prove, render_report, rigidity_filter)

path = corpus_path("permute")
program = parse_file(path)
grammar = TypeGrammar.from_program(program)
entries = [grammar.pattern(e) for e in program.entries]

# which atoms can be selected when starting from permute(ground(list), var)
calls = infer_call_set(program, entries, grammar)
print("call set:", ", ".join(map(str, calls)))

# positions that may hold variables must be ignored by the ordering
flt = rigidity_filter(calls, grammar)
print("filter:", ", ".join(flt.render()))

for ob in gen_rigid_obligations(program, flt):
    print("obligation:", ob.render())

outcome = prove(program, entries, grammar)
print()
print(render_report(build_report(outcome, path, open(path).read())))
