"""
Lifting a proof to the vanilla meta-interpreter
================================================

A proof for the interpreted program is extended to solve/1 goals, where a
conjunction sits above each of its conjuncts.
"""

from ordaccept import build_report, corpus_path, parse_file, render_report, solve_meta

solve = parse_file(corpus_path("solve"))
for name in ("pairs", "dist", "permute"):
    out = solve_meta(solve, parse_file(corpus_path(name)))
    print(f"--- solve over {name}")
    path = corpus_path(name)
    print(render_report(build_report(out, path, open(path).read(), mode="meta")))
