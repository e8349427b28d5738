"""
Path orderings with a searched precedence
=========================================

The distributive-law and derivative programs need a recursive path ordering.
The search grows a precedence from the comparisons that failed.
"""

from ordaccept import (Precedence, Rpo, TypeGrammar, compare, corpus_path, parse_file,
                       parse_term, prove)

# the key comparison for dist, with * above +
spec = Rpo(Precedence(frozenset({(("*", 2), ("+", 2))})))
print("x*(y+z) vs x*y+x*z:", compare(spec, parse_term("X*(Y+Z)"), parse_term("X*Y + X*Z")).value)
print("same without precedence:",
      compare(Rpo(), parse_term("X*(Y+Z)"), parse_term("X*Y + X*Z")).value)

for name in ("dist", "derivative"):
    p = parse_file(corpus_path(name))
    g = TypeGrammar.from_program(p)
    out = prove(p, [g.pattern(e) for e in p.entries], g)
    print(f"\n{name}: {out.status}")
    print("  precedence:", ", ".join(out.witness.precedence.render()))
    for rel in out.relations:
        print("  relation:", rel.render())
