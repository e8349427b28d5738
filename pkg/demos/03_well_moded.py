"""
Termination of all well-moded goals
===================================

perm/ap1/ap2 calls two appends before recursing. Reasoning about each append
separately is not enough; grouping the two calls into one synthetic predicate is.
"""

from ordaccept import (SearchConfig, corpus_path, parse_file, parse_query, prove_well_moded,
                       unfold_fold_group)

program = parse_file(corpus_path("perm_ap"))

grouped = unfold_fold_group(program, parse_query("ap2(V,[H|U],L), ap1(V,U,W)"))
print("grouped clauses:")
for line in grouped.render():
    print("  ", line)

for label, strategies in [("chain only", ("option1", "option2", "chain")),
                          ("unfold/fold", ("option1", "unfold-fold"))]:
    out = prove_well_moded(program, None, SearchConfig(strategies=strategies))
    print(f"\n{label}: {out.status}")
    if out.reason:
        print("  reason:", out.reason)
    for rel in out.relations:
        print("  relation:", rel.render())

# p(a) :- q(X) passes an unbound variable into an input position
print("\npa:", prove_well_moded(parse_file(corpus_path("pa"))).reason)
