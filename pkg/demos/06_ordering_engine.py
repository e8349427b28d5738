"""
Comparing terms and checking requirement stores
===============================================

Orderings are specified by kind: a norm, a path ordering with a precedence, or
a set of required properties. Filtered positions are erased before comparing.
"""

from ordaccept import (Axiomatic, NormBased, OrderingConstraintStore, RigidityFilter, Rpo,
                       compare, parse_term, store_consistent)

cons1 = RigidityFilter(frozenset({(".", 2, 1)}))
pairs = [
    (NormBased("list-length", cons1), "[a,b]", "[c]"),
    (NormBased("term-size"), "f(g(X))", "g(X)"),
    (Rpo(), "a", "b"),
    (Rpo(filter=cons1), "[X|T]", "[Y|T]"),
    (Axiomatic(OrderingConstraintStore(subterm=frozenset({("der", 1, 1)}))),
     "der(der(X))", "der(X)"),
]
for spec, s, t in pairs:
    print(f"{type(spec).__name__:10} {s:12} vs {t:8} {compare(spec, parse_term(s), parse_term(t)).value}")

# rigidity makes p(a) and p(b) equivalent, so p(a) > p(b) cannot be required
store = OrderingConstraintStore(ignored=RigidityFilter(frozenset({("p", 1, 1)})),
                                facts=((parse_term("p(a)"), parse_term("p(b)")),))
print("\nstore consistent:", store_consistent(store))
