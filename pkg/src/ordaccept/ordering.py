"""Candidate well-founded quasi-orderings on terms and atoms.

Three kinds are supported: norm-based orderings (list-length, term-size), the
recursive path ordering with lexicographic status, and an axiomatic store
that only records which ordering properties a proof relies on. All of them
compare terms after *erasure*: every argument at a filtered position is
replaced by the same placeholder, which makes the ordering invariant there.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, replace
from typing import Iterable, Union

from .abstract import RigidityFilter, TypeGrammar, CallPattern, rigidity_filter
from .terms import CONS, Struct, Var, format_term, subterms

HOLE = Struct("_")


class CompareResult(enum.Enum):
    GT = "StrictlyGreater"
    EQ = "Equivalent"
    UNKNOWN = "Unknown"


def sym(t: Struct) -> tuple:
    return (t.name, len(t.args))


def sym_str(s: tuple) -> str:
    return f"{s[0]}/{s[1]}"


@dataclass(frozen=True)
class Precedence:
    """Strict partial order on symbols, stored as a set of ``(f, g)`` edges meaning f > g."""

    edges: frozenset = frozenset()

    def greater(self, f, g) -> bool:
        if f == g:
            return False
        seen, stack = {f}, [f]
        while stack:
            x = stack.pop()
            for a, b in self.edges:
                if a == x and b not in seen:
                    if b == g:
                        return True
                    seen.add(b)
                    stack.append(b)
        return False

    def add(self, f, g) -> "Precedence | None":
        if f == g or self.greater(g, f):
            return None
        return Precedence(self.edges | {(f, g)})

    def acyclic(self) -> bool:
        return not any(self.greater(b, a) or a == b for a, b in self.edges)

    def render(self) -> list:
        return [f"{sym_str(a)} > {sym_str(b)}" for a, b in sorted(self.edges)]

    def maximal(self, f) -> bool:
        syms = {x for e in self.edges for x in e}
        return all(self.greater(f, g) for g in syms if g != f)


@dataclass(frozen=True)
class OrderingConstraintStore:
    """Accumulated requirements on an ordering that is never constructed."""

    precedence: Precedence = Precedence()
    monotone: frozenset = frozenset()
    subterm: frozenset = frozenset()
    ignored: RigidityFilter = RigidityFilter()
    facts: tuple = ()  # (s, t) meaning s > t

    def properties(self) -> list:
        out = [f"subterm {n}/{a}#{i}" for n, a, i in sorted(self.subterm)]
        out += [f"monotone {n}/{a}#{i}" for n, a, i in sorted(self.monotone)]
        return out


@dataclass(frozen=True)
class NormBased:
    norm: str  # 'list-length' | 'term-size'
    filter: RigidityFilter = RigidityFilter()
    kind = "norm"


@dataclass(frozen=True)
class Rpo:
    precedence: Precedence = Precedence()
    filter: RigidityFilter = RigidityFilter()
    kind = "rpo"


@dataclass(frozen=True)
class Axiomatic:
    store: OrderingConstraintStore = OrderingConstraintStore()
    kind = "axiomatic"

    @property
    def filter(self) -> RigidityFilter:
        return self.store.ignored


OrderingSpec = Union[NormBased, Rpo, Axiomatic]


def with_filter(spec: OrderingSpec, f: RigidityFilter) -> OrderingSpec:
    if isinstance(spec, Axiomatic):
        return Axiomatic(replace(spec.store, ignored=f))
    return replace(spec, filter=f)


def spec_kind(spec: OrderingSpec) -> str:
    if isinstance(spec, NormBased):
        return f"norm({spec.norm})"
    return spec.kind


def render_spec(spec: OrderingSpec) -> dict:
    prec = spec.precedence if isinstance(spec, Rpo) else (
        spec.store.precedence if isinstance(spec, Axiomatic) else Precedence())
    props = spec.store.properties() if isinstance(spec, Axiomatic) else []
    return {
        "kind": spec_kind(spec),
        "precedence": prec.render(),
        "filter": spec.filter.render(),
        "properties": props,
    }


# --- erasure ------------------------------------------------------------------

def erase(t, f: RigidityFilter):
    if isinstance(t, Var) or not t.args:
        return t
    if not f.positions:
        return t
    n = len(t.args)
    return Struct(t.name, tuple(HOLE if (t.name, n, i) in f.positions else erase(a, f)
                                for i, a in enumerate(t.args, 1)))


# --- norms --------------------------------------------------------------------

def norm_form(t, norm: str, atom_level: bool = False) -> tuple:
    """Symbolic norm ``(constant, Counter{var: coefficient})`` of an erased term."""
    c, vs = 0, Counter()
    if atom_level and isinstance(t, Struct):
        for a in t.args:
            ac, av = norm_form(a, norm)
            c += ac
            vs.update(av)
        return c, vs
    if norm == "list-length":
        while isinstance(t, Struct) and t.name == CONS and len(t.args) == 2:
            c += 1
            t = t.args[1]
        if isinstance(t, Var):
            vs[t] += 1
        return c, vs
    for s in subterms(t):
        if isinstance(s, Var):
            vs[s] += 1
        else:
            c += len(s.args)
    return c, vs


def _form_ge(a, b, strict: bool) -> bool:
    if any(a[1][v] < k for v, k in b[1].items()):
        return False
    return a[0] > b[0] if strict else a[0] >= b[0]


# --- reasoning -----------------------------------------------------------------

class Reasoner:
    """Derives ``s > t`` / ``s >= t`` under a spec, optionally from assumed facts.

    Facts are triples ``(a, b, strict)`` over terms; they are erased on entry.
    With ``extensible`` set, an :class:`Axiomatic` spec may record new subterm
    and monotonicity requirements on demand (never at ignored positions).
    """

    FACT_DEPTH = 3

    def __init__(self, spec: OrderingSpec, facts: Iterable = (), predicates: Iterable = (),
                 extensible: bool = False):
        self.spec = spec
        self.filter = spec.filter
        self.facts = [(erase(a, self.filter), erase(b, self.filter), st) for a, b, st in facts]
        self.predicates = frozenset(predicates)
        self.extensible = extensible
        self.wishes: set = set()
        self.used_monotone: set = set()
        self.used_subterm: set = set()
        if isinstance(spec, Axiomatic):
            self.monotone = set(spec.store.monotone)
            self.subterm = set(spec.store.subterm)
        self._memo: dict = {}

    # public entry points take unerased terms
    def greater(self, s, t) -> bool:
        return self.gt(erase(s, self.filter), erase(t, self.filter), 0)

    def greater_eq(self, s, t) -> bool:
        return self.ge(erase(s, self.filter), erase(t, self.filter), 0)

    def equivalent(self, s, t) -> bool:
        return self.eq(erase(s, self.filter), erase(t, self.filter))

    def current_spec(self) -> OrderingSpec:
        if isinstance(self.spec, Axiomatic):
            st = replace(self.spec.store, monotone=frozenset(self.monotone),
                         subterm=frozenset(self.subterm))
            return Axiomatic(st)
        return self.spec

    # -- core relations on erased terms --

    def eq(self, s, t) -> bool:
        if s == t:
            return True
        if isinstance(self.spec, NormBased):
            a = norm_form(s, self.spec.norm, self._is_atom(s))
            b = norm_form(t, self.spec.norm, self._is_atom(t))
            return a == b and a[0] == b[0] and _form_ge(a, b, False) and _form_ge(b, a, False)
        return False

    def ge(self, s, t, depth) -> bool:
        return (self.eq(s, t) or self._norm_ge(s, t) or self.gt(s, t, depth)
                or self._weak_fact_rule(s, t, depth) or self._weak_monotone_rule(s, t, depth))

    def _weak_fact_rule(self, s, t, depth) -> bool:
        if depth >= self.FACT_DEPTH or not self.facts:
            return False
        for a, b, _ in self.facts:
            if (s == a or self.ge(s, a, depth + 1)) and (b == t or self.ge(b, t, depth + 1)):
                return True
        return False

    def _weak_monotone_rule(self, s, t, depth) -> bool:
        # weak monotonicity holds for norms and path orders, not for arbitrary stores
        if isinstance(self.spec, Axiomatic):
            return False
        if not (isinstance(s, Struct) and isinstance(t, Struct)) or sym(s) != sym(t) or not s.args:
            return False
        return all(a == b or self.ge(a, b, depth) for a, b in zip(s.args, t.args))

    def _norm_ge(self, s, t) -> bool:
        """Weak norm comparison; atoms of different predicates are left to subclasses."""
        if not isinstance(self.spec, NormBased):
            return False
        if self._is_atom(s) and self._is_atom(t) and sym(s) != sym(t):
            return False
        a = norm_form(s, self.spec.norm, self._is_atom(s))
        b = norm_form(t, self.spec.norm, self._is_atom(t))
        return _form_ge(a, b, False)

    def gt(self, s, t, depth) -> bool:
        if s == t:
            return False
        key = (s, t, depth)
        if key in self._memo:
            return self._memo[key]
        self._memo[key] = False
        r = self._gt(s, t, depth)
        self._memo[key] = r
        return r

    def _gt(self, s, t, depth) -> bool:
        spec = self.spec
        if isinstance(spec, NormBased):
            a = norm_form(s, spec.norm, self._is_atom(s))
            b = norm_form(t, spec.norm, self._is_atom(t))
            if _form_ge(a, b, True):
                return True
        elif isinstance(spec, Rpo):
            if self._lpo(s, t, depth):
                return True
        else:
            if self._axiomatic(s, t, depth):
                return True
        if not isinstance(spec, Rpo):
            if self._subterm_rule(s, t, depth) or self._monotone_rule(s, t, depth):
                return True
        elif self.facts and self._monotone_rule(s, t, depth):
            return True
        return self._fact_rule(s, t, depth)

    def _is_atom(self, t) -> bool:
        return isinstance(t, Struct) and sym(t) in self.predicates

    def _lpo(self, s, t, depth) -> bool:
        if isinstance(s, Var):
            return False
        if isinstance(t, Var):
            return any(x == t for x in subterms(s)) and s != t
        if s == HOLE:
            return False
        if t == HOLE:
            # the placeholder is the least constant of the precedence
            return True
        if any(a != HOLE and self.ge(a, t, depth) for a in s.args):
            return True
        f, g = sym(s), sym(t)
        if f == g:
            for i, (a, b) in enumerate(zip(s.args, t.args)):
                if a == b:
                    continue
                return self.gt(a, b, depth) and all(self.gt(s, x, depth) for x in t.args[i + 1:])
            return False
        if self.spec.precedence.greater(f, g):
            return all(self.gt(s, x, depth) for x in t.args)
        self.wishes.add((f, g))
        return False

    def _axiomatic(self, s, t, depth) -> bool:
        if isinstance(s, Struct) and isinstance(t, Struct) and s.args and sym(s) != sym(t) \
                and self.spec.store.precedence.greater(sym(s), sym(t)):
            return all(self.gt(s, x, depth) for x in t.args)
        return False

    # property lookups per kind
    def _has_subterm(self, f, i) -> bool:
        pos = (f[0], f[1], i)
        if pos in self.filter.positions:
            return False
        spec = self.spec
        if isinstance(spec, Rpo):
            return True
        if isinstance(spec, NormBased):
            # atoms measure the plain sum of their arguments: weak, never strict
            if f in self.predicates:
                return False
            return spec.norm == "term-size" or (f == (CONS, 2) and i == 2)
        if pos in self.subterm:
            self.used_subterm.add(pos)
            return True
        if self.extensible:
            self.subterm.add(pos)
            self.used_subterm.add(pos)
            return True
        return False

    def _has_monotone(self, f, i) -> bool:
        pos = (f[0], f[1], i)
        if pos in self.filter.positions:
            return False
        spec = self.spec
        if isinstance(spec, Rpo):
            return True
        if isinstance(spec, NormBased):
            return spec.norm == "term-size" or f in self.predicates or (f == (CONS, 2) and i == 2)
        if pos in self.monotone:
            self.used_monotone.add(pos)
            return True
        if self.extensible:
            self.monotone.add(pos)
            self.used_monotone.add(pos)
            return True
        return False

    def _subterm_rule(self, s, t, depth) -> bool:
        if not isinstance(s, Struct) or not s.args:
            return False
        f = sym(s)
        for i, a in enumerate(s.args, 1):
            if a == HOLE:
                continue
            if self.ge(a, t, depth) and self._has_subterm(f, i):
                return True
        return False

    def _monotone_rule(self, s, t, depth) -> bool:
        if not (isinstance(s, Struct) and isinstance(t, Struct)) or sym(s) != sym(t) or not s.args:
            return False
        f = sym(s)
        strict = False
        diffs = [(i, a, b) for i, (a, b) in enumerate(zip(s.args, t.args), 1) if a != b]
        if not diffs:
            return False
        for i, a, b in diffs:
            if self.eq(a, b):
                continue
            if self.gt(a, b, depth):
                strict = True
            elif not self.eq(a, b):
                return False
        if not strict:
            return False
        return all(self.eq(a, b) or self._has_monotone(f, i) for i, a, b in diffs)

    def _fact_rule(self, s, t, depth) -> bool:
        if depth >= self.FACT_DEPTH or not self.facts:
            return False
        for a, b, strict in self.facts:
            if s == a and t == b and strict:
                return True
        for a, b, strict in self.facts:
            s_a = s == a or self.eq(s, a)
            if not s_a and not self.gt(s, a, depth + 1):
                continue
            b_t = b == t or self.eq(b, t)
            if not b_t and not self.gt(b, t, depth + 1):
                continue
            if strict or not s_a or not b_t:
                return True
        return False


def compare(spec: OrderingSpec, s, t, predicates: Iterable = ()) -> CompareResult:
    """Compare two terms or atoms under ``spec`` without extra assumptions."""
    r = Reasoner(spec, predicates=predicates)
    es, et = erase(s, spec.filter), erase(t, spec.filter)
    if r.gt(es, et, 0):
        return CompareResult.GT
    if es == et:
        return CompareResult.EQ
    if isinstance(spec, NormBased) and isinstance(es, Struct) and isinstance(et, Struct) \
            and sym(es) == sym(et) and r.eq(es, et):
        return CompareResult.EQ
    return CompareResult.UNKNOWN


def is_rigid_on(spec: OrderingSpec, pattern: CallPattern, g: TypeGrammar) -> bool:
    need = rigidity_filter([pattern], g).positions
    return need <= spec.filter.positions


def store_consistent(store: OrderingConstraintStore) -> tuple[bool, list]:
    """Check a constraint store; returns ``(ok, witness)``."""
    if not store.precedence.acyclic():
        for a, b in sorted(store.precedence.edges):
            if store.precedence.greater(b, a) or a == b:
                return False, [f"{sym_str(a)} > {sym_str(b)}", f"{sym_str(b)} > {sym_str(a)}"]
    clash = (store.monotone | store.subterm) & store.ignored.positions
    if clash:
        n, a, i = sorted(clash)[0]
        return False, [f"{n}/{a}#{i} is both ignored and required"]
    f = store.ignored
    nodes: dict = {}
    edges: dict = {}
    for s, t in store.facts:
        es, et = erase(s, f), erase(t, f)
        nodes.setdefault(es, s)
        nodes.setdefault(et, t)
        edges.setdefault(es, []).append((et, s, t))
    for start in edges:
        stack = [(start, [])]
        seen = set()
        while stack:
            x, path = stack.pop()
            for y, s, t in edges.get(x, ()):
                step = path + [(s, t)]
                if y == start:
                    return False, _cycle_witness(step)
                if y not in seen:
                    seen.add(y)
                    stack.append((y, step))
    return True, []


def _cycle_witness(steps) -> list:
    out = []
    for s, t in steps:
        out.append(f"{format_term(s)} > {format_term(t)}")
    first = steps[0][0]
    last = steps[-1][1]
    if last != first:
        out.append(f"{format_term(last)} ~ {format_term(first)}")
    return out
