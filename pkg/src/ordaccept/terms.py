"""Terms, clauses, programs, unification and the predicate dependency graph."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

_VAR_NAME = re.compile(r"^[A-Z_][A-Za-z0-9_]*$")


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be nonempty")

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Struct:
    """A compound term or an atom; constants are structs of arity 0."""

    name: str
    args: tuple = ()
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        # terms are hashed constantly during search; cache it once
        object.__setattr__(self, "_hash", hash((self.name, self.args)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Struct):
            return NotImplemented
        return self._hash == other._hash and self.name == other.name and self.args == other.args

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def indicator(self) -> tuple[str, int]:
        return (self.name, len(self.args))

    def __str__(self):
        return format_term(self)


Term = Union[Var, Struct]
Atom = Struct
Indicator = tuple  # (name, arity)

NIL = Struct("[]")
CONS = "."


def const(name: str) -> Struct:
    return Struct(name, ())


def mklist(items: Iterable[Term], tail: Term = NIL) -> Term:
    items = list(items)
    out = tail
    for item in reversed(items):
        out = Struct(CONS, (item, out))
    return out


def is_number(t: Term) -> bool:
    if not isinstance(t, Struct) or t.args:
        return False
    try:
        float(t.name)
    except ValueError:
        return False
    return True


def pred_str(ind: Indicator) -> str:
    return f"{ind[0]}/{ind[1]}"


@dataclass(frozen=True, slots=True)
class Clause:
    head: Atom
    body: tuple = ()

    def __str__(self):
        if not self.body:
            return format_term(self.head) + "."
        return f"{format_term(self.head)} :- {', '.join(format_term(b) for b in self.body)}."


@dataclass(frozen=True)
class Program:
    clauses: tuple = ()
    entries: tuple = ()
    modes: tuple = ()
    types: tuple = ()  # (name, tuple of alternative Terms)

    def predicates(self) -> list:
        seen = {}
        for c in self.clauses:
            seen.setdefault(c.head.indicator, None)
            for b in c.body:
                seen.setdefault(b.indicator, None)
        return list(seen)

    def defined(self) -> list:
        seen = {}
        for c in self.clauses:
            seen.setdefault(c.head.indicator, None)
        return list(seen)

    def clauses_for(self, ind) -> list:
        return [c for c in self.clauses if c.head.indicator == ind]

    def undefined(self) -> list:
        d = set(self.defined())
        return [p for p in self.predicates() if p not in d]

    def symbols(self) -> dict:
        """Function symbols (name, arity) occurring inside clause arguments."""
        out = {}
        for c in self.clauses:
            for a in (c.head, *c.body):
                for t in a.args:
                    for s in subterms(t):
                        if isinstance(s, Struct):
                            out.setdefault(s.indicator, None)
        return out


# --- traversal --------------------------------------------------------------

def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        if isinstance(s, Struct):
            stack.extend(reversed(s.args))


def variables(t) -> list:
    """Variables of a term, atom, clause or sequence, in order of first occurrence."""
    seen = {}
    _collect_vars(t, seen)
    return list(seen)


def _collect_vars(t, seen):
    if isinstance(t, Var):
        seen.setdefault(t, None)
    elif isinstance(t, Struct):
        for a in t.args:
            _collect_vars(a, seen)
    elif isinstance(t, Clause):
        _collect_vars(t.head, seen)
        for b in t.body:
            _collect_vars(b, seen)
    else:
        for x in t:
            _collect_vars(x, seen)


def is_ground(t: Term) -> bool:
    return not any(isinstance(s, Var) for s in subterms(t))


def term_size(t: Term) -> int:
    """Number of compound (arity > 0) nodes."""
    return sum(1 for s in subterms(t) if isinstance(s, Struct) and s.args)


# --- substitutions ----------------------------------------------------------

Substitution = Mapping


def walk(t: Term, s: Mapping) -> Term:
    while isinstance(t, Var) and t in s:
        t = s[t]
    return t


def apply(t, s: Mapping):
    if not s:
        return t
    if isinstance(t, Var):
        r = walk(t, s)
        return r if isinstance(r, Var) else apply(r, s)
    if isinstance(t, Struct):
        if not t.args:
            return t
        return Struct(t.name, tuple(apply(a, s) for a in t.args))
    if isinstance(t, Clause):
        return Clause(apply(t.head, s), tuple(apply(b, s) for b in t.body))
    return tuple(apply(x, s) for x in t)


def _occurs(v: Var, t: Term, s: Mapping) -> bool:
    stack = [t]
    while stack:
        x = walk(stack.pop(), s)
        if x == v:
            return True
        if isinstance(x, Struct):
            stack.extend(x.args)
    return False


def unify(a: Term, b: Term, s: dict | None = None) -> dict | None:
    """Triangular unification with occurs check; returns extended bindings or None."""
    s = dict(s) if s else {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = walk(x, s), walk(y, s)
        if x == y:
            continue
        if isinstance(x, Var):
            if _occurs(x, y, s):
                return None
            s[x] = y
        elif isinstance(y, Var):
            if _occurs(y, x, s):
                return None
            s[y] = x
        else:
            if x.name != y.name or len(x.args) != len(y.args):
                return None
            stack.extend(zip(x.args, y.args))
    return s


def resolve(s: Mapping) -> dict:
    """Idempotent form of a triangular substitution, without identity bindings."""
    out = {}
    for v in s:
        t = apply(v, s)
        if t != v:
            out[v] = t
    return out


def mgu(a: Term, b: Term) -> dict | None:
    s = unify(a, b)
    return None if s is None else resolve(s)


def match(pattern: Term, t: Term, s: dict | None = None) -> dict | None:
    """One-way matching: find s with apply(pattern, s) == t, binding only pattern variables."""
    s = dict(s) if s else {}
    stack = [(pattern, t)]
    while stack:
        p, x = stack.pop()
        if isinstance(p, Var):
            if p in s:
                if s[p] != x:
                    return None
            else:
                s[p] = x
        elif isinstance(x, Var) or p.name != x.name or len(p.args) != len(x.args):
            return None
        else:
            stack.extend(zip(p.args, x.args))
    return s


def is_variant(a, b) -> bool:
    """True when ``a`` and ``b`` (terms or clauses) differ only by a variable renaming."""
    if isinstance(a, Clause) or isinstance(b, Clause):
        if not (isinstance(a, Clause) and isinstance(b, Clause)) or len(a.body) != len(b.body):
            return False
        a, b = Struct("$c", (a.head,) + tuple(a.body)), Struct("$c", (b.head,) + tuple(b.body))
    s = match(a, b)
    if s is None:
        return False
    vals = list(s.values())
    return all(isinstance(v, Var) for v in vals) and len(set(vals)) == len(vals)


# --- renaming ---------------------------------------------------------------

_fresh = itertools.count(1)


def fresh_var(prefix: str = "_G") -> Var:
    return Var(f"{prefix}{next(_fresh)}")


def rename_apart(c, taken: Iterable[Var] | Iterable[str] = ()):
    """Return a variant of ``c`` sharing no variable with ``taken``."""
    names = {v.name if isinstance(v, Var) else v for v in taken}
    vs = variables(c)
    if not any(v.name in names for v in vs):
        return c
    used = names | {v.name for v in vs}
    ren = {}
    for v in vs:
        base = re.sub(r"\d+$", "", v.name) or v.name
        i = 1
        while f"{base}{i}" in used:
            i += 1
        new = Var(f"{base}{i}")
        used.add(new.name)
        ren[v] = new
    return apply(c, ren)


def rename_fresh(c, prefix: str = "_G"):
    """Rename every variable of ``c`` to a globally fresh name."""
    return apply(c, {v: fresh_var(prefix) for v in variables(c)})


def canonical(t) -> object:
    """Canonical representative of the variant class of ``t``."""
    return apply(t, {v: Var(f"_V{i}") for i, v in enumerate(variables(t))})


# --- printing ---------------------------------------------------------------

_INFIX = {"+": 500, "*": 400, ",": 1000}


def format_term(t: Term, prec: int = 1200) -> str:
    if isinstance(t, Var):
        return t.name
    if t.name == CONS and len(t.args) == 2:
        items, tail = [], t
        while isinstance(tail, Struct) and tail.name == CONS and len(tail.args) == 2:
            items.append(format_term(tail.args[0], 999))
            tail = tail.args[1]
        body = ",".join(items)
        if tail == NIL:
            return f"[{body}]"
        return f"[{body}|{format_term(tail, 999)}]"
    if t.name in _INFIX and len(t.args) == 2:
        p = _INFIX[t.name]
        left = format_term(t.args[0], p)
        right = format_term(t.args[1], p - 1)
        sep = "," if t.name == "," else t.name
        s = f"{left}{sep}{right}"
        return f"({s})" if p > prec else s
    if not t.args:
        return _quote(t.name)
    return f"{_quote(t.name)}({','.join(format_term(a, 999) for a in t.args)})"


def _quote(name: str) -> str:
    if re.match(r"^[a-z][A-Za-z0-9_]*$", name) or name == "[]" or is_number(Struct(name)):
        return name
    return "'" + name.replace("'", "\\'") + "'"


# --- dependency graph -------------------------------------------------------

@dataclass
class PredicateGraph:
    """The refers-to relation with its reflexive-transitive closure and SCCs."""

    nodes: list = field(default_factory=list)
    refers: dict = field(default_factory=dict)
    closure: dict = field(default_factory=dict)
    scc_of: dict = field(default_factory=dict)

    def depends_on(self, p, q) -> bool:
        return q in self.closure.get(p, {p})

    def mutually_recursive(self, p, q) -> bool:
        return self.depends_on(p, q) and self.depends_on(q, p)

    def classes(self) -> list:
        out = {}
        for p in self.nodes:
            out.setdefault(self.scc_of[p], []).append(p)
        return list(out.values())

    def stratum(self, p) -> int:
        """Rank such that p strictly depends on q (not mutually) implies stratum(p) > stratum(q)."""
        return len({self.scc_of[q] for q in self.closure.get(p, {p})})


def dependency_graph(p: Program) -> PredicateGraph:
    nodes = p.predicates()
    refers = {n: [] for n in nodes}
    for c in p.clauses:
        for b in c.body:
            if b.indicator not in refers[c.head.indicator]:
                refers[c.head.indicator].append(b.indicator)
    closure = {}
    for n in nodes:
        seen = {n}
        stack = [n]
        while stack:
            x = stack.pop()
            for y in refers.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        closure[n] = seen
    scc_of = {}
    for n in nodes:
        if n in scc_of:
            continue
        for m in nodes:
            if n in closure[m] and m in closure[n]:
                scc_of[m] = n
    return PredicateGraph(nodes, refers, closure, scc_of)
