"""Regular type grammars, an abstract call-set analysis and rigidity filters.

Abstract values form a small lattice over type names::

    VAR, ground(t)  <=  any(t)  <=  TOP

``ground(t)`` means "an instance of the skeleton described by t", where leaves
declared as the builtin type ``any`` stay unconstrained. ``any(t)`` additionally
allows free variables anywhere, including at the root.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

from .terms import Program, Struct, Var, is_number, pred_str, variables

log = logging.getLogger(__name__)

BUILTIN_TYPES = ("any", "ground", "number")
BUILTIN_PREDICATES = {("number", 1)}


@dataclass(frozen=True)
class Abs:
    kind: str  # 'var' | 'ground' | 'any' | 'top'
    type: str | None = None

    def __str__(self):
        if self.kind in ("var", "top"):
            return "var" if self.kind == "var" else "any"
        if self.kind == "ground" and self.type == "ground":
            return "ground"
        return f"{self.kind}({self.type})"


VAR = Abs("var")
TOP = Abs("top")


def ground_of(t: str) -> Abs:
    return TOP if t == "any" else Abs("ground", t)


def any_of(t: str) -> Abs:
    return TOP if t in ("any", "ground") else Abs("any", t)


@dataclass(frozen=True)
class CallPattern:
    pred: tuple
    args: tuple

    def __str__(self):
        return f"{self.pred[0]}({','.join(map(str, self.args))})"


class TypeGrammar:
    """Unary regular type definitions.

    Productions are ``('const', c)``, ``('number',)``, ``('ref', t)`` or
    ``('fun', f, (t1, ..., tn))``.
    """

    def __init__(self, defs: dict | None = None):
        self.defs: dict[str, tuple] = dict(defs or {})
        for name, prods in self.defs.items():
            for p in prods:
                for t in _refs(p):
                    if t not in self.defs and t not in BUILTIN_TYPES:
                        raise ValueError(f"type {name} uses undefined type {t}")
        self._sub_cache: dict = {}
        self._exp_cache: dict = {}
        self._vf_cache: dict = {}

    @classmethod
    def from_program(cls, p: Program) -> "TypeGrammar":
        names = {n for n, _ in p.types}
        defs = {}
        for name, alts in p.types:
            prods = list(defs.get(name, ()))
            for alt in alts:
                prods.append(_production(alt, names))
            defs[name] = tuple(prods)
        return cls(defs)

    @property
    def names(self) -> list:
        return list(self.defs) + ["number", "ground"]

    def expanded(self, t: str) -> tuple:
        """Productions of t with type inclusions flattened; builtins appear as ('any',), ('ground',)."""
        if t in self._exp_cache:
            return self._exp_cache[t]
        out, seen, stack = [], set(), [t]
        while stack:
            x = stack.pop(0)
            if x in seen:
                continue
            seen.add(x)
            if x == "any":
                out.append(("any",))
            elif x == "ground":
                out.append(("ground",))
            elif x == "number":
                out.append(("number",))
            else:
                for p in self.defs[x]:
                    if p[0] == "ref":
                        stack.append(p[1])
                    elif p not in out:
                        out.append(p)
        self._exp_cache[t] = tuple(out)
        return self._exp_cache[t]

    def reachable(self, t: str) -> list:
        seen, stack = [], [t]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.append(x)
            for p in self.expanded(x):
                if p[0] == "fun":
                    stack.extend(p[2])
        return seen

    def var_free(self, t: str) -> bool:
        if t not in self._vf_cache:
            self._vf_cache[t] = not any(("any",) in self.expanded(x) for x in self.reachable(t))
        return self._vf_cache[t]

    def subtype(self, s: str, t: str) -> bool:
        key = (s, t)
        if key not in self._sub_cache:
            self._sub_cache[key] = self._subtype(s, t, frozenset())
        return self._sub_cache[key]

    def _subtype(self, s, t, assumed) -> bool:
        if s == t or t == "any" or (s, t) in assumed:
            return True
        if s == "any":
            return False
        if t == "ground":
            return self.var_free(s)
        if s == "ground":
            return ("ground",) in self.expanded(t) or ("any",) in self.expanded(t)
        assumed = assumed | {(s, t)}
        tprods = self.expanded(t)
        if ("any",) in tprods:
            return True
        for p in self.expanded(s):
            if p[0] == "any":
                return False
            if p[0] == "ground":
                if ("ground",) not in tprods:
                    return False
            elif p[0] == "const":
                if p not in tprods and ("ground",) not in tprods and not (
                        is_number(Struct(p[1])) and ("number",) in tprods):
                    return False
            elif p[0] == "number":
                if ("number",) not in tprods and ("ground",) not in tprods:
                    return False
            else:
                if ("ground",) in tprods and all(self.var_free(a) for a in p[2]):
                    continue
                if not any(q[0] == "fun" and q[1] == p[1] and len(q[2]) == len(p[2])
                           and all(self._subtype(a, b, assumed) for a, b in zip(p[2], q[2]))
                           for q in tprods):
                    return False
        return True

    def lub_type(self, s: str, t: str) -> str:
        if self.subtype(s, t):
            return t
        if self.subtype(t, s):
            return s
        cands = [r for r in self.names if self.subtype(s, r) and self.subtype(t, r)]
        m = self._minimal(cands)
        return m if m is not None else "any"

    def _minimal(self, cands: list):
        for c in cands:
            if not any(d != c and self.subtype(d, c) and not self.subtype(c, d) for d in cands):
                return c
        return None

    # --- lattice ---------------------------------------------------------

    def join(self, a: Abs | None, b: Abs | None) -> Abs | None:
        if a is None:
            return b
        if b is None or a == b:
            return a
        if a == TOP or b == TOP:
            return TOP
        if a == VAR:
            return any_of(b.type)
        if b == VAR:
            return any_of(a.type)
        t = self.lub_type(a.type, b.type)
        if a.kind == "ground" and b.kind == "ground":
            return ground_of(t)
        return any_of(t)

    def meet(self, a: Abs, b: Abs) -> Abs:
        """Combine two descriptions of the same value (both hold)."""
        if a in (VAR, TOP):
            return b if (b != VAR or a == VAR) else a
        if b in (VAR, TOP):
            return a
        t = a.type if self.subtype(a.type, b.type) or not self.subtype(b.type, a.type) else b.type
        return Abs("ground" if "ground" in (a.kind, b.kind) else "any", t)

    # --- terms -----------------------------------------------------------

    def fits(self, t, env: dict, ty: str, ground: bool = True) -> bool:
        if ty == "any":
            return True
        if isinstance(t, Var):
            a = env.get(t, VAR)
            if a == VAR:
                return not ground
            if a == TOP or (ground and a.kind != "ground"):
                return False
            return self.subtype(a.type, ty)
        if ty == "ground":
            return all(self._ground_var(env.get(v, VAR)) for v in variables(t))
        if ty == "number":
            return is_number(t)
        for p in self.expanded(ty):
            if p[0] == "any":
                return True
            if p[0] == "ground" and self.fits(t, env, "ground"):
                return True
            if p[0] == "const" and not t.args and t.name == p[1]:
                return True
            if p[0] == "number" and is_number(t):
                return True
            if p[0] == "fun" and p[1] == t.name and len(p[2]) == len(t.args):
                if all(self.fits(x, env, xt, ground) for x, xt in zip(t.args, p[2])):
                    return True
        return False

    def _ground_var(self, a: Abs) -> bool:
        return a.kind == "ground" and self.var_free(a.type)

    def abstract_term(self, t, env: dict) -> Abs:
        if isinstance(t, Var):
            return env.get(t, VAR)
        m = self._minimal([n for n in self.names if self.fits(t, env, n, True)])
        if m is not None:
            return ground_of(m)
        m = self._minimal([n for n in self.names if n != "ground" and self.fits(t, env, n, False)])
        if m is not None:
            return any_of(m)
        return TOP

    def unify_abs(self, t, a: Abs, env: dict) -> dict | None:
        """Abstractly unify term t (over env) with a value described by a."""
        if a == VAR:
            return env
        if isinstance(t, Var):
            out = dict(env)
            out[t] = self.meet(env.get(t, VAR), a)
            return out
        if a == TOP:
            out = dict(env)
            for v in variables(t):
                out[v] = self.meet(env.get(v, VAR), TOP)
            return out
        alts = []
        if a.kind == "any":
            alts.append(env)
        for p in self.expanded(a.type):
            r = self._unify_prod(t, p, a.kind, env)
            if r is not None:
                alts.append(r)
        if not alts:
            return None
        out = alts[0]
        for other in alts[1:]:
            out = self._join_env(out, other)
        return out

    def _unify_prod(self, t: Struct, p, kind, env):
        if p[0] == "any":
            return self.unify_abs(t, TOP, env)
        if p[0] == "ground":
            out = dict(env)
            for v in variables(t):
                out[v] = self.meet(env.get(v, VAR), ground_of("ground"))
            return out
        if p[0] == "const":
            return env if (not t.args and t.name == p[1]) else None
        if p[0] == "number":
            return env if is_number(t) else None
        if p[1] != t.name or len(p[2]) != len(t.args):
            return None
        for x, xt in zip(t.args, p[2]):
            env = self.unify_abs(x, ground_of(xt) if kind == "ground" else any_of(xt), env)
            if env is None:
                return None
        return env

    def _join_env(self, e1: dict, e2: dict) -> dict:
        out = {}
        for v in list(e1) + [v for v in e2 if v not in e1]:
            out[v] = self.join(e1.get(v, VAR), e2.get(v, VAR))
        return out

    def pattern(self, atom: Struct) -> CallPattern:
        """Call pattern from an entry atom such as ``p(ground(list), var)``."""
        return CallPattern(atom.indicator, tuple(self.parse_abs(a) for a in atom.args))

    def parse_abs(self, t) -> Abs:
        if isinstance(t, Struct) and not t.args and t.name in ("var", "ground", "any"):
            return {"var": VAR, "ground": ground_of("ground"), "any": TOP}[t.name]
        if isinstance(t, Struct) and len(t.args) == 1 and t.name in ("ground", "any") \
                and isinstance(t.args[0], Struct) and not t.args[0].args:
            ty = t.args[0].name
            if ty not in self.defs and ty not in BUILTIN_TYPES:
                raise ValueError(f"unknown type {ty}")
            return ground_of(ty) if t.name == "ground" else any_of(ty)
        raise ValueError(f"malformed entry argument {t}")


def _production(alt, names: set):
    if isinstance(alt, Var):
        raise ValueError("variables are not allowed in type definitions")
    if not alt.args:
        if alt.name == "number":
            return ("number",)
        if alt.name in names or alt.name in ("any", "ground"):
            return ("ref", alt.name)
        return ("const", alt.name)
    argtypes = []
    for a in alt.args:
        if not isinstance(a, Struct) or a.args:
            raise ValueError(f"type argument must be a type name: {a}")
        argtypes.append(a.name)
    return ("fun", alt.name, tuple(argtypes))


def _refs(p) -> Iterable[str]:
    if p[0] == "ref":
        return (p[1],)
    if p[0] == "fun":
        return p[2]
    return ()


# --- call set ----------------------------------------------------------------

def infer_call_set(p: Program, entry: Iterable[CallPattern], g: TypeGrammar,
                   with_success: bool = False):
    """Finite over-approximation of the call set by abstract LD-execution.

    Returns the list of reached call patterns (entries first); with
    ``with_success`` a dict mapping each pattern to its success pattern
    (``None`` when it cannot succeed) is returned instead.
    """
    table: dict[CallPattern, tuple | None] = {}
    for e in entry:
        table.setdefault(e, None)
    clauses = {}
    for c in p.clauses:
        clauses.setdefault(c.head.indicator, []).append(c)
    changed = True
    while changed:
        changed = False
        size = len(table)
        for cp in list(table):
            succ = table[cp]
            for c in clauses.get(cp.pred, ()):
                s = _analyze_clause(c, cp, g, table)
                if s is not None:
                    succ = s if succ is None else tuple(g.join(a, b) for a, b in zip(succ, s))
            if cp.pred in BUILTIN_PREDICATES:
                succ = (ground_of("number"),)
            if succ != table[cp]:
                table[cp] = succ
                changed = True
        changed = changed or len(table) != size
    return table if with_success else list(table)


def _analyze_clause(c, cp: CallPattern, g: TypeGrammar, table: dict):
    env: dict | None = {}
    for t, a in zip(c.head.args, cp.args):
        env = g.unify_abs(t, a, env)
        if env is None:
            return None
    for b in c.body:
        pat = CallPattern(b.indicator, tuple(g.abstract_term(x, env) for x in b.args))
        if pat not in table:
            table[pat] = None
        succ = table[pat]
        if succ is None:
            return None
        for x, s in zip(b.args, succ):
            env = g.unify_abs(x, s, env)
            if env is None:
                return None
    return tuple(g.meet(a, g.abstract_term(t, env)) for t, a in zip(c.head.args, cp.args))


# --- rigidity ----------------------------------------------------------------

@dataclass(frozen=True)
class RigidityFilter:
    """Argument positions (symbol, arity, 1-based position) an ordering must ignore."""

    positions: frozenset = frozenset()

    def __contains__(self, item):
        return item in self.positions

    def __or__(self, other: "RigidityFilter") -> "RigidityFilter":
        return RigidityFilter(self.positions | other.positions)

    def render(self) -> list:
        return [f"ignore {n}/{a}#{i}" for n, a, i in sorted(self.positions)]

    def functor_positions(self) -> frozenset:
        return self.positions


def rigidity_filter(calls: Iterable[CallPattern], g: TypeGrammar) -> RigidityFilter:
    out = set()
    walked = set()
    for cp in calls:
        name, arity = cp.pred
        for i, a in enumerate(cp.args, 1):
            if a.kind != "ground":
                out.add((name, arity, i))
                continue
            for ty in g.reachable(a.type):
                if ty in walked:
                    continue
                walked.add(ty)
                for prod in g.expanded(ty):
                    if prod[0] != "fun":
                        continue
                    for j, at in enumerate(prod[2], 1):
                        if ("any",) in g.expanded(at):
                            out.add((prod[1], len(prod[2]), j))
    return RigidityFilter(frozenset(out))


def describe_calls(calls: Iterable[CallPattern]) -> list:
    return [str(c) for c in calls]


__all__ = [
    "Abs", "VAR", "TOP", "ground_of", "any_of", "CallPattern", "TypeGrammar",
    "infer_call_set", "RigidityFilter", "rigidity_filter", "pred_str",
]
