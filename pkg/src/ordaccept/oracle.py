"""Bounded LD-resolution and exhaustive query sampling.

The oracle explores the LD-tree depth-first (leftmost atom, clauses in textual
order) and counts one node per selected-atom resolution attempt. A finite tree
within the budget is reported as terminated; otherwise exploration stops.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field, replace

from .abstract import TOP, VAR, CallPattern, TypeGrammar
from .terms import Program, Struct, Var, apply, format_term, fresh_var, is_number, mgu, rename_fresh


@dataclass(frozen=True)
class Terminated:
    answers: int
    nodes: int

    terminated = True

    def __str__(self):
        return f"Terminated(answers={self.answers}, nodes={self.nodes})"


@dataclass(frozen=True)
class BudgetExhausted:
    nodes: int
    depth: int  # depth of the frontier goal when the budget ran out

    terminated = False

    def __str__(self):
        return f"BudgetExhausted(nodes={self.nodes}, depth={self.depth})"


OracleVerdict = Terminated | BudgetExhausted


def ld_explore(p: Program, query, budget: int, answers_out: list | None = None,
               trace: list | None = None) -> OracleVerdict:
    """Explore the LD-tree of ``query`` (an atom or a sequence of atoms).

    With ``answers_out`` given, each answer (the query instance) is appended to it;
    with ``trace`` given, each selected atom is.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    goal = (query,) if isinstance(query, Struct) else tuple(query)
    by_pred: dict = {}
    for c in p.clauses:
        by_pred.setdefault(c.head.indicator, []).append(c)
    stack = [(goal, goal, 0)]  # (remaining goals, query instance, depth)
    nodes = answers = 0
    while stack:
        goals, inst, depth = stack.pop()
        if not goals:
            answers += 1
            if answers_out is not None:
                answers_out.append(inst)
            continue
        if nodes >= budget:
            return BudgetExhausted(nodes, depth)
        nodes += 1
        atom, rest = goals[0], goals[1:]
        if trace is not None:
            trace.append(atom)
        if atom.indicator == ("number", 1):
            if is_number(atom.args[0]):
                stack.append((rest, inst, depth + 1))
            continue
        children = []
        for c in by_pred.get(atom.indicator, ()):
            c = rename_fresh(c)
            s = mgu(atom, c.head)
            if s is None:
                continue
            children.append((apply(tuple(c.body) + rest, s), apply(inst, s), depth + 1))
        stack.extend(reversed(children))
    return Terminated(answers, nodes)


# --- sampling ------------------------------------------------------------------

@dataclass
class QuerySampler:
    pattern: CallPattern
    grammar: TypeGrammar
    max_size: int = 4
    elements: tuple = ("a",)
    max_queries: int = 5000

    def terms(self, ty: str, kind: str = "ground") -> list:
        """Terms of type ``ty`` with at most ``max_size`` compound nodes, smallest first."""
        table = _TermTable(self.grammar, self.elements, kind == "any")
        out = []
        for n in range(self.max_size + 1):
            out += table.exact(ty, n)
        return out


class _TermTable:
    def __init__(self, g: TypeGrammar, elements, with_vars: bool):
        self.g = g
        self.elements = tuple(Struct(e) for e in elements)
        self.with_vars = with_vars
        self.memo: dict = {}

    def exact(self, ty: str, n: int) -> list:
        key = (ty, n)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = []
        out = []
        for prod in self.g.expanded(ty):
            kind = prod[0]
            if kind in ("any", "ground"):
                if n == 0:
                    out += list(self.elements)
            elif kind == "number":
                if n == 0:
                    out += [Struct("0"), Struct("1")]
            elif kind == "const":
                if n == 0:
                    out.append(Struct(prod[1]))
            elif kind == "fun" and n >= 1:
                argtys = prod[2]
                for sizes in _compositions(n - 1, len(argtys)):
                    choices = [self.exact(t, k) for t, k in zip(argtys, sizes)]
                    for args in itertools.product(*choices):
                        out.append(Struct(prod[1], tuple(args)))
        if self.with_vars and n == 0:
            out.append(Var("_"))
        seen = {}
        for t in out:
            seen.setdefault(t, None)
        self.memo[key] = list(seen)
        return self.memo[key]


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for k in range(total + 1):
        for rest in _compositions(total - k, parts - 1):
            yield (k,) + rest


def _freshen(t):
    """Replace each placeholder variable ``_`` by a distinct fresh variable."""
    if isinstance(t, Var):
        return fresh_var("_S") if t.name == "_" else t
    if not t.args:
        return t
    return Struct(t.name, tuple(_freshen(a) for a in t.args))


def sample_queries(s: QuerySampler) -> list:
    """All instances of the pattern with ground positions drawn from the grammar."""
    per_arg = []
    for a in s.pattern.args:
        if a == VAR:
            per_arg.append([Var("_")])
        elif a == TOP:
            per_arg.append([Var("_")] + [Struct(e) for e in s.elements])
        else:
            terms = s.terms(a.type, a.kind)
            if not terms:
                warnings.warn(f"type {a.type} has no terms up to size {s.max_size}", stacklevel=2)
                return []
            per_arg.append(terms)
    out = []
    for args in itertools.product(*per_arg):
        out.append(_freshen(Struct(s.pattern.pred[0], tuple(args))))
        if len(out) >= s.max_queries:
            break
    return out


# --- empirical soundness -----------------------------------------------------------

@dataclass
class SoundnessReport:
    outcome: object
    queries: int = 0
    alarms: list = field(default_factory=list)  # (query string, verdict)
    verdicts: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.alarms


def soundness_check(p: Program, entries=None, g: TypeGrammar | None = None, cfg=None,
                    max_size: int = 4, budget: int = 100000, elements=("a",),
                    max_queries: int = 5000, fault: str | None = None) -> SoundnessReport:
    """Prove, then run every sampled entry query through the oracle.

    ``fault="drop-strictness"`` is a test hook: the first obligation is accepted
    with a non-strict comparison, which makes the prover unsound on purpose.
    """
    from .search import SearchConfig, prove

    cfg = cfg or SearchConfig()
    if fault == "drop-strictness":
        cfg = replace(cfg, non_strict=(0,))
    elif fault is not None:
        raise ValueError(f"unknown fault {fault}")
    g = g or TypeGrammar.from_program(p)
    entries = list(p.entries if entries is None else entries)
    pats = [e if isinstance(e, CallPattern) else g.pattern(e) for e in entries]
    outcome = prove(p, pats, g, cfg)
    rep = SoundnessReport(outcome)
    if not outcome.proved:
        return rep
    for pat in pats:
        for q in sample_queries(QuerySampler(pat, g, max_size, elements, max_queries)):
            v = ld_explore(p, q, budget)
            rep.queries += 1
            rep.verdicts.append((format_term(q), v))
            if not v.terminated:
                rep.alarms.append((format_term(q), v))
    return rep
