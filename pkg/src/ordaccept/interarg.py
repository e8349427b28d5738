"""Interargument relations and their verification by one bottom-up step.

A relation for ``p/n`` is a disjunction of conjunctions of positionwise
comparisons ``#i > #j``, ``#i >= #j`` or ``#i ~ #j``. It is a valid model of
the predicate when every clause maps atoms satisfying the assumed relations
to a head satisfying the relation (T_P(M) is contained in M).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .ordering import OrderingSpec, Reasoner
from .terms import (Program, Struct, Var, apply, canonical, format_term, pred_str, rename_fresh,
                    resolve, unify, variables)

GT, GE, EQ = ">", ">=", "~"


@dataclass(frozen=True, order=True)
class Comparison:
    i: int
    op: str
    j: int

    def __str__(self):
        return f"#{self.i} {self.op} #{self.j}"


@dataclass(frozen=True)
class InterargRelation:
    pred: tuple
    disjuncts: tuple  # tuple of tuples of Comparison; ((),) is the trivial relation

    def __post_init__(self):
        if not self.disjuncts:
            raise ValueError("relation needs at least one disjunct")
        n = self.pred[1]
        for d in self.disjuncts:
            for c in d:
                if not (1 <= c.i <= n and 1 <= c.j <= n):
                    raise ValueError(f"position out of range in {c}")

    @classmethod
    def single(cls, pred, i, op, j) -> "InterargRelation":
        return cls(pred, ((Comparison(i, op, j),),))

    @classmethod
    def trivial(cls, pred) -> "InterargRelation":
        return cls(pred, ((),))

    @property
    def is_trivial(self) -> bool:
        return any(not d for d in self.disjuncts)

    def render(self) -> str:
        body = " | ".join(" & ".join(str(c) for c in d) or "true" for d in self.disjuncts)
        return f"{pred_str(self.pred)}: {body}"

    def __str__(self):
        return self.render()


def facts_for(atom: Struct, conj: tuple) -> list:
    """Ordering facts ``(s, t, strict)`` stated by one conjunction for ``atom``."""
    out = []
    for c in conj:
        s, t = atom.args[c.i - 1], atom.args[c.j - 1]
        if c.op == GT:
            out.append((s, t, True))
        elif c.op == GE:
            out.append((s, t, False))
        else:
            out.append((s, t, False))
            out.append((t, s, False))
    return out


def candidate_relations(pred, demand=()) -> list:
    """Single-comparison relations for ``pred``; demanded position pairs come first."""
    n = pred[1]
    if n < 2:
        return []
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    demand = [d for d in demand if d in pairs]
    rest = [d for d in pairs if d not in demand]
    order = ([(d, GT) for d in demand] + [(d, GE) for d in demand]
             + [(d, GT) for d in rest] + [(d, GE) for d in rest])
    return [InterargRelation.single(pred, i, op, j) for (i, j), op in order]


@dataclass(frozen=True)
class Implication:
    clause: int  # 1-based index within the reduced program
    premises: tuple  # ((atom, InterargRelation), ...)
    head: Struct
    conclusion: tuple  # conjunction of Comparison on head

    def render(self) -> str:
        names = {v: Var(f"t{k}") for k, v in enumerate(variables(
            [self.head] + [a for a, _ in self.premises]), 1)}
        parts = []
        for a, rel in self.premises:
            alts = [" & ".join(_fmt_cmp(apply(a, names), c) for c in d) or "true"
                    for d in rel.disjuncts]
            parts.append(alts[0] if len(alts) == 1 else "(" + " | ".join(alts) + ")")
        concl = " & ".join(_fmt_cmp(apply(self.head, names), c) for c in self.conclusion) or "true"
        return f"{' & '.join(parts)} => {concl}" if parts else concl

    def __str__(self):
        return self.render()


def _fmt_cmp(atom, c: Comparison) -> str:
    return f"{format_term(atom.args[c.i - 1])} {c.op} {format_term(atom.args[c.j - 1])}"


@dataclass
class TpReduction:
    relation: InterargRelation
    implications: list = field(default_factory=list)

    def render(self) -> list:
        return [i.render() for i in self.implications]


def tp_reduce(rel: InterargRelation, p, assumed: dict | None = None) -> TpReduction:
    """One implication per (clause, disjunct) of ``rel``'s predicate.

    ``p`` is a Program or a sequence of clauses. Body atoms of the relation's own
    predicate use ``rel`` as premise; other body atoms use ``assumed`` relations
    when available and contribute nothing otherwise.
    """
    clauses = p.clauses if isinstance(p, Program) else tuple(p)
    assumed = dict(assumed or {})
    assumed[rel.pred] = rel
    red = TpReduction(rel)
    k = 0
    for c in clauses:
        if c.head.indicator != rel.pred:
            continue
        k += 1
        prem = tuple((b, assumed[b.indicator]) for b in c.body
                     if b.indicator in assumed and not assumed[b.indicator].is_trivial)
        for d in rel.disjuncts:
            red.implications.append(Implication(k, prem, c.head, d))
    return red


@dataclass
class VerifyResult:
    ok: bool
    failing: Implication | None = None
    spec: OrderingSpec | None = None
    wishes: set = field(default_factory=set)


def verify_relation(red: TpReduction, spec: OrderingSpec, predicates=(), extensible=False,
                    premises_extra=(), make=None) -> VerifyResult:
    """Discharge every implication of ``red`` under ``spec``.

    Implications are grouped by clause; a clause is satisfied when, for every
    choice of premise disjuncts, one of the relation's disjuncts is derivable.
    """
    make = make or Reasoner
    wishes = set()
    by_clause: dict = {}
    for imp in red.implications:
        by_clause.setdefault(imp.clause, []).append(imp)
    for imps in by_clause.values():
        first = imps[0]
        choices = [rel.disjuncts for _, rel in first.premises]
        for combo in itertools.product(*choices):
            facts = list(premises_extra)
            for (atom, _), d in zip(first.premises, combo):
                facts += facts_for(atom, d)
            done = False
            for imp in imps:
                r = make(spec, facts, predicates, extensible)
                if all(_holds(r, imp.head, c) for c in imp.conclusion):
                    if extensible:
                        spec = r.current_spec()
                    done = True
                    break
                wishes |= r.wishes
            if not done:
                return VerifyResult(False, first, spec, wishes)
    return VerifyResult(True, None, spec, wishes)


def _holds(r: Reasoner, atom: Struct, c: Comparison) -> bool:
    s, t = atom.args[c.i - 1], atom.args[c.j - 1]
    if c.op == GT:
        return r.greater(s, t)
    if c.op == GE:
        return r.greater_eq(s, t)
    return r.equivalent(s, t)


def holds_ground(spec: OrderingSpec, atom: Struct, rel: InterargRelation, predicates=()) -> bool:
    """Evaluate a relation on a ground atom directly."""
    r = Reasoner(spec, (), predicates)
    return any(all(_holds(r, atom, c) for c in d) for d in rel.disjuncts)


def bottom_up(p, depth: int, limit: int = 200000) -> set:
    """Atoms derivable in at most ``depth`` bottom-up steps, as canonical templates.

    Derived atoms may contain variables; each stands for all its ground instances.
    """
    clauses = p.clauses if isinstance(p, Program) else tuple(p)
    known: set = set()
    for _ in range(depth):
        by_pred: dict = {}
        for a in known:
            by_pred.setdefault(a.indicator, []).append(a)
        new = set(known)
        for c in clauses:
            c = rename_fresh(c)
            subs = [{}]
            for b in c.body:
                nxt = []
                for s in subs:
                    for fact in by_pred.get(b.indicator, ()):
                        u = unify(b, rename_fresh(fact), s)
                        if u is not None:
                            nxt.append(u)
                    if len(nxt) > limit:
                        raise RuntimeError("bottom-up evaluation exceeded its limit")
                subs = nxt
            for s in subs:
                new.add(canonical(apply(c.head, resolve(s))))
                if len(new) > limit:
                    raise RuntimeError("bottom-up evaluation exceeded its limit")
        if new == known:
            break
        known = new
    return known
