"""Decrease obligations, chain decomposition and unfold/fold grouping."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

from .abstract import RigidityFilter
from .interarg import GE, GT, Comparison, InterargRelation
from .modes import check_well_moded
from .terms import (Clause, PredicateGraph, Program, Struct, Var, dependency_graph, format_term,
                    match, rename_apart, unify, apply, resolve, variables)


class NotWellModed(ValueError):
    def __init__(self, violations):
        super().__init__("not well-moded: " + "; ".join(str(v) for v in violations))
        self.violations = violations


def is_placeholder(t) -> bool:
    return isinstance(t, Var) and t.name.startswith("v") and t.name[1:].isdigit()


def anonymize(atom: Struct, positions, start: int = 1) -> tuple[Struct, int]:
    """Replace the given predicate positions by fresh placeholders v<start>, v<start+1>, ...

    Positions already holding a placeholder are kept, so anonymizing twice is a no-op.
    """
    n = len(atom.args)
    args = []
    k = start
    for i, a in enumerate(atom.args, 1):
        if (atom.name, n, i) in positions and not is_placeholder(a):
            args.append(Var(f"v{k}"))
            k += 1
        else:
            args.append(a)
    return Struct(atom.name, tuple(args)), k


@dataclass(frozen=True)
class DecreaseObligation:
    clause_id: int  # 1-based clause number in the program
    index: int  # 0-based body atom index
    clause: Clause
    lhs: Struct
    rhs: Struct
    premises: tuple  # body atoms B1 .. B(i-1), not anonymized
    kind: str = "rigid"  # 'rigid' | 'model'
    strict: bool = True
    recursive: bool = True  # rhs predicate mutually recursive with the head

    def render(self, relations: dict | None = None) -> str:
        s = f"{format_term(self.lhs)} ≻ {format_term(self.rhs)}"
        given = []
        for b in self.premises:
            rel = (relations or {}).get(b.indicator)
            if rel is not None and not rel.is_trivial:
                given.append(f"{format_term(b)} in {rel.render()}")
        if given:
            s += "  [given " + "; ".join(given) + "]"
        return s

    def label(self) -> str:
        return f"clause {self.clause_id}, atom {self.index + 1}"


def _obligation(ci, i, c, positions, kind, same=True) -> DecreaseObligation:
    lhs, k = anonymize(c.head, positions)
    rhs, _ = anonymize(c.body[i], positions, k)
    return DecreaseObligation(ci, i, c, lhs, rhs, tuple(c.body[:i]), kind, True, same)


def gen_rigid_obligations(p: Program, filter: RigidityFilter,
                          g: PredicateGraph | None = None) -> list:
    """One obligation per body atom mutually recursive with its clause head."""
    g = g or dependency_graph(p)
    out = []
    for ci, c in enumerate(p.clauses, 1):
        for i, b in enumerate(c.body):
            if g.mutually_recursive(c.head.indicator, b.indicator):
                out.append(_obligation(ci, i, c, filter.positions, "rigid"))
    return out


def output_filter(modes) -> RigidityFilter:
    table = modes.values() if isinstance(modes, dict) else modes
    return RigidityFilter(frozenset((m.pred[0], m.pred[1], i) for m in table for i in m.outputs()))


def gen_model_obligations(p: Program, modes, filter: RigidityFilter | None = None) -> list:
    """Obligations for every body atom of a well-moded program; outputs anonymized."""
    ok, violations = check_well_moded(p, modes)
    if not ok:
        raise NotWellModed(violations)
    g = dependency_graph(p)
    positions = output_filter(modes).positions | (filter.positions if filter else frozenset())
    out = []
    for ci, c in enumerate(p.clauses, 1):
        for i, b in enumerate(c.body):
            same = g.mutually_recursive(c.head.indicator, b.indicator)
            out.append(_obligation(ci, i, c, positions, "model", same))
    return out


# --- chain search ----------------------------------------------------------------

@dataclass(frozen=True)
class ChainLink:
    premise: int  # index into ob.premises
    src: int  # argument position holding the larger term
    dst: int
    strict: bool


@dataclass
class ChainAssignment:
    terms: tuple  # u, u1, ..., v
    links: tuple  # ChainLink per consecutive pair
    relations: dict = field(default_factory=dict)  # pred -> InterargRelation

    def render(self) -> str:
        seq = ", ".join(format_term(t) for t in self.terms)
        rels = "; ".join(r.render() for r in self.relations.values())
        return f"{seq} with {rels}"


def underlying_decreases(ob: DecreaseObligation) -> list:
    """Pairs (u, v) at the same non-anonymized predicate position of lhs and rhs."""
    out = []
    if ob.lhs.indicator != ob.rhs.indicator:
        return out
    for a, b in zip(ob.lhs.args, ob.rhs.args):
        if a != b and not is_placeholder(a) and not is_placeholder(b):
            out.append((a, b))
    return out


def chain_decompose(ob: DecreaseObligation, max_len: int | None = None) -> list:
    """Candidate relation assignments along sequences u, u1, ..., v through the premises."""
    premises = ob.premises
    if not premises:
        return []
    max_len = max_len or len(premises) + 1
    edges = []
    for k, atom in enumerate(premises):
        for a, b in itertools.permutations(range(1, len(atom.args) + 1), 2):
            edges.append((atom.args[a - 1], atom.args[b - 1], k, a, b))
    out = []
    for u, v in underlying_decreases(ob):
        for path in _paths(u, v, edges, max_len):
            terms = (u,) + tuple(e[1] for e in path)
            for strict_at in range(len(path)):
                links = tuple(ChainLink(k, a, b, n == strict_at)
                              for n, (_, _, k, a, b) in enumerate(path))
                out.append(ChainAssignment(terms, links, _relations(premises, links)))
    return out


def _paths(u, v, edges, max_len):
    stack = [(u, [], {u})]
    found = []
    while stack:
        node, path, seen = stack.pop()
        if len(path) >= max_len:
            continue
        for e in reversed(edges):
            s, t = e[0], e[1]
            if s != node:
                continue
            if t == v:
                found.append(path + [e])
            elif t not in seen:
                stack.append((t, path + [e], seen | {t}))
    found.sort(key=len)
    return found


def _relations(premises, links) -> dict:
    comps: dict = {}
    for l in links:
        pred = premises[l.premise].indicator
        c = Comparison(l.src, GT if l.strict else GE, l.dst)
        if c not in comps.setdefault(pred, []):
            comps[pred].append(c)
    return {pred: InterargRelation(pred, (tuple(cs),)) for pred, cs in comps.items()}


# --- unfold/fold grouping ----------------------------------------------------------

@dataclass
class GroupedProgram:
    """Clauses of a synthetic predicate standing for a conjunction of atoms."""

    conj: tuple
    template: Struct
    clauses: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def pred(self) -> tuple:
        return self.template.indicator

    def offsets(self) -> list:
        out, k = [], 0
        for a in self.conj:
            out.append(k)
            k += len(a.args)
        return out

    def render(self) -> list:
        return [_render_grouped(c, self) for c in self.clauses]


def group_name(conj) -> str:
    return "&".join(a.name for a in conj)


def join_atoms(conj, name=None) -> Struct:
    return Struct(name or group_name(conj), tuple(x for a in conj for x in a.args))


def split_atom(atom: Struct, conj) -> tuple:
    out, k = [], 0
    for a in conj:
        n = len(a.args)
        out.append(Struct(a.name, atom.args[k:k + n]))
        k += n
    return tuple(out)


def unfold_fold_group(p: Program, conj) -> GroupedProgram:
    """Unfold every atom of ``conj`` one resolution step and fold bodies back.

    The result is a program over the synthetic predicate ``a&b/n`` whose argument
    list concatenates those of the conjunction. A body that is an instance of the
    conjunction becomes one synthetic atom; other bodies keep their atoms.
    """
    conj = tuple(conj)
    if len(conj) < 2:
        raise ValueError("unfold/fold grouping needs at least two atoms")
    template = join_atoms(conj)
    gp = GroupedProgram(conj, template)
    defined = set(p.defined())
    missing = [a for a in conj if a.indicator not in defined]
    if missing:
        msg = f"{format_term(missing[0])} has no clauses; grouped program is empty"
        gp.warnings.append(msg)
        warnings.warn(msg, stacklevel=2)
        return gp
    options = [p.clauses_for(a.indicator) for a in conj]
    for combo in itertools.product(*options):
        taken = set(variables(conj))
        s: dict | None = {}
        body = []
        for a, c in zip(conj, combo):
            c = rename_apart(c, taken)
            taken |= set(variables(c))
            s = unify(a, c.head, s)
            if s is None:
                break
            body.extend(c.body)
        if s is None:
            continue
        s = resolve(s)
        head = apply(template, s)
        body = [apply(b, s) for b in body]
        gp.clauses.append(Clause(head, tuple(_fold(body, conj, template))))
    return gp


def _fold(body, conj, template):
    if len(body) == len(conj) and all(b.indicator == a.indicator for a, b in zip(conj, body)):
        if match(join_atoms(conj, "$"), join_atoms(body, "$")) is not None:
            return [join_atoms(body, template.name)]
    return body


def _render_grouped(c: Clause, gp: GroupedProgram) -> str:
    def show(a):
        if a.indicator == gp.pred:
            return ", ".join(format_term(x) for x in split_atom(a, gp.conj))
        return format_term(a)
    head = "(" + show(c.head) + ")"
    if not c.body:
        return head + "."
    return head + " :- " + ", ".join("(" + show(b) + ")" if b.indicator == gp.pred else show(b)
                                     for b in c.body) + "."
