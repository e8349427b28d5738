"""Demand-driven search for an ordering and interargument relations.

Each obligation is attempted with a fixed strategy stack: ordering properties
alone (``option1``), a single interargument relation on one premise atom
(``option2``), a chain of relations through several premises (``chain``), and a
relation over an unfolded conjunction of premises (``unfold-fold``). Obligations
between predicates of different strata in the model-based route are discharged
by the stratification of atoms (``dependency``).
"""

from __future__ import annotations

import functools
import time
from dataclasses import dataclass, field, replace

from .abstract import (BUILTIN_PREDICATES, CallPattern, RigidityFilter, TypeGrammar, infer_call_set,
                       rigidity_filter)
from .interarg import (InterargRelation, candidate_relations, facts_for, tp_reduce,
                       verify_relation)
from .modes import ModeError, modes_of
from .obligations import (DecreaseObligation, NotWellModed, chain_decompose, gen_model_obligations,
                          gen_rigid_obligations, join_atoms, output_filter, unfold_fold_group)
from .ordering import (HOLE, Axiomatic, NormBased, OrderingConstraintStore, OrderingSpec,
                       Precedence, Reasoner, Rpo, erase, is_rigid_on, store_consistent, sym)
from .terms import Clause, Program, Struct, Var, dependency_graph, format_term

MENU = ("axiomatic", "list-length", "term-size", "rpo")
STRATEGIES = ("option1", "option2", "chain", "unfold-fold")


@dataclass(frozen=True)
class SearchConfig:
    menu: tuple = MENU
    strategies: tuple = STRATEGIES
    max_precedences: int = 64
    max_chain_backtracks: int = 64
    timeout_ms: int = 5000  # per obligation
    # test hook: obligation indices accepted with a non-strict comparison (unsound)
    non_strict: tuple = ()

    def __post_init__(self):
        if self.max_precedences <= 0 or self.max_chain_backtracks <= 0 or self.timeout_ms <= 0:
            raise ValueError("search budgets must be positive")
        bad = [m for m in self.menu if m not in MENU]
        if bad or not self.menu:
            raise ValueError(f"unknown ordering kinds: {bad}")
        bad = [s for s in self.strategies if s not in STRATEGIES]
        if bad:
            raise ValueError(f"unknown strategies: {bad}")

    def as_dict(self) -> dict:
        return {"menu": list(self.menu), "strategies": list(self.strategies),
                "max_precedences": self.max_precedences,
                "max_chain_backtracks": self.max_chain_backtracks,
                "timeout_ms": self.timeout_ms}


@dataclass(frozen=True)
class Discharge:
    obligation: DecreaseObligation
    strategy: str
    relations: tuple = ()  # InterargRelation used as premises
    premises: tuple = ()  # rendered premise facts

    def render(self) -> str:
        return f"{self.obligation.render()}  ({self.strategy})"


@dataclass
class ProofOutcome:
    status: str  # 'proved' | 'unknown'
    witness: OrderingSpec | None = None
    relations: list = field(default_factory=list)
    discharged: list = field(default_factory=list)
    obligations: list = field(default_factory=list)
    reason: str | None = None
    failing: DecreaseObligation | None = None
    exhausted: tuple = ()
    calls: list = field(default_factory=list)
    kind_label: str | None = None
    timings: dict = field(default_factory=dict)

    @property
    def proved(self) -> bool:
        return self.status == "proved"


class _Budget(Exception):
    pass


class _Attempt:
    """Discharges obligations one by one under an evolving ordering spec."""

    def __init__(self, program: Program, spec: OrderingSpec, cfg: SearchConfig, predicates,
                 make_reasoner=None, extra_clauses=()):
        self.program = program
        self.spec = spec
        self.cfg = cfg
        self.predicates = frozenset(predicates)
        self.extensible = isinstance(spec, Axiomatic)
        self.make = make_reasoner or Reasoner
        self.relations: dict = {}  # pred -> list of verified InterargRelation
        self.wishes: set = set()
        self.deadline = None
        self.failed_strategies: tuple = ()

    # -- helpers --
    def reasoner(self, facts=(), extensible=None):
        ext = self.extensible if extensible is None else extensible
        return self.make(self.spec, facts, self.predicates, ext)

    def tick(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _Budget()

    def _keep(self, r):
        self.wishes |= r.wishes

    def facts_of(self, atoms) -> list:
        out = []
        for a in atoms:
            for rel in self.relations.get(a.indicator, ()):
                if len(rel.disjuncts) == 1:
                    out += facts_for(a, rel.disjuncts[0])
        return out

    def assumed(self) -> dict:
        out = {}
        for pred, rels in self.relations.items():
            single = [c for r in rels if len(r.disjuncts) == 1 for c in r.disjuncts[0]]
            out[pred] = InterargRelation(pred, (tuple(single),))
        return out

    def holds(self, ob: DecreaseObligation, facts, commit=False, wish=False) -> bool:
        r = self.reasoner(facts)
        ok = r.greater(ob.lhs, ob.rhs)
        if wish:
            self._keep(r)
        if ok and commit and self.extensible:
            self.spec = r.current_spec()
        return ok

    def verify(self, rels: dict, clauses) -> bool:
        """Verify a set of relations jointly; on success cache them and keep store additions."""
        assumed = self.assumed()
        for pred, rel in rels.items():
            assumed[pred] = _conj_with(assumed.get(pred), rel)
        spec = self.spec
        for pred, rel in rels.items():
            self.tick()
            red = tp_reduce(rel, clauses, assumed)
            res = verify_relation(red, spec, self.predicates, self.extensible,
                                  make=functools.partial(_make_with, self.make))
            self.wishes |= res.wishes
            if not res.ok:
                return False
            spec = res.spec
        self.spec = spec
        for pred, rel in rels.items():
            lst = self.relations.setdefault(pred, [])
            if rel not in lst:
                lst.append(rel)
        return True

    # -- strategies --
    def discharge(self, ob: DecreaseObligation) -> Discharge | None:
        self.deadline = time.monotonic() + self.cfg.timeout_ms / 1000.0
        if ob.kind == "model" and not ob.recursive:
            return Discharge(ob, "dependency")
        for strategy in self.cfg.strategies:
            d = getattr(self, "_" + strategy.replace("-", "_"))(ob)
            if d is not None:
                return d
        self.failed_strategies = tuple(self.cfg.strategies)
        return None

    def _option1(self, ob):
        if self.holds(ob, (), commit=True, wish=True):
            return Discharge(ob, "option1")
        return None

    def _premise_record(self, atoms, rels):
        out = []
        for a in atoms:
            for rel in rels:
                if rel.pred == a.indicator:
                    out.append(f"{format_term(a)} in {rel.render()}")
        return tuple(out)

    def _option2(self, ob):
        base = self.facts_of(ob.premises)
        if base and self.holds(ob, base, commit=True):
            used = tuple(r for a in ob.premises for r in self.relations.get(a.indicator, ()))
            return Discharge(ob, "option2", _dedup(used), self._premise_record(ob.premises, used))
        for atom in reversed(ob.premises):
            if atom.indicator in BUILTIN_PREDICATES:
                continue
            demand = self._demand(ob, atom, base)
            for cand in candidate_relations(atom.indicator, demand):
                self.tick()
                facts = base + facts_for(atom, cand.disjuncts[0])
                if not self.holds(ob, facts):
                    continue
                if self.verify({atom.indicator: cand}, self.program):
                    facts = self.facts_of(ob.premises)
                    if not self.holds(ob, facts, commit=True):
                        continue
                    return Discharge(ob, "option2", (cand,), self._premise_record([atom], [cand]))
        return None

    def _demand(self, ob, atom, base) -> list:
        out = []
        n = len(atom.args)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j and self.holds(ob, base + [(atom.args[i - 1], atom.args[j - 1], True)]):
                    out.append((i, j))
        return out

    def _chain(self, ob):
        if len(ob.premises) < 1:
            return None
        base = self.facts_of(ob.premises)
        for k, assignment in enumerate(chain_decompose(ob)):
            if k >= self.cfg.max_chain_backtracks:
                break
            self.tick()
            facts = list(base)
            for atom in ob.premises:
                rel = assignment.relations.get(atom.indicator)
                if rel is not None:
                    facts += facts_for(atom, rel.disjuncts[0])
            if not self.holds(ob, facts):
                continue
            if self.verify(assignment.relations, self.program) and \
                    self.holds(ob, self.facts_of(ob.premises), commit=True):
                rels = tuple(assignment.relations.values())
                return Discharge(ob, "chain", rels, self._premise_record(ob.premises, rels))
        return None

    def _unfold_fold(self, ob):
        prem = ob.premises
        windows = [prem[i:i + n] for n in range(len(prem), 1, -1) for i in range(len(prem) - n + 1)]
        base = self.facts_of(prem)
        for conj in windows:
            self.tick()
            gp = unfold_fold_group(self.program, conj)
            if gp.warnings:
                continue
            joined = join_atoms(conj)
            demand = []
            n = len(joined.args)
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    if i != j and self.holds(ob, base + [(joined.args[i - 1], joined.args[j - 1], True)]):
                        demand.append((i, j))
            for cand in candidate_relations(gp.pred, demand)[:2 * len(demand)]:
                self.tick()
                if not self.holds(ob, base + facts_for(joined, cand.disjuncts[0])):
                    continue
                if self.verify({gp.pred: cand}, gp.clauses):
                    facts = self.facts_of(prem) + facts_for(joined, cand.disjuncts[0])
                    if self.holds(ob, facts, commit=True):
                        rec = (f"({', '.join(format_term(a) for a in conj)}) in {cand.render()}",)
                        return Discharge(ob, "unfold-fold", (cand,), rec)
        return None

    # -- final check --
    def recheck(self, discharged, clauses_for_group) -> bool:
        """Re-derive every discharge and relation against the final spec, with no additions."""
        r_ext = self.extensible
        self.extensible = False
        try:
            for d in discharged:
                if d.strategy in ("dependency", "non-strict"):
                    continue
                facts = []
                for rel in d.relations:
                    if rel.pred in clauses_for_group:
                        conj = clauses_for_group[rel.pred][1]
                        facts += facts_for(join_atoms(conj), rel.disjuncts[0])
                facts += self.facts_of(d.obligation.premises)
                r = self.reasoner(facts, extensible=False)
                if not r.greater(d.obligation.lhs, d.obligation.rhs):
                    return False
            assumed = self.assumed()
            for pred, rels in self.relations.items():
                clauses = clauses_for_group[pred][0] if pred in clauses_for_group else self.program
                for rel in rels:
                    red = tp_reduce(rel, clauses, assumed)
                    res = verify_relation(red, self.spec, self.predicates, False,
                                          make=functools.partial(_make_with, self.make))
                    if not res.ok:
                        return False
            return True
        finally:
            self.extensible = r_ext


def _make_with(make, spec, facts, predicates, extensible):
    return make(spec, facts, predicates, extensible)


def _conj_with(old: InterargRelation | None, new: InterargRelation) -> InterargRelation:
    if old is None or old.is_trivial:
        return new
    comps = list(old.disjuncts[0])
    for c in new.disjuncts[0]:
        if c not in comps:
            comps.append(c)
    return InterargRelation(new.pred, (tuple(comps),))


def _dedup(items) -> tuple:
    out = []
    for x in items:
        if x not in out:
            out.append(x)
    return tuple(out)


def _initial_spec(kind: str, flt: RigidityFilter) -> OrderingSpec:
    if kind == "axiomatic":
        return Axiomatic(OrderingConstraintStore(ignored=flt))
    if kind == "rpo":
        return Rpo(Precedence(), flt)
    return NormBased(kind, flt)


@dataclass
class _Result:
    ok: bool
    spec: OrderingSpec | None
    attempt: _Attempt | None
    discharged: list
    failing: DecreaseObligation | None = None
    reason: str | None = None


def _run(program, obligations, spec, cfg, predicates, make=None, extra_groups=None) -> _Result:
    att = _Attempt(program, spec, cfg, predicates, make)
    discharged = []
    groups: dict = {}
    for k, ob in enumerate(obligations):
        if k in cfg.non_strict and att.reasoner(extensible=False).greater_eq(ob.lhs, ob.rhs):
            discharged.append(Discharge(ob, "non-strict"))
            continue
        try:
            d = att.discharge(ob)
        except _Budget:
            return _Result(False, att.spec, att, discharged, ob, "budget")
        if d is None:
            return _Result(False, att.spec, att, discharged, ob, _explain(ob, att))
        if d.strategy == "unfold-fold":
            rel = d.relations[0]
            conj = _window_for(ob, rel)
            groups[rel.pred] = (unfold_fold_group(program, conj).clauses, conj)
        discharged.append(d)
    if isinstance(att.spec, Axiomatic):
        ok, witness = store_consistent(att.spec.store)
        if not ok:
            return _Result(False, att.spec, att, discharged, None,
                           "inconsistent ordering requirements: " + "; ".join(witness))
    if not att.recheck(discharged, groups):
        return _Result(False, att.spec, att, discharged, None, "final re-check failed")
    return _Result(True, att.spec, att, discharged)


def _window_for(ob, rel):
    prem = ob.premises
    for n in range(len(prem), 1, -1):
        for i in range(len(prem) - n + 1):
            conj = prem[i:i + n]
            if join_atoms(conj).indicator == rel.pred:
                return conj
    raise AssertionError("grouped relation without matching premises")


def _explain(ob: DecreaseObligation, att: _Attempt) -> str:
    flt = att.spec.filter
    if erase(ob.lhs, flt) == erase(ob.rhs, flt) or (
            ob.kind == "model" and ob.lhs.indicator == ob.rhs.indicator
            and all(isinstance(a, Var) and a.name.startswith("v") for a in ob.lhs.args)):
        detail = "the decrease is only on ignored positions"
    else:
        detail = "no strategy discharges it"
    tried = ", ".join(att.cfg.strategies)
    return f"{ob.label()}: {ob.render()}: {detail} (tried {tried})"


def _search_kind(kind, program, obligations, flt, cfg, predicates, make=None) -> _Result:
    if kind != "rpo":
        return _run(program, obligations, _initial_spec(kind, flt), cfg, predicates, make)
    # depth-first search over precedences grown from edges demanded by failed comparisons
    preds = set(predicates)
    stack = [Precedence()]
    seen = set()
    first = None
    tried = 0
    while stack and tried < cfg.max_precedences:
        prec = stack.pop()
        if prec in seen:
            continue
        seen.add(prec)
        tried += 1
        res = _run(program, obligations, Rpo(prec, flt), cfg, predicates, make)
        if res.ok:
            return res
        if first is None or len(res.discharged) > len(first.discharged):
            first = res
        if res.reason == "budget":
            continue
        children = []
        for f, g in sorted(res.attempt.wishes):
            if f in preds or g in preds or HOLE.indicator in (f, g):
                continue
            nxt = prec.add(f, g)
            if nxt is not None and nxt not in seen:
                children.append(nxt)
        stack.extend(reversed(children))
    return first


def _choose(results) -> _Result:
    best = None
    for r in results:
        if r.ok:
            return r
        if best is None or len(r.discharged) > len(best.discharged):
            best = r
    return best


def _outcome(res: _Result, obligations, cfg, calls, started, kind_label=None) -> ProofOutcome:
    relations = []
    if res.attempt is not None:
        for rels in res.attempt.relations.values():
            relations += rels
    timings = {"total_ms": round((time.monotonic() - started) * 1000, 3)}
    if res.ok:
        return ProofOutcome("proved", res.spec, relations, res.discharged, obligations,
                            calls=calls, kind_label=kind_label, timings=timings)
    return ProofOutcome("unknown", res.spec, relations, res.discharged, obligations,
                        res.reason, res.failing, tuple(cfg.strategies), calls,
                        kind_label, timings)


def prove(p: Program, entries, g: TypeGrammar | None = None,
          cfg: SearchConfig | None = None) -> ProofOutcome:
    """Search for a rigid order-acceptability proof for the entry call patterns."""
    started = time.monotonic()
    cfg = cfg or SearchConfig()
    g = g or TypeGrammar.from_program(p)
    entries = [e if isinstance(e, CallPattern) else g.pattern(e) for e in entries]
    calls = infer_call_set(p, entries, g)
    flt = rigidity_filter(calls, g)
    graph = dependency_graph(p)
    obligations = gen_rigid_obligations(p, flt, graph)
    preds = p.predicates()
    results = []
    for kind in cfg.menu:
        res = _search_kind(kind, p, obligations, flt, cfg, preds)
        results.append(res)
        if res.ok:
            break
    res = _choose(results)
    if res.ok and not all(is_rigid_on(res.spec, c, g) for c in calls):
        res = replace(res, ok=False, reason="witness is not rigid on the call set")
    return _outcome(res, obligations, cfg, [str(c) for c in calls], started)


class StratifiedReasoner(Reasoner):
    """Atoms of a higher predicate stratum are strictly greater than lower ones."""

    def __init__(self, spec, facts=(), predicates=(), extensible=False, graph=None):
        super().__init__(spec, facts, predicates, extensible)
        self.graph = graph

    def _gt(self, s, t, depth):
        if self.graph is not None and isinstance(s, Struct) and isinstance(t, Struct):
            ps, pt = sym(s), sym(t)
            if ps in self.predicates and pt in self.predicates and ps != pt:
                return (self.graph.depends_on(ps, pt) and not self.graph.depends_on(pt, ps))
        return super()._gt(s, t, depth)


def prove_well_moded(p: Program, modes=None, cfg: SearchConfig | None = None) -> ProofOutcome:
    """Model-based proof for all well-moded goals; outputs are ignored by the ordering."""
    started = time.monotonic()
    cfg = cfg or SearchConfig()
    try:
        modes = modes if modes is not None else modes_of(p)
        obligations = gen_model_obligations(p, modes)
    except (NotWellModed, ModeError) as e:
        return ProofOutcome("unknown", reason=str(e), exhausted=(),
                            timings={"total_ms": round((time.monotonic() - started) * 1000, 3)})
    flt = output_filter(modes)
    graph = dependency_graph(p)
    make = functools.partial(_stratified, graph=graph)
    preds = p.predicates()
    results = []
    for kind in cfg.menu:
        res = _search_kind(kind, p, obligations, flt, cfg, preds, make)
        results.append(res)
        if res.ok:
            break
    return _outcome(_choose(results), obligations, cfg, [], started)


def _stratified(spec, facts, predicates, extensible, graph=None):
    return StratifiedReasoner(spec, facts, predicates, extensible, graph)


# --- meta-interpreter ------------------------------------------------------------

CONJ = (",", 2)
SOLVE = ("solve", 1)
CLAUSE = ("clause", 2)
TRUE = Struct("true")


def is_vanilla_solve(p: Program) -> bool:
    """Recognize the three-clause vanilla meta-interpreter up to variable names."""
    from .parser import parse_source
    from .terms import is_variant
    ref = parse_source("solve(true).\nsolve((A, B)) :- solve(A), solve(B).\n"
                       "solve(A) :- clause(A, B), solve(B).\n").clauses
    if len(p.clauses) != 3:
        return False
    return all(is_variant(Struct("$c", (a.head,) + a.body), Struct("$c", (b.head,) + b.body))
               for a, b in zip(ref, p.clauses))


def clause_facts(interpreted: Program) -> list:
    """The interpreted program as ``clause(Head, Body)`` facts."""
    out = []
    for c in interpreted.clauses:
        if not c.body:
            body = TRUE
        else:
            body = c.body[-1]
            for b in reversed(c.body[:-1]):
                body = Struct(",", (b, body))
        out.append(Clause(Struct("clause", (c.head, body))))
    return out


class LiftedReasoner(Reasoner):
    """Extends an ordering for an interpreted program to goals of the meta-interpreter.

    Conjunctions are above each conjunct, a non-conjunction term is above a
    conjunction when it is above every conjunct, ``solve`` is a congruence that
    dominates ``clause``, and ``true`` is the least goal.
    """

    def __init__(self, spec, facts=(), predicates=(), extensible=False, graph=None):
        super().__init__(spec, facts, predicates, extensible)
        self.graph = graph

    def eq(self, s, t):
        if isinstance(s, Struct) and isinstance(t, Struct) and sym(s) == sym(t) \
                and sym(s) in (CONJ, SOLVE):
            return all(self.eq(a, b) for a, b in zip(s.args, t.args))
        return super().eq(s, t)

    def _weak_monotone_rule(self, s, t, depth):
        if isinstance(s, Struct) and sym(s) == CONJ:
            return False
        return super()._weak_monotone_rule(s, t, depth)

    def _norm_ge(self, s, t):
        meta = (CONJ, SOLVE, CLAUSE, sym(TRUE))
        if any(isinstance(x, Struct) and sym(x) in meta for x in (s, t)):
            return False
        return super()._norm_ge(s, t)

    def _gt(self, s, t, depth):
        if isinstance(s, Var) or s == HOLE:
            return self._fact_rule(s, t, depth)
        if t == TRUE:
            return s != TRUE
        fs = sym(s)
        ft = sym(t) if isinstance(t, Struct) else None
        if fs == CONJ:
            return any(self.ge(a, t, depth) for a in s.args) or self._fact_rule(s, t, depth)
        if ft == CONJ:
            if fs == SOLVE:
                return self._fact_rule(s, t, depth)
            return all(self.gt(s, x, depth) for x in t.args)
        if fs == SOLVE:
            if ft == SOLVE:
                return self.gt(s.args[0], t.args[0], depth) or self._fact_rule(s, t, depth)
            if ft == CLAUSE:
                return True
            return self._fact_rule(s, t, depth)
        if self.graph is not None and ft is not None and fs != ft \
                and fs in self.predicates and ft in self.predicates:
            if self.graph.depends_on(fs, ft) and not self.graph.depends_on(ft, fs):
                return True
        return super()._gt(s, t, depth)


def _lifted(spec, facts, predicates, extensible, graph=None):
    return LiftedReasoner(spec, facts, predicates, extensible, graph)


def _lift_rigid(interpreted: Program, g: TypeGrammar, outcome: ProofOutcome) -> str | None:
    """Conjunction goals must be rigid before any of their atoms runs."""
    calls = [c for c in infer_call_set(interpreted, [g.pattern(e) for e in interpreted.entries], g)]
    spec = outcome.witness
    for c in interpreted.clauses:
        for cp in calls:
            if cp.pred != c.head.indicator:
                continue
            env: dict | None = {}
            for t, a in zip(c.head.args, cp.args):
                env = g.unify_abs(t, a, env)
                if env is None:
                    break
            if env is None:
                continue
            for b in c.body:
                pat = CallPattern(b.indicator, tuple(g.abstract_term(x, env) for x in b.args))
                if not is_rigid_on(spec, pat, g):
                    return f"goal {format_term(b)} is not rigid when its clause is selected"
    return None


def solve_meta(p: Program, interpreted: Program, cfg: SearchConfig | None = None) -> ProofOutcome:
    """Prove the vanilla meta-interpreter terminating over an interpreted program."""
    started = time.monotonic()
    cfg = cfg or SearchConfig()
    if not is_vanilla_solve(p):
        return ProofOutcome("unknown", reason="not the three-clause vanilla meta-interpreter",
                            timings={"total_ms": 0.0})
    g = TypeGrammar.from_program(interpreted)
    base = prove(interpreted, interpreted.entries, g, cfg)
    if not base.proved:
        base.reason = f"interpreted program not proved: {base.reason}"
        return base
    why = _lift_rigid(interpreted, g, base)
    if why is not None:
        return ProofOutcome("unknown", base.witness, base.relations, reason=why,
                            timings={"total_ms": round((time.monotonic() - started) * 1000, 3)})
    meta = Program(tuple(p.clauses) + tuple(clause_facts(interpreted)))
    graph = dependency_graph(interpreted)
    obligations = gen_rigid_obligations(meta, base.witness.filter)
    make = functools.partial(_lifted, graph=graph)
    preds = set(interpreted.predicates()) | set(meta.predicates())
    res = _run(meta, obligations, base.witness, cfg, preds, make)
    out = _outcome(res, obligations, cfg, base.calls, started, kind_label="lifted")
    if out.proved:
        out.relations = list(base.relations) + out.relations
        out.discharged = list(base.discharged) + out.discharged
        out.obligations = list(base.obligations) + out.obligations
    return out
