"""Mode declarations and the well-moded / simply-moded checks."""

from __future__ import annotations

from dataclasses import dataclass

from .terms import Program, Struct, Var, format_term, pred_str, variables


class ModeError(ValueError):
    """Raised when a predicate has no declared mode, or a mode is malformed."""


@dataclass(frozen=True)
class Mode:
    pred: tuple  # (name, arity)
    markers: tuple  # 'in' | 'out' per position

    def __post_init__(self):
        if len(self.markers) != self.pred[1]:
            raise ModeError(f"mode for {pred_str(self.pred)} has {len(self.markers)} positions")
        if any(m not in ("in", "out") for m in self.markers):
            raise ModeError(f"mode for {pred_str(self.pred)} must use in/out")

    def inputs(self) -> list:
        return [i for i, m in enumerate(self.markers, 1) if m == "in"]

    def outputs(self) -> list:
        return [i for i, m in enumerate(self.markers, 1) if m == "out"]

    def __str__(self):
        return f"{self.pred[0]}({','.join(self.markers)})"


@dataclass(frozen=True)
class Violation:
    clause: int  # 1-based clause number
    atom: str  # rendered atom or "head"
    position: int
    detail: str

    def __str__(self):
        return f"clause {self.clause}, {self.atom} #{self.position}: {self.detail}"


def modes_of(p: Program) -> dict:
    """Mode table built from the program's ``mode`` directives."""
    out = {}
    for a in p.modes:
        markers = tuple(m.name if isinstance(m, Struct) else str(m) for m in a.args)
        m = Mode(a.indicator, markers)
        if out.setdefault(m.pred, m) != m:
            raise ModeError(f"conflicting modes for {pred_str(m.pred)}")
    return out


def _table(p: Program, modes) -> dict:
    table = modes if isinstance(modes, dict) else {m.pred: m for m in modes}
    for q in p.predicates():
        if q not in table:
            raise ModeError(f"missing mode for {pred_str(q)}")
    return table


def _vars_at(atom: Struct, positions) -> set:
    return set(variables([atom.args[i - 1] for i in positions]))


def check_well_moded(p: Program, modes) -> tuple[bool, list]:
    """Every input of a body atom, and every head output, is produced to its left."""
    table = _table(p, modes)
    violations = []
    for ci, c in enumerate(p.clauses, 1):
        m = table[c.head.indicator]
        known = _vars_at(c.head, m.inputs())
        for b in c.body:
            bm = table[b.indicator]
            for i in bm.inputs():
                free = [v for v in variables(b.args[i - 1]) if v not in known]
                if free:
                    violations.append(Violation(ci, format_term(b), i,
                                                f"{', '.join(v.name for v in free)} not bound"))
            known |= _vars_at(b, bm.outputs())
        for i in m.outputs():
            free = [v for v in variables(c.head.args[i - 1]) if v not in known]
            if free:
                violations.append(Violation(ci, "head", i,
                                            f"{', '.join(v.name for v in free)} not produced"))
    return not violations, violations


def check_simply_moded(p: Program, modes) -> tuple[bool, list]:
    """Body outputs are distinct fresh variables, not consumed earlier or by the head input."""
    table = _table(p, modes)
    violations = []
    for ci, c in enumerate(p.clauses, 1):
        outs = []
        for b in c.body:
            for i in table[b.indicator].outputs():
                t = b.args[i - 1]
                if not isinstance(t, Var):
                    violations.append(Violation(ci, format_term(b), i, "output is not a variable"))
                elif t in outs:
                    violations.append(Violation(ci, format_term(b), i, f"{t.name} repeated"))
                outs.append(t)
        for k, b in enumerate(c.body):
            later = set()
            for b2 in c.body[k:]:
                later |= _vars_at(b2, table[b2.indicator].outputs())
            for i in table[b.indicator].inputs():
                clash = set(variables(b.args[i - 1])) & later
                if clash:
                    violations.append(Violation(ci, format_term(b), i,
                                                f"{', '.join(sorted(v.name for v in clash))} "
                                                "is an output of this or a later atom"))
        all_outs = set()
        for b in c.body:
            all_outs |= _vars_at(b, table[b.indicator].outputs())
        for i in table[c.head.indicator].inputs():
            clash = set(variables(c.head.args[i - 1])) & all_outs
            if clash:
                violations.append(Violation(ci, "head", i,
                                            f"{', '.join(sorted(v.name for v in clash))} "
                                            "is also a body output"))
    return not violations, violations
