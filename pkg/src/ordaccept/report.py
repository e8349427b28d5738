"""Proof reports in a human-readable text form and a structured (JSON) form."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

from .ordering import render_spec
from .search import ProofOutcome, SearchConfig

FORMAT_VERSION = 1

_NO_ORDERING = {"kind": "none", "precedence": [], "filter": [], "properties": []}


@dataclass
class ProofReport:
    status: str
    program: dict = field(default_factory=dict)  # {"path": ..., "hash": ...}
    reason: str | None = None
    ordering: dict = field(default_factory=lambda: dict(_NO_ORDERING))
    relations: list = field(default_factory=list)
    obligations: list = field(default_factory=list)  # {clause, atom, strategy, premises}
    timings: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    def to_dict(self) -> dict:
        d = asdict(self)
        order = ["format_version", "program", "status", "reason", "ordering", "relations",
                 "obligations", "timings", "config"]
        return {k: d[k] for k in order}

    @classmethod
    def from_dict(cls, d: dict) -> "ProofReport":
        if d.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported report format {d.get('format_version')}")
        return cls(**{k: d[k] for k in ("status", "program", "reason", "ordering", "relations",
                                        "obligations", "timings", "config", "format_version")})


def program_identity(path: str | None, text: str) -> dict:
    return {"path": path, "hash": "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()}


def _entry(ob, strategy, premises) -> dict:
    return {"clause": ob.clause_id, "atom": ob.render(), "strategy": strategy,
            "premises": list(premises)}


def build_report(outcome: ProofOutcome, path: str | None = None, text: str = "",
                 cfg: SearchConfig | None = None, mode: str = "rigid") -> ProofReport:
    cfg = cfg or SearchConfig()
    ordering = dict(_NO_ORDERING)
    if outcome.witness is not None:
        ordering = render_spec(outcome.witness)
        if outcome.kind_label:
            ordering["kind"] = f"{outcome.kind_label}({ordering['kind']})"
    obligations = []
    done = {id(d.obligation) for d in outcome.discharged}
    if outcome.failing is not None:
        obligations.append(_entry(outcome.failing, "undischarged", []))
    for d in outcome.discharged:
        obligations.append(_entry(d.obligation, d.strategy, d.premises))
    if not outcome.proved:
        for ob in outcome.obligations:
            if id(ob) not in done and ob is not outcome.failing:
                obligations.append(_entry(ob, "pending", []))
    config = cfg.as_dict()
    config["mode"] = mode
    return ProofReport(
        status=outcome.status,
        program=program_identity(path, text),
        reason=outcome.reason,
        ordering=ordering,
        relations=[r.render() for r in outcome.relations],
        obligations=obligations,
        timings=dict(outcome.timings),
        config=config,
    )


def render_report(r: ProofReport, fmt: str = "text") -> str:
    if fmt == "structured":
        return json.dumps(r.to_dict(), indent=2, ensure_ascii=False)
    if fmt != "text":
        raise ValueError(f"unknown format {fmt}")
    lines = [f"status: {r.status}"]
    if r.program.get("path"):
        lines.append(f"program: {r.program['path']} ({r.program['hash']})")
    if r.reason:
        lines.append(f"reason: {r.reason}")
    o = r.ordering
    lines.append(f"ordering: {o['kind']}")
    for key in ("precedence", "filter", "properties"):
        if o[key]:
            lines.append(f"  {key}: " + ", ".join(o[key]))
    if r.relations:
        lines.append("relations:")
        lines += [f"  {x}" for x in r.relations]
    if r.obligations:
        lines.append("obligations:")
        for ob in r.obligations:
            line = f"  [{ob['strategy']}] clause {ob['clause']}: {ob['atom']}"
            if ob["premises"]:
                line += "  [given " + "; ".join(ob["premises"]) + "]"
            lines.append(line)
    if r.timings:
        lines.append("timings: " + ", ".join(f"{k}={v}" for k, v in r.timings.items()))
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> ProofReport:
    return ProofReport.from_dict(json.loads(text))
