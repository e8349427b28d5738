"""Termination proofs for definite logic programs with general well-founded orderings."""

from .abstract import CallPattern, RigidityFilter, TypeGrammar, infer_call_set, rigidity_filter
from .interarg import InterargRelation, candidate_relations, tp_reduce, verify_relation
from .modes import Mode, check_simply_moded, check_well_moded
from .obligations import (chain_decompose, gen_model_obligations, gen_rigid_obligations,
                          unfold_fold_group)
from .oracle import QuerySampler, ld_explore, sample_queries, soundness_check
from .ordering import (Axiomatic, CompareResult, NormBased, OrderingConstraintStore, Precedence,
                       Rpo, compare, is_rigid_on, store_consistent)
from .parser import ParseError, corpus_path, parse_file, parse_query, parse_source, parse_term
from .report import ProofReport, build_report, render_report
from .search import ProofOutcome, SearchConfig, prove, prove_well_moded, solve_meta
from .terms import Clause, Program, Struct, Var, dependency_graph, mgu, rename_apart

__all__ = [
    "CallPattern", "RigidityFilter", "TypeGrammar", "infer_call_set", "rigidity_filter",
    "InterargRelation", "candidate_relations", "tp_reduce", "verify_relation",
    "Mode", "check_simply_moded", "check_well_moded",
    "chain_decompose", "gen_model_obligations", "gen_rigid_obligations", "unfold_fold_group",
    "QuerySampler", "ld_explore", "sample_queries", "soundness_check",
    "Axiomatic", "CompareResult", "NormBased", "OrderingConstraintStore", "Precedence", "Rpo",
    "compare", "is_rigid_on", "store_consistent",
    "ParseError", "corpus_path", "parse_file", "parse_query", "parse_source", "parse_term",
    "ProofReport", "build_report", "render_report",
    "ProofOutcome", "SearchConfig", "prove", "prove_well_moded", "solve_meta",
    "Clause", "Program", "Struct", "Var", "dependency_graph", "mgu", "rename_apart",
]
