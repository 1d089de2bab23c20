"""Type flow analysis for a core object-oriented calculus, with points-to,
CHA, RTA and VTA reference analyses for differential checking."""

from .classic import cha_callgraph, cha_resolve, instantiated_classes, rta_callgraph, vta_propagate
from .diff import check_program, check_theorem1, collect_stats, compare_callgraphs, run_all
from .frontend import build_class_table, canonical_vars, format_program, parse_program
from .generator import GenConfig, gen_program
from .minimize import Partition, alias_scc, bisim_minimize, check_refinement, quotient
from .pta import class_projection, pta_callgraph, pta_fixpoint
from .tfa import reaching_types, seed_base_relations, tfa_callgraph, tfa_fixpoint

__all__ = [
    "GenConfig",
    "Partition",
    "alias_scc",
    "bisim_minimize",
    "build_class_table",
    "canonical_vars",
    "cha_callgraph",
    "cha_resolve",
    "check_program",
    "check_refinement",
    "check_theorem1",
    "class_projection",
    "collect_stats",
    "compare_callgraphs",
    "format_program",
    "gen_program",
    "instantiated_classes",
    "parse_program",
    "pta_callgraph",
    "pta_fixpoint",
    "quotient",
    "reaching_types",
    "rta_callgraph",
    "run_all",
    "seed_base_relations",
    "tfa_callgraph",
    "tfa_fixpoint",
    "vta_propagate",
]
