"""Normalization of conditional expressions, with instrumented termination checks."""

from .expr import Atom, Expr, ExprSyntaxError, ExprUniverse, If, atoms_of, parse, random_expr, size, to_text
from .measures import LexMeasure, if_depth, inverse_image, lex_combine, lex_norm2_measure, m, tested_if_count
from .normalize import CallEdge, NormOutcome, RuleTag, Status, is_normal, norm, norm1, norm2, normif
from .relation import RelationKind, longest_chain, prec_norm, prec_norm2, preds_norm, verify_measure_witness
from .semantics import eval_expr, is_tautology, semantically_equal

__all__ = [
    "Atom", "Expr", "ExprSyntaxError", "ExprUniverse", "If", "atoms_of", "parse", "random_expr",
    "size", "to_text", "LexMeasure", "if_depth", "inverse_image", "lex_combine",
    "lex_norm2_measure", "m", "tested_if_count", "CallEdge", "NormOutcome", "RuleTag", "Status",
    "is_normal", "norm", "norm1", "norm2", "normif", "RelationKind", "longest_chain", "prec_norm",
    "prec_norm2", "preds_norm", "verify_measure_witness", "eval_expr", "is_tautology",
    "semantically_equal",
]
