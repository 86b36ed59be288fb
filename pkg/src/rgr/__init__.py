"""Reachability graph realizability: decide whether a digraph is the reachability graph of a temporal graph."""
from .core import (ALL_VARIANTS, ANY_NONSTRICT, ANY_STRICT, DIRECTED_VARIANTS, HAPPY, PROPER,
                   SIMPLE_NONSTRICT, SIMPLE_STRICT, UNDIRECTED_VARIANTS, CheckResult, Digraph,
                   LabelClass, Labeling, RealizeResult, TemporalGraph, Variant, Verdict,
                   check_realization, reachability, validate_label_class)

__all__ = [
    "ALL_VARIANTS", "ANY_NONSTRICT", "ANY_STRICT", "DIRECTED_VARIANTS", "HAPPY", "PROPER",
    "SIMPLE_NONSTRICT", "SIMPLE_STRICT", "UNDIRECTED_VARIANTS", "CheckResult", "Digraph",
    "LabelClass", "Labeling", "RealizeResult", "TemporalGraph", "Variant", "Verdict",
    "check_realization", "reachability", "validate_label_class",
]
