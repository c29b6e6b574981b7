"""Decide whether finite models can define new information generators.

The package checks Condition S (every seen subset of inputs leaves unseen
inputs with new representations) and its per-dimension extension S*, and
ships the supporting constructions: fibers, evasion wrappers, Jaccard
hypothesis validity, memory compilation and split/merge experiments.
"""

__version__ = "0.1.0"

from .analysis import compile_memory, hypothesis_validity, jaccard, split_experiment
from .domain import (
    NULL,
    Atom,
    Box,
    DiscreteDomain,
    InformationGenerator,
    cardinality,
    enumerate_points,
    extend_dimension,
    fibers,
    make_domain,
)
from .models import (
    Indicator,
    Model,
    affine_model,
    classifier_model,
    evaluate,
    lookup_table_model,
    pairing_model,
    piecewise_model,
    range_of,
    restrict_model,
)
from .verifier import (
    Certificate,
    Overall,
    Policy,
    Reading,
    Verdict,
    check_s_bruteforce,
    check_s_fast,
    check_s_star,
    classify,
    find_collision,
)

__all__ = [
    "NULL",
    "Atom",
    "Box",
    "Certificate",
    "DiscreteDomain",
    "Indicator",
    "InformationGenerator",
    "Model",
    "Overall",
    "Policy",
    "Reading",
    "Verdict",
    "affine_model",
    "cardinality",
    "check_s_bruteforce",
    "check_s_fast",
    "check_s_star",
    "classifier_model",
    "classify",
    "compile_memory",
    "enumerate_points",
    "evaluate",
    "extend_dimension",
    "fibers",
    "find_collision",
    "hypothesis_validity",
    "jaccard",
    "lookup_table_model",
    "make_domain",
    "pairing_model",
    "piecewise_model",
    "range_of",
    "restrict_model",
    "split_experiment",
]
