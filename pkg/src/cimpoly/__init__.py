"""Characteristic imset polytopes: enumeration, exact edge tests, paths and
tree flips."""

from .errors import CimError, Infeasible, LimitExceeded, PreconditionError
from .graphs import Dag, PDag, UGraph, format_graph, parse_graph
from .imset import Imset, characteristic_imset, markov_equivalent

__all__ = [
    "CimError",
    "Dag",
    "Imset",
    "Infeasible",
    "LimitExceeded",
    "PDag",
    "PreconditionError",
    "UGraph",
    "characteristic_imset",
    "format_graph",
    "markov_equivalent",
    "parse_graph",
]
