"""Thompson's group F, strand diagrams, their tangles and a Khovanov-type lax action."""

from . import fgroup, gf2, khovanov, laxaction, orient, render, strand, tangle, typetwo
from .fgroup import IDENTITY, X0, X1, FElement, Forest, multiply, parse_element
from .strand import StrandDiagram, StrandGraph, reduce, star, theta
from .tangle import Tangle, closure, distinguish, kauffman_bracket, tangle_of

__all__ = [
    "fgroup", "gf2", "khovanov", "laxaction", "orient", "render", "strand", "tangle", "typetwo",
    "IDENTITY", "X0", "X1", "FElement", "Forest", "multiply", "parse_element",
    "StrandDiagram", "StrandGraph", "reduce", "star", "theta",
    "Tangle", "closure", "distinguish", "kauffman_bracket", "tangle_of",
]
