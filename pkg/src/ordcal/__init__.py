"""Exact ordered products of formal series: free algebras, Hahn series and composition."""

from .orders import TreeOrder, linearize, reconstruct_signs
from .free import FreeSeries, OrderedAlphabet, evaluate, op_series
from .products import OrderedFamily, ordered_product, twist, verify_axioms
from .hahn import HahnSeries, parse_series
from .tgroup import TElement, compose, decompose, invert, iterate, recompose

__all__ = [
    "TreeOrder", "linearize", "reconstruct_signs",
    "FreeSeries", "OrderedAlphabet", "evaluate", "op_series",
    "OrderedFamily", "ordered_product", "twist", "verify_axioms",
    "HahnSeries", "parse_series",
    "TElement", "compose", "decompose", "invert", "iterate", "recompose",
]
