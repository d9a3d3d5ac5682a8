"""Exact counting of k-holes and the 5-hole assignment construction."""
from .geometry import Point, PointSet
from .holes import Hole, build_catalog, count_chain_dp, enumerate_brute
from .layers import decompose

__version__ = "0.1.0"

__all__ = [
    "Hole",
    "Point",
    "PointSet",
    "build_catalog",
    "count_chain_dp",
    "decompose",
    "enumerate_brute",
]
