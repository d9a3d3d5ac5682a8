"""Onion-layer decomposition by repeated hull peeling."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .geometry import PointSet, convex_hull


@dataclass(frozen=True)
class LayerDecomposition:
    """Layers ordered outermost first; each layer lists its hull vertices CCW.

    ``k_mid`` is the largest ``k`` such that the layers before ``k`` hold
    fewer than half of the points (compared as ``2 * total < n``).
    """

    n: int
    layers: tuple[tuple[int, ...], ...]
    k_mid: int

    @property
    def L(self) -> int:
        return len(self.layers)

    @cached_property
    def layer_of(self) -> dict[int, int]:
        """Map point index to its 1-based layer number."""
        return {v: i for i, layer in enumerate(self.layers, 1) for v in layer}

    def sizes(self) -> list[int]:
        return [len(layer) for layer in self.layers]

    def centers(self) -> list[int]:
        """Points of layers 1..k_mid in increasing index order."""
        return sorted(v for layer in self.layers[: self.k_mid] for v in layer)


def compute_k_mid(sizes: list[int], n: int) -> int:
    k_mid, before = 0, 0
    for k, size in enumerate(sizes, 1):
        if 2 * before < n:
            k_mid = k
        before += size
    return k_mid


def decompose(ps: PointSet) -> LayerDecomposition:
    if len(ps) < 1:
        raise ValueError("cannot decompose an empty point set")
    remaining = set(range(len(ps)))
    layers = []
    while remaining:
        hull = convex_hull(ps, remaining)
        layers.append(tuple(hull))
        remaining.difference_update(hull)
    sizes = [len(layer) for layer in layers]
    return LayerDecomposition(len(ps), tuple(layers), compute_k_mid(sizes, len(ps)))


def suffix_set(dec: LayerDecomposition, i: int) -> list[int]:
    """Indices of layers ``i..L`` (1-based), sorted."""
    if not 1 <= i <= dec.L:
        raise IndexError(f"layer {i} out of range 1..{dec.L}")
    return sorted(v for layer in dec.layers[i - 1 :] for v in layer)
