"""Colour reduction from a proper colouring x down to pairs (a, b) with
a + b <= delta.

A node stops as soon as its pair differs from every visible neighbor pair;
otherwise ``a`` avoids the a-values of neighbors with a larger x and ``b``
avoids the b-values of neighbors with a smaller x.
"""
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence

from app.algorithms.base import Algorithm, mex, pair_palette, state_type, visible


@state_type
@dataclass(frozen=True)
class PairState:
    x: int
    a: int = 0
    b: int = 0

    @property
    def pair(self):
        return self.a, self.b


class SaveColors(Algorithm):
    name = "save"

    def __init__(self, delta: int):
        self.delta = delta
        self.max_degree = delta

    def init(self, node, value=None):
        return PairState(x=node if value is None else value)

    def next(self, state: PairState, snaps: Sequence):
        neighbors = visible(snaps)
        if state.pair not in {s.pair for s in neighbors}:
            return self.decide(state.pair)
        a = mex(s.a for s in neighbors if s.x > state.x)
        b = mex(s.b for s in neighbors if s.x < state.x)
        return PairState(x=state.x, a=a, b=b)

    def palette(self):
        return pair_palette(self.delta)


def layer_partition(graph, x: Mapping[int, int]) -> Dict[int, int]:
    """Layer of every node: layer 1 holds the local minima of x, layer i the
    local minima once layers 1..i-1 are removed."""
    layer: Dict[int, int] = {}
    remaining = set(graph.nodes)
    i = 0
    while remaining:
        i += 1
        current = {
            v for v in remaining
            if all(x[v] < x[u] for u in graph.neighbors(v) if u in remaining)
        }
        for v in current:
            layer[v] = i
        remaining -= current
    return layer


def runtime_bound(layer: int, delta: int) -> int:
    bound = delta + 3
    for _ in range(layer - 1):
        bound = (delta + 4) + (delta + 4) * delta * bound
    return bound


def x_values(graph, inputs: Optional[Mapping[int, int]]) -> Dict[int, int]:
    inputs = inputs or {}
    return {v: v if inputs.get(v) is None else inputs[v] for v in graph.nodes}
