"""Small shared-memory programs for the weak symmetry breaking counts.

They run on the clique over processes 1..n; every output is a bit.
"""
from dataclasses import dataclass, replace
from typing import Sequence

from app.algorithms.base import Algorithm, state_type, visible


@state_type
@dataclass(frozen=True)
class ToyState:
    z: int
    activations: int = 0


class ToyAlgorithm(Algorithm):
    def init(self, node, value=None):
        return ToyState(z=node)

    def palette(self):
        return frozenset({0, 1})


class Constant(ToyAlgorithm):
    def __init__(self, bit: int):
        self.bit = bit
        self.name = f"const{bit}"

    def next(self, state, snaps: Sequence):
        return self.decide(self.bit)


class SeenOne(ToyAlgorithm):
    """1 iff some other process is visible at the first activation."""

    name = "seen1"

    def next(self, state, snaps: Sequence):
        return self.decide(1 if visible(snaps) else 0)


class IdParity(ToyAlgorithm):
    name = "id-parity"

    def next(self, state, snaps: Sequence):
        return self.decide(state.z % 2)


class SecondLook(ToyAlgorithm):
    """Decides at the second activation: 1 iff another process is visible."""

    name = "second-look"

    def next(self, state, snaps: Sequence):
        if state.activations == 0:
            return replace(state, activations=1)
        return self.decide(1 if visible(snaps) else 0)


TOYS = {
    "const0": lambda: Constant(0),
    "const1": lambda: Constant(1),
    "seen1": SeenOne,
    "id-parity": IdParity,
    "second-look": SecondLook,
}
