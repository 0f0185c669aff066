"""A published 5-colouring rule for cycles that can livelock.

Kept as a counterexample: on a 4-cycle some schedulings make two adjacent
nodes alternate between the same pair of states forever.
"""
from typing import Sequence

from app.algorithms.base import Algorithm, mex, visible
from app.algorithms.save import PairState


class BuggyFiveColoring(Algorithm):
    name = "buggy5"
    max_degree = 2
    arity = 2

    def init(self, node, value=None):
        return PairState(x=node)

    def next(self, state: PairState, snaps: Sequence):
        neighbors = visible(snaps)
        larger = {v for s in neighbors if s.x > state.x for v in (s.a, s.b)}
        seen = {v for s in neighbors for v in (s.a, s.b)}
        if state.a not in seen:
            return self.decide(state.a)
        if state.b not in seen:
            return self.decide(state.b)
        return PairState(x=state.x, a=mex(larger), b=mex(seen))

    def palette(self):
        return frozenset(range(5))
