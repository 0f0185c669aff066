"""Wait-free colour reduction with a sequence of cover-free families.

``S[0]`` is the identifier; round r replaces the colour ``S[r]`` by the
least element of ``F_r(S[r])`` that no visible neighbor's ``F_r(S_u[r])``
covers. Neighbors ahead of round r still expose their whole array, so only
their r-th entry matters; neighbors behind it expose Bottom there.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from app.algorithms.base import Algorithm, state_type, visible
from app.core.coverfree import ReductionSchedule, reduction_schedule
from app.core.errors import CorrectnessViolation


@state_type
@dataclass(frozen=True)
class LinialState:
    z: int
    S: Tuple[Optional[int], ...]
    level: int = 0

    @property
    def color(self) -> int:
        return self.S[self.level]


class WaitFreeLinial(Algorithm):
    name = "linial"

    def __init__(self, id_bound: int, delta: int):
        self.delta = delta
        self.max_degree = delta
        self.schedule: ReductionSchedule = reduction_schedule(max(id_bound, 2), delta)

    @property
    def rounds(self) -> int:
        return self.schedule.rounds

    def init(self, node, value=None):
        return LinialState(z=node, S=(node,) + (None,) * self.rounds)

    def next(self, state: LinialState, snaps: Sequence):
        r = state.level
        if r == self.rounds:
            return self.decide(state.color)
        family = self.schedule.families[r]
        taken = set()
        for s in visible(snaps):
            if s.S[r] is not None:
                taken |= family.image(s.S[r])
        candidates = family.image(state.color) - taken
        if not candidates:
            raise CorrectnessViolation(state.z, f"round {r + 1}: colour {state.color} is covered by its neighbors")
        color = min(candidates)
        if r + 1 == self.rounds:
            return self.decide(color)
        S = list(state.S)
        S[r + 1] = color
        return LinialState(z=state.z, S=tuple(S), level=r + 1)

    def palette(self):
        return frozenset(range(1, self.schedule.final_palette + 1))
