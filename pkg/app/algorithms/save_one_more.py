"""Pair reduction that never outputs (delta, 0).

Works like ``SaveColors`` except that:

* (delta, 0) and (0, delta) count as the same pair when testing for
  termination, so neighbors holding them cannot both stop;
* a node holding delta in its pair records the identifiers of neighbors
  that also hold delta in ``f``, which flips the x-comparison on that edge;
* a local maximum of x whose whole neighborhood is "special" may stop early
  with (0, delta).

Snapshots always have exactly ``delta`` slots; missing neighbors are Bottom.
"""
from dataclasses import dataclass, replace
from typing import FrozenSet, Sequence, Set, Tuple

from app.algorithms.base import Algorithm, mex, pair_palette, state_type
from app.core.engine import is_terminated


@state_type
@dataclass(frozen=True)
class FlipState:
    x: int
    z: int
    a: int = 0
    b: int = 0
    f: FrozenSet[int] = frozenset()
    alpha: bool = False
    beta: bool = False

    @property
    def pair(self) -> Tuple[int, int]:
        return self.a, self.b


def map_pair(a: int, b: int, delta: int) -> Tuple[int, int]:
    if (a, b) == (delta, 0):
        return 0, delta
    return a, b


def _present(s) -> bool:
    return s is not None and not is_terminated(s)


def is_flipped(s, t) -> bool:
    return _present(s) and _present(t) and (t.z in s.f or s.z in t.f)


def is_not_flipped(s, t) -> bool:
    return _present(s) and _present(t) and t.z not in s.f and s.z not in t.f


def smaller_larger(state: FlipState, snaps: Sequence) -> Tuple[Set[int], Set[int]]:
    """0-based positions of the neighbors ``state`` treats as smaller / larger."""
    smaller, larger = set(), set()
    for i, t in enumerate(snaps):
        if is_not_flipped(state, t):
            if state.x > t.x:
                smaller.add(i)
            elif state.x < t.x:
                larger.add(i)
        elif is_flipped(state, t):
            if state.x < t.x:
                smaller.add(i)
            elif state.x > t.x:
                larger.add(i)
    return smaller, larger


def special_neighborhood(state: FlipState, snaps: Sequence, delta: int) -> bool:
    if len(snaps) < delta or not all(_present(t) for t in snaps[:delta]):
        return False
    snaps = snaps[:delta]
    values = {state.a, state.b}
    for t in snaps:
        values.update((t.a, t.b))
    if not values <= set(range(delta)):
        return False
    if not (state.alpha and state.beta):
        return False
    for t in snaps:
        # t may not have seen ``state`` yet; count what one more read would add
        smaller, larger = smaller_larger(t, [state])
        if not (t.alpha or len(smaller) == 1):
            return False
        if not (t.beta or len(larger) == 1):
            return False
    return True


def special_termination(state: FlipState, snaps: Sequence, delta: int) -> bool:
    return special_neighborhood(state, snaps, delta) and all(state.x > t.x for t in snaps[:delta])


class SaveOneMoreColor(Algorithm):
    name = "save1"

    def __init__(self, delta: int):
        self.delta = delta
        self.max_degree = delta
        self.arity = delta

    def init(self, node, value=None):
        return FlipState(x=node if value is None else value, z=node)

    def next(self, state: FlipState, snaps: Sequence):
        delta = self.delta
        present = [t for t in snaps if _present(t)]
        mine = map_pair(state.a, state.b, delta)
        if mine not in {map_pair(t.a, t.b, delta) for t in present}:
            return self.decide(mine)

        s = state
        if delta in (s.a, s.b):
            flipped = {t.z for t in present if delta in (t.a, t.b)}
            s = replace(s, f=s.f | flipped)
        smaller, larger = smaller_larger(s, snaps)
        s = replace(
            s,
            a=mex(snaps[i].a for i in larger),
            b=mex(snaps[i].b for i in smaller),
            alpha=s.alpha or bool(smaller),
            beta=s.beta or bool(larger),
        )
        if special_termination(s, snaps, delta):
            return self.decide((0, delta))
        return s

    def palette(self):
        return pair_palette(self.delta) - {(self.delta, 0)}
