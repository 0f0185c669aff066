"""Sequential composition of two node programs.

A node runs ``first`` until it decides, then starts ``second`` with that
decision as input. Every running state carries its phase. A phase-2 reader
sees phase-1 neighbors as Bottom; a phase-1 reader sees a phase-2 neighbor
through the last phase-1 state that neighbor published, which is frozen.
"""
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from app.algorithms.base import Algorithm, state_type
from app.core.engine import Terminated, is_terminated
from app.core.errors import CorruptTraceError


@state_type
@dataclass(frozen=True)
class Phased:
    phase: int
    node: int
    inner: Any
    frozen: Any = None


@state_type
@dataclass(frozen=True)
class Held:
    z: int
    value: Any = None


class Identity(Algorithm):
    """Decides its input at the first activation."""

    name = "identity"

    def init(self, node, value=None):
        return Held(z=node, value=value)

    def next(self, state: Held, snaps: Sequence):
        return self.decide(state.value)


def _pad(snaps, arity: Optional[int]):
    snaps = list(snaps)
    if arity is not None and len(snaps) < arity:
        snaps += [None] * (arity - len(snaps))
    return snaps


class Composed(Algorithm):
    def __init__(self, first: Algorithm, second: Algorithm):
        self.first = first
        self.second = second
        self.name = f"{first.name}+{second.name}"
        degrees = [d for d in (first.max_degree, second.max_degree) if d is not None]
        self.max_degree = min(degrees) if degrees else None

    def init(self, node, value=None):
        return Phased(phase=1, node=node, inner=self.first.init(node, value))

    def _view(self, reader_phase: int, snap):
        if snap is None or is_terminated(snap):
            return None
        if not isinstance(snap, Phased) or snap.phase not in (1, 2):
            raise CorruptTraceError(f"unexpected neighbor state {snap!r} in {self.name}")
        if reader_phase == 2:
            return snap.inner if snap.phase == 2 else None
        return snap.inner if snap.phase == 1 else snap.frozen

    def next(self, state: Phased, snaps: Sequence):
        if not isinstance(state, Phased) or state.phase not in (1, 2):
            raise CorruptTraceError(f"unexpected own state {state!r} in {self.name}")
        views = [self._view(state.phase, s) for s in snaps]
        if state.phase == 1:
            result = self.first.next(state.inner, _pad(views, self.first.arity))
            if isinstance(result, Terminated):
                return Phased(phase=2, node=state.node, inner=self.second.init(state.node, result.output),
                              frozen=state.inner)
            return Phased(phase=1, node=state.node, inner=result)
        result = self.second.next(state.inner, _pad(views, self.second.arity))
        if isinstance(result, Terminated):
            return result
        return Phased(phase=2, node=state.node, inner=result, frozen=state.frozen)

    def palette(self):
        return self.second.palette()


def compose_phases(first: Algorithm, second: Algorithm) -> Composed:
    return Composed(first, second)
