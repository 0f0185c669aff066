"""The node-program contract consumed by the engine.

A program is a pair ``init(node, value)`` / ``next(state, snaps)``. ``next``
receives the node's own published state and the published states of its
neighbors in identifier order (Bottom is ``None``) and returns either the
next running state or ``Terminated(output)``. Programs are immutable once
built and may be shared between concurrent executions.
"""
from abc import ABC, abstractmethod
from typing import Any, Dict, FrozenSet, Hashable, Iterable, Optional, Sequence

from app.core.engine import Terminated, is_terminated
from app.core.errors import PreconditionError

# Running-state dataclasses by class name, for the trace codec
STATE_TYPES: Dict[str, type] = {}


def state_type(cls):
    STATE_TYPES[cls.__name__] = cls
    return cls


def mex(values: Iterable[int]) -> int:
    """Least natural number not in ``values``."""
    taken = set(values)
    n = 0
    while n in taken:
        n += 1
    return n


def visible(snaps: Sequence[Any]):
    """Running neighbor states; Bottom and terminal states are skipped."""
    return [s for s in snaps if s is not None and not is_terminated(s)]


class Algorithm(ABC):
    name: str = ""
    # Snapshots are padded with Bottom up to this length
    arity: Optional[int] = None
    # Largest degree the program is correct for
    max_degree: Optional[int] = None

    @abstractmethod
    def init(self, node: int, value: Any = None) -> Any:
        ...

    @abstractmethod
    def next(self, state: Any, snaps: Sequence[Any]) -> Any:
        ...

    def palette(self) -> Optional[FrozenSet[Hashable]]:
        """Every output the program may decide, or None when unbounded."""
        return None

    def check_graph(self, graph) -> None:
        if self.max_degree is not None and graph.max_degree > self.max_degree:
            raise PreconditionError(
                f"{self.name} handles max degree {self.max_degree}, graph has {graph.max_degree}"
            )

    def decide(self, output: Hashable) -> Terminated:
        return Terminated(output)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


def pair_palette(delta: int):
    return frozenset((a, b) for a in range(delta + 1) for b in range(delta + 1 - a))
