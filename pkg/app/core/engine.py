"""ASYNC LOCAL step semantics.

Every node owns a register holding its published state (``old``) and keeps a
pending state (``new``). Scheduling a node publishes its pending state and
then reads the published states of its neighbors in one atomic operation;
concurrently scheduled neighbors see each other's fresh writes. Bottom is
represented by ``None``.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from app.core.config import settings
from app.core.errors import PreconditionError, SchedulingFormatError
from app.core.graphs import Graph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Terminated:
    output: Hashable


def is_terminated(state) -> bool:
    return isinstance(state, Terminated)


Block = FrozenSet[int]


class Scheduling:
    """A (possibly infinite) sequence of nonempty node sets.

    ``awaited`` is the set of nodes the scheduling keeps activating forever;
    an execution is complete once all of them have terminated. Crashes are
    nothing more than absence from later blocks.
    """

    def __init__(
        self,
        source: Callable[[], Iterable[Iterable[int]]],
        awaited: Iterable[int],
        description: str = "",
    ):
        self._source = source
        self.awaited = frozenset(awaited)
        self.description = description

    def __iter__(self) -> Iterator[Block]:
        for block in self._source():
            yield frozenset(block)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Iterable[int]], description: str = "explicit") -> "Scheduling":
        frozen = [frozenset(b) for b in blocks]
        awaited = frozenset().union(*frozen) if frozen else frozenset()
        return cls(lambda: iter(frozen), awaited, description=description)

    @classmethod
    def periodic(cls, prefix: Sequence[Iterable[int]], period: Sequence[Iterable[int]], description: str = "periodic") -> "Scheduling":
        prefix = [frozenset(b) for b in prefix]
        period = [frozenset(b) for b in period]
        if not period:
            raise SchedulingFormatError("a periodic scheduling needs a nonempty period")

        def source():
            yield from prefix
            yield from itertools.cycle(period)

        return cls(source, frozenset().union(*period), description=description)

    @classmethod
    def repeat(cls, block: Iterable[int], description: str = "repeat") -> "Scheduling":
        return cls.periodic((), [block], description=description)


@dataclass(frozen=True)
class Configuration:
    old: Mapping[int, Any]
    new: Mapping[int, Any]
    step_index: int = 0

    def key(self) -> Tuple:
        """Full register contents, without the step counter."""
        return tuple((v, self.old[v], self.new[v]) for v in sorted(self.old))

    def undecided(self) -> Tuple[int, ...]:
        return tuple(v for v in sorted(self.new) if not is_terminated(self.new[v]))

    def decisions(self) -> Dict[int, Hashable]:
        return {v: s.output for v, s in sorted(self.new.items()) if is_terminated(s)}


@dataclass(frozen=True)
class StepRecord:
    step: int
    scheduled: Tuple[int, ...]
    reads: Dict[int, Tuple[Any, ...]]
    writes: Dict[int, Any]
    decisions: Dict[int, Hashable]


@dataclass
class Trace:
    graph: Graph
    algorithm: str
    inputs: Dict[int, Any]
    steps: List[StepRecord] = field(default_factory=list)
    decisions: Dict[int, Hashable] = field(default_factory=dict)
    runtimes: Dict[int, int] = field(default_factory=dict)
    complete: bool = True
    awaited: FrozenSet[int] = frozenset()
    initial: Optional[Configuration] = None
    final: Optional[Configuration] = None
    header: Dict[str, Any] = field(default_factory=dict)

    @property
    def scheduling(self) -> List[Tuple[int, ...]]:
        return [record.scheduled for record in self.steps]

    @property
    def undecided(self) -> Tuple[int, ...]:
        return tuple(v for v in self.graph.nodes if v not in self.decisions)

    @classmethod
    def from_decisions(cls, graph: Graph, decisions: Mapping[int, Hashable], algorithm: str = "fabricated") -> "Trace":
        return cls(graph=graph, algorithm=algorithm, inputs={}, decisions=dict(decisions),
                   runtimes={v: 0 for v in graph.nodes}, complete=len(decisions) == graph.n)


def initial_configuration(algo, graph: Graph, inputs: Optional[Mapping[int, Any]] = None) -> Configuration:
    inputs = inputs or {}
    return Configuration(
        old={v: None for v in graph.nodes},
        new={v: algo.init(v, inputs.get(v)) for v in graph.nodes},
        step_index=0,
    )


def read_snapshot(graph: Graph, registers: Mapping[int, Any], node: int, arity: Optional[int]) -> Tuple[Any, ...]:
    """Neighbor registers in identifier order, padded with Bottom to ``arity``."""
    snaps = tuple(registers[u] for u in graph.neighbors(node))
    if arity is not None and len(snaps) < arity:
        snaps += (None,) * (arity - len(snaps))
    return snaps


def step(graph: Graph, algo, cfg: Configuration, block: Iterable[int]) -> Tuple[Configuration, StepRecord]:
    block = frozenset(block)
    if not block:
        raise SchedulingFormatError(f"step {cfg.step_index + 1}: empty block")
    unknown = block.difference(cfg.new)
    if unknown:
        raise SchedulingFormatError(f"step {cfg.step_index + 1}: unknown nodes {sorted(unknown)}")

    active = sorted(v for v in block if not is_terminated(cfg.new[v]))
    old = dict(cfg.old)
    new = dict(cfg.new)
    # Publish first, so that concurrent neighbors read each other's writes.
    for v in active:
        old[v] = cfg.new[v]

    reads, writes, decisions = {}, {}, {}
    for v in active:
        snaps = read_snapshot(graph, old, v, algo.arity)
        result = algo.next(old[v], snaps)
        reads[v] = snaps
        writes[v] = result
        new[v] = result
        if is_terminated(result):
            decisions[v] = result.output

    index = cfg.step_index + 1
    record = StepRecord(step=index, scheduled=tuple(sorted(block)), reads=reads, writes=writes, decisions=decisions)
    return Configuration(old=old, new=new, step_index=index), record


def execute(
    algo,
    graph: Graph,
    inputs: Optional[Mapping[int, Any]],
    sched: Scheduling,
    max_steps: Optional[int] = None,
) -> Trace:
    algo.check_graph(graph)
    max_steps = max_steps or settings.DEFAULT_MAX_STEPS
    inputs = dict(inputs or {})
    cfg = initial_configuration(algo, graph, inputs)
    trace = Trace(graph=graph, algorithm=algo.name, inputs=inputs, awaited=sched.awaited, initial=cfg,
                  runtimes={v: 0 for v in graph.nodes})
    awaited = sched.awaited
    remaining = {v for v in awaited if not is_terminated(cfg.new[v])}

    for block in sched:
        if not remaining and awaited:
            break
        if cfg.step_index >= max_steps:
            logger.warning("%s on %d nodes: max_steps=%d reached, %d awaited nodes undecided",
                           algo.name, graph.n, max_steps, len(remaining))
            break
        cfg, record = step(graph, algo, cfg, block)
        trace.steps.append(record)
        for v in record.writes:
            trace.runtimes[v] += 1
        for v, output in record.decisions.items():
            trace.decisions[v] = output
            remaining.discard(v)

    trace.final = cfg
    trace.complete = not remaining
    logger.debug("%s: %d steps, %d decisions, complete=%s", algo.name, cfg.step_index,
                 len(trace.decisions), trace.complete)
    return trace


def replay(algo, trace: Trace, max_steps: Optional[int] = None) -> Trace:
    """Re-run a trace's scheduling; the result must equal the original."""
    sched = Scheduling.from_blocks(trace.scheduling, description="replay")
    sched.awaited = trace.awaited
    return execute(algo, trace.graph, trace.inputs, sched, max_steps or max(len(trace.steps), 1))


@dataclass(frozen=True)
class LivelockCertificate:
    first_seen: int
    repeat_at: int
    period_length: int
    undecided: Tuple[int, ...]
    configuration: Configuration
    prefix: Tuple[Tuple[int, ...], ...]
    period: Tuple[Tuple[int, ...], ...]

    @property
    def cycle_length(self) -> int:
        """Period applications between the two equal configurations."""
        return self.repeat_at - self.first_seen

    def blocks(self) -> List[Tuple[int, ...]]:
        """A finite scheduling that reaches the repeated configuration twice."""
        return list(self.prefix) + list(self.period) * self.repeat_at


def detect_livelock(
    algo,
    graph: Graph,
    inputs: Optional[Mapping[int, Any]],
    prefix: Sequence[Iterable[int]],
    period: Sequence[Iterable[int]],
    bound: Optional[int] = None,
) -> Optional[LivelockCertificate]:
    """Run ``prefix`` then ``period`` up to ``bound`` times, comparing full
    configurations at period boundaries. A repetition while some node of the
    period is still undecided means the period can be repeated forever."""
    if not period:
        raise PreconditionError("livelock detection needs a nonempty period")
    algo.check_graph(graph)
    bound = bound or settings.LIVELOCK_BOUND
    prefix = [frozenset(b) for b in prefix]
    period = [frozenset(b) for b in period]
    period_nodes = frozenset().union(*period)

    cfg = initial_configuration(algo, graph, inputs)
    for block in prefix:
        cfg, _ = step(graph, algo, cfg, block)
    seen = {cfg.key(): 0}
    for applied in range(1, bound + 1):
        for block in period:
            cfg, _ = step(graph, algo, cfg, block)
        stuck = tuple(v for v in cfg.undecided() if v in period_nodes)
        if not stuck:
            return None
        key = cfg.key()
        if key in seen:
            logger.info("%s: configuration repeats after %d period applications", algo.name, applied)
            return LivelockCertificate(
                first_seen=seen[key],
                repeat_at=applied,
                period_length=len(period),
                undecided=cfg.undecided(),
                configuration=cfg,
                prefix=tuple(tuple(sorted(b)) for b in prefix),
                period=tuple(tuple(sorted(b)) for b in period),
            )
        seen[key] = applied
    return None
