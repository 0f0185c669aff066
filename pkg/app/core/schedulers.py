"""Adversaries: synchronous, seeded random with crashes, replay, periodic,
bounded exhaustive enumeration, and property-driven search."""
import enum
import itertools
import json
import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel

from app.core.config import settings
from app.core.engine import Scheduling, Trace, detect_livelock, execute
from app.core.errors import GuardExceededError, SchedulingFormatError
from app.core.graphs import Graph, graph_hash
from app.models.schemas import Verdict

logger = logging.getLogger(__name__)


class SchedulerKind(str, enum.Enum):
    SYNC = "sync"
    RANDOM = "random"
    REPLAY = "replay"
    ENUMERATE = "enum"
    PERIODIC = "periodic"
    SEARCH = "search"


class SchedulerSpec(BaseModel):
    kind: SchedulerKind = SchedulerKind.SYNC
    seed: int = 0
    p: float = settings.RANDOM_ACTIVATION_P
    crash: float = 0.0
    crash_mean: float = settings.RANDOM_CRASH_MEAN
    # node -> step index from which the node is never scheduled again
    crashes: Dict[int, int] = {}
    source: Optional[str] = None
    depth: Optional[int] = None
    prefix: List[List[int]] = []
    period: List[List[int]] = []
    budget: Optional[int] = None
    property: Optional[str] = None

    def label(self) -> str:
        if self.kind == SchedulerKind.SYNC:
            return "sync"
        if self.kind == SchedulerKind.RANDOM:
            text = f"random:seed={self.seed},p={self.p},crash={self.crash},crash_mean={self.crash_mean}"
            if self.crashes:
                text += ",crashes=" + ";".join(f"{v}@{t}" for v, t in sorted(self.crashes.items()))
            return text
        if self.kind == SchedulerKind.REPLAY:
            return f"replay:{self.source}"
        if self.kind == SchedulerKind.ENUMERATE:
            return f"enum:depth={self.depth}"
        if self.kind == SchedulerKind.PERIODIC:
            return f"periodic:{format_blocks(self.prefix)}/{format_blocks(self.period)}"
        return f"search:property={self.property},budget={self.budget}"


def format_blocks(blocks: Iterable[Iterable[int]]) -> str:
    return ";".join(".".join(str(v) for v in sorted(b)) for b in blocks)


def parse_blocks(text: str) -> List[List[int]]:
    blocks = []
    for part in filter(None, (p.strip() for p in text.split(";"))):
        try:
            block = sorted(int(v) for v in part.split("."))
        except ValueError:
            raise SchedulingFormatError(f"bad block '{part}' (expected ids joined by '.')")
        blocks.append(block)
    return blocks


def _options(text: str) -> Dict[str, str]:
    options = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, sep, value = part.partition("=")
        if not sep:
            raise SchedulingFormatError(f"expected key=value, got '{part}'")
        options[key.strip()] = value.strip()
    return options


def parse_scheduler_spec(text: str) -> SchedulerSpec:
    """Parse ``sync``, ``random:seed=S,p=P,crash=R,crash_mean=M,crashes=V@T;V@T``,
    ``replay:FILE``, ``enum:depth=D``, ``periodic:PREFIX/PERIOD`` (blocks are
    ids joined by '.', separated by ';') or ``search:property=NAME,budget=B``."""
    head, _, rest = text.strip().partition(":")
    try:
        kind = SchedulerKind(head.strip().lower())
    except ValueError:
        raise SchedulingFormatError(f"unknown scheduler '{head}'")
    try:
        if kind == SchedulerKind.SYNC:
            return SchedulerSpec(kind=kind)
        if kind == SchedulerKind.REPLAY:
            if not rest:
                raise SchedulingFormatError("replay needs a file: replay:FILE")
            return SchedulerSpec(kind=kind, source=rest)
        if kind == SchedulerKind.PERIODIC:
            prefix, sep, period = rest.partition("/")
            if not sep:
                raise SchedulingFormatError("periodic needs PREFIX/PERIOD")
            spec = SchedulerSpec(kind=kind, prefix=parse_blocks(prefix), period=parse_blocks(period))
            if not spec.period:
                raise SchedulingFormatError("periodic needs a nonempty period")
            return spec
        options = _options(rest)
        if kind == SchedulerKind.ENUMERATE:
            return SchedulerSpec(kind=kind, depth=int(options.get("depth", settings.ENUM_MAX_DEPTH)))
        if kind == SchedulerKind.SEARCH:
            return SchedulerSpec(kind=kind, property=options.get("property", "proper"),
                                 budget=int(options.get("budget", settings.SEARCH_BUDGET)),
                                 seed=int(options.get("seed", 0)))
        crashes = {}
        for item in filter(None, options.pop("crashes", "").split(";")):
            node, sep, at = item.partition("@")
            if not sep:
                raise SchedulingFormatError(f"bad crash '{item}' (expected NODE@STEP)")
            crashes[int(node)] = int(at)
        spec = SchedulerSpec(
            kind=kind,
            seed=int(options.get("seed", 0)),
            p=float(options.get("p", settings.RANDOM_ACTIVATION_P)),
            crash=float(options.get("crash", 0.0)),
            crash_mean=float(options.get("crash_mean", settings.RANDOM_CRASH_MEAN)),
            crashes=crashes,
        )
    except ValueError as e:
        raise SchedulingFormatError(f"cannot parse scheduler '{text}': {e}")
    if not 0 < spec.p <= 1:
        raise SchedulingFormatError(f"activation probability must lie in (0, 1], got {spec.p}")
    return spec


# Scheduling files: one JSON list of sorted identifiers per line

def write_scheduling(blocks: Iterable[Iterable[int]], path) -> None:
    Path(path).write_text("".join(json.dumps(sorted(b)) + "\n" for b in blocks))


def read_scheduling(path) -> List[List[int]]:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as e:
        raise SchedulingFormatError(f"cannot read scheduling {path}: {e}")
    blocks = []
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            block = json.loads(line)
        except json.JSONDecodeError as e:
            raise SchedulingFormatError(f"{path}:{number}: {e}")
        if not isinstance(block, list) or not block or not all(isinstance(v, int) for v in block):
            raise SchedulingFormatError(f"{path}:{number}: expected a nonempty list of identifiers")
        blocks.append(sorted(block))
    return blocks


def sync_scheduling(graph: Graph) -> Scheduling:
    return Scheduling.repeat(graph.nodes, description="sync")


def _geometric(rng: random.Random, mean: float) -> int:
    stop = 1.0 / (1.0 + mean)
    t = 0
    while rng.random() >= stop:
        t += 1
    return t


def crash_times(graph: Graph, spec: SchedulerSpec) -> Dict[int, int]:
    rng = random.Random(f"{spec.seed}:{graph_hash(graph)}:crash")
    times = {}
    for v in graph.nodes:
        faulty = spec.crash > 0 and rng.random() < spec.crash
        at = _geometric(rng, spec.crash_mean) if faulty else None
        if v in spec.crashes:
            at = spec.crashes[v]
        if at is not None:
            times[v] = at
    return times


def random_scheduling(graph: Graph, spec: SchedulerSpec) -> Scheduling:
    """Each step draws every alive node with probability p from an rng seeded
    by (seed, graph, step); empty draws are redrawn. A node crashed at step t
    appears in no block from index t on."""
    ghash = graph_hash(graph)
    crashed_at = crash_times(graph, spec)
    nodes = graph.nodes

    def source():
        for step in itertools.count():
            alive = [v for v in nodes if crashed_at.get(v, step + 1) > step]
            if not alive:
                return
            rng = random.Random(f"{spec.seed}:{ghash}:{step}")
            block = []
            while not block:
                block = [v for v in alive if rng.random() < spec.p]
            yield block

    awaited = [v for v in nodes if v not in crashed_at]
    return Scheduling(source, awaited, description=spec.label())


def make_scheduling(spec: SchedulerSpec, graph: Graph) -> Scheduling:
    if spec.kind == SchedulerKind.SYNC:
        return sync_scheduling(graph)
    if spec.kind == SchedulerKind.RANDOM:
        return random_scheduling(graph, spec)
    if spec.kind == SchedulerKind.REPLAY:
        blocks = read_scheduling(spec.source)
        _check_blocks(blocks, graph)
        return Scheduling.from_blocks(blocks, description=spec.label())
    if spec.kind == SchedulerKind.PERIODIC:
        _check_blocks(spec.prefix + spec.period, graph)
        return Scheduling.periodic(spec.prefix, spec.period, description=spec.label())
    raise SchedulingFormatError(f"'{spec.kind.value}' describes many schedulings, not one")


def _check_blocks(blocks: Sequence[Sequence[int]], graph: Graph) -> None:
    known = set(graph.nodes)
    for index, block in enumerate(blocks, start=1):
        unknown = set(block) - known
        if unknown:
            raise SchedulingFormatError(f"block {index} names unknown nodes {sorted(unknown)}")


def nonempty_subsets(nodes: Iterable[int]) -> List[Tuple[int, ...]]:
    """Nonempty subsets ordered by size, then lexicographically."""
    nodes = sorted(nodes)
    return [c for size in range(1, len(nodes) + 1) for c in itertools.combinations(nodes, size)]


def _guard(nodes: int, depth: int, override: bool) -> None:
    if override or settings.GUARD_OVERRIDE:
        return
    if nodes > settings.ENUM_MAX_NODES or depth > settings.ENUM_MAX_DEPTH:
        raise GuardExceededError(
            f"enumerating {nodes} nodes to depth {depth} exceeds the guard "
            f"({settings.ENUM_MAX_NODES} nodes, depth {settings.ENUM_MAX_DEPTH}); "
            "set ASYNCLOCAL_GUARD_OVERRIDE=1 to lift it"
        )


def enumerate_schedulings(nodes: Iterable[int], depth: int, override: bool = False) -> Iterator[List[Tuple[int, ...]]]:
    """Every sequence of 1..depth nonempty subsets, each once, in depth-first
    lexicographic order."""
    nodes = sorted(set(nodes))
    _guard(len(nodes), depth, override)
    subsets = nonempty_subsets(nodes)

    def walk(prefix):
        for block in subsets:
            extended = prefix + [block]
            yield extended
            if len(extended) < depth:
                yield from walk(extended)

    if depth >= 1:
        yield from walk([])


@dataclass
class Violation:
    trace: Trace
    verdict: Verdict
    blocks: List[Tuple[int, ...]]
    origin: str


def prefixed_sync(graph: Graph, prefix: Sequence[Sequence[int]]) -> Scheduling:
    nodes = frozenset(graph.nodes)
    return Scheduling.periodic(prefix, [nodes], description=f"periodic:{format_blocks(prefix)}/{format_blocks([nodes])}")


def _search_livelock(algo, graph, inputs, budget) -> Optional[Violation]:
    from app.core.verify import check_livelock

    subsets = nonempty_subsets(graph.nodes)
    runs = 0
    for period_length in itertools.count(1):
        for prefix_length in range(3):
            for prefix in itertools.product(subsets, repeat=prefix_length):
                for period in itertools.product(subsets, repeat=period_length):
                    if runs >= budget:
                        return None
                    runs += 1
                    certificate = detect_livelock(algo, graph, inputs, prefix, period)
                    if certificate is None:
                        continue
                    blocks = certificate.blocks()
                    trace = execute(algo, graph, inputs, Scheduling.from_blocks(blocks), len(blocks))
                    verdict = check_livelock(trace, algo)
                    logger.info("livelock found after %d runs: prefix %s period %s", runs,
                                format_blocks(prefix), format_blocks(period))
                    return Violation(trace=trace, verdict=verdict, blocks=list(blocks), origin="livelock")

def adversary_search(
    algo,
    graph: Graph,
    inputs: Optional[Mapping[int, Any]],
    prop: str,
    budget: Optional[int] = None,
    seed: int = 0,
    max_steps: int = 10_000,
) -> Optional[Violation]:
    """First trace, under exhaustive prefixes (small graphs) and then seeded
    random schedulings, whose ``prop`` verdict fails; None once the budget of
    runs is spent."""
    from app.core.verify import get_checker

    budget = budget or settings.SEARCH_BUDGET
    checker = get_checker(prop)
    if prop == "livelock":
        return _search_livelock(algo, graph, inputs, budget)

    def attempt(scheduling: Scheduling, origin: str) -> Optional[Violation]:
        trace = execute(algo, graph, inputs, scheduling, max_steps)
        verdict = checker(trace, algo)
        if verdict.passed:
            return None
        logger.info("%s violated by %s", prop, origin)
        return Violation(trace=trace, verdict=verdict, blocks=trace.scheduling, origin=origin)

    runs = 0
    if graph.n <= settings.ENUM_MAX_NODES:
        for prefix in enumerate_schedulings(graph.nodes, settings.SEARCH_EXHAUSTIVE_DEPTH):
            if runs >= budget:
                return None
            runs += 1
            found = attempt(prefixed_sync(graph, prefix), f"prefix {format_blocks(prefix)} then sync")
            if found:
                return found
    for offset in itertools.count():
        if runs >= budget:
            return None
        runs += 1
        spec = SchedulerSpec(kind=SchedulerKind.RANDOM, seed=seed + offset)
        found = attempt(random_scheduling(graph, spec), spec.label())
        if found:
            return found
