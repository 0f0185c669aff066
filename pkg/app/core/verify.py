"""Trace checkers, runtime metering and golden-trace reproduction.

Every checker has the signature ``check(trace, algo) -> Verdict`` and is pure.
Undecided nodes are skipped and listed in ``Verdict.vacuous``; a failing
verdict always carries a witness that can be re-checked against the trace.
"""
import itertools
import logging
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Tuple

from app.algorithms.compose import Composed, Phased
from app.algorithms.save import SaveColors, layer_partition, runtime_bound, x_values
from app.algorithms.save_one_more import FlipState, SaveOneMoreColor, special_neighborhood
from app.core.engine import (
    Configuration,
    LivelockCertificate,
    Scheduling,
    Terminated,
    Trace,
    detect_livelock,
    initial_configuration,
    is_terminated,
    step,
)
from app.core.errors import PreconditionError, UnknownNameError
from app.core.graphs import Graph, cycle
from app.models.schemas import RuntimeReport, Verdict

logger = logging.getLogger(__name__)


def check_proper(trace: Trace, algo=None) -> Verdict:
    decided = trace.decisions
    for u, v in trace.graph.edges():
        if u in decided and v in decided and decided[u] == decided[v]:
            return Verdict(check="proper", passed=False, witness={"edge": [u, v], "output": decided[u]},
                           vacuous=list(trace.undecided))
    return Verdict(check="proper", passed=True, vacuous=list(trace.undecided))


def check_palette(trace: Trace, algo) -> Verdict:
    palette = algo.palette()
    if palette is None:
        raise UnknownNameError("palette for algorithm", algo.name)
    for v, output in sorted(trace.decisions.items()):
        if output not in palette:
            return Verdict(check="palette", passed=False, vacuous=list(trace.undecided),
                           witness={"node": v, "output": output, "palette_size": len(palette)})
    return Verdict(check="palette", passed=True, vacuous=list(trace.undecided),
                   detail=f"{len(set(trace.decisions.values()))} of {len(palette)} outputs used")


def check_termination(trace: Trace, algo=None) -> Verdict:
    stuck = sorted(v for v in trace.awaited if v not in trace.decisions)
    if stuck:
        return Verdict(check="termination", passed=False,
                       witness={"undecided": stuck, "steps": len(trace.steps)})
    return Verdict(check="termination", passed=True)


def configurations(trace: Trace, algo) -> Iterator[Configuration]:
    """Configurations at every step boundary, rebuilt from the step records."""
    cfg = trace.initial or initial_configuration(algo, trace.graph, trace.inputs)
    yield cfg
    for record in trace.steps:
        old, new = dict(cfg.old), dict(cfg.new)
        for v, state in record.writes.items():
            old[v] = cfg.new[v]
            new[v] = state
        cfg = Configuration(old=old, new=new, step_index=record.step)
        yield cfg


def check_livelock(trace: Trace, algo) -> Verdict:
    """Fails when two step boundaries hold the same configuration and some node
    scheduled in between is still undecided: repeating those blocks forever
    keeps that node running."""
    seen: Dict[Tuple, int] = {}
    for index, cfg in enumerate(configurations(trace, algo)):
        key = cfg.key()
        if key in seen:
            first = seen[key]
            scheduled = set().union(*(trace.steps[i].scheduled for i in range(first, index)))
            stuck = sorted(v for v in scheduled if not is_terminated(cfg.new[v]))
            if stuck:
                return Verdict(check="livelock", passed=False,
                               witness={"first": first, "repeat": index, "undecided": stuck,
                                        "blocks": [list(trace.steps[i].scheduled) for i in range(first, index)]})
        seen.setdefault(key, index)
    return Verdict(check="livelock", passed=True)


def measure_runtime(trace: Trace) -> RuntimeReport:
    runtimes = {v: 0 for v in trace.graph.nodes}
    for record in trace.steps:
        for v in record.writes:
            runtimes[v] += 1
    if not trace.complete:
        logger.warning("runtime report over an incomplete trace (%d awaited nodes undecided)",
                       len([v for v in trace.awaited if v not in trace.decisions]))
    return RuntimeReport(
        runtimes=runtimes,
        max_runtime=max(runtimes.values(), default=0),
        complete=trace.complete,
        undecided=list(trace.undecided),
    )


def check_runtime(trace: Trace, algo=None) -> Verdict:
    """Engine-metered runtimes agree with a recount over the step records."""
    report = measure_runtime(trace)
    for v, count in report.runtimes.items():
        if trace.runtimes.get(v, 0) != count:
            return Verdict(check="runtime", passed=False,
                           witness={"node": v, "metered": trace.runtimes.get(v, 0), "recounted": count})
    return Verdict(check="runtime", passed=True, detail=f"max runtime {report.max_runtime}")


def check_runtime_bound(trace: Trace, algo) -> Verdict:
    if not isinstance(algo, SaveColors):
        raise PreconditionError(f"runtime-bound applies to the pair reduction, not {algo.name}")
    x = x_values(trace.graph, None if algo.name == "six" else trace.inputs)
    layers = layer_partition(trace.graph, x)
    for v in sorted(trace.decisions):
        bound = runtime_bound(layers[v], algo.delta)
        if trace.runtimes[v] > bound:
            return Verdict(check="runtime-bound", passed=False,
                           witness={"node": v, "layer": layers[v], "runtime": trace.runtimes[v], "bound": bound})
    return Verdict(check="runtime-bound", passed=True, vacuous=list(trace.undecided),
                   detail=f"{max(layers.values())} layers")


# Checks over the flip-based reduction, on published states

def _flip_delta(algo) -> int:
    if isinstance(algo, Composed):
        algo = algo.second
    if not isinstance(algo, SaveOneMoreColor):
        raise PreconditionError(f"{algo.name} does not run the flip-based reduction")
    return algo.delta


def _flip_state(state) -> Optional[FlipState]:
    if isinstance(state, Phased):
        state = state.inner if state.phase == 2 else None
    return state if isinstance(state, FlipState) else None


def check_flip_precondition(trace: Trace, algo) -> Verdict:
    delta = _flip_delta(algo)
    graph = trace.graph
    x: Dict[int, int] = {}

    def extremum(v) -> Optional[str]:
        if any(u not in x for u in graph.neighbors(v)) or v not in x:
            return None
        if all(x[v] > x[u] for u in graph.neighbors(v)):
            return "max"
        if all(x[v] < x[u] for u in graph.neighbors(v)):
            return "min"
        return "neither"

    previous: Dict[int, FlipState] = {}
    for cfg in configurations(trace, algo):
        for v in graph.nodes:
            for state in (_flip_state(cfg.old[v]), _flip_state(cfg.new[v])):
                if state is not None:
                    x[v] = state.x
        for v in graph.nodes:
            state = _flip_state(cfg.new[v])
            if state is None:
                continue
            before = previous.get(v)
            for u in sorted(state.f - (before.f if before else frozenset())):
                kinds = {extremum(v), extremum(u)}
                if graph.degree(v) != delta or graph.degree(u) != delta or kinds != {"max", "min"}:
                    return Verdict(check="flip-precondition", passed=False,
                                   witness={"step": cfg.step_index, "node": v, "flipped": u,
                                            "degrees": [graph.degree(v), graph.degree(u)],
                                            "extrema": sorted(str(k) for k in kinds)})
            previous[v] = state
    return Verdict(check="flip-precondition", passed=True)


def _published_view(cfg: Configuration, graph: Graph, v: int, delta: int):
    state = _flip_state(cfg.old[v])
    snaps = [_flip_state(cfg.old[u]) for u in graph.neighbors(v)]
    snaps += [None] * (delta - len(snaps))
    return state, snaps


def check_special_absorbing(trace: Trace, algo) -> Verdict:
    delta = _flip_delta(algo)
    graph = trace.graph
    special_since: Dict[int, int] = {}
    for cfg in configurations(trace, algo):
        for v in graph.nodes:
            state, snaps = _published_view(cfg, graph, v, delta)
            holds = state is not None and special_neighborhood(state, snaps, delta)
            if holds:
                special_since.setdefault(v, cfg.step_index)
            elif v in special_since:
                return Verdict(check="special-absorbing", passed=False,
                               witness={"node": v, "special_at": special_since[v], "lost_at": cfg.step_index})
    return Verdict(check="special-absorbing", passed=True, detail=f"{len(special_since)} special neighborhoods")


def check_monotone(trace: Trace, algo) -> Verdict:
    _flip_delta(algo)
    previous: Dict[int, FlipState] = {}
    for cfg in configurations(trace, algo):
        for v, raw in cfg.new.items():
            state = _flip_state(raw)
            if state is None:
                continue
            before = previous.get(v)
            if before is not None and (
                not before.f <= state.f or (before.alpha and not state.alpha) or (before.beta and not state.beta)
            ):
                return Verdict(check="monotone", passed=False,
                               witness={"step": cfg.step_index, "node": v,
                                        "before": [sorted(before.f), before.alpha, before.beta],
                                        "after": [sorted(state.f), state.alpha, state.beta]})
            previous[v] = state
    return Verdict(check="monotone", passed=True)


# Parity reduction on odd cycles

def integer_colors(trace: Trace, algo=None) -> Dict[int, int]:
    """Outputs as integers; pair outputs are numbered by their palette position."""
    outputs = trace.decisions
    if all(isinstance(o, int) for o in outputs.values()):
        return dict(outputs)
    palette = algo.palette() if algo is not None else None
    order = sorted(palette) if palette is not None else sorted(set(outputs.values()))
    index = {color: i for i, color in enumerate(order)}
    return {v: index[o] for v, o in outputs.items()}


def check_parity_reduction(trace: Trace, algo=None) -> Verdict:
    if not trace.graph.is_odd_cycle():
        raise PreconditionError("parity reduction needs an odd cycle")
    if trace.undecided:
        raise PreconditionError(f"parity reduction needs every node decided; undecided: {list(trace.undecided)}")
    colors = integer_colors(trace, algo)
    if len(set(colors.values())) > 4:
        raise PreconditionError(f"parity reduction needs at most 4 colors, got {len(set(colors.values()))}")
    parities = {c % 2 for c in colors.values()}
    if parities == {0, 1}:
        return Verdict(check="parity", passed=True)
    return Verdict(check="parity", passed=False, witness={"parity": parities.pop(), "colors": colors})


def enumerate_proper_colorings(graph: Graph, k: int) -> Iterator[Dict[int, int]]:
    nodes = graph.nodes
    coloring: Dict[int, int] = {}

    def extend(i):
        if i == len(nodes):
            yield dict(coloring)
            return
        v = nodes[i]
        for c in range(k):
            if all(coloring.get(u) != c for u in graph.neighbors(v)):
                coloring[v] = c
                yield from extend(i + 1)
                del coloring[v]

    yield from extend(0)


# Golden traces. Cells hold (old, new); states are (x, a, b), ("T", output) or None.

TABLE1_IDS = (3, 5, 4, 1, 6)
TABLE1_BLOCKS = ((1, 3, 5), (4, 5), (3, 4), (6,), (6,))
TABLE1 = (
    {3: ((3, 0, 0), (3, 1, 0)), 5: ((5, 0, 0), (5, 0, 1)), 4: (None, (4, 0, 0)),
     1: ((1, 0, 0), ("T", (0, 0))), 6: (None, (6, 0, 0))},
    {3: ((3, 0, 0), (3, 1, 0)), 5: ((5, 0, 1), ("T", (0, 1))), 4: ((4, 0, 0), (4, 1, 1)),
     1: ((1, 0, 0), ("T", (0, 0))), 6: (None, (6, 0, 0))},
    {3: ((3, 1, 0), ("T", (1, 0))), 5: ((5, 0, 1), ("T", (0, 1))), 4: ((4, 1, 1), ("T", (1, 1))),
     1: ((1, 0, 0), ("T", (0, 0))), 6: (None, (6, 0, 0))},
    {3: ((3, 1, 0), ("T", (1, 0))), 5: ((5, 0, 1), ("T", (0, 1))), 4: ((4, 1, 1), ("T", (1, 1))),
     1: ((1, 0, 0), ("T", (0, 0))), 6: ((6, 0, 0), (6, 0, 1))},
    {3: ((3, 1, 0), ("T", (1, 0))), 5: ((5, 0, 1), ("T", (0, 1))), 4: ((4, 1, 1), ("T", (1, 1))),
     1: ((1, 0, 0), ("T", (0, 0))), 6: ((6, 0, 1), ("T", (0, 1)))},
)
TABLE1_DECISIONS = {3: (1, 0), 5: (0, 1), 4: (1, 1), 1: (0, 0), 6: (0, 1)}

TABLE2_IDS = (3, 4, 2, 1)
TABLE2_PREFIX = ((2, 3, 4), (1, 3, 4))
TABLE2_PERIOD = ((3, 4),)
TABLE2 = (
    {3: ((3, 0, 0), (3, 1, 1)), 4: ((4, 0, 0), (4, 0, 1)), 2: ((2, 0, 0), (2, 1, 1)), 1: (None, (1, 0, 0))},
    {3: ((3, 1, 1), (3, 2, 2)), 4: ((4, 0, 1), (4, 0, 2)), 2: ((2, 0, 0), (2, 1, 1)), 1: ((1, 0, 0), (1, 2, 2))},
    {3: ((3, 2, 2), (3, 1, 1)), 4: ((4, 0, 2), (4, 0, 1)), 2: ((2, 0, 0), (2, 1, 1)), 1: ((1, 0, 0), (1, 2, 2))},
    {3: ((3, 1, 1), (3, 2, 2)), 4: ((4, 0, 1), (4, 0, 2)), 2: ((2, 0, 0), (2, 1, 1)), 1: ((1, 0, 0), (1, 2, 2))},
)


def cell(state) -> Any:
    if state is None:
        return None
    if isinstance(state, Terminated):
        return "T", state.output
    return state.x, state.a, state.b


def _compare_rows(check: str, graph: Graph, algo, blocks, golden) -> Optional[Verdict]:
    cfg = initial_configuration(algo, graph)
    for index, (block, row) in enumerate(zip(blocks, golden), start=1):
        cfg, _ = step(graph, algo, cfg, block)
        for v in graph.nodes:
            for column, actual in (("old", cfg.old[v]), ("new", cfg.new[v])):
                expected = row[v][0 if column == "old" else 1]
                if cell(actual) != expected:
                    return Verdict(check=check, passed=False,
                                   witness={"step": index, "block": list(block), "node": v, "column": column,
                                            "expected": expected, "actual": cell(actual)})
    return None


def table1_instance():
    from app.algorithms.six import CycleSixColoring

    return cycle(5, ids=TABLE1_IDS), CycleSixColoring()


def table2_instance():
    from app.algorithms.buggy_five import BuggyFiveColoring

    return cycle(4, ids=TABLE2_IDS), BuggyFiveColoring()


def table2_certificate() -> Optional[LivelockCertificate]:
    graph, algo = table2_instance()
    return detect_livelock(algo, graph, None, TABLE2_PREFIX, TABLE2_PERIOD)


def reproduce_table(which: str) -> Verdict:
    from app.core.engine import execute

    if which == "table1":
        graph, algo = table1_instance()
        mismatch = _compare_rows("table1", graph, algo, TABLE1_BLOCKS, TABLE1)
        if mismatch:
            return mismatch
        trace = execute(algo, graph, None, Scheduling.from_blocks(TABLE1_BLOCKS))
        if trace.decisions != TABLE1_DECISIONS:
            return Verdict(check="table1", passed=False,
                           witness={"expected": TABLE1_DECISIONS, "actual": trace.decisions})
        return Verdict(check="table1", passed=True, detail="all cells and decisions match")

    if which == "table2":
        graph, algo = table2_instance()
        blocks = TABLE2_PREFIX + TABLE2_PERIOD * 2
        mismatch = _compare_rows("table2", graph, algo, blocks, TABLE2)
        if mismatch:
            return mismatch
        certificate = table2_certificate()
        if certificate is None or certificate.cycle_length != 2:
            return Verdict(check="table2", passed=False,
                           witness={"certificate": None if certificate is None else certificate.cycle_length})
        repeated = certificate.configuration
        for v in (3, 4):
            expected = TABLE2[1][v]
            actual = (cell(repeated.old[v]), cell(repeated.new[v]))
            if actual != expected:
                return Verdict(check="table2", passed=False,
                               witness={"node": v, "expected": expected, "actual": actual})
        return Verdict(check="table2", passed=True,
                       detail=f"configuration repeats after {certificate.repeat_at} period applications")

    raise UnknownNameError("table", which, ("table1", "table2"))


CHECKERS: Dict[str, Callable[[Trace, Any], Verdict]] = {
    "proper": check_proper,
    "palette": check_palette,
    "termination": check_termination,
    "livelock": check_livelock,
    "runtime": check_runtime,
    "runtime-bound": check_runtime_bound,
    "flip-precondition": check_flip_precondition,
    "special-absorbing": check_special_absorbing,
    "monotone": check_monotone,
    "parity": check_parity_reduction,
}


def get_checker(name: str) -> Callable[[Trace, Any], Verdict]:
    try:
        return CHECKERS[name]
    except KeyError:
        raise UnknownNameError("checker", name, CHECKERS)


def run_checks(trace: Trace, algo, names) -> List[Verdict]:
    return [get_checker(name)(trace, algo) for name in names]
