import itertools

import pytest
from hypothesis import given, settings as hsettings, strategies as st

from app.algorithms.buggy_five import BuggyFiveColoring
from app.algorithms.six import CycleSixColoring
from app.core.engine import Scheduling, execute
from app.core.errors import GuardExceededError, SchedulingFormatError
from app.core.graphs import clique, cycle
from app.core.schedulers import (
    SchedulerKind,
    SchedulerSpec,
    adversary_search,
    crash_times,
    enumerate_schedulings,
    make_scheduling,
    nonempty_subsets,
    parse_blocks,
    parse_scheduler_spec,
    random_scheduling,
    read_scheduling,
    sync_scheduling,
    write_scheduling,
)
from app.core.verify import check_livelock


def test_parse_random_spec():
    spec = parse_scheduler_spec("random:seed=3,p=0.25,crashes=1@2;4@0")
    assert spec.kind == SchedulerKind.RANDOM
    assert (spec.seed, spec.p) == (3, 0.25)
    assert spec.crashes == {1: 2, 4: 0}
    assert parse_scheduler_spec(spec.label()) == spec


def test_parse_periodic_spec():
    spec = parse_scheduler_spec("periodic:2.3.4;1.3.4/3.4")
    assert spec.prefix == [[2, 3, 4], [1, 3, 4]]
    assert spec.period == [[3, 4]]
    assert spec.label() == "periodic:2.3.4;1.3.4/3.4"


def test_parse_other_specs():
    assert parse_scheduler_spec("sync").kind == SchedulerKind.SYNC
    assert parse_scheduler_spec("enum:depth=2").depth == 2
    search = parse_scheduler_spec("search:property=livelock,budget=5")
    assert (search.property, search.budget) == ("livelock", 5)
    assert parse_scheduler_spec("replay:run.sched").source == "run.sched"


@pytest.mark.parametrize(
    "text",
    ["warp", "random:p=0", "random:seed", "random:seed=x", "random:crashes=1",
     "periodic:1.2", "periodic:1/", "replay:"],
)
def test_bad_specs(text):
    with pytest.raises(SchedulingFormatError):
        parse_scheduler_spec(text)


def test_parse_blocks():
    assert parse_blocks("1.2; 3") == [[1, 2], [3]]
    assert parse_blocks("") == []
    with pytest.raises(SchedulingFormatError):
        parse_blocks("1.x")


def test_scheduling_file_round_trip(tmp_path):
    target = tmp_path / "run.sched"
    write_scheduling([{3, 1}, {2}], target)
    assert target.read_text() == "[1, 3]\n[2]\n"
    assert read_scheduling(target) == [[1, 3], [2]]


@pytest.mark.parametrize("content", ["[1, 2]\n{\n", "[]\n", "[1, \"a\"]\n"])
def test_bad_scheduling_files(tmp_path, content):
    target = tmp_path / "bad.sched"
    target.write_text(content)
    with pytest.raises(SchedulingFormatError):
        read_scheduling(target)


def test_scheduling_file_skips_comments(tmp_path):
    target = tmp_path / "c.sched"
    target.write_text("# table two prefix\n[2, 3, 4]\n\n[1, 3, 4]\n")
    assert read_scheduling(target) == [[2, 3, 4], [1, 3, 4]]


def test_replay_rejects_unknown_nodes(tmp_path):
    target = tmp_path / "run.sched"
    write_scheduling([[1, 9]], target)
    with pytest.raises(SchedulingFormatError):
        make_scheduling(SchedulerSpec(kind=SchedulerKind.REPLAY, source=str(target)), cycle(4))


def test_make_scheduling_rejects_families():
    with pytest.raises(SchedulingFormatError):
        make_scheduling(SchedulerSpec(kind=SchedulerKind.ENUMERATE, depth=2), cycle(4))


def test_sync_schedules_everyone():
    graph = cycle(4)
    assert list(itertools.islice(sync_scheduling(graph), 2)) == [frozenset(graph.nodes)] * 2


@hsettings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000), p=st.floats(min_value=0.05, max_value=1.0))
def test_random_scheduling_is_reproducible(seed, p):
    graph = cycle(6)
    spec = SchedulerSpec(kind=SchedulerKind.RANDOM, seed=seed, p=p)
    blocks = list(itertools.islice(random_scheduling(graph, spec), 30))
    assert blocks == list(itertools.islice(random_scheduling(graph, spec), 30))
    assert all(block and block <= set(graph.nodes) for block in blocks)


def test_crashed_node_never_returns():
    graph = cycle(5)
    spec = SchedulerSpec(kind=SchedulerKind.RANDOM, seed=1, crashes={1: 2})
    sched = random_scheduling(graph, spec)
    assert 1 not in sched.awaited
    assert all(1 not in block for block in list(itertools.islice(sched, 40))[2:])


def test_every_node_can_crash():
    graph = cycle(5)
    spec = SchedulerSpec(kind=SchedulerKind.RANDOM, seed=2, crash=1.0)
    times = crash_times(graph, spec)
    assert set(times) == set(graph.nodes)
    assert all(t >= 0 for t in times.values())
    assert random_scheduling(graph, spec).awaited == frozenset()


def test_enumeration_counts():
    assert nonempty_subsets([2, 1]) == [(1,), (2,), (1, 2)]
    runs = list(enumerate_schedulings([1, 2], 2))
    assert len(runs) == 3 + 9
    assert runs[0] == [(1,)]
    assert runs[1] == [(1,), (1,)]
    assert len({tuple(r) for r in runs}) == len(runs)


def test_enumeration_guard():
    with pytest.raises(GuardExceededError):
        next(enumerate_schedulings(range(1, 7), 2))
    assert next(enumerate_schedulings(range(1, 7), 2, override=True)) == [(1,)]


def test_search_finds_the_four_cycle_livelock(table2_graph):
    found = adversary_search(BuggyFiveColoring(), table2_graph, None, "livelock", budget=10_000)
    assert found is not None
    assert found.origin == "livelock"
    assert not found.verdict.passed
    assert found.blocks == found.trace.scheduling


def test_search_gives_up_on_a_correct_algorithm(table1_graph):
    assert adversary_search(CycleSixColoring(), table1_graph, None, "proper", budget=30) is None


@pytest.mark.parametrize("m, depth", [(1, 3), (2, 3), (3, 1), (3, 2), (3, 3), (2, 4)])
def test_enumeration_is_complete(m, depth):
    runs = list(enumerate_schedulings(range(1, m + 1), depth))
    assert len(runs) == sum((2 ** m - 1) ** j for j in range(1, depth + 1))


def test_found_livelock_replays_to_the_same_verdict(table2_graph):
    algo = BuggyFiveColoring()
    found = adversary_search(algo, table2_graph, None, "livelock", budget=10_000)
    again = execute(algo, table2_graph, None, Scheduling.from_blocks(found.blocks), len(found.blocks))
    assert again.steps == found.trace.steps
    assert check_livelock(again, algo) == found.verdict


def test_single_node_has_nothing_to_livelock():
    assert adversary_search(CycleSixColoring(), clique(1), None, "livelock", budget=50) is None
