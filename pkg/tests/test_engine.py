import pytest

from app.algorithms.buggy_five import BuggyFiveColoring
from app.algorithms.save import PairState, SaveColors
from app.algorithms.six import CycleSixColoring
from app.core.engine import (
    Scheduling,
    Terminated,
    detect_livelock,
    execute,
    initial_configuration,
    replay,
    step,
)
from app.core.errors import PreconditionError, SchedulingFormatError
from app.core.graphs import clique, cycle, path

TABLE1_BLOCKS = [{1, 3, 5}, {4, 5}, {3, 4}, {6}, {6}]


def test_initial_configuration_is_bottom_everywhere(table1_graph):
    cfg = initial_configuration(CycleSixColoring(), table1_graph)
    assert all(state is None for state in cfg.old.values())
    assert cfg.new[4] == PairState(4, 0, 0)
    assert cfg.step_index == 0


def test_scheduled_nodes_publish_before_reading(table1_graph):
    algo = CycleSixColoring()
    cfg, record = step(table1_graph, algo, initial_configuration(algo, table1_graph), {1, 3, 5})
    assert record.scheduled == (1, 3, 5)
    # 3 and 5 are neighbors and read each other's fresh write
    assert record.reads[3] == (PairState(5, 0, 0), None)
    assert record.reads[5] == (PairState(3, 0, 0), None)
    assert cfg.new[3] == PairState(3, 1, 0)
    assert cfg.new[5] == PairState(5, 0, 1)
    assert cfg.new[1] == Terminated((0, 0))
    assert record.decisions == {1: (0, 0)}
    assert cfg.old[4] is None and cfg.new[4] == PairState(4, 0, 0)


def test_terminated_node_in_a_block_is_a_noop(table1_graph):
    algo = CycleSixColoring()
    cfg, _ = step(table1_graph, algo, initial_configuration(algo, table1_graph), {1, 3, 5})
    after, record = step(table1_graph, algo, cfg, {1})
    assert record.writes == {}
    assert after.old[1] == PairState(1, 0, 0)
    assert after.new[1] == Terminated((0, 0))


def test_bad_blocks_are_rejected(table1_graph):
    algo = CycleSixColoring()
    cfg = initial_configuration(algo, table1_graph)
    with pytest.raises(SchedulingFormatError):
        step(table1_graph, algo, cfg, set())
    with pytest.raises(SchedulingFormatError):
        step(table1_graph, algo, cfg, {2})


def test_table_one_runtimes_and_decisions(table1_graph):
    trace = execute(CycleSixColoring(), table1_graph, None, Scheduling.from_blocks(TABLE1_BLOCKS))
    assert trace.complete
    assert trace.decisions == {1: (0, 0), 3: (1, 0), 4: (1, 1), 5: (0, 1), 6: (0, 1)}
    # node 3 is scheduled at steps 1 and 3 only
    assert trace.runtimes == {1: 1, 3: 2, 4: 2, 5: 2, 6: 2}
    assert len(trace.steps) == 5


def test_execute_stops_once_awaited_nodes_decide():
    graph = cycle(5)
    trace = execute(CycleSixColoring(), graph, None, Scheduling.repeat(graph.nodes))
    assert trace.complete
    assert set(trace.decisions) == set(graph.nodes)
    assert max(trace.runtimes.values()) == len(trace.steps)


def test_max_steps_leaves_trace_incomplete():
    graph = cycle(5)
    trace = execute(CycleSixColoring(), graph, None, Scheduling.repeat({1}), max_steps=3)
    # only node 1 is awaited, and alone it decides at once
    assert trace.complete
    assert trace.undecided == (2, 3, 4, 5)
    trace = execute(CycleSixColoring(), graph, None, Scheduling.periodic([], [{1}, {2}]), max_steps=1)
    assert not trace.complete
    assert len(trace.steps) == 1


def test_single_node_decides_at_first_activation():
    graph = path(1)
    trace = execute(SaveColors(1), graph, None, Scheduling.repeat({1}))
    assert trace.decisions == {1: (0, 0)}
    assert trace.runtimes == {1: 1}


def test_inputs_replace_identifiers_as_colours():
    graph = path(2)
    trace = execute(SaveColors(1), graph, {1: 7, 2: 3}, Scheduling.from_blocks([{1, 2}, {1, 2}]))
    # 1 holds the larger colour: it moves b away from 2, and 2 moves a away from 1
    assert trace.decisions == {1: (0, 1), 2: (1, 0)}


def test_degree_precondition():
    with pytest.raises(PreconditionError):
        execute(CycleSixColoring(), clique(4), None, Scheduling.repeat({1}))


def test_replay_reproduces_trace(table1_graph):
    algo = CycleSixColoring()
    trace = execute(algo, table1_graph, None, Scheduling.from_blocks(TABLE1_BLOCKS))
    again = replay(algo, trace)
    assert again.steps == trace.steps
    assert again.decisions == trace.decisions
    assert again.runtimes == trace.runtimes


def test_livelock_certificate_on_four_cycle(table2_graph):
    certificate = detect_livelock(BuggyFiveColoring(), table2_graph, None,
                                  [{2, 3, 4}, {1, 3, 4}], [{3, 4}])
    assert certificate is not None
    assert (certificate.first_seen, certificate.repeat_at) == (0, 2)
    assert certificate.cycle_length == 2
    assert certificate.undecided == (1, 2, 3, 4)
    assert certificate.configuration.new[3] == PairState(3, 2, 2)
    assert certificate.configuration.new[4] == PairState(4, 0, 2)
    assert certificate.blocks() == [(2, 3, 4), (1, 3, 4), (3, 4), (3, 4)]


def test_no_livelock_once_period_nodes_decide(table1_graph):
    assert detect_livelock(CycleSixColoring(), table1_graph, None, [], [set(table1_graph.nodes)]) is None


def test_livelock_needs_a_period(table2_graph):
    with pytest.raises(PreconditionError):
        detect_livelock(BuggyFiveColoring(), table2_graph, None, [], [])


def test_livelocked_nodes_never_decide(table2_graph):
    sched = Scheduling.periodic([{2, 3, 4}, {1, 3, 4}], [{3, 4}])
    trace = execute(BuggyFiveColoring(), table2_graph, None, sched, max_steps=100)
    assert not trace.complete
    assert len(trace.steps) == 100
    assert 3 not in trace.decisions and 4 not in trace.decisions
