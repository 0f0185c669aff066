import logging

from app.cli.deps import add_algorithm_arguments, add_graph_arguments, emit, get_algorithm, get_graph, get_inputs, get_scheduler
from app.core.engine import execute
from app.core.errors import PreconditionError
from app.core.schedulers import SchedulerKind, prefixed_sync, enumerate_schedulings, make_scheduling
from app.core.tracefile import write_trace
from app.core.verify import measure_runtime

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("run", help="execute an algorithm and write its trace")
    add_graph_arguments(parser)
    add_algorithm_arguments(parser)
    parser.add_argument("--scheduler", "--sched", dest="scheduler", default="sync",
                        help="sync | random:seed=S,p=P,crash=R | replay:FILE | periodic:PREFIX/PERIOD | enum:depth=D")
    parser.add_argument("--max-steps", type=int)
    parser.add_argument("--out", "--trace", dest="out", help="trace file to write (newline-delimited JSON)")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    graph = get_graph(args)
    algo = get_algorithm(args, graph)
    inputs = get_inputs(args)
    spec = get_scheduler(args)
    header = {"seed": spec.seed, "scheduler": spec.label(), "max_steps": args.max_steps,
              "delta": getattr(algo, "delta", args.delta)}

    if spec.kind == SchedulerKind.SEARCH:
        raise PreconditionError("use the 'search' subcommand for property-driven search")

    if spec.kind == SchedulerKind.ENUMERATE:
        # Every bounded prefix, each followed by synchronous steps
        runs = 0
        for prefix in enumerate_schedulings(graph.nodes, spec.depth):
            trace = execute(algo, graph, inputs, prefixed_sync(graph, prefix), args.max_steps)
            if args.out:
                write_trace(trace, args.out, append=runs > 0, **header)
            runs += 1
        logger.info("%s: %d enumerated executions", algo.name, runs)
        emit({"algorithm": algo.name, "executions": runs})
        return 0

    trace = execute(algo, graph, inputs, make_scheduling(spec, graph), args.max_steps)
    if args.out:
        write_trace(trace, args.out, **header)
    report = measure_runtime(trace)
    if not report.complete:
        logger.warning("run stopped with %d awaited nodes undecided", len(report.undecided))
    emit(report)
    return 0
