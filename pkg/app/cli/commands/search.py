import logging

from app.cli.deps import add_algorithm_arguments, add_graph_arguments, emit, get_algorithm, get_graph, get_inputs
from app.core.config import settings
from app.core.schedulers import adversary_search, write_scheduling
from app.core.tracefile import write_trace

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("search", help="look for a scheduling that violates a property")
    add_graph_arguments(parser)
    add_algorithm_arguments(parser)
    parser.add_argument("--property", default="proper", help="checker name, e.g. proper, termination, livelock")
    parser.add_argument("--budget", type=int, default=settings.SEARCH_BUDGET, help="number of executions to try")
    parser.add_argument("--seed", type=int, default=0, help="first seed of the random phase")
    parser.add_argument("--max-steps", type=int, default=10_000)
    parser.add_argument("--out", help="write the violating scheduling here, replayable with replay:FILE")
    parser.add_argument("--trace-out", help="write the violating trace here")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    graph = get_graph(args)
    algo = get_algorithm(args, graph)
    found = adversary_search(algo, graph, get_inputs(args), args.property, args.budget, args.seed, args.max_steps)
    if found is None:
        logger.info("no %s violation within %d executions", args.property, args.budget)
        emit({"property": args.property, "violation": None, "budget": args.budget})
        return 0
    if args.out:
        write_scheduling(found.blocks, args.out)
    if args.trace_out:
        write_trace(found.trace, args.trace_out, scheduler=found.origin, delta=getattr(algo, "delta", args.delta))
    emit(found.verdict)
    emit({"origin": found.origin, "blocks": [list(b) for b in found.blocks]})
    return 1
