from app.algorithms.registry import build_algorithm
from app.cli.deps import emit
from app.core.tracefile import header_delta, load_traces, trace_hash
from app.core.verify import CHECKERS, get_checker


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="run named checkers over a trace file")
    parser.add_argument("--trace", required=True, help="trace file written by 'run'")
    parser.add_argument("--checks", "--check", dest="checks", default="proper,palette,termination",
                        help=f"comma separated, from: {', '.join(CHECKERS)}")
    parser.add_argument("--algo", help="algorithm to check against (default: the one named in the trace)")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    names = [name.strip() for name in args.checks.split(",") if name.strip()]
    checkers = [(name, get_checker(name)) for name in names]
    failed = 0
    for trace in load_traces(args.trace):
        algo = build_algorithm(args.algo or trace.algorithm, trace.graph, header_delta(trace))
        digest = trace_hash(trace)
        for name, checker in checkers:
            verdict = checker(trace, algo)
            verdict.trace_hash = digest
            emit(verdict)
            if not verdict:
                failed += 1
    return 1 if failed else 0
