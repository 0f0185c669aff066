import logging

from app.cli.deps import add_algorithm_arguments, add_graph_arguments, emit, get_graph, get_inputs
from app.core.campaign import record_campaign, run_campaign
from app.core.database import init_db
from app.core.schedulers import SchedulerKind, parse_scheduler_spec
from app.core.errors import PreconditionError

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("campaign", help="run checkers over many seeded random adversaries")
    add_graph_arguments(parser)
    add_algorithm_arguments(parser)
    parser.add_argument("--seeds", type=int, default=100, help="number of seeds")
    parser.add_argument("--seed-start", type=int, default=0)
    parser.add_argument("--checks", "--check", dest="checks", default="proper,palette,termination")
    parser.add_argument("--scheduler", default="random", help="random scheduler template, e.g. random:p=0.3,crash=0.2")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--max-steps", type=int)
    parser.add_argument("--record", action="store_true", help="store the summary in the campaign ledger")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    graph = get_graph(args)
    template = parse_scheduler_spec(args.scheduler)
    if template.kind != SchedulerKind.RANDOM:
        raise PreconditionError("campaigns draw random schedulings; use a random:... template")
    checks = [name.strip() for name in args.checks.split(",") if name.strip()]
    result = run_campaign(
        args.algo, graph, range(args.seed_start, args.seed_start + args.seeds), checks,
        template=template, inputs=get_inputs(args), workers=args.workers, max_steps=args.max_steps, delta=args.delta,
    )
    if args.record:
        init_db()
        run_id = record_campaign(result, graph_label=args.graph)
        logger.info("campaign stored as run %d", run_id)
    emit(result.report)
    return 1 if result.violations else 0
