from app.algorithms.registry import build_algorithm
from app.cli.deps import emit
from app.core.graphs import clique
from app.core.schedulers import parse_blocks
from app.core.wsb import INPUT_FAMILIES, binom_divisibility, build_family, check_input_family, class_report, count_report, trim


def register(subparsers) -> None:
    parser = subparsers.add_parser("wsb", help="weak symmetry breaking counts and checks")
    commands = parser.add_subparsers(dest="wsb_command", required=True)

    count = commands.add_parser("count", help="univalued signed count by exhaustive enumeration")
    count.add_argument("--algo", required=True, help="toy algorithm, e.g. const1, seen1, second-look")
    count.add_argument("--n", type=int, required=True)
    count.add_argument("--trim", action="store_true", help="count the trimmed algorithm instead")
    count.add_argument("--step-bound", type=int)
    count.add_argument("--override", action="store_true", help="lift the process-count guard")
    count.set_defaults(handler=handle_count)

    klass = commands.add_parser("class", help="process classes, SIM set and equivalence-class size")
    klass.add_argument("--n", type=int, required=True)
    klass.add_argument("--blocks", required=True, help="blocks as ids joined by '.', separated by ';'")
    klass.set_defaults(handler=handle_class)

    family = commands.add_parser("family", help="size and order-invariance of an input family")
    family.add_argument("--family", required=True, choices=sorted(INPUT_FAMILIES))
    family.add_argument("--n", type=int, required=True)
    family.add_argument("--k", type=int, default=1, help="number of ones for the k-ones family")
    family.set_defaults(handler=handle_family)

    binom = commands.add_parser("binom", help="check C(n, m) = 0 mod n for 0 < m < n")
    binom.add_argument("--n", type=int, required=True)
    binom.set_defaults(handler=handle_binom)


def handle_count(args) -> int:
    algo = build_algorithm(args.algo, clique(args.n))
    if args.trim:
        algo = trim(algo, args.n)
    emit(count_report(algo, args.n, args.step_bound, args.override))
    return 0


def handle_class(args) -> int:
    emit(class_report(parse_blocks(args.blocks), args.n))
    return 0


def handle_family(args) -> int:
    report = check_input_family(build_family(args.family, args.n, args.k), args.n, args.family)
    emit(report)
    return 0 if report.passed else 1


def handle_binom(args) -> int:
    verdict = binom_divisibility(args.n)
    emit(verdict)
    return 0 if verdict else 1
