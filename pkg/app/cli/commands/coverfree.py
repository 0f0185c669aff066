from app.cli.deps import emit
from app.core.coverfree import construct_family, dump_family, reduction_schedule, verify_coverfree, verify_coverfree_brute
from app.core.errors import PreconditionError
from app.models.schemas import CoverFreeReport, ScheduleReport


def register(subparsers) -> None:
    parser = subparsers.add_parser("coverfree", help="build and check a cover-free family, or a reduction schedule")
    parser.add_argument("--k", type=int, help="cover-freeness order")
    parser.add_argument("--m", type=int, help="number of sets")
    parser.add_argument("--dump", help="write the family here, one line per colour")
    parser.add_argument("--brute", action="store_true", help="also run the literal all-subsets check")
    parser.add_argument("--schedule", type=int, metavar="N", help="print the reduction schedule for identifier bound N")
    parser.add_argument("--delta", type=int, default=2, help="degree bound for --schedule")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    if args.schedule is not None:
        schedule = reduction_schedule(args.schedule, args.delta)
        emit(ScheduleReport(n=schedule.id_bound, delta=schedule.delta, sizes=list(schedule.sizes),
                            rounds=schedule.rounds, final_palette=schedule.final_palette))
        return 0
    if args.k is None or args.m is None:
        raise PreconditionError("coverfree needs --k and --m, or --schedule N")

    fam = construct_family(args.k, args.m)
    verified = verify_coverfree(fam)
    if verified and args.brute:
        verified = verify_coverfree_brute(fam)
    if args.dump:
        dump_family(fam, args.dump)
    emit(CoverFreeReport(k=fam.k, m=fam.size, d=fam.d, q=fam.q, ground_size=fam.ground_size, verified=verified))
    return 0 if verified else 1
