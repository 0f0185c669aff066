"""Default acceptance campaign matrix.

Runs every algorithm against its graph family under seeded random
adversaries with crashes and stores each summary in the campaign ledger.
"""
import argparse
import logging
import sys

from app.core.campaign import record_campaign, run_campaign
from app.core.database import init_db
from app.core.graphs import circulant, cycle, path, random_tree
from app.core.schedulers import SchedulerSpec

logging.basicConfig(
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s", level=logging.INFO, stream=sys.stderr
)
logger = logging.getLogger("run_campaign")

CHECKS = ("proper", "palette", "termination")


def matrix():
    for n in range(4, 13):
        yield f"cycle:{n}", cycle(n), ("six", "linial+save1"), CHECKS
        yield f"path:{n}", path(n), ("linial+save",), CHECKS
    yield "circulant:7,2", circulant(7, 2), ("linial+save", "linial+save1"), CHECKS
    for seed in range(5):
        for delta in (3, 4):
            tree = random_tree(12, delta, seed)
            yield f"tree:12,delta={delta},seed={seed}", tree, ("linial+save", "linial+save1"), CHECKS
    for n in (5, 7, 9):
        yield f"cycle:{n}", cycle(n), ("six",), ("runtime-bound",)
        yield f"cycle:{n}", cycle(n), ("linial+save1",), ("flip-precondition", "monotone")


def main():
    parser = argparse.ArgumentParser(description="run the default campaign matrix")
    parser.add_argument("--seeds", type=int, default=10_000)
    parser.add_argument("--workers", type=int, default=4)
    parser.add_argument("--crash", type=float, default=0.2, help="probability that a node is faulty")
    args = parser.parse_args()

    init_db()
    template = SchedulerSpec(kind="random", crash=args.crash)
    failed = 0
    for label, graph, algorithms, checks in matrix():
        for algorithm in algorithms:
            result = run_campaign(algorithm, graph, range(args.seeds), checks, template=template,
                                  workers=args.workers)
            run_id = record_campaign(result, graph_label=label)
            report = result.report
            print(f"[{run_id}] {algorithm:14} {label:28} {report.passes}/{report.runs} passed, "
                  f"max runtime {report.max_runtime}")
            if result.violations:
                failed += 1
                logger.error("%s on %s: first failing seed %s", algorithm, label, report.first_failing_seed)
    return 1 if failed else 0


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("Campaign stopped.")
