"""Seed campaigns: one algorithm, one graph, many random adversaries.

Every seed is an independent execution, so seeds can fan out over a process
pool. Results are folded in ascending seed order, which keeps the summary
identical however many workers ran.
"""
import concurrent.futures
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from app.algorithms.registry import build_algorithm
from app.core.database import SessionLocal
from app.core.engine import execute
from app.core.errors import PreconditionError
from app.core.graphs import Graph, graph_hash
from app.core.schedulers import SchedulerSpec, make_scheduling
from app.core.verify import get_checker
from app.models.models import CampaignRun, CampaignStatus, CampaignViolation
from app.models.schemas import CampaignReport

logger = logging.getLogger(__name__)


@dataclass
class FailedCheck:
    seed: int
    check: str
    witness: Optional[Dict[str, Any]]
    blocks: List[Tuple[int, ...]]
    complete: bool


@dataclass
class SeedOutcome:
    seed: int
    complete: bool
    max_runtime: int
    failures: List[FailedCheck] = field(default_factory=list)


@dataclass
class CampaignResult:
    report: CampaignReport
    violations: List[FailedCheck]
    checks: Sequence[str]
    seeds: Sequence[int]


def run_seed(
    algorithm: str,
    graph: Graph,
    inputs: Optional[Mapping[int, Any]],
    seed: int,
    checks: Sequence[str],
    template: SchedulerSpec,
    max_steps: Optional[int] = None,
    delta: Optional[int] = None,
) -> SeedOutcome:
    algo = build_algorithm(algorithm, graph, delta)
    spec = template.model_copy(update={"seed": seed})
    trace = execute(algo, graph, inputs, make_scheduling(spec, graph), max_steps)
    outcome = SeedOutcome(seed=seed, complete=trace.complete, max_runtime=max(trace.runtimes.values(), default=0))
    for name in checks:
        try:
            verdict = get_checker(name)(trace, algo)
        except PreconditionError as e:
            logger.debug("seed %d: %s skipped (%s)", seed, name, e)
            continue
        if not verdict:
            outcome.failures.append(FailedCheck(seed=seed, check=name, witness=verdict.witness,
                                                blocks=list(trace.scheduling), complete=trace.complete))
    return outcome


def _run_seed_args(args):
    return run_seed(*args)


def run_campaign(
    algorithm: str,
    graph: Graph,
    seeds: Iterable[int],
    checks: Sequence[str],
    template: Optional[SchedulerSpec] = None,
    inputs: Optional[Mapping[int, Any]] = None,
    workers: int = 1,
    max_steps: Optional[int] = None,
    delta: Optional[int] = None,
) -> CampaignResult:
    template = template or SchedulerSpec(kind="random")
    seeds = sorted(seeds)
    for name in checks:
        get_checker(name)
    build_algorithm(algorithm, graph, delta).check_graph(graph)

    jobs = [(algorithm, graph, inputs, seed, tuple(checks), template, max_steps, delta) for seed in seeds]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(_run_seed_args, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        outcomes = [_run_seed_args(job) for job in jobs]

    failures: Dict[str, int] = {}
    violations: List[FailedCheck] = []
    passes = incomplete = max_runtime = 0
    for outcome in sorted(outcomes, key=lambda o: o.seed):
        max_runtime = max(max_runtime, outcome.max_runtime)
        if not outcome.complete:
            incomplete += 1
        if not outcome.failures:
            passes += 1
        for failure in outcome.failures:
            failures[failure.check] = failures.get(failure.check, 0) + 1
            violations.append(failure)

    report = CampaignReport(
        algorithm=algorithm,
        graph_hash=graph_hash(graph),
        scheduler=template.label(),
        runs=len(outcomes),
        passes=passes,
        failures=failures,
        max_runtime=max_runtime,
        incomplete=incomplete,
        first_failing_seed=violations[0].seed if violations else None,
    )
    logger.info("campaign %s on %s: %d/%d seeds passed, max runtime %d", algorithm, report.graph_hash,
                passes, report.runs, max_runtime)
    return CampaignResult(report=report, violations=violations, checks=tuple(checks), seeds=seeds)


def record_campaign(result: CampaignResult, graph_label: Optional[str] = None, session_factory=SessionLocal) -> int:
    """Store the summary and every violation in the ledger; returns the run id."""
    report = result.report
    if report.first_failing_seed is not None:
        status = CampaignStatus.FAILED
    elif report.incomplete:
        status = CampaignStatus.INCOMPLETE
    else:
        status = CampaignStatus.PASSED

    db = session_factory()
    try:
        run = CampaignRun(
            algorithm=report.algorithm,
            graph_hash=report.graph_hash,
            graph_label=graph_label,
            scheduler=report.scheduler,
            checks=",".join(result.checks),
            seed_start=result.seeds[0] if result.seeds else 0,
            seed_count=len(result.seeds),
            runs=report.runs,
            passes=report.passes,
            incomplete=report.incomplete,
            max_runtime=report.max_runtime,
            first_failing_seed=report.first_failing_seed,
            status=status.value,
        )
        for failure in result.violations:
            run.violations.append(CampaignViolation(
                seed=failure.seed,
                check=failure.check,
                witness=json.dumps(failure.witness, default=repr) if failure.witness is not None else None,
                scheduling="\n".join(json.dumps(list(block)) for block in failure.blocks),
                complete=failure.complete,
            ))
        db.add(run)
        db.commit()
        db.refresh(run)
        return run.id
    except Exception:
        db.rollback()
        raise
    finally:
        db.close()
