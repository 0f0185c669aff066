"""Weak symmetry breaking combinatorics on the n-process clique.

Executions are block sequences over processes 1..n run through the engine;
a process that has terminated is never scheduled again. This module counts
signed univalued executions, trims algorithms, classifies processes and
enumerates equivalence classes under order-preserving permutations.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from app.algorithms.base import Algorithm, state_type
from app.core.config import settings
from app.core.engine import Terminated, initial_configuration, is_terminated, step
from app.core.errors import GuardExceededError, PreconditionError, UnknownNameError, WaitFreedomError
from app.core.fields import is_prime
from app.core.graphs import clique
from app.core.schedulers import nonempty_subsets
from app.models.schemas import ClassReport, CountReport, FamilyReport, Verdict

logger = logging.getLogger(__name__)

Blocks = Tuple[Tuple[int, ...], ...]
# position i-1 holds (sequence of process ids, input value) of process i
InputFunction = Tuple[Tuple[Tuple[int, ...], Hashable], ...]


def sign(blocks: Iterable[Iterable[int]]) -> int:
    even = sum(1 for block in blocks if len(tuple(block)) % 2 == 0)
    return -1 if even % 2 else 1


@dataclass(frozen=True)
class ExecutionRecord:
    n: int
    blocks: Blocks
    outputs: Mapping[int, Hashable] = field(default_factory=dict)

    @property
    def participating(self) -> FrozenSet[int]:
        return frozenset(itertools.chain.from_iterable(self.blocks))

    @property
    def complete(self) -> bool:
        return len(self.outputs) == self.n

    @property
    def dec(self) -> FrozenSet[Hashable]:
        return frozenset(self.outputs.values())

    @property
    def sign(self) -> int:
        return sign(self.blocks)


@dataclass(frozen=True)
class SimClassification:
    all_seen_step: int
    classes: Mapping[int, int]

    @property
    def sim(self) -> FrozenSet[int]:
        return frozenset(p for p, c in self.classes.items() if c in (2, 3))


def classify(blocks: Sequence[Iterable[int]], n: int) -> SimClassification:
    blocks = [frozenset(b) for b in blocks]
    seen: Set[int] = set()
    for index, block in enumerate(blocks):
        seen |= block
        if len(seen) == n:
            break
    else:
        raise PreconditionError(f"no step of {format_execution(blocks)} has activated all {n} processes")
    earlier = frozenset().union(*blocks[:index])
    later = frozenset().union(*blocks[index:])
    first = blocks[index] - earlier
    classes = {}
    for p in range(1, n + 1):
        if p in first:
            classes[p] = 1
        elif p in later:
            classes[p] = 2
        else:
            classes[p] = 3
    return SimClassification(all_seen_step=index + 1, classes=classes)


def format_execution(blocks: Iterable[Iterable[int]]) -> str:
    return " ".join("{" + ",".join(str(v) for v in sorted(b)) + "}" for b in blocks)


# Trimming

@state_type
@dataclass(frozen=True)
class TrimState:
    z: int
    inner: Any
    activated: bool = False


class Trimmed(Algorithm):
    """Stops a process as soon as it has heard of all n processes: 0 if that
    happens at its first activation, 1 otherwise. Until then runs ``algo``."""

    def __init__(self, algo: Algorithm, n: int):
        self.algo = algo
        self.n = n
        self.name = f"trim({algo.name})"

    def init(self, node, value=None):
        return TrimState(z=node, inner=self.algo.init(node, value))

    def next(self, state: TrimState, snaps: Sequence):
        present = [s for s in snaps if s is not None]
        if len(present) == self.n - 1:
            return self.decide(1 if state.activated else 0)
        result = self.algo.next(state.inner, [None if s is None else s.inner for s in snaps])
        if is_terminated(result):
            return result
        return TrimState(z=state.z, inner=result, activated=True)

    def palette(self):
        return frozenset({0, 1})


def trim(algo: Algorithm, n: int) -> Trimmed:
    return Trimmed(algo, n)


# Enumeration

def _guard(n: int, override: bool) -> None:
    if n > settings.WSB_MAX_PROCESSES and not (override or settings.GUARD_OVERRIDE):
        raise GuardExceededError(
            f"enumerating executions of {n} processes exceeds WSB_MAX_PROCESSES={settings.WSB_MAX_PROCESSES}; "
            "pass override or set ASYNCLOCAL_GUARD_OVERRIDE=1"
        )
    if override or n > settings.WSB_MAX_PROCESSES:
        logger.warning("execution enumeration guard lifted for n=%d", n)


def enumerate_complete(
    algo: Algorithm, n: int, step_bound: Optional[int] = None, override: bool = False
) -> Iterator[ExecutionRecord]:
    """Every complete execution of ``algo`` on processes 1..n, in depth-first
    order over nonempty subsets of the running processes."""
    if n < 1:
        raise PreconditionError("at least one process is needed")
    _guard(n, override)
    step_bound = step_bound or settings.WSB_STEP_BOUND
    graph = clique(n)
    algo.check_graph(graph)

    def walk(cfg, blocks):
        running = cfg.undecided()
        if not running:
            yield ExecutionRecord(n=n, blocks=tuple(blocks), outputs=cfg.decisions())
            return
        if len(blocks) >= step_bound:
            raise WaitFreedomError(blocks, step_bound)
        for subset in nonempty_subsets(running):
            after, _ = step(graph, algo, cfg, subset)
            yield from walk(after, blocks + [subset])

    yield from walk(initial_configuration(algo, graph), [])


def count_report(algo: Algorithm, n: int, step_bound: Optional[int] = None, override: bool = False) -> CountReport:
    executions = c0 = c1 = sum_c0 = sum_c1 = sum_signs = 0
    for record in enumerate_complete(algo, n, step_bound, override):
        executions += 1
        sum_signs += record.sign
        if record.dec == {0}:
            c0 += 1
            sum_c0 += record.sign
        elif record.dec == {1}:
            c1 += 1
            sum_c1 += record.sign
    count = sum_c0 + (-1) ** (n - 1) * sum_c1
    logger.debug("%s on %d processes: %d executions, count %d", algo.name, n, executions, count)
    return CountReport(algorithm=algo.name, n=n, executions=executions, c0=c0, c1=c1,
                       sum_c0=sum_c0, sum_c1=sum_c1, sum_signs=sum_signs, count=count)


def univalued_signed_count(algo: Algorithm, n: int, step_bound: Optional[int] = None, override: bool = False) -> int:
    return count_report(algo, n, step_bound, override).count


# Permutations and equivalence classes

def apply_permutation(blocks: Iterable[Iterable[int]], pi: Mapping[int, int]) -> Blocks:
    return tuple(tuple(sorted(pi[p] for p in block)) for block in blocks)


def conjugate_input(sigma: InputFunction, pi: Mapping[int, int]) -> InputFunction:
    """The input function seen after renaming every process p to pi[p]."""
    result: List = [None] * len(sigma)
    for i, (sequence, value) in enumerate(sigma, start=1):
        result[pi[i] - 1] = (tuple(pi[j] for j in sequence), value)
    return tuple(result)


def trivial_input(n: int) -> InputFunction:
    return tuple(((), None) for _ in range(n))


def order_preserving_permutations(part: Iterable[int], n: int) -> Iterator[Dict[int, int]]:
    """Permutations of 1..n increasing on ``part`` and on its complement."""
    part = sorted(part)
    rest = [p for p in range(1, n + 1) if p not in part]
    for image in itertools.combinations(range(1, n + 1), len(part)):
        image_rest = [p for p in range(1, n + 1) if p not in image]
        pi = dict(zip(part, image))
        pi.update(zip(rest, image_rest))
        yield pi


def equivalence_class(
    blocks: Sequence[Iterable[int]], n: int, sigma: Optional[InputFunction] = None
) -> Set[Tuple[Blocks, InputFunction]]:
    if n > settings.EQUIV_MAX_PROCESSES and not settings.GUARD_OVERRIDE:
        raise GuardExceededError(f"equivalence classes over {n} processes exceed EQUIV_MAX_PROCESSES")
    sigma = sigma or trivial_input(n)
    sim = classify(blocks, n).sim
    return {
        (apply_permutation(blocks, pi), conjugate_input(sigma, pi))
        for pi in order_preserving_permutations(sim, n)
    }


def class_report(blocks: Sequence[Iterable[int]], n: int) -> ClassReport:
    classification = classify(blocks, n)
    return ClassReport(
        n=n,
        blocks=[sorted(b) for b in blocks],
        sign=sign(blocks),
        all_seen_step=classification.all_seen_step,
        classes=dict(classification.classes),
        sim=sorted(classification.sim),
        class_size=len(equivalence_class(blocks, n)),
    )


# Input families

def cycle_input_family(n: int) -> Set[InputFunction]:
    """Every process gets its (left, right) neighbors on a directed ring."""
    family = set()
    for order in itertools.permutations(range(2, n + 1)):
        ring = (1,) + order
        left, right = {}, {}
        for i, p in enumerate(ring):
            left[p] = ring[i - 1]
            right[p] = ring[(i + 1) % n]
        family.add(tuple(((left[p], right[p]), None) for p in range(1, n + 1)))
    return family


def k_ones_family(n: int, k: int) -> Set[InputFunction]:
    return {
        tuple(((), 1 if p in ones else 0) for p in range(1, n + 1))
        for ones in itertools.combinations(range(1, n + 1), k)
    }


def leader_family(n: int) -> Set[InputFunction]:
    return {tuple(((), "leader" if p == 1 else "defeated") for p in range(1, n + 1))}


INPUT_FAMILIES = {
    "cycle": lambda n, k: cycle_input_family(n),
    "k-ones": k_ones_family,
    "leader": lambda n, k: leader_family(n),
}


def build_family(name: str, n: int, k: int = 1) -> Set[InputFunction]:
    try:
        return INPUT_FAMILIES[name](n, k)
    except KeyError:
        raise UnknownNameError("input family", name, INPUT_FAMILIES)


def check_input_family(family: Set[InputFunction], n: int, name: str = "custom") -> FamilyReport:
    if n > settings.EQUIV_MAX_PROCESSES and not settings.GUARD_OVERRIDE:
        raise GuardExceededError(f"closure check over {n}! permutations exceeds EQUIV_MAX_PROCESSES")
    prime = is_prime(n)
    divisible = len(family) % n == 0 if prime else None
    counterexample = None
    for perm in itertools.permutations(range(1, n + 1)):
        pi = dict(zip(range(1, n + 1), perm))
        for sigma in sorted(family, key=repr):
            image = conjugate_input(sigma, pi)
            if image not in family:
                counterexample = {"permutation": list(perm), "input": repr(sigma), "image": repr(image)}
                break
        if counterexample:
            break
    order_invariant = counterexample is None
    return FamilyReport(
        family=name, n=n, size=len(family), prime=prime, divisible=divisible,
        order_invariant=order_invariant, counterexample=counterexample,
        passed=prime and order_invariant and not divisible,
    )


def binom_divisibility(n: int) -> Verdict:
    if not is_prime(n):
        raise PreconditionError(f"{n} is not prime")
    for m in range(1, n):
        if math.comb(n, m) % n:
            return Verdict(check="binom", passed=False, witness={"n": n, "m": m, "binom": math.comb(n, m)})
    return Verdict(check="binom", passed=True, detail=f"C({n},m) divisible by {n} for 1 <= m < {n}")
