"""Cover-free set families from low-degree polynomials and the colour
reduction schedule built on top of them.

Two distinct polynomials of degree at most d over GF(q) agree on at most d
points, so the graph ``{(x, p(x))}`` of one polynomial meets the union of k
others in at most k*d < q points and is never covered.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from app.core.config import settings
from app.core.errors import GuardExceededError, PreconditionError
from app.core.fields import field_orders, get_field

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoverFreeFamily:
    """Explicitly listed sets."""

    k: int
    ground_size: int
    sets: Tuple[FrozenSet[int], ...]
    d: Optional[int] = None
    q: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.sets)

    def image(self, color: int) -> FrozenSet[int]:
        """Set of ``color``; colours are numbered from 1."""
        if not 1 <= color <= len(self.sets):
            raise PreconditionError(f"colour {color} outside family of {len(self.sets)} sets")
        return self.sets[color - 1]


@dataclass(frozen=True)
class PolynomialFamily:
    """Family of the graphs of the first ``m`` polynomials of degree <= d over
    GF(q), in lexicographic coefficient order. Sets are computed per colour."""

    k: int
    m: int
    d: int
    q: int

    @property
    def ground_size(self) -> int:
        return self.q * self.q

    @property
    def size(self) -> int:
        return self.m

    def coefficients(self, color: int) -> Tuple[int, ...]:
        """Base-q digits of ``color - 1``, highest degree first."""
        if not 1 <= color <= self.m:
            raise PreconditionError(f"colour {color} outside family of {self.m} sets")
        digits = []
        rest = color - 1
        for _ in range(self.d + 1):
            rest, digit = divmod(rest, self.q)
            digits.append(digit)
        return tuple(reversed(digits))

    def image(self, color: int) -> FrozenSet[int]:
        gf = get_field(self.q)
        coefficients = self.coefficients(color)
        return frozenset(x * self.q + gf.evaluate(coefficients, x) + 1 for x in gf.elements())

    @property
    def sets(self) -> Tuple[FrozenSet[int], ...]:
        if self.m > settings.FAMILY_MATERIALIZE_LIMIT and not settings.GUARD_OVERRIDE:
            raise GuardExceededError(
                f"listing {self.m} sets exceeds FAMILY_MATERIALIZE_LIMIT={settings.FAMILY_MATERIALIZE_LIMIT}"
            )
        return tuple(self.image(color) for color in range(1, self.m + 1))


Family = Union[CoverFreeFamily, PolynomialFamily]


@dataclass(frozen=True)
class ReductionSchedule:
    id_bound: int
    delta: int
    sizes: Tuple[int, ...]
    families: Tuple[PolynomialFamily, ...] = field(repr=False)

    @property
    def rounds(self) -> int:
        return len(self.families)

    @property
    def final_palette(self) -> int:
        return self.sizes[-1]


def choose_parameters(k: int, m: int) -> Tuple[int, int]:
    """Smallest field order q admitting a degree d with k*d < q and q^(d+1) >= m;
    d is taken as large as q allows."""
    if k < 1 or m < 1:
        raise PreconditionError(f"need k >= 1 and m >= 1, got k={k}, m={m}")
    for q in field_orders(2):
        d = (q - 1) // k
        if d >= 1 and q ** (d + 1) >= m:
            return d, q


@lru_cache(maxsize=256)
def construct_family(k: int, m: int) -> PolynomialFamily:
    d, q = choose_parameters(k, m)
    logger.debug("cover-free family k=%d m=%d: d=%d q=%d ground=%d", k, m, d, q, q * q)
    return PolynomialFamily(k=k, m=m, d=d, q=q)


def find_cover(fam: Family) -> Optional[Tuple[int, ...]]:
    """Colours (S_0, S_1..S_j) with j <= k and S_0 inside the union of the
    others, or None. Every cover of S_0 must contain its smallest uncovered
    element, so branching on the sets holding that element is exhaustive."""
    sets = fam.sets
    if len(set(sets)) != len(sets) or any(not s for s in sets):
        for i, s in enumerate(sets):
            if not s:
                return (i + 1,)
            for j in range(i):
                if sets[j] == s:
                    return (i + 1, j + 1)
    index: Dict[int, List[int]] = {}
    for j, s in enumerate(sets):
        for element in s:
            index.setdefault(element, []).append(j)

    budget = min(fam.k, len(sets) - 1)
    for i, s in enumerate(sets):
        chosen: List[int] = []

        def search(target, remaining):
            if not target:
                return True
            if remaining == 0:
                return False
            element = min(target)
            for j in index.get(element, ()):
                if j == i:
                    continue
                chosen.append(j)
                if search(target - sets[j], remaining - 1):
                    return True
                chosen.pop()
            return False

        if search(s, budget):
            return (i + 1,) + tuple(j + 1 for j in chosen)
    return None


def verify_coverfree(fam: Family) -> bool:
    return find_cover(fam) is None


def verify_coverfree_brute(fam: Family) -> bool:
    """Literal check over every choice of k+1 distinct sets; small families only."""
    sets = fam.sets
    k = min(fam.k, len(sets) - 1)
    work = len(sets) * math.comb(len(sets) - 1, k)
    if work > settings.BRUTE_FORCE_LIMIT and not settings.GUARD_OVERRIDE:
        raise GuardExceededError(f"brute-force check needs {work} set differences, limit is {settings.BRUTE_FORCE_LIMIT}")
    for i, s in enumerate(sets):
        others = [t for j, t in enumerate(sets) if j != i]
        for chosen in itertools.combinations(others, k):
            if not s.difference(*chosen):
                return False
    return True


@lru_cache(maxsize=64)
def reduction_schedule(id_bound: int, delta: int) -> ReductionSchedule:
    if id_bound < 2 or delta < 1:
        raise PreconditionError(f"need N >= 2 and delta >= 1, got N={id_bound}, delta={delta}")
    sizes = [id_bound]
    families = []
    while True:
        fam = construct_family(delta, sizes[-1])
        if fam.ground_size >= sizes[-1]:
            break
        families.append(fam)
        sizes.append(fam.ground_size)
    logger.debug("reduction schedule N=%d delta=%d: %s", id_bound, delta, sizes)
    return ReductionSchedule(id_bound=id_bound, delta=delta, sizes=tuple(sizes), families=tuple(families))


def format_family(fam: Family, m: Optional[int] = None) -> str:
    lines = [f"k={fam.k} m={m if m is not None else fam.size} d={fam.d} q={fam.q} ground_size={fam.ground_size}"]
    for color, s in enumerate(fam.sets, start=1):
        lines.append(f"{color}: " + " ".join(str(e) for e in sorted(s)))
    return "\n".join(lines) + "\n"


def dump_family(fam: Family, path) -> None:
    Path(path).write_text(format_family(fam))
