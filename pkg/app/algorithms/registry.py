from typing import Optional

from app.algorithms.base import Algorithm
from app.algorithms.buggy_five import BuggyFiveColoring
from app.algorithms.compose import Identity, compose_phases
from app.algorithms.linial import WaitFreeLinial
from app.algorithms.save import SaveColors
from app.algorithms.save_one_more import SaveOneMoreColor
from app.algorithms.six import CycleSixColoring
from app.algorithms.toys import TOYS
from app.core.errors import UnknownNameError

# name -> factory(delta, id_bound)
ALGORITHMS = {
    "six": lambda delta, id_bound: CycleSixColoring(),
    "linial": lambda delta, id_bound: WaitFreeLinial(id_bound, delta),
    "save": lambda delta, id_bound: SaveColors(delta),
    "save1": lambda delta, id_bound: SaveOneMoreColor(delta),
    "buggy5": lambda delta, id_bound: BuggyFiveColoring(),
    "identity": lambda delta, id_bound: Identity(),
}
ALGORITHMS.update({name: (lambda delta, id_bound, make=make: make()) for name, make in TOYS.items()})

COMPOSITIONS = ("linial+save", "linial+save1")


def known_algorithms():
    return sorted(ALGORITHMS) + list(COMPOSITIONS)


def build_algorithm(name: str, graph=None, delta: Optional[int] = None, id_bound: Optional[int] = None) -> Algorithm:
    """Instantiate a registered program for ``graph``; delta and N default to
    the graph's maximum degree and identifier bound."""
    if delta is None:
        delta = graph.max_degree if graph is not None else 2
    if id_bound is None:
        id_bound = graph.id_bound if graph is not None else 2
    delta = max(delta, 1)
    if "+" in name:
        first, _, second = name.partition("+")
        return compose_phases(
            build_algorithm(first, graph, delta, id_bound),
            build_algorithm(second, graph, delta, id_bound),
        )
    try:
        factory = ALGORITHMS[name]
    except KeyError:
        raise UnknownNameError("algorithm", name, known_algorithms())
    return factory(delta, id_bound)
