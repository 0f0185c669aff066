from app.algorithms.base import pair_palette
from app.algorithms.save import PairState, SaveColors


class CycleSixColoring(SaveColors):
    """The pair rule on cycles, ordering neighbors by identifier."""

    name = "six"

    def __init__(self):
        super().__init__(delta=2)

    def init(self, node, value=None):
        return PairState(x=node)

    def palette(self):
        return pair_palette(2)
