"""Communication topologies for the simulator.

A ``Graph`` is always simple, undirected and connected, with distinct
identifiers in ``[1, id_bound]`` and adjacency lists in ascending order.
Generators build the shapes used throughout the lab (cycles, paths,
cliques, circulants, bounded-degree random trees) on top of networkx and
relabel construction positions ``u_0, u_1, ...`` with identifiers.
"""
import enum
import hashlib
import json
import random
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, model_validator

from app.core.errors import GraphValidationError


class Graph(BaseModel):
    model_config = ConfigDict(frozen=True)

    id_bound: int
    adjacency: Dict[int, Tuple[int, ...]]

    @model_validator(mode="before")
    @classmethod
    def _canonical(cls, data):
        if not isinstance(data, dict) or "adjacency" not in data:
            return data
        canonical = {}
        for node, neighbors in data["adjacency"].items():
            node = int(node)
            neighbors = [int(u) for u in neighbors]
            if len(set(neighbors)) != len(neighbors):
                raise GraphValidationError("simple", f"node {node} lists a neighbor twice")
            canonical[node] = tuple(sorted(neighbors))
        return {**data, "adjacency": canonical}

    @model_validator(mode="after")
    def _check(self):
        if not self.adjacency:
            raise GraphValidationError("nonempty", "graph has no nodes")
        if self.id_bound < 1:
            raise GraphValidationError("ids in [1, N]", f"N = {self.id_bound}")
        for node, neighbors in self.adjacency.items():
            if not 1 <= node <= self.id_bound:
                raise GraphValidationError("ids in [1, N]", f"id {node} outside [1, {self.id_bound}]")
            for u in neighbors:
                if u == node:
                    raise GraphValidationError("simple", f"self-loop at {node}")
                if u not in self.adjacency:
                    raise GraphValidationError("undirected", f"{node} lists unknown node {u}")
                if node not in self.adjacency[u]:
                    raise GraphValidationError("undirected", f"{node}-{u} present one way only")
        if not nx.is_connected(self.to_networkx()):
            raise GraphValidationError("connected")
        return self

    @property
    def nodes(self) -> Tuple[int, ...]:
        return tuple(sorted(self.adjacency))

    @property
    def n(self) -> int:
        return len(self.adjacency)

    @property
    def max_degree(self) -> int:
        return max(len(neighbors) for neighbors in self.adjacency.values())

    def neighbors(self, node: int) -> Tuple[int, ...]:
        return self.adjacency[node]

    def degree(self, node: int) -> int:
        return len(self.adjacency[node])

    def edges(self) -> Iterator[Tuple[int, int]]:
        for node, neighbors in sorted(self.adjacency.items()):
            for u in neighbors:
                if node < u:
                    yield node, u

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.adjacency)
        g.add_edges_from((v, u) for v, neighbors in self.adjacency.items() for u in neighbors)
        return g

    def is_odd_cycle(self) -> bool:
        return self.n >= 3 and self.n % 2 == 1 and all(self.degree(v) == 2 for v in self.nodes)


class GraphKind(str, enum.Enum):
    CYCLE = "cycle"
    PATH = "path"
    CLIQUE = "clique"
    CIRCULANT = "circulant"
    TREE = "tree"
    EXPLICIT = "explicit"
    FILE = "file"


class GraphSpec(BaseModel):
    kind: GraphKind
    n: Optional[int] = None
    k: Optional[int] = None
    max_degree: Optional[int] = None
    seed: int = 0
    adjacency: Optional[Dict[int, List[int]]] = None
    path: Optional[str] = None
    # Identifier assignment in construction order (u_0, u_1, ...)
    ids: Optional[List[int]] = None
    id_bound: Optional[int] = None


def _from_networkx(g: nx.Graph, ids: Optional[Sequence[int]], id_bound: Optional[int]) -> Graph:
    positions = sorted(g.nodes)
    if ids is None:
        ids = [i + 1 for i in range(len(positions))]
    if len(ids) != len(positions):
        raise GraphValidationError("ids cover nodes", f"{len(ids)} ids for {len(positions)} nodes")
    if len(set(ids)) != len(ids):
        raise GraphValidationError("distinct ids")
    label = dict(zip(positions, ids))
    adjacency = {label[p]: [label[q] for q in g.neighbors(p)] for p in positions}
    bound = id_bound if id_bound is not None else max(len(ids), max(ids))
    return Graph(id_bound=bound, adjacency=adjacency)


def cycle(n: int, ids=None, id_bound=None) -> Graph:
    if n < 3:
        raise GraphValidationError("simple", f"a cycle needs at least 3 nodes, got {n}")
    return _from_networkx(nx.cycle_graph(n), ids, id_bound)


def path(n: int, ids=None, id_bound=None) -> Graph:
    if n < 1:
        raise GraphValidationError("nonempty", f"path of {n} nodes")
    return _from_networkx(nx.path_graph(n), ids, id_bound)


def clique(n: int, ids=None, id_bound=None) -> Graph:
    if n < 1:
        raise GraphValidationError("nonempty", f"clique of {n} nodes")
    return _from_networkx(nx.complete_graph(n), ids, id_bound)


def circulant(n: int, k: int, ids=None, id_bound=None) -> Graph:
    """Node u_i is connected to the k nodes on each side of it."""
    if k < 1 or n <= 2 * k:
        raise GraphValidationError("simple", f"circulant({n},{k}) needs n > 2k and k >= 1")
    return _from_networkx(nx.circulant_graph(n, list(range(1, k + 1))), ids, id_bound)


def random_tree(n: int, max_degree: int, seed: int = 0, ids=None, id_bound=None) -> Graph:
    if n < 1:
        raise GraphValidationError("nonempty", f"tree of {n} nodes")
    if n <= 2:
        return path(n, ids, id_bound)
    if max_degree < 2:
        raise GraphValidationError("connected", f"a tree on {n} nodes needs max degree >= 2")
    rng = random.Random(f"tree:{n}:{max_degree}:{seed}")
    for _ in range(10_000):
        sequence = [rng.randrange(n) for _ in range(n - 2)]
        # Prüfer: degree(v) = occurrences + 1
        if max(sequence.count(v) for v in set(sequence)) + 1 <= max_degree:
            return _from_networkx(nx.from_prufer_sequence(sequence), ids, id_bound)
    raise GraphValidationError("max degree", f"no tree on {n} nodes with degree <= {max_degree} sampled")


def from_adjacency(adjacency: Dict[int, Sequence[int]], ids=None, id_bound=None) -> Graph:
    if ids is not None:
        label = dict(zip(sorted(adjacency), ids))
        adjacency = {label[v]: [label[u] for u in nbrs] for v, nbrs in adjacency.items()}
    bound = id_bound if id_bound is not None else max(len(adjacency), max(adjacency))
    return Graph(id_bound=bound, adjacency={v: list(nbrs) for v, nbrs in adjacency.items()})


def build_graph(spec: GraphSpec) -> Graph:
    if spec.kind == GraphKind.CYCLE:
        return cycle(spec.n, spec.ids, spec.id_bound)
    if spec.kind == GraphKind.PATH:
        return path(spec.n, spec.ids, spec.id_bound)
    if spec.kind == GraphKind.CLIQUE:
        return clique(spec.n, spec.ids, spec.id_bound)
    if spec.kind == GraphKind.CIRCULANT:
        return circulant(spec.n, spec.k, spec.ids, spec.id_bound)
    if spec.kind == GraphKind.TREE:
        return random_tree(spec.n, spec.max_degree or 4, spec.seed, spec.ids, spec.id_bound)
    if spec.kind == GraphKind.EXPLICIT:
        return from_adjacency(spec.adjacency, spec.ids, spec.id_bound)
    graph = load_graph(spec.path)
    if spec.ids is not None or spec.id_bound is not None:
        return from_adjacency(dict(graph.adjacency), spec.ids, spec.id_bound or graph.id_bound)
    return graph


def parse_graph_spec(text: str, ids: Optional[Sequence[int]] = None, id_bound: Optional[int] = None) -> GraphSpec:
    """Parse ``cycle:N``, ``path:N``, ``clique:N``, ``circulant:N,K``,
    ``tree:N,delta=D,seed=S`` or ``file:PATH``."""
    kind, _, rest = text.partition(":")
    try:
        kind = GraphKind(kind.strip().lower())
    except ValueError:
        raise GraphValidationError("graph spec", f"unknown graph kind in '{text}'")
    ids = list(ids) if ids is not None else None
    if kind == GraphKind.FILE:
        return GraphSpec(kind=kind, path=rest, ids=ids, id_bound=id_bound)
    positional, options = [], {}
    for part in filter(None, (p.strip() for p in rest.split(","))):
        if "=" in part:
            key, _, value = part.partition("=")
            options[key.strip()] = value.strip()
        else:
            positional.append(part)
    try:
        values = [int(p) for p in positional]
        spec = GraphSpec(
            kind=kind,
            n=values[0] if values else None,
            k=values[1] if len(values) > 1 else None,
            max_degree=int(options["delta"]) if "delta" in options else None,
            seed=int(options.get("seed", 0)),
            ids=ids,
            id_bound=id_bound,
        )
    except ValueError as e:
        raise GraphValidationError("graph spec", f"cannot parse '{text}': {e}")
    if spec.n is None:
        raise GraphValidationError("graph spec", f"'{text}' needs a node count")
    return spec


def graph_document(graph: Graph) -> dict:
    return {
        "id_bound": graph.id_bound,
        "nodes": [{"id": v, "neighbors": list(graph.neighbors(v))} for v in graph.nodes],
    }


def graph_hash(graph: Graph) -> str:
    blob = json.dumps(graph_document(graph), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def dump_graph(graph: Graph, path) -> None:
    Path(path).write_text(json.dumps(graph_document(graph), indent=2))


def load_graph(path) -> Graph:
    from app.models.schemas import GraphDocument

    try:
        document = GraphDocument.model_validate_json(Path(path).read_text())
    except (OSError, ValueError) as e:
        raise GraphValidationError("graph file", f"{path}: {e}")
    return document.to_graph()
