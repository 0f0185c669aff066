from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field


class GraphNode(BaseModel):
    id: int
    neighbors: List[int] = []


class GraphDocument(BaseModel):
    id_bound: int
    nodes: List[GraphNode]

    def to_graph(self):
        from app.core.graphs import Graph

        return Graph(id_bound=self.id_bound, adjacency={node.id: node.neighbors for node in self.nodes})

    @classmethod
    def from_graph(cls, graph) -> "GraphDocument":
        return cls(
            id_bound=graph.id_bound,
            nodes=[GraphNode(id=v, neighbors=list(graph.neighbors(v))) for v in graph.nodes],
        )


# Trace file records, one JSON document per line

class TraceHeader(BaseModel):
    kind: Literal["header"] = "header"
    algorithm: str
    graph_hash: str
    graph: GraphDocument
    delta: Optional[int] = None
    inputs: Dict[int, Any] = {}
    seed: Optional[int] = None
    scheduler: str = "sync"
    max_steps: Optional[int] = None


class StepEvent(BaseModel):
    kind: Literal["step"] = "step"
    step: int
    scheduled: List[int]
    reads: Dict[int, List[Any]] = {}
    writes: Dict[int, Any] = {}
    decisions: Dict[int, Any] = {}


class TraceSummary(BaseModel):
    kind: Literal["summary"] = "summary"
    decisions: Dict[int, Any] = {}
    runtimes: Dict[int, int] = {}
    complete: bool
    awaited: List[int] = []


# Reports

class Verdict(BaseModel):
    check: str
    passed: bool
    witness: Optional[Dict[str, Any]] = None
    vacuous: List[int] = Field(default_factory=list, description="undecided nodes the check skipped")
    detail: str = ""
    trace_hash: Optional[str] = None

    def __bool__(self) -> bool:
        return self.passed


class RuntimeReport(BaseModel):
    runtimes: Dict[int, int]
    max_runtime: int
    complete: bool
    undecided: List[int] = []


class CertificateReport(BaseModel):
    algorithm: str
    graph_hash: str
    prefix: List[List[int]]
    period: List[List[int]]
    first_seen: int
    repeat_at: int
    cycle_length: int
    period_length: int
    undecided: List[int]
    states: Dict[int, Dict[str, Any]] = {}


class CoverFreeReport(BaseModel):
    k: int
    m: int
    d: int
    q: int
    ground_size: int
    verified: Optional[bool] = None


class ScheduleReport(BaseModel):
    n: int
    delta: int
    sizes: List[int]
    rounds: int
    final_palette: int


class CountReport(BaseModel):
    algorithm: str
    n: int
    executions: int
    c0: int
    c1: int
    sum_c0: int
    sum_c1: int
    sum_signs: int
    count: int


class ClassReport(BaseModel):
    n: int
    blocks: List[List[int]]
    sign: int
    all_seen_step: Optional[int]
    classes: Dict[int, int]
    sim: List[int]
    class_size: int


class FamilyReport(BaseModel):
    family: str
    n: int
    size: int
    prime: bool
    divisible: Optional[bool]
    order_invariant: bool
    counterexample: Optional[Dict[str, Any]] = None
    passed: bool


class CampaignReport(BaseModel):
    algorithm: str
    graph_hash: str
    scheduler: str
    runs: int
    passes: int
    failures: Dict[str, int] = {}
    max_runtime: int = 0
    incomplete: int = 0
    first_failing_seed: Optional[int] = None
