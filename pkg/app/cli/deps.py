"""Shared argument resolution for the subcommands."""
import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from pydantic import BaseModel

from app.algorithms.base import Algorithm
from app.algorithms.registry import build_algorithm
from app.core.errors import GraphValidationError, SchedulingFormatError
from app.core.graphs import Graph, build_graph, parse_graph_spec
from app.core.schedulers import SchedulerSpec, parse_scheduler_spec


def add_graph_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--graph", required=True,
                        help="cycle:N, path:N, clique:N, circulant:N,K, tree:N,delta=D,seed=S or file:PATH")
    parser.add_argument("--ids", help="identifiers in construction order, comma separated")
    parser.add_argument("--id-bound", "--bound", dest="id_bound", type=int, help="identifier bound N (default: max(n, largest id))")


def add_algorithm_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--algo", required=True, help="registered algorithm name, or FIRST+SECOND")
    parser.add_argument("--delta", type=int, help="degree bound the algorithm is built for (default: graph max degree)")
    parser.add_argument("--inputs", help="node inputs as ID=VALUE pairs, comma separated")


def parse_ids(text: Optional[str]) -> Optional[List[int]]:
    if not text:
        return None
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise GraphValidationError("ids", f"cannot parse identifiers '{text}'")


def get_graph(args) -> Graph:
    spec = parse_graph_spec(args.graph, parse_ids(getattr(args, "ids", None)), getattr(args, "id_bound", None))
    return build_graph(spec)


def get_algorithm(args, graph: Graph) -> Algorithm:
    return build_algorithm(args.algo, graph, getattr(args, "delta", None))


def get_inputs(args) -> Dict[int, Any]:
    text = getattr(args, "inputs", None)
    if not text:
        return {}
    inputs = {}
    for item in text.split(","):
        node, sep, value = item.partition("=")
        if not sep:
            raise SchedulingFormatError(f"bad input '{item}' (expected ID=VALUE)")
        try:
            inputs[int(node)] = int(value)
        except ValueError:
            raise SchedulingFormatError(f"bad input '{item}' (expected integers)")
    return inputs


def get_scheduler(args) -> SchedulerSpec:
    return parse_scheduler_spec(getattr(args, "scheduler", None) or "sync")


def emit(record) -> None:
    """Machine-readable output: one JSON document per line on stdout."""
    if isinstance(record, BaseModel):
        sys.stdout.write(record.model_dump_json() + "\n")
    else:
        sys.stdout.write(json.dumps(record, default=repr) + "\n")
    sys.stdout.flush()
