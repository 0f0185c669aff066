"""Newline-delimited trace files.

A file holds one or more runs. Each run is a header record, one record per
step and a closing summary. Node states go through a small tagged codec so
that a loaded trace compares equal to the one that was written.
"""
import dataclasses
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from pydantic import ValidationError

import app.algorithms.registry  # noqa: F401  registers every state type
from app.algorithms.base import STATE_TYPES
from app.core.engine import StepRecord, Terminated, Trace
from app.core.errors import CorruptTraceError
from app.core.graphs import graph_hash
from app.models.schemas import GraphDocument, StepEvent, TraceHeader, TraceSummary

logger = logging.getLogger(__name__)


def encode_state(value: Any) -> Any:
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, Terminated):
        return {"~term": encode_state(value.output)}
    if isinstance(value, tuple):
        return {"~tuple": [encode_state(v) for v in value]}
    if isinstance(value, (set, frozenset)):
        items = [encode_state(v) for v in value]
        return {"~set": sorted(items, key=lambda item: json.dumps(item, sort_keys=True))}
    if isinstance(value, list):
        return [encode_state(v) for v in value]
    if dataclasses.is_dataclass(value) and type(value).__name__ in STATE_TYPES:
        return {
            "~state": type(value).__name__,
            "fields": {f.name: encode_state(getattr(value, f.name)) for f in dataclasses.fields(value)},
        }
    raise CorruptTraceError(f"cannot encode {value!r} into a trace")


def decode_state(value: Any) -> Any:
    if isinstance(value, list):
        return [decode_state(v) for v in value]
    if not isinstance(value, dict):
        return value
    if "~term" in value:
        return Terminated(decode_state(value["~term"]))
    if "~tuple" in value:
        return tuple(decode_state(v) for v in value["~tuple"])
    if "~set" in value:
        return frozenset(decode_state(v) for v in value["~set"])
    if "~state" in value:
        try:
            cls = STATE_TYPES[value["~state"]]
        except KeyError:
            raise CorruptTraceError(f"unknown state type {value['~state']!r}")
        return cls(**{name: decode_state(v) for name, v in value.get("fields", {}).items()})
    raise CorruptTraceError(f"untagged object {value!r} in trace")


def trace_records(
    trace: Trace,
    seed: Optional[int] = None,
    scheduler: str = "sync",
    max_steps: Optional[int] = None,
    delta: Optional[int] = None,
) -> List[Any]:
    header = TraceHeader(
        algorithm=trace.algorithm,
        graph_hash=graph_hash(trace.graph),
        graph=GraphDocument.from_graph(trace.graph),
        delta=delta,
        inputs={v: encode_state(x) for v, x in trace.inputs.items()},
        seed=seed,
        scheduler=scheduler,
        max_steps=max_steps,
    )
    records: List[Any] = [header]
    for record in trace.steps:
        records.append(StepEvent(
            step=record.step,
            scheduled=list(record.scheduled),
            reads={v: [encode_state(s) for s in snaps] for v, snaps in record.reads.items()},
            writes={v: encode_state(s) for v, s in record.writes.items()},
            decisions={v: encode_state(o) for v, o in record.decisions.items()},
        ))
    records.append(TraceSummary(
        decisions={v: encode_state(o) for v, o in trace.decisions.items()},
        runtimes=dict(trace.runtimes),
        complete=trace.complete,
        awaited=sorted(trace.awaited),
    ))
    return records


def trace_hash(trace: Trace) -> str:
    """Digest of the graph, inputs, steps and outcome; run metadata such as
    the scheduler label is left out."""
    digest = hashlib.sha256(graph_hash(trace.graph).encode())
    inputs = {str(v): encode_state(x) for v, x in sorted(trace.inputs.items())}
    digest.update(json.dumps(inputs, sort_keys=True).encode())
    for record in trace_records(trace)[1:]:
        digest.update(record.model_dump_json().encode())
    return digest.hexdigest()[:16]


def write_trace(trace: Trace, path, append: bool = False, **header) -> None:
    mode = "a" if append else "w"
    with open(path, mode) as fp:
        for record in trace_records(trace, **header):
            fp.write(record.model_dump_json() + "\n")
    logger.debug("wrote %d steps of %s to %s", len(trace.steps), trace.algorithm, path)


def _parse(line: str, number: int):
    try:
        data = json.loads(line)
        kind = data.get("kind")
        if kind == "header":
            return TraceHeader.model_validate(data)
        if kind == "step":
            return StepEvent.model_validate(data)
        if kind == "summary":
            return TraceSummary.model_validate(data)
    except (ValueError, ValidationError, AttributeError) as e:
        raise CorruptTraceError(f"line {number}: {e}")
    raise CorruptTraceError(f"line {number}: unknown record kind {kind!r}")


def _build(header: TraceHeader, events: List[StepEvent], summary: Optional[TraceSummary]) -> Trace:
    graph = header.graph.to_graph()
    if graph_hash(graph) != header.graph_hash:
        raise CorruptTraceError(f"graph hash mismatch: header says {header.graph_hash}, graph hashes to {graph_hash(graph)}")
    steps = [
        StepRecord(
            step=event.step,
            scheduled=tuple(event.scheduled),
            reads={v: tuple(decode_state(s) for s in snaps) for v, snaps in event.reads.items()},
            writes={v: decode_state(s) for v, s in event.writes.items()},
            decisions={v: decode_state(o) for v, o in event.decisions.items()},
        )
        for event in events
    ]
    trace = Trace(
        graph=graph,
        algorithm=header.algorithm,
        inputs={v: decode_state(x) for v, x in header.inputs.items()},
        steps=steps,
        header=header.model_dump(),
    )
    if summary is None:
        # Truncated run: rebuild what the steps tell us
        logger.warning("trace of %s has no summary record; treating it as incomplete", header.algorithm)
        trace.runtimes = {v: 0 for v in graph.nodes}
        for record in steps:
            for v in record.writes:
                trace.runtimes[v] += 1
            trace.decisions.update(record.decisions)
        trace.complete = False
        trace.awaited = frozenset(graph.nodes)
        return trace
    trace.decisions = {v: decode_state(o) for v, o in summary.decisions.items()}
    trace.runtimes = {v: summary.runtimes.get(v, 0) for v in graph.nodes}
    trace.complete = summary.complete
    trace.awaited = frozenset(summary.awaited)
    return trace


def read_traces(lines: Iterable[str]) -> List[Trace]:
    traces: List[Trace] = []
    header: Optional[TraceHeader] = None
    events: List[StepEvent] = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        record = _parse(line, number)
        if isinstance(record, TraceHeader):
            if header is not None:
                traces.append(_build(header, events, None))
            header, events = record, []
        elif header is None:
            raise CorruptTraceError(f"line {number}: {record.kind} record before any header")
        elif isinstance(record, StepEvent):
            events.append(record)
        else:
            traces.append(_build(header, events, record))
            header, events = None, []
    if header is not None:
        traces.append(_build(header, events, None))
    return traces


def load_traces(path) -> List[Trace]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CorruptTraceError(f"{path}: {e}")
    traces = read_traces(text.splitlines())
    if not traces:
        raise CorruptTraceError(f"{path}: no trace records")
    return traces


def load_trace(path) -> Trace:
    return load_traces(path)[0]


def header_delta(trace: Trace) -> Optional[int]:
    return trace.header.get("delta")
