"""Edge-list parsing and experiment stream preparation.

Input is SNAP-style text: ``#`` comment lines, then one edge per line as
two whitespace-separated integer node ids and an optional weight.
"""

from __future__ import annotations

import gzip
import io
import logging
import math
import os
import random
from dataclasses import dataclass
from typing import IO, Iterable, List, NamedTuple, Sequence, Tuple, Union

from .errors import EmptyInput, MalformedLine, TooFewEdges

log = logging.getLogger(__name__)

__all__ = [
    "EdgeEvent",
    "EdgeList",
    "StreamPlan",
    "parse_edge_list",
    "read_edge_list",
    "format_edge_list",
    "symmetrize",
    "split_stream",
    "write_plan",
    "read_plan",
]


class EdgeEvent(NamedTuple):
    source: int
    target: int
    weight: float = 1.0


class EdgeList(list):
    """A list of :class:`EdgeEvent` carrying cleaning counters."""

    self_loops_dropped: int = 0
    duplicates_merged: int = 0


Source = Union[bytes, str, IO[bytes], IO[str]]


def _lines(source: Source) -> Iterable[str]:
    if isinstance(source, bytes):
        if source[:2] == b"\x1f\x8b":
            source = gzip.decompress(source)
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, str):
        return io.StringIO(source)
    if isinstance(source, io.TextIOBase):
        return source
    # binary file object
    return io.TextIOWrapper(source, encoding="utf-8")


def parse_edge_list(source: Source, default_weight: float = 1.0) -> EdgeList:
    """Parse edge-list text into events, in file order.

    ``source`` is raw bytes, a text string, or an open file (text or
    binary). Self-loop lines are dropped and counted in
    ``result.self_loops_dropped``.
    """
    out = EdgeList()
    loops = 0
    for lineno, raw in enumerate(_lines(source), 1):
        line = raw.strip()
        if not line or line[0] == "#":
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise MalformedLine(lineno, line, "expected 2 or 3 fields")
        try:
            u = int(parts[0])
            v = int(parts[1])
        except ValueError:
            raise MalformedLine(lineno, line, "node ids must be integers") from None
        if u < 0 or v < 0:
            raise MalformedLine(lineno, line, "node ids must be non-negative")
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise MalformedLine(lineno, line, "weight is not a number") from None
            if not (w > 0 and math.isfinite(w)):
                raise MalformedLine(lineno, line, "weight must be finite and > 0")
        else:
            w = default_weight
        if u == v:
            loops += 1
            continue
        out.append(EdgeEvent(u, v, w))
    if loops:
        log.warning("dropped %d self-loop line(s)", loops)
    out.self_loops_dropped = loops
    if not out:
        raise EmptyInput("no edges found in input")
    return out


def read_edge_list(path: Union[str, os.PathLike], default_weight: float = 1.0) -> EdgeList:
    """Read an edge-list file; ``.gz`` files are decompressed."""
    path = os.fspath(path)
    opener = gzip.open if path.endswith(".gz") else open
    with opener(path, "rt", encoding="utf-8") as fp:
        return parse_edge_list(fp, default_weight)


def format_edge_list(events: Iterable[EdgeEvent]) -> str:
    return "".join(f"{e.source}\t{e.target}\t{float(e.weight)!r}\n" for e in events)


def symmetrize(events: Iterable[EdgeEvent], sum_weights: bool = False) -> EdgeList:
    """Collapse each unordered node pair to a single event.

    The survivor keeps the position of the pair's first occurrence and is
    written smaller id first. Its weight is the first occurrence's weight,
    or the total over all occurrences when ``sum_weights`` is set.
    """
    index = {}
    out = EdgeList()
    dups = 0
    for e in events:
        u, v = (e.source, e.target) if e.source <= e.target else (e.target, e.source)
        key = (u, v)
        pos = index.get(key)
        if pos is None:
            index[key] = len(out)
            out.append(EdgeEvent(u, v, e.weight))
        else:
            dups += 1
            if sum_weights:
                prev = out[pos]
                out[pos] = EdgeEvent(u, v, prev.weight + e.weight)
    out.duplicates_merged = dups
    out.self_loops_dropped = getattr(events, "self_loops_dropped", 0)
    return out


@dataclass
class StreamPlan:
    initial: List[EdgeEvent]
    subsets: List[List[EdgeEvent]]
    seed: int
    ratio: float
    subset_count: int
    shuffled: bool = True

    @property
    def total(self) -> int:
        return len(self.initial) + sum(len(s) for s in self.subsets)

    def incremental(self) -> List[EdgeEvent]:
        return [e for s in self.subsets for e in s]


def split_stream(
    events: Sequence[EdgeEvent],
    ratio: float = 0.5,
    subset_count: int = 10,
    seed: int = 0,
    shuffle: bool = True,
) -> StreamPlan:
    """Shuffle ``events`` with ``seed`` and cut them into an initial part
    (the first ``ceil(ratio * N)``) and ``subset_count`` near-equal blocks.

    ``ratio`` may be 0, giving an empty initial part; with ``shuffle=False``
    the input order is kept.
    """
    if not 0 <= ratio < 1:
        raise ValueError(f"ratio must be in [0, 1), got {ratio!r}")
    if subset_count < 1:
        raise ValueError(f"subset_count must be >= 1, got {subset_count!r}")
    events = list(events)
    n = len(events)
    need = subset_count + (1 if ratio > 0 else 0)
    if n < need:
        raise TooFewEdges(f"{n} edges cannot fill {subset_count} subsets (need at least {need})")
    if shuffle:
        random.Random(seed).shuffle(events)
    # round first so 0.3 * 10 does not ceil to 4
    n_init = math.ceil(round(ratio * n, 9))
    initial, rest = events[:n_init], events[n_init:]
    q, r = divmod(len(rest), subset_count)
    subsets = []
    start = 0
    for k in range(subset_count):
        size = q + (1 if k < r else 0)
        subsets.append(rest[start : start + size])
        start += size
    return StreamPlan(initial, subsets, seed, ratio, subset_count, shuffle)


_PLAN_MAGIC = "# incrcomm-plan v1"


def write_plan(plan: StreamPlan, fp: IO[str]) -> None:
    """Serialize a plan as three-column text with section comments."""
    fp.write(
        f"{_PLAN_MAGIC} seed={plan.seed} ratio={plan.ratio!r} "
        f"subsets={plan.subset_count} shuffle={int(plan.shuffled)}\n"
    )
    fp.write(f"# part initial n={len(plan.initial)}\n")
    fp.write(format_edge_list(plan.initial))
    for k, block in enumerate(plan.subsets, 1):
        fp.write(f"# part subset {k} n={len(block)}\n")
        fp.write(format_edge_list(block))


def _header_fields(line: str) -> dict:
    fields = {}
    for tok in line.split():
        if "=" in tok:
            k, v = tok.split("=", 1)
            fields[k] = v
    return fields


def read_plan(fp: IO[str]) -> StreamPlan:
    header = fp.readline()
    if not header.startswith(_PLAN_MAGIC):
        raise MalformedLine(1, header.strip(), "not a stream plan")
    meta = _header_fields(header)
    parts: List[Tuple[str, List[EdgeEvent]]] = []
    for lineno, raw in enumerate(fp, 2):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("# part"):
            parts.append((line, []))
            continue
        if line.startswith("#"):
            continue
        if not parts:
            raise MalformedLine(lineno, line, "edge before any '# part' header")
        f = line.split()
        if len(f) != 3:
            raise MalformedLine(lineno, line, "expected 3 fields")
        try:
            parts[-1][1].append(EdgeEvent(int(f[0]), int(f[1]), float(f[2])))
        except ValueError:
            raise MalformedLine(lineno, line) from None
    if not parts or "initial" not in parts[0][0]:
        raise MalformedLine(2, "", "missing initial part")
    return StreamPlan(
        initial=parts[0][1],
        subsets=[p[1] for p in parts[1:]],
        seed=int(meta.get("seed", 0)),
        ratio=float(meta.get("ratio", 0.5)),
        subset_count=int(meta.get("subsets", len(parts) - 1)),
        shuffled=meta.get("shuffle", "1") == "1",
    )
