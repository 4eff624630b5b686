"""Command-line front end: ``incrcomm {detect,experiment,track,stats,split}``."""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys
from typing import List, Optional

from . import louvain
from .errors import EmptyInput, IncrCommError, UnknownNodeInPartitionFile
from .graph import Graph
from .harness import read_journal, run_experiment
from .incremental import DecisionMode, IncrementalTracker
from .ingest import read_edge_list, split_stream, symmetrize, write_plan
from .partition import Partition, modularity, read_partition, write_partition

log = logging.getLogger("incrcomm")


@contextlib.contextmanager
def _output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fp:
            yield fp


def _load(args) -> list:
    events = read_edge_list(args.input)
    if args.raw:
        return events
    sym = symmetrize(events, sum_weights=args.sum_duplicates)
    if sym.duplicates_merged:
        log.info("merged %d duplicate/reverse edge(s)", sym.duplicates_merged)
    return sym


def cmd_detect(args) -> int:
    events = _load(args)
    graph = Graph.from_edges(events)
    res = louvain.run(
        graph, louvain.LouvainConfig(gain_threshold=args.threshold, node_order_seed=args.seed)
    )
    print(f"# q={res.q:.6f} passes={res.passes} communities={len(res.partition)} "
          f"nodes={graph.node_count} edges={graph.edge_count}")
    with _output(args.out) as fp:
        write_partition(res.partition, fp)
    return 0


def cmd_experiment(args) -> int:
    events = _load(args)
    journal_cm = open(args.journal, "w", encoding="utf-8") if args.journal else contextlib.nullcontext()
    with journal_cm as journal:
        report = run_experiment(
            events,
            ratio=args.ratio,
            subsets=args.subsets,
            seed=args.seed,
            mode=DecisionMode(args.mode),
            threshold=args.threshold,
            with_static_rerun=args.with_static_rerun,
            shuffle=not args.no_shuffle,
            journal=journal,
        )
    with _output(args.out) as fp:
        fp.write(report.to_csv())
    if args.out and report.op_stats.total:
        print(report.op_stats.format_table())
    return 0


def cmd_track(args) -> int:
    try:
        events = read_edge_list(args.input)
    except EmptyInput:
        events = []
    graph = Graph.from_edges(read_edge_list(args.graph)) if args.graph else Graph()
    if args.partition:
        if not args.graph:
            raise UnknownNodeInPartitionFile("--partition needs --graph to supply the edges it partitions")
        with open(args.partition, encoding="utf-8") as fp:
            mapping = read_partition(fp)
        unknown = [u for u in mapping if u not in graph]
        if unknown:
            raise UnknownNodeInPartitionFile(f"node {unknown[0]} is not in the graph")
        missing = [u for u in graph.nodes() if u not in mapping]
        if missing:
            raise UnknownNodeInPartitionFile(f"graph node {missing[0]} has no community in the partition file")
        partition = Partition.from_assignment(graph, mapping)
    elif graph.node_count:
        partition = louvain.run(
            graph, louvain.LouvainConfig(gain_threshold=args.threshold, node_order_seed=args.seed)
        ).partition
    else:
        partition = Partition()

    with _output(args.journal) as journal:
        tracker = IncrementalTracker(graph, partition, DecisionMode(args.mode), journal)
        tracker.apply_many(events)
    with _output(args.out) as fp:
        fp.write(f"# q={modularity(graph, partition):.6f} communities={len(partition)}\n")
        write_partition(partition, fp)
    return 0


def cmd_stats(args) -> int:
    with open(args.journal or args.input, encoding="utf-8") as fp:
        stats = read_journal(fp)
    print(stats.format_table())
    return 0


def cmd_split(args) -> int:
    events = _load(args)
    plan = split_stream(events, args.ratio, args.subsets, args.seed, shuffle=not args.no_shuffle)
    with _output(args.out) as fp:
        write_plan(plan, fp)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="incrcomm", description="Incremental modularity community tracking.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def dataset_opts(sp):
        sp.add_argument("--input", required=True, help="edge-list file (SNAP format, .gz ok)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threshold", type=float, default=1e-6, help="pass-level gain threshold")
        sp.add_argument("--sum-duplicates", action="store_true",
                        help="sum weights of repeated pairs instead of keeping the first")
        sp.add_argument("--raw", action="store_true", help="skip symmetrization")
        sp.add_argument("--out", help="output path (default stdout)")

    def stream_opts(sp):
        sp.add_argument("--ratio", type=float, default=0.5, help="fraction used for the initial graph")
        sp.add_argument("--subsets", type=int, default=10)
        sp.add_argument("--no-shuffle", action="store_true", help="keep file order")

    sp = sub.add_parser("detect", help="static partition of a graph")
    dataset_opts(sp)
    sp.set_defaults(func=cmd_detect)

    sp = sub.add_parser("experiment", help="run the split/stream/checkpoint protocol, emit CSV")
    dataset_opts(sp)
    stream_opts(sp)
    sp.add_argument("--mode", choices=[m.value for m in DecisionMode], default="paper")
    sp.add_argument("--with-static-rerun", action="store_true")
    sp.add_argument("--journal", help="write one line per applied edge here")
    sp.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("track", help="apply an edge stream to a graph/partition")
    sp.add_argument("--input", required=True, help="event stream (edge list, applied in order)")
    sp.add_argument("--graph", help="initial edge list")
    sp.add_argument("--partition", help="initial partition export (requires --graph)")
    sp.add_argument("--mode", choices=[m.value for m in DecisionMode], default="paper")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threshold", type=float, default=1e-6)
    sp.add_argument("--journal", help="journal path (default stdout)")
    sp.add_argument("--out", help="final partition path (default stdout)")
    sp.set_defaults(func=cmd_track)

    sp = sub.add_parser("stats", help="operation counts from a journal")
    sp.add_argument("--journal")
    sp.add_argument("--input")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("split", help="write the seeded stream plan")
    dataset_opts(sp)
    stream_opts(sp)
    sp.set_defaults(func=cmd_split)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.command == "stats" and not (args.journal or args.input):
        parser.error("stats needs --journal")
    try:
        return args.func(args)
    except (IncrCommError, OSError) as exc:
        print(f"incrcomm: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
