import io
import subprocess
import sys

import pytest

from incrcomm.cli import main
from incrcomm.harness import REPORT_COLUMNS, read_journal, read_report_csv, run_experiment
from incrcomm.incremental import DecisionMode
from incrcomm.ingest import EdgeEvent
from incrcomm.partition import read_partition

from conftest import SIX_NODE_A, SIX_NODE_B
from oracles import dense, q_pairwise


def write_edges(path, edges):
    path.write_text("# test graph\n" + "".join(f"{u}\t{v}\t{w}\n" for u, v, w in edges))
    return str(path)


def strip_timing(csv_text):
    rows = []
    for line in csv_text.splitlines():
        cells = line.split(",")
        if len(cells) == len(REPORT_COLUMNS):
            del cells[4:6]
        rows.append(",".join(cells))
    return rows


def oracle_trace(edges, seq_labels):
    return [q_pairwise(*_dense_labels(edges[:k], seq_labels)) for k in range(1, len(edges) + 1)]


def _dense_labels(edges, labels):
    a, nodes = dense(edges)
    return a, [labels[u] for u in nodes]


class TestExperiment:
    def test_six_node_trace(self):
        events = [EdgeEvent(*e) for e in SIX_NODE_A]
        rep = run_experiment(events, ratio=0.0, subsets=7, shuffle=False)
        assert [r.edges_so_far for r in rep.rows] == list(range(8))
        # the partition only ever grows by the rules, so check against the
        # hand trace: after edge 7 the groups are {1,2,3},{4,5,6}
        final_labels = {1: 0, 2: 0, 3: 0, 4: 1, 5: 1, 6: 1}
        expected = oracle_trace(SIX_NODE_A, final_labels)
        for row, q in zip(rep.rows[1:], expected):
            assert row.q_incremental == pytest.approx(q, abs=1e-12)
        assert rep.op_stats.counts()["Merge"] == 0

    def test_rows_and_determinism(self):
        import random

        from conftest import planted_events

        events, _ = planted_events(random.Random(2), 300, 2000, 6)
        a = run_experiment(events, seed=4, with_static_rerun=True)
        b = run_experiment(events, seed=4, with_static_rerun=True)
        assert strip_timing(a.to_csv()) == strip_timing(b.to_csv())
        rows = read_report_csv(a.to_csv())
        assert [r["subset_index"] for r in rows] == list(range(11))
        assert all(x["edges_so_far"] < y["edges_so_far"] for x, y in zip(rows, rows[1:]))
        assert all(r["elapsed_incremental_s"] >= 0 and r["elapsed_static_s"] >= 0 for r in rows)
        assert all(r["q_static_rerun"] is not None for r in rows)
        assert a.to_csv().startswith("# incrcomm-report v1 seed=4")
        c = run_experiment(events, seed=4, mode=DecisionMode.EXACT)
        assert "mode=exact" in c.to_csv().splitlines()[0]


class TestCli:
    def test_detect_two_triangles(self, tmp_path, capsys):
        f = write_edges(tmp_path / "g.txt", [(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1)])
        assert main(["detect", "--input", f]) == 0
        out = capsys.readouterr().out
        assert out.startswith("# q=0.500000 passes=")
        part = read_partition(io.StringIO(out))
        assert len(set(part.values())) == 2

    def test_detect_empty(self, tmp_path, capsys):
        f = tmp_path / "empty.txt"
        f.write_text("")
        assert main(["detect", "--input", str(f)]) != 0
        assert "EmptyInput" in capsys.readouterr().err

    @pytest.mark.parametrize("edges,n_comm", [(SIX_NODE_A, 2), (SIX_NODE_B, 1)])
    def test_track_six_node(self, tmp_path, edges, n_comm):
        f = write_edges(tmp_path / "s.txt", edges)
        out = tmp_path / "p.tsv"
        journal = tmp_path / "j.tsv"
        assert main(["track", "--input", f, "--journal", str(journal), "--out", str(out)]) == 0
        part = read_partition(out.open())
        assert len(set(part.values())) == n_comm
        assert len([ln for ln in journal.read_text().splitlines() if not ln.startswith("#")]) == 7

    def test_track_zero_events_identity(self, tmp_path):
        g = write_edges(tmp_path / "g.txt", SIX_NODE_A)
        p = tmp_path / "p.tsv"
        p.write_text("1\t5\n2\t5\n3\t5\n4\t8\n5\t8\n6\t8\n")
        ev = tmp_path / "e.txt"
        ev.write_text("")
        out = tmp_path / "o.tsv"
        rc = main(["track", "--input", str(ev), "--graph", g, "--partition", str(p),
                   "--journal", str(tmp_path / "j"), "--out", str(out)])
        assert rc == 0
        assert read_partition(out.open()) == read_partition(p.open())

    def test_track_unknown_partition_node(self, tmp_path, capsys):
        g = write_edges(tmp_path / "g.txt", SIX_NODE_A)
        p = tmp_path / "p.tsv"
        p.write_text("1\t0\n99\t0\n")
        ev = write_edges(tmp_path / "e.txt", [(1, 2, 1)])
        rc = main(["track", "--input", ev, "--graph", g, "--partition", str(p), "--journal", str(tmp_path / "j")])
        assert rc != 0
        assert "UnknownNodeInPartitionFile" in capsys.readouterr().err

    def test_stats(self, tmp_path, capsys):
        f = write_edges(tmp_path / "s.txt", SIX_NODE_A)
        journal = tmp_path / "j.tsv"
        main(["track", "--input", f, "--journal", str(journal), "--out", str(tmp_path / "p")])
        capsys.readouterr()
        assert main(["stats", "--journal", str(journal)]) == 0
        out = capsys.readouterr().out
        assert "operation\tMerge\t0\t" in out
        assert read_journal(journal.open()).counts()["Merge"] == 0
        empty = tmp_path / "empty.tsv"
        empty.write_text("# incrcomm-journal v1\n")
        assert main(["stats", "--journal", str(empty)]) != 0

    def test_experiment_cli(self, tmp_path, capsys):
        f = write_edges(tmp_path / "s.txt", SIX_NODE_A)
        out = tmp_path / "r.csv"
        journal = tmp_path / "j.tsv"
        rc = main(["experiment", "--input", f, "--ratio", "0", "--subsets", "7", "--no-shuffle",
                   "--out", str(out), "--journal", str(journal), "--with-static-rerun"])
        assert rc == 0
        rows = read_report_csv(out.read_text())
        assert len(rows) == 8
        assert rows[-1]["q_incremental"] == pytest.approx(0.4634710743801653, abs=1e-9)
        assert "Keep" in capsys.readouterr().out

    def test_experiment_too_few(self, tmp_path, capsys):
        f = write_edges(tmp_path / "s.txt", SIX_NODE_A)
        assert main(["experiment", "--input", f]) != 0
        assert "TooFewEdges" in capsys.readouterr().err

    def test_split_cli(self, tmp_path):
        f = write_edges(tmp_path / "s.txt", [(i, i + 1, 1) for i in range(30)])
        out = tmp_path / "plan.txt"
        assert main(["split", "--input", f, "--seed", "3", "--out", str(out)]) == 0
        assert out.read_text().startswith("# incrcomm-plan v1 seed=3 ratio=0.5 subsets=10")

    def test_module_entry(self, tmp_path):
        f = write_edges(tmp_path / "g.txt", SIX_NODE_A)
        res = subprocess.run([sys.executable, "-m", "incrcomm", "detect", "--input", f],
                             capture_output=True, text=True, check=True)
        assert "communities=2" in res.stdout
