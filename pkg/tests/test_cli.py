import csv
import json
from fractions import Fraction as F

from parlearn.cli import main
from parlearn.transcript import SessionTranscript
from parlearn.weighted import (
    WeightedGraph,
    is_rigid,
    is_twin_free,
    weighted_graph_from_dict,
    weighted_iso,
)


class TestLearnCommand:
    def test_hstar_success(self, hstar, write_target, tmp_path):
        target_path = write_target(hstar)
        out = tmp_path / "run.jsonl"
        code = main(["learn", "--target", str(target_path), "--out", str(out)])
        assert code == 0
        transcript = SessionTranscript.read(out)
        assert len(transcript.events("equivalence_query")) == 2
        hyp = weighted_graph_from_dict(
            json.loads((tmp_path / "run.hypothesis.json").read_text())
        )
        assert weighted_iso(hyp, hstar) is not None

    def test_non_rigid_refused(self, write_target):
        non_rigid = WeightedGraph((F(1), F(1)), ((F(0), F(1)), (F(1), F(0))))
        path = write_target(non_rigid, "k2.json")
        assert main(["learn", "--target", str(path)]) == 3

    def test_zero_alpha_refused(self, write_target):
        target = WeightedGraph((F(0), F(1)), ((F(1), F(0)), (F(0), F(2))))
        path = write_target(target, "zero.json")
        assert main(["learn", "--target", str(path)]) == 3

    def test_missing_file(self, tmp_path):
        assert main(["learn", "--target", str(tmp_path / "nope.json")]) == 3

    def test_bound_exhausted_exit_code(self, hstar, write_target, tmp_path):
        # within one vertex and zero edges the teacher cannot distinguish a
        # wrong hypothesis that agrees on K_1
        path = write_target(hstar)
        out = tmp_path / "tiny.jsonl"
        code = main(
            ["learn", "--target", str(path), "--out", str(out),
             "--max-vertices", "1", "--max-edges", "0"]
        )
        assert code == 2
        assert out.exists()

    def test_transcript_deterministic(self, hstar, write_target, tmp_path):
        path = write_target(hstar)
        out1 = tmp_path / "a.jsonl"
        out2 = tmp_path / "b.jsonl"
        assert main(["learn", "--target", str(path), "--out", str(out1)]) == 0
        assert main(["learn", "--target", str(path), "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestGenTargetCommand:
    def test_deterministic_output(self, tmp_path, capsys):
        assert main(["gen-target", "--q", "2", "--seed", "9"]) == 0
        first = capsys.readouterr().out
        assert main(["gen-target", "--q", "2", "--seed", "9"]) == 0
        second = capsys.readouterr().out
        assert first == second

    def test_written_target_is_valid(self, tmp_path):
        out = tmp_path / "t.json"
        assert main(["gen-target", "--q", "3", "--seed", "4", "--out", str(out)]) == 0
        target = weighted_graph_from_dict(json.loads(out.read_text()))
        assert is_rigid(target) and is_twin_free(target)


class TestEvalCommand:
    def test_hom_values_via_files(self, hstar, write_target, tmp_path, capsys):
        target_path = write_target(hstar)
        cases = [
            ({"n": 1, "edges": [], "labels": {}}, "3"),
            ({"n": 2, "edges": [[0, 1]], "labels": {}}, "5"),
            ({"n": 3, "edges": [[0, 1], [1, 2]], "labels": {}}, "11"),
            ({"n": 1, "edges": [[0, 0]], "labels": {}}, "1"),
        ]
        for data, expected in cases:
            graph_path = tmp_path / "g.json"
            graph_path.write_text(json.dumps(data))
            assert main(["eval", "--graph", str(graph_path), "--target", str(target_path)]) == 0
            assert capsys.readouterr().out.strip() == expected


class TestRankExperimentCommand:
    def test_hstar_k1(self, hstar, write_target, tmp_path, capsys):
        path = write_target(hstar)
        out = tmp_path / "rank.csv"
        code = main(
            ["rank-experiment", "--target", str(path), "--k", "1",
             "--samples", "10", "--out", str(out)]
        )
        assert code == 0
        with open(out) as fh:
            row = list(csv.DictReader(fh))[0]
        assert int(row["rank"]) == 2
        assert int(row["bound"]) == 2
        assert (tmp_path / "rank.png").exists()

    def test_hstar_k2_bound(self, hstar, write_target, tmp_path):
        path = write_target(hstar)
        out = tmp_path / "rank2.csv"
        code = main(
            ["rank-experiment", "--target", str(path), "--k", "2",
             "--samples", "20", "--out", str(out), "--no-plot"]
        )
        assert code == 0
        with open(out) as fh:
            row = list(csv.DictReader(fh))[0]
        assert int(row["rank"]) <= 4
        assert not (tmp_path / "rank2.png").exists()

    def test_non_rigid_target_rank_deficient(self, write_target, tmp_path):
        k3 = WeightedGraph(
            (F(1), F(1), F(1)),
            tuple(tuple(F(1 if i != j else 0) for j in range(3)) for i in range(3)),
        )
        path = write_target(k3, "k3.json")
        out = tmp_path / "k3rank.csv"
        code = main(
            ["rank-experiment", "--target", str(path), "--k", "1",
             "--samples", "25", "--out", str(out), "--no-plot"]
        )
        assert code == 0
        with open(out) as fh:
            row = list(csv.DictReader(fh))[0]
        # orbit count of the full symmetric group on single vertices is 1
        assert int(row["rank"]) < 3


class TestRigidityStatsCommand:
    def test_small_range(self, tmp_path):
        out = tmp_path / "rig.csv"
        code = main(
            ["rigidity-stats", "--n-range", "1-2", "--samples", "50",
             "--seed", "0", "--out", str(out)]
        )
        assert code == 0
        with open(out) as fh:
            rows = {int(r["n"]): float(r["rigid_fraction"]) for r in csv.DictReader(fh)}
        assert rows[1] == 1.0  # a single vertex is always rigid
        assert rows[2] == 0.0  # both 2-vertex graphs have the swap
        assert (tmp_path / "rig.png").exists()

    def test_range_validation(self, tmp_path):
        assert main(["rigidity-stats", "--n-range", "0-3", "--out",
                     str(tmp_path / "x.csv")]) == 3
