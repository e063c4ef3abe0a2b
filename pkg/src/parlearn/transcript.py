"""Session transcripts: an ordered JSONL log of queries, counterexamples,
hypotheses, and ranks.

Records contain no timestamps, so identical runs produce byte-identical
transcripts.  Graphs and rationals use the shared JSON formats.
"""

from __future__ import annotations

import json

from .linalg import format_rational
from .multigraph import LabeledMultigraph, graph_to_dict
from .weighted import WeightedGraph, weighted_graph_to_dict


class SessionTranscript:
    """Append-only event log for one learning session."""

    def __init__(self):
        self.records: list[dict] = []

    def _append(self, record: dict):
        self.records.append(record)

    def log_header(self, config: dict):
        self._append({"event": "header", "config": config})

    def log_value_query(self, iteration: int, graph: LabeledMultigraph, value):
        self._append(
            {
                "event": "value_query",
                "iteration": iteration,
                "graph": graph_to_dict(graph),
                "value": format_rational(value),
            }
        )

    def log_rank(self, iteration: int, rank: int):
        self._append({"event": "rank", "iteration": iteration, "rank": rank})

    def log_hypothesis(self, iteration: int, hypothesis: WeightedGraph,
                       exact_basis: bool, fallback: bool):
        self._append(
            {
                "event": "hypothesis",
                "iteration": iteration,
                "hypothesis": weighted_graph_to_dict(hypothesis),
                "exact_basis": exact_basis,
                "fallback": fallback,
            }
        )

    def log_equivalence(self, iteration: int, answer: str):
        self._append(
            {"event": "equivalence_query", "iteration": iteration, "answer": answer}
        )

    def log_counterexample(self, iteration: int, graph: LabeledMultigraph):
        self._append(
            {
                "event": "counterexample",
                "iteration": iteration,
                "graph": graph_to_dict(graph),
            }
        )

    def log_result(self, status: str, **extra):
        record = {"event": "result", "status": status}
        record.update(extra)
        self._append(record)

    # inspection helpers

    def events(self, kind: str) -> list[dict]:
        return [r for r in self.records if r["event"] == kind]

    def value_queries_by_iteration(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for r in self.events("value_query"):
            counts[r["iteration"]] = counts.get(r["iteration"], 0) + 1
        return counts

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n"
            for r in self.records
        )

    def write(self, path):
        with open(path, "w", encoding="ascii") as fh:
            fh.write(self.to_jsonl())

    @classmethod
    def from_jsonl(cls, text: str) -> "SessionTranscript":
        t = cls()
        for line in text.splitlines():
            if line.strip():
                t.records.append(json.loads(line))
        return t

    @classmethod
    def read(cls, path) -> "SessionTranscript":
        with open(path, "r", encoding="ascii") as fh:
            return cls.from_jsonl(fh.read())
