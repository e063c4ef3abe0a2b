"""Command-line interface.

Subcommands: learn, gen-target, eval, rank-experiment, rigidity-stats.
Set PARLEARN_LOG=debug|info|warning for verbosity.  Exit codes for learn:
0 success, 2 counterexample bounds exhausted, 3 validation failure,
4 iteration cap exceeded, 5 candidate pool exhausted.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .errors import (
    BoundExhaustedError,
    IterationCapError,
    ParlearnError,
    PoolExhaustedError,
    ValidationError,
)
from .learner import LearnConfig, LearnSession
from .linalg import format_rational
from .multigraph import graph_from_dict
from .sampling import gen_target
from .teacher import Teacher, TeacherConfig
from .weighted import (
    WeightedGraph,
    hom,
    is_rigid,
    is_twin_free,
    weighted_graph_from_dict,
    weighted_graph_to_dict,
)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_BOUNDS = 2
EXIT_VALIDATION = 3
EXIT_ITERATION_CAP = 4
EXIT_POOL = 5


def _setup_logging():
    level_name = os.environ.get("PARLEARN_LOG", "warning").upper()
    level = getattr(logging, level_name, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _load_target(path: str) -> WeightedGraph:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return weighted_graph_from_dict(data)
    except (OSError, ValueError, KeyError) as exc:
        raise ValidationError(f"cannot load target from {path}: {exc}") from exc


def _validate_learn_target(target: WeightedGraph):
    if any(a == 0 for a in target.alpha):
        raise ValidationError("target has a zero vertex weight")
    if not is_twin_free(target):
        raise ValidationError("target is not twin-free")
    if not is_rigid(target):
        raise ValidationError("target is not rigid")


def cmd_learn(args) -> int:
    try:
        target = _load_target(args.target)
        _validate_learn_target(target)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    teacher = Teacher(target, TeacherConfig(args.max_vertices, args.max_edges))
    session = LearnSession(teacher, LearnConfig(iteration_cap=args.iteration_cap))
    out = Path(args.out) if args.out else Path(args.target).with_suffix(".transcript.jsonl")
    code = EXIT_OK
    try:
        result = session.run()
    except BoundExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_BOUNDS
    except IterationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_ITERATION_CAP
    except PoolExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_POOL
    session.transcript.write(out)
    if code == EXIT_OK:
        hyp_path = out.with_suffix(".hypothesis.json")
        with open(hyp_path, "w", encoding="utf-8") as fh:
            json.dump(weighted_graph_to_dict(result.hypothesis), fh, sort_keys=True)
            fh.write("\n")
        print(
            f"learned in {result.equivalence_rounds} equivalence rounds; "
            f"transcript: {out}; hypothesis: {hyp_path}"
        )
    else:
        print(f"transcript (partial): {out}", file=sys.stderr)
    return code


def cmd_gen_target(args) -> int:
    try:
        target = gen_target(args.q, args.denominator_bound, args.seed)
    except (ValueError, ParlearnError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    payload = json.dumps(weighted_graph_to_dict(target), sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
        print(f"wrote {args.out}")
    else:
        print(payload)
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        target = _load_target(args.target)
        with open(args.graph, "r", encoding="utf-8") as fh:
            graph = graph_from_dict(json.load(fh))
    except (OSError, ValueError, KeyError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(format_rational(hom(graph, target)))
    return EXIT_OK


def cmd_rank_experiment(args) -> int:
    from . import reports

    try:
        target = _load_target(args.target)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    result = reports.rank_experiment(
        target, args.k, args.samples, seed=args.seed,
        max_vertices=args.max_vertices, max_edges=args.max_edges,
    )
    if result.rank > result.bound:
        raise AssertionError("rank exceeded the q^k bound; exact algebra is broken")
    out = Path(args.out) if args.out else Path(args.target).with_suffix(".rank.csv")
    reports.write_rank_csv(result, out)
    messages = [f"rank {result.rank} <= bound {result.bound} (q={result.q}, k={args.k})"]
    if args.k == 1:
        messages.append(f"reached q: {result.rank == result.q}")
    if not args.no_plot:
        fig_path = out.with_suffix(".png")
        reports.plot_rank_curve(result, fig_path)
        messages.append(f"figure: {fig_path}")
    print(f"wrote {out}; " + "; ".join(messages))
    return EXIT_OK


def _parse_n_range(text: str) -> list[int]:
    if "-" in text and "," not in text:
        lo, hi = text.split("-", 1)
        values = list(range(int(lo), int(hi) + 1))
    else:
        values = [int(part) for part in text.split(",") if part.strip()]
    if not values or any(n < 1 or n > 10 for n in values):
        raise ValidationError("n range must lie within 1..10")
    return values


def cmd_rigidity_stats(args) -> int:
    from . import reports

    try:
        n_values = _parse_n_range(args.n_range)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    rows = reports.rigidity_stats(n_values, args.samples, seed=args.seed)
    out = Path(args.out) if args.out else Path("rigidity_stats.csv")
    reports.write_rigidity_csv(rows, out)
    if not args.no_plot:
        fig_path = out.with_suffix(".png")
        reports.plot_rigidity(rows, fig_path)
        print(f"wrote {out}; figure: {fig_path}")
    else:
        print(f"wrote {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parlearn",
        description="Exact learning of rigid partition functions from value "
        "and equivalence queries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_learn = sub.add_parser("learn", help="learn a hidden target from a teacher")
    p_learn.add_argument("--target", required=True, help="target WeightedGraph JSON")
    p_learn.add_argument("--out", help="transcript JSONL path")
    p_learn.add_argument("--max-vertices", type=int, default=6)
    p_learn.add_argument("--max-edges", type=int, default=8)
    p_learn.add_argument("--iteration-cap", type=int, default=None)
    p_learn.set_defaults(func=cmd_learn)

    p_gen = sub.add_parser("gen-target", help="sample a rigid twin-free target")
    p_gen.add_argument("--q", type=int, required=True)
    p_gen.add_argument("--denominator-bound", type=int, default=3)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out")
    p_gen.set_defaults(func=cmd_gen_target)

    p_eval = sub.add_parser("eval", help="evaluate the partition function on a graph")
    p_eval.add_argument("--graph", required=True, help="multigraph JSON file")
    p_eval.add_argument("--target", required=True)
    p_eval.set_defaults(func=cmd_eval)

    p_rank = sub.add_parser("rank-experiment", help="sampled connection matrix rank")
    p_rank.add_argument("--target", required=True)
    p_rank.add_argument("--k", type=int, choices=(1, 2), default=1)
    p_rank.add_argument("--samples", type=int, default=25)
    p_rank.add_argument("--seed", type=int, default=0)
    p_rank.add_argument("--max-vertices", type=int, default=4)
    p_rank.add_argument("--max-edges", type=int, default=6)
    p_rank.add_argument("--out")
    p_rank.add_argument("--no-plot", action="store_true")
    p_rank.set_defaults(func=cmd_rank_experiment)

    p_rig = sub.add_parser("rigidity-stats", help="rigid fraction of random graphs")
    p_rig.add_argument("--n-range", default="4-8", help='e.g. "4-8" or "4,6,8"')
    p_rig.add_argument("--samples", type=int, default=200)
    p_rig.add_argument("--seed", type=int, default=0)
    p_rig.add_argument("--out")
    p_rig.add_argument("--no-plot", action="store_true")
    p_rig.set_defaults(func=cmd_rigidity_stats)

    return parser


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
