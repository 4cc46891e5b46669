"""Command-line interface.

Subcommands cover the full workflow without the web UI: ``audit`` scores
or explicit rankings, ``aggregate`` one consensus, ``sweep`` the whole
threshold range, ``oracle`` heuristic-versus-exhaustive comparisons,
``synth`` perturbed test rankings, and ``serve`` the HTTP API.

Ports and data directories fall back to the FAIRFUSE_PORT and
FAIRFUSE_DATA_DIR environment variables when flags are absent.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import serialize
from .consensus import (
    GenerationRequest,
    brute_force_fair_kemeny,
    brute_force_kemeny,
    copeland_ranking,
    fair_copeland,
)
from .errors import FairfuseError, InvalidRequest
from .ingestion import (
    load_dataset,
    load_rankings,
    load_scores,
    rankings_from_scores,
    synthesize_rankings,
    write_rankings_csv,
)
from .metrics import DEFAULT_HISTOGRAM_BINS, audit, similarity_matrix
from .model import Candidate, Dataset, Ranking

DEFAULT_PORT = 8000
DEFAULT_DATA_DIR = "./fairfuse-data"
ORACLE_DELTAS = (0.0, 0.25, 0.5, 0.75, 1.0)


def _env_port() -> int:
    raw = os.environ.get("FAIRFUSE_PORT")
    if raw is None:
        return DEFAULT_PORT
    try:
        return int(raw)
    except ValueError:
        raise InvalidRequest(f"FAIRFUSE_PORT must be an integer, got {raw!r}")


def _env_data_dir() -> str:
    return os.environ.get("FAIRFUSE_DATA_DIR", DEFAULT_DATA_DIR)


def _add_input_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--candidates", required=True, help="candidates CSV path")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--scores", help="scores CSV path (one column per ranker)")
    source.add_argument("--rankings", help="explicit rankings CSV path")
    parser.add_argument("--protected", required=True, help="protected attribute name")


def _load_inputs(args: argparse.Namespace) -> tuple[Dataset, list[Ranking]]:
    dataset = load_dataset(args.candidates, args.protected)
    if args.scores:
        bases = rankings_from_scores(load_scores(args.scores))
    else:
        bases = load_rankings(args.rankings)
    for ranking in bases:
        dataset.validate_ranking(ranking.order)
    return dataset, bases


def _print_json(payload: dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _audit_reports(dataset: Dataset, rankings: Sequence[Ranking], bins: int):
    return {r.id: audit(dataset, r, bins=bins) for r in rankings}


def _write_audit_reports(dataset, reports, rankings, report_dir: Path) -> list[Path]:
    from . import reporting

    written = [
        reporting.write_audit_csv(reports, report_dir / "audit.csv"),
        reporting.render_fpr_dots(reports, report_dir / "fpr_by_group.png"),
        reporting.render_position_heatmap(dataset, reports, report_dir / "positions.png"),
    ]
    if len(rankings) >= 2:
        matrix = similarity_matrix(list(rankings))
        written.append(reporting.write_similarity_csv(matrix, report_dir / "similarity.csv"))
        written.append(
            reporting.render_similarity_heatmap(matrix, report_dir / "similarity.png")
        )
    return written


def cmd_audit(args: argparse.Namespace) -> int:
    dataset, bases = _load_inputs(args)
    reports = _audit_reports(dataset, bases, args.bins)
    if args.json:
        payload: dict[str, Any] = {
            "schema": serialize.SCHEMA_VERSION,
            "protected_attribute": dataset.protected_attribute,
            "audits": {rid: serialize.report_to_dict(r) for rid, r in reports.items()},
        }
        if len(bases) >= 2:
            payload["similarity"] = serialize.matrix_to_dict(similarity_matrix(bases))
        _print_json(payload)
    else:
        header = f"{'ranking':<24}{'group':<16}{'fpr':>10}{'wins':>8}{'mixed':>8}{'arp':>10}"
        print(header)
        print("-" * len(header))
        for rid, report in reports.items():
            for label, entry in sorted(report.per_group.items()):
                print(
                    f"{rid:<24}{label:<16}{entry.fpr:>10.6f}"
                    f"{entry.wins:>8}{entry.mixed_pair_count:>8}{report.arp:>10.6f}"
                )
    if args.report_dir:
        written = _write_audit_reports(dataset, reports, bases, Path(args.report_dir))
        for path in written:
            print(f"wrote {path}", file=sys.stderr)
    return 0


def cmd_aggregate(args: argparse.Namespace) -> int:
    dataset, bases = _load_inputs(args)
    result = fair_copeland(bases, dataset, GenerationRequest(t=args.t))
    write_rankings_csv([result.ranking], args.out)
    summary = {
        "schema": serialize.SCHEMA_VERSION,
        "out": str(args.out),
        "result": serialize.consensus_to_dict(result),
    }
    _print_json(summary)
    if args.report_dir:
        report_dir = Path(args.report_dir)
        everything = bases + [result.ranking]
        reports = _audit_reports(dataset, everything, args.bins)
        written = _write_audit_reports(dataset, reports, everything, report_dir)
        for path in written:
            print(f"wrote {path}", file=sys.stderr)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    from . import reporting

    dataset, bases = _load_inputs(args)
    if args.steps < 2:
        raise InvalidRequest("--steps must be at least 2")
    unconstrained = copeland_ranking(bases, dataset)
    assert unconstrained.achieved_arp is not None
    t_effective_min = 1.0 - unconstrained.achieved_arp

    points = []
    for i in range(args.steps):
        t = i / (args.steps - 1)
        started = time.perf_counter()
        result = fair_copeland(bases, dataset, GenerationRequest(t=t))
        elapsed = time.perf_counter() - started
        assert result.achieved_arp is not None
        points.append(reporting.SweepPoint(
            t=t,
            achieved_arp=result.achieved_arp,
            feasible=result.feasible,
            total_kt_cost=result.total_kt_cost,
            elapsed_s=elapsed,
        ))

    report_dir = Path(args.report_dir)
    written = [
        reporting.write_sweep_csv(points, report_dir / "sweep.csv"),
        reporting.render_sweep_figure(points, report_dir / "sweep.png",
                                      t_effective_min=t_effective_min),
    ]
    _print_json({
        "schema": serialize.SCHEMA_VERSION,
        "steps": args.steps,
        "t_effective_min": t_effective_min,
        "max_elapsed_s": max(p.elapsed_s for p in points),
        "infeasible_ts": [p.t for p in points if not p.feasible],
        "written": [str(p) for p in written],
    })
    return 0


def _random_instance(rng: random.Random, n: int, m: int, group_count: int) -> tuple[Dataset, list[Ranking]]:
    """A dataset with every group non-empty plus m shuffled base rankings."""
    labels = [chr(ord("A") + i) for i in range(group_count)]
    assignment = labels + [rng.choice(labels) for _ in range(n - group_count)]
    rng.shuffle(assignment)
    candidates = tuple(
        Candidate(id=f"c{i:02d}", name=f"c{i:02d}", protected_value=assignment[i],
                  attributes={"grp": assignment[i]})
        for i in range(n)
    )
    dataset = Dataset(candidates=candidates, protected_attribute="grp")
    ids = list(dataset.ids())
    bases = []
    for j in range(m):
        order = ids[:]
        rng.shuffle(order)
        bases.append(Ranking(id=f"base:r{j + 1}", label=f"r{j + 1}",
                             order=tuple(order), kind="base"))
    return dataset, bases


def cmd_oracle(args: argparse.Namespace) -> int:
    from . import reporting

    if args.max_n < 3:
        raise InvalidRequest("--max-n must be at least 3")
    rng = random.Random(args.seed)
    rows = []
    for i in range(args.instances):
        n = rng.randint(3, args.max_n)
        group_count = rng.randint(2, min(3, n))
        m = rng.choice((2, 3, 5))
        dataset, bases = _random_instance(rng, n, m, group_count)
        delta = ORACLE_DELTAS[i % len(ORACLE_DELTAS)]
        t = 1.0 - delta

        heuristic = fair_copeland(bases, dataset, GenerationRequest(t=t))
        kemeny = brute_force_kemeny(bases, max_n=args.max_n)
        fair = brute_force_fair_kemeny(bases, dataset, delta, max_n=args.max_n)
        assert heuristic.achieved_arp is not None
        rows.append(reporting.OracleRow(
            instance=f"seed{args.seed}-{i:03d}",
            n=n, m=m, delta=delta,
            heuristic_cost=heuristic.total_kt_cost,
            heuristic_arp=heuristic.achieved_arp,
            heuristic_feasible=heuristic.feasible,
            kemeny_cost=kemeny.cost,
            fair_cost=fair.cost,
            oracle_feasible=fair.feasible,
            min_achievable_arp=float(fair.min_achievable_arp),
        ))

    summary = reporting.oracle_summary(rows)
    summary["kemeny_cost_never_exceeds_heuristic"] = all(
        r.kemeny_cost <= r.heuristic_cost for r in rows
    )
    summary["fair_cost_never_below_kemeny"] = all(
        r.fair_cost is None or r.fair_cost >= r.kemeny_cost for r in rows
    )
    payload: dict[str, Any] = {"schema": serialize.SCHEMA_VERSION, **summary}
    if args.report_dir:
        report_dir = Path(args.report_dir)
        payload["written"] = [
            str(reporting.write_oracle_csv(rows, report_dir / "oracle.csv")),
            str(reporting.render_oracle_figure(rows, report_dir / "oracle.png")),
        ]
    _print_json(payload)
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.candidates, args.protected)
    seed_ranking = Ranking(
        id="base:seed", label="seed", order=dataset.ids(), kind="base"
    )
    synthesized = synthesize_rankings(
        seed_ranking, count=args.count, swaps=args.swaps, seed=args.seed
    )
    write_rankings_csv(synthesized, args.out)
    _print_json({
        "schema": serialize.SCHEMA_VERSION,
        "out": str(args.out),
        "count": args.count,
        "swaps": args.swaps,
        "seed": args.seed,
        "labels": [r.label for r in synthesized],
    })
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app
    from .session import SessionStore

    port = args.port if args.port is not None else _env_port()
    data_dir = args.data_dir if args.data_dir is not None else _env_data_dir()
    store = SessionStore(data_dir)
    app = create_app(store, static_dir=args.static)
    print(f"serving on {args.host}:{port}, snapshots in {data_dir}", file=sys.stderr)
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairfuse",
        description="Audit stakeholder rankings for group bias and build fair consensus rankings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_audit = sub.add_parser("audit", help="fairness report per base ranking")
    _add_input_flags(p_audit)
    style = p_audit.add_mutually_exclusive_group()
    style.add_argument("--json", action="store_true", help="machine-readable output")
    style.add_argument("--table", action="store_true", help="fixed-width table (default)")
    p_audit.add_argument("--bins", type=int, default=DEFAULT_HISTOGRAM_BINS,
                         help="position histogram bins")
    p_audit.add_argument("--report-dir", help="also write CSV + figure reports here")
    p_audit.set_defaults(func=cmd_audit)

    p_agg = sub.add_parser("aggregate", help="generate one consensus ranking")
    _add_input_flags(p_agg)
    p_agg.add_argument("--t", type=float, required=True, help="fairness threshold in [0,1]")
    p_agg.add_argument("--out", required=True, help="output CSV for the consensus ranking")
    p_agg.add_argument("--bins", type=int, default=DEFAULT_HISTOGRAM_BINS)
    p_agg.add_argument("--report-dir", help="also write CSV + figure reports here")
    p_agg.set_defaults(func=cmd_aggregate)

    p_sweep = sub.add_parser("sweep", help="sweep the threshold range, report the trade-off")
    _add_input_flags(p_sweep)
    p_sweep.add_argument("--steps", type=int, default=21, help="number of t values, 0..1 inclusive")
    p_sweep.add_argument("--report-dir", required=True, help="where sweep.csv / sweep.png go")
    p_sweep.set_defaults(func=cmd_sweep)

    p_oracle = sub.add_parser("oracle", help="compare heuristic against exhaustive search")
    p_oracle.add_argument("--max-n", type=int, default=7, help="largest candidate count")
    p_oracle.add_argument("--instances", type=int, default=40, help="random instances to run")
    p_oracle.add_argument("--seed", type=int, default=1)
    p_oracle.add_argument("--report-dir", help="also write oracle.csv / oracle.png here")
    p_oracle.set_defaults(func=cmd_oracle)

    p_synth = sub.add_parser("synth", help="synthesize perturbed rankings for testing")
    p_synth.add_argument("--candidates", required=True, help="candidates CSV path")
    p_synth.add_argument("--protected", required=True, help="protected attribute name")
    p_synth.add_argument("--seed", type=int, required=True)
    p_synth.add_argument("--swaps", type=int, required=True,
                         help="adjacent transpositions applied per ranking")
    p_synth.add_argument("--count", type=int, required=True, help="rankings to generate")
    p_synth.add_argument("--out", required=True, help="output rankings CSV")
    p_synth.set_defaults(func=cmd_synth)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=None,
                         help="HTTP port (default: FAIRFUSE_PORT or 8000)")
    p_serve.add_argument("--data-dir", default=None,
                         help="snapshot directory (default: FAIRFUSE_DATA_DIR or ./fairfuse-data)")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--static", default=None, help="serve a built UI from this directory")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FairfuseError as exc:
        print(f"error[{exc.code}]: {exc.message}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error[FileNotFound]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
