"""CSV and figure outputs for audits, threshold sweeps, and oracle runs.

Every report comes in two forms next to each other: a delimited file that
downstream tooling can parse, and a rendered PNG of the same numbers.
Figures are written through the Agg backend so report generation works on
headless machines.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .metrics import FairnessReport, SimilarityMatrix
from .model import Dataset
from .serialize import format_rate

# reference line for a group treated neither favorably nor unfavorably
FAIR_RATE = 0.5

_GROUP_CYCLE = plt.rcParams["axes.prop_cycle"].by_key()["color"]


@dataclass(frozen=True)
class SweepPoint:
    """One threshold-sweep sample: settings in, outcome out."""

    t: float
    achieved_arp: float
    feasible: bool
    total_kt_cost: int
    elapsed_s: float


@dataclass(frozen=True)
class OracleRow:
    """Heuristic-versus-exhaustive comparison for one test instance."""

    instance: str
    n: int
    m: int
    delta: float
    heuristic_cost: int
    heuristic_arp: float
    heuristic_feasible: bool
    kemeny_cost: int
    fair_cost: int | None
    oracle_feasible: bool
    min_achievable_arp: float


def _ensure_dir(path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)


def write_audit_csv(reports: Mapping[str, FairnessReport], path: str | Path) -> Path:
    """One row per (ranking, group) with the exact counts alongside the rate."""
    path = Path(path)
    _ensure_dir(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["ranking_id", "group", "fpr", "wins", "mixed_pair_count", "arp"])
        for ranking_id, report in reports.items():
            for label, entry in sorted(report.per_group.items()):
                writer.writerow([
                    ranking_id,
                    label,
                    format_rate(entry.fpr),
                    entry.wins,
                    entry.mixed_pair_count,
                    format_rate(report.arp),
                ])
    return path


def write_similarity_csv(matrix: SimilarityMatrix, path: str | Path) -> Path:
    path = Path(path)
    _ensure_dir(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["ranking_id", *matrix.ranking_ids])
        for rid, sim_row in zip(matrix.ranking_ids, matrix.similarity):
            writer.writerow([rid, *(format_rate(v) for v in sim_row)])
        writer.writerow([])
        writer.writerow(["kt", *matrix.ranking_ids])
        for rid, kt_row in zip(matrix.ranking_ids, matrix.kt):
            writer.writerow([rid, *kt_row])
    return path


def render_fpr_dots(reports: Mapping[str, FairnessReport], path: str | Path,
                    title: str = "Group favored-pair rates") -> Path:
    """Dot-per-group column chart with the 0.5 parity line and ARP bands.

    Each ranking gets a column; a translucent vertical band spans its
    extreme group rates, so band height reads directly as that ranking's
    parity gap.
    """
    path = Path(path)
    _ensure_dir(path)
    ids = list(reports)
    labels = sorted({g for r in reports.values() for g in r.per_group})
    color_of = {g: _GROUP_CYCLE[i % len(_GROUP_CYCLE)] for i, g in enumerate(labels)}

    fig, ax = plt.subplots(figsize=(max(4.0, 1.4 * len(ids) + 2.0), 4.2))
    for x, rid in enumerate(ids):
        report = reports[rid]
        rates = [entry.fpr for entry in report.per_group.values()]
        ax.vlines(x, min(rates), max(rates), color="0.75", lw=6, alpha=0.5, zorder=1)
        for g, entry in report.per_group.items():
            ax.scatter([x], [entry.fpr], color=color_of[g], s=42, zorder=2,
                       label=g if x == 0 else None)
        ax.annotate(f"ARP {report.arp:.3f}", (x, 1.03), ha="center", fontsize=8,
                    annotation_clip=False)
    ax.axhline(FAIR_RATE, color="black", ls="--", lw=0.8)
    ax.set_xticks(range(len(ids)))
    ax.set_xticklabels(ids, rotation=30, ha="right", fontsize=8)
    ax.set_ylim(-0.05, 1.1)
    ax.set_ylabel("favored pair rate")
    ax.set_title(title)
    ax.legend(loc="lower right", fontsize=8, title=None)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_position_heatmap(dataset: Dataset, reports: Mapping[str, FairnessReport],
                            path: str | Path) -> Path:
    """Per-ranking heatmaps of where each group's members land.

    Rows are groups, columns are position bins, cell intensity is the
    fraction of the group in that bin.
    """
    path = Path(path)
    _ensure_dir(path)
    ids = list(reports)
    labels = sorted(dataset.groups)
    fig, axes = plt.subplots(
        1, len(ids), figsize=(max(3.2, 3.2 * len(ids)), 0.55 * len(labels) + 1.6),
        squeeze=False,
    )
    for ax, rid in zip(axes[0], ids):
        report = reports[rid]
        grid = np.array(
            [report.per_group[g].histogram for g in labels], dtype=float
        )
        sizes = grid.sum(axis=1, keepdims=True)
        image = ax.imshow(grid / np.maximum(sizes, 1), cmap="viridis",
                          aspect="auto", vmin=0.0, vmax=1.0)
        ax.set_yticks(range(len(labels)))
        ax.set_yticklabels(labels, fontsize=8)
        ax.set_xlabel("position bin")
        ax.set_title(rid, fontsize=9)
    fig.colorbar(image, ax=axes[0], shrink=0.85, label="share of group")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_similarity_heatmap(matrix: SimilarityMatrix, path: str | Path) -> Path:
    path = Path(path)
    _ensure_dir(path)
    data = np.array(matrix.similarity, dtype=float)
    k = len(matrix.ranking_ids)
    fig, ax = plt.subplots(figsize=(0.6 * k + 2.4, 0.6 * k + 2.0))
    image = ax.imshow(data, cmap="RdYlGn", vmin=0.0, vmax=1.0)
    ax.set_xticks(range(k))
    ax.set_yticks(range(k))
    ax.set_xticklabels(matrix.ranking_ids, rotation=45, ha="right", fontsize=8)
    ax.set_yticklabels(matrix.ranking_ids, fontsize=8)
    for i in range(k):
        for j in range(k):
            ax.annotate(f"{data[i, j]:.2f}", (j, i), ha="center", va="center", fontsize=7)
    ax.set_title("Pairwise ranking similarity")
    fig.colorbar(image, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_sweep_csv(points: Sequence[SweepPoint], path: str | Path) -> Path:
    path = Path(path)
    _ensure_dir(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", "achieved_arp", "feasible", "total_kt_cost", "elapsed_s"])
        for point in points:
            writer.writerow([
                f"{point.t:.6g}",
                format_rate(point.achieved_arp),
                str(point.feasible).lower(),
                point.total_kt_cost,
                f"{point.elapsed_s:.4f}",
            ])
    return path


def render_sweep_figure(points: Sequence[SweepPoint], path: str | Path,
                        t_effective_min: float | None = None) -> Path:
    """Fairness/agreement trade-off curve over the threshold range.

    Left axis: achieved parity gap against the permitted ceiling 1 - t.
    Right axis: total Kendall-Tau cost of the generated consensus.
    Hollow markers flag thresholds the repair loop could not satisfy.
    """
    path = Path(path)
    _ensure_dir(path)
    ts = [p.t for p in points]
    fig, ax_arp = plt.subplots(figsize=(6.4, 4.2))
    ax_cost = ax_arp.twinx()

    ax_arp.plot(ts, [1.0 - t for t in ts], color="0.6", ls=":", lw=1.0,
                label="permitted gap 1 - t")
    ax_arp.plot(ts, [p.achieved_arp for p in points], color="tab:blue", lw=1.4,
                label="achieved gap")
    feas = [p for p in points if p.feasible]
    infeas = [p for p in points if not p.feasible]
    ax_arp.scatter([p.t for p in feas], [p.achieved_arp for p in feas],
                   color="tab:blue", s=24, zorder=3)
    if infeas:
        ax_arp.scatter([p.t for p in infeas], [p.achieved_arp for p in infeas],
                       facecolors="none", edgecolors="tab:red", s=40, zorder=3,
                       label="infeasible")
    ax_cost.plot(ts, [p.total_kt_cost for p in points], color="tab:orange", lw=1.4,
                 label="total KT cost")
    if t_effective_min is not None:
        ax_arp.axvline(t_effective_min, color="0.4", ls="--", lw=0.9)
        ax_arp.annotate("constraint activates", (t_effective_min, 0.02),
                        rotation=90, fontsize=7, ha="right", va="bottom")

    ax_arp.set_xlabel("fairness threshold t")
    ax_arp.set_ylabel("attribute rank parity gap")
    ax_cost.set_ylabel("total Kendall-Tau cost")
    lines, names = ax_arp.get_legend_handles_labels()
    lines2, names2 = ax_cost.get_legend_handles_labels()
    ax_arp.legend(lines + lines2, names + names2, loc="upper right", fontsize=8)
    ax_arp.set_title("Threshold sweep")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def write_oracle_csv(rows: Sequence[OracleRow], path: str | Path) -> Path:
    path = Path(path)
    _ensure_dir(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow([
            "instance", "n", "m", "delta",
            "heuristic_cost", "heuristic_arp", "heuristic_feasible",
            "kemeny_cost", "fair_kemeny_cost", "oracle_feasible",
            "min_achievable_arp",
        ])
        for row in rows:
            writer.writerow([
                row.instance, row.n, row.m, f"{row.delta:.6g}",
                row.heuristic_cost, format_rate(row.heuristic_arp),
                str(row.heuristic_feasible).lower(),
                row.kemeny_cost,
                "" if row.fair_cost is None else row.fair_cost,
                str(row.oracle_feasible).lower(),
                format_rate(row.min_achievable_arp),
            ])
    return path


def oracle_summary(rows: Sequence[OracleRow]) -> dict[str, float | int]:
    """Aggregate agreement/dominance stats for an oracle comparison run."""
    total = len(rows)
    agree = sum(1 for r in rows if r.heuristic_feasible == r.oracle_feasible)
    gaps = [
        r.heuristic_cost - (r.fair_cost if r.fair_cost is not None else r.kemeny_cost)
        for r in rows
    ]
    return {
        "instances": total,
        "feasibility_agreement_rate": (agree / total) if total else 1.0,
        "mean_cost_gap": (sum(gaps) / total) if total else 0.0,
        "max_cost_gap": max(gaps, default=0),
    }


def render_oracle_figure(rows: Sequence[OracleRow], path: str | Path) -> Path:
    """Heuristic cost against exhaustive-optimum cost, one dot per instance."""
    path = Path(path)
    _ensure_dir(path)
    stats = oracle_summary(rows)
    fig, ax = plt.subplots(figsize=(5.2, 5.0))
    xs = [r.fair_cost if r.fair_cost is not None else r.kemeny_cost for r in rows]
    ys = [r.heuristic_cost for r in rows]
    agree = [r.heuristic_feasible == r.oracle_feasible for r in rows]
    ax.scatter([x for x, a in zip(xs, agree) if a], [y for y, a in zip(ys, agree) if a],
               s=22, color="tab:blue", alpha=0.6, label="feasibility agrees")
    if not all(agree):
        ax.scatter([x for x, a in zip(xs, agree) if not a],
                   [y for y, a in zip(ys, agree) if not a],
                   s=30, color="tab:red", alpha=0.8, label="feasibility differs")
    top = max(xs + ys, default=1)
    ax.plot([0, top], [0, top], color="0.5", ls="--", lw=0.9, label="parity")
    ax.set_xlabel("exhaustive optimum cost")
    ax.set_ylabel("heuristic cost")
    ax.set_title(
        "Heuristic vs oracle "
        f"(agreement {stats['feasibility_agreement_rate']:.0%}, "
        f"mean gap {stats['mean_cost_gap']:.2f})"
    )
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
