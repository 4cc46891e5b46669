"""JSON codecs shared by the HTTP service and session snapshots.

Fairness rates travel as 6-fractional-digit decimal strings so clients can
render them verbatim, always accompanied by the exact integer counts
(``wins`` / ``mixed_pair_count``, or a ``num``/``den`` pair) that let any
client re-derive and verify the value. Round-tripping a report through
these codecs is lossless: floats are rebuilt from the exact integers, not
parsed from the display strings.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .consensus import ConsensusResult, SwapStep
from .metrics import FairnessReport, GroupAudit, SimilarityMatrix
from .model import Candidate, Dataset, Ranking

SCHEMA_VERSION = 1


def format_rate(value: float) -> str:
    return f"{value:.6f}"


def fraction_to_dict(value: Fraction) -> dict[str, int]:
    return {"num": value.numerator, "den": value.denominator}


def fraction_from_dict(data: dict[str, int]) -> Fraction:
    return Fraction(data["num"], data["den"])


def candidate_to_dict(cand: Candidate) -> dict[str, Any]:
    return {
        "id": cand.id,
        "name": cand.name,
        "protected_value": cand.protected_value,
        "attributes": dict(cand.attributes),
    }


def candidate_from_dict(data: dict[str, Any]) -> Candidate:
    return Candidate(
        id=data["id"],
        name=data["name"],
        protected_value=data["protected_value"],
        attributes=dict(data["attributes"]),
    )


def dataset_to_dict(dataset: Dataset) -> dict[str, Any]:
    return {
        "protected_attribute": dataset.protected_attribute,
        "candidates": [candidate_to_dict(c) for c in dataset.candidates],
        "groups": {
            label: list(group.member_ids) for label, group in dataset.groups.items()
        },
    }


def dataset_from_dict(data: dict[str, Any]) -> Dataset:
    return Dataset(
        candidates=tuple(candidate_from_dict(c) for c in data["candidates"]),
        protected_attribute=data["protected_attribute"],
    )


def ranking_to_dict(ranking: Ranking) -> dict[str, Any]:
    return {
        "id": ranking.id,
        "label": ranking.label,
        "kind": ranking.kind,
        "order": list(ranking.order),
    }


def ranking_from_dict(data: dict[str, Any]) -> Ranking:
    return Ranking(
        id=data["id"],
        label=data["label"],
        order=tuple(data["order"]),
        kind=data["kind"],
    )


def group_audit_to_dict(entry: GroupAudit) -> dict[str, Any]:
    return {
        "fpr": format_rate(entry.fpr),
        "wins": entry.wins,
        "mixed_pair_count": entry.mixed_pair_count,
        "positions": list(entry.positions),
        "histogram": list(entry.histogram),
    }


def group_audit_from_dict(data: dict[str, Any]) -> GroupAudit:
    return GroupAudit(
        fpr=data["wins"] / data["mixed_pair_count"],
        wins=data["wins"],
        mixed_pair_count=data["mixed_pair_count"],
        positions=tuple(data["positions"]),
        histogram=tuple(data["histogram"]),
    )


def report_to_dict(report: FairnessReport) -> dict[str, Any]:
    return {
        "ranking_id": report.ranking_id,
        "per_group": {
            label: group_audit_to_dict(entry)
            for label, entry in sorted(report.per_group.items())
        },
        "arp": format_rate(report.arp),
        "arp_exact": fraction_to_dict(report.arp_exact),
        "extreme_groups": list(report.extreme_groups),
    }


def report_from_dict(data: dict[str, Any]) -> FairnessReport:
    exact = fraction_from_dict(data["arp_exact"])
    return FairnessReport(
        ranking_id=data["ranking_id"],
        per_group={
            label: group_audit_from_dict(entry)
            for label, entry in sorted(data["per_group"].items())
        },
        arp=float(exact),
        arp_exact=exact,
        extreme_groups=(data["extreme_groups"][0], data["extreme_groups"][1]),
    )


def matrix_to_dict(matrix: SimilarityMatrix) -> dict[str, Any]:
    return {
        "ranking_ids": list(matrix.ranking_ids),
        "kt": [list(row) for row in matrix.kt],
        "similarity": [[format_rate(v) for v in row] for row in matrix.similarity],
    }


def swap_to_dict(step: SwapStep) -> dict[str, Any]:
    return {"position": step.position, "id_up": step.id_up, "id_down": step.id_down}


def swap_from_dict(data: dict[str, Any]) -> SwapStep:
    return SwapStep(position=data["position"], id_up=data["id_up"], id_down=data["id_down"])


def consensus_to_dict(result: ConsensusResult) -> dict[str, Any]:
    exact = result.achieved_arp_exact
    return {
        "ranking": ranking_to_dict(result.ranking),
        "achieved_arp": None if result.achieved_arp is None else format_rate(result.achieved_arp),
        "achieved_arp_exact": None if exact is None else fraction_to_dict(exact),
        "feasible": result.feasible,
        "threshold_used": result.threshold_used,
        "copeland_scores": {cid: score for cid, score in sorted(result.copeland_scores.items())},
        "swap_trace": [swap_to_dict(s) for s in result.swap_trace],
        "total_kt_cost": result.total_kt_cost,
    }


def consensus_from_dict(data: dict[str, Any]) -> ConsensusResult:
    exact = data["achieved_arp_exact"]
    exact_frac = None if exact is None else fraction_from_dict(exact)
    return ConsensusResult(
        ranking=ranking_from_dict(data["ranking"]),
        achieved_arp=None if exact_frac is None else float(exact_frac),
        achieved_arp_exact=exact_frac,
        feasible=data["feasible"],
        threshold_used=data["threshold_used"],
        copeland_scores={cid: score for cid, score in sorted(data["copeland_scores"].items())},
        swap_trace=tuple(swap_from_dict(s) for s in data["swap_trace"]),
        total_kt_cost=data["total_kt_cost"],
    )
