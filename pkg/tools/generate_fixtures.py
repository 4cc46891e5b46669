"""Regenerate the bundled demonstration datasets.

Run from the repository root: ``python tools/generate_fixtures.py``.
Outputs land in ``src/fairfuse/fixtures/`` and are committed; this script
exists so the CSVs are reproducible and their bias structure is verified
rather than hand-trusted.

Two scenarios ship:

* scholarship: 60 students in five demographic groups, three subject-score
  columns acting as three rankers. Group score means differ, so every
  subject ranking shows a real parity gap with the top group favored.
* employee: 16 staff ranked by three committee members (R1, R2, R3). The
  single Human Resources member sits at or near the top of every ranking,
  the three Research Directors at the bottom, reproducing a one-sided
  bonus-allocation scenario.
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fairfuse.ingestion import write_dataset_csv, write_rankings_csv  # noqa: E402
from fairfuse.metrics import audit, similarity_matrix  # noqa: E402
from fairfuse.model import Candidate, Dataset, Ranking  # noqa: E402
from fairfuse.ingestion import rankings_from_scores, load_scores  # noqa: E402
from fairfuse.wordlist import name_for  # noqa: E402

FIXTURE_DIR = ROOT / "src" / "fairfuse" / "fixtures"

SCHOLARSHIP_SEED = 20240601
SCHOLARSHIP_GROUPS = {
    "group A": (6, 58.0),
    "group B": (11, 63.0),
    "group C": (19, 67.0),
    "group D": (15, 71.0),
    "group E": (9, 76.0),
}
SUBJECTS = ("math", "reading", "writing")
SUBJECT_SHIFT = {"math": 0.0, "reading": 2.0, "writing": 1.0}
SCORE_SD = 9.0


def build_scholarship() -> Dataset:
    rng = random.Random(SCHOLARSHIP_SEED)
    labels: list[str] = []
    for label, (size, _) in SCHOLARSHIP_GROUPS.items():
        labels.extend([label] * size)
    rng.shuffle(labels)

    candidates = []
    for i, label in enumerate(labels):
        mean = SCHOLARSHIP_GROUPS[label][1]
        attrs: dict[str, object] = {"race": label}
        for subject in SUBJECTS:
            raw = rng.gauss(mean + SUBJECT_SHIFT[subject], SCORE_SD)
            attrs[subject] = max(0, min(100, round(raw)))
        candidates.append(Candidate(
            id=f"s{i + 1:02d}",
            name=name_for(i),
            protected_value=label,
            attributes=attrs,
        ))
    return Dataset(candidates=tuple(candidates), protected_attribute="race")


def write_scholarship() -> None:
    dataset = build_scholarship()
    write_dataset_csv(dataset, FIXTURE_DIR / "scholarship_candidates.csv")

    lines = ["id," + ",".join(SUBJECTS)]
    for cand in dataset.candidates:
        lines.append(cand.id + "," + ",".join(str(cand.attributes[s]) for s in SUBJECTS))
    (FIXTURE_DIR / "scholarship_scores.csv").write_text("\n".join(lines) + "\n",
                                                        encoding="utf-8")

    # bias must actually be visible or the walkthrough scenarios are hollow
    bases = rankings_from_scores(load_scores(FIXTURE_DIR / "scholarship_scores.csv"))
    for ranking in bases:
        report = audit(dataset, ranking)
        assert report.arp >= 0.15, (ranking.id, report.arp)
        assert report.per_group["group E"].fpr > 0.5, ranking.id
        assert report.per_group["group A"].fpr < 0.5, ranking.id
    print(f"scholarship: n={dataset.n}, groups="
          f"{ {g: grp.size for g, grp in dataset.groups.items()} }")
    for ranking in bases:
        report = audit(dataset, ranking)
        print(f"  {ranking.id}: arp={report.arp:.4f}")


EMPLOYEE_ROLES = {
    "e01": "Human Resources",
    "e02": "Engineer", "e03": "Engineer", "e04": "Engineer",
    "e05": "Engineer", "e06": "Engineer", "e07": "Engineer",
    "e08": "Analyst", "e09": "Analyst", "e10": "Analyst",
    "e11": "Analyst", "e12": "Analyst", "e13": "Analyst",
    "e14": "Research Director", "e15": "Research Director", "e16": "Research Director",
}
EMPLOYEE_TENURE = {
    "e01": 12, "e02": 4, "e03": 7, "e04": 2, "e05": 9, "e06": 5, "e07": 3,
    "e08": 6, "e09": 8, "e10": 1, "e11": 10, "e12": 4, "e13": 2,
    "e14": 15, "e15": 18, "e16": 11,
}
EMPLOYEE_RATING = {
    "e01": 4.6, "e02": 4.1, "e03": 3.8, "e04": 4.4, "e05": 3.5, "e06": 4.0,
    "e07": 3.9, "e08": 4.2, "e09": 3.7, "e10": 4.3, "e11": 3.6, "e12": 4.5,
    "e13": 3.4, "e14": 3.9, "e15": 4.0, "e16": 3.8,
}
EMPLOYEE_RANKINGS = {
    "R1": ["e01", "e02", "e08", "e03", "e09", "e04", "e10", "e05",
           "e11", "e06", "e12", "e07", "e13", "e14", "e15", "e16"],
    "R2": ["e01", "e08", "e02", "e09", "e03", "e10", "e04", "e11",
           "e05", "e12", "e15", "e06", "e13", "e07", "e14", "e16"],
    "R3": ["e02", "e01", "e08", "e03", "e10", "e09", "e04", "e05",
           "e11", "e12", "e06", "e07", "e13", "e16", "e14", "e15"],
}


def build_employee() -> Dataset:
    candidates = []
    for i, (cid, role) in enumerate(EMPLOYEE_ROLES.items()):
        candidates.append(Candidate(
            id=cid,
            name=name_for(60 + i),
            protected_value=role,
            attributes={
                "role": role,
                "tenure": EMPLOYEE_TENURE[cid],
                "rating": EMPLOYEE_RATING[cid],
            },
        ))
    return Dataset(candidates=tuple(candidates), protected_attribute="role")


def write_employee() -> None:
    dataset = build_employee()
    write_dataset_csv(dataset, FIXTURE_DIR / "employee_candidates.csv")
    rankings = [
        Ranking(id=f"base:{label}", label=label, order=tuple(order), kind="base")
        for label, order in EMPLOYEE_RANKINGS.items()
    ]
    write_rankings_csv(rankings, FIXTURE_DIR / "employee_rankings.csv")

    for ranking in rankings:
        dataset.validate_ranking(ranking.order)
        report = audit(dataset, ranking)
        assert report.per_group["Human Resources"].fpr > 0.5, ranking.id
        assert report.per_group["Research Director"].fpr < 0.5, ranking.id
    matrix = similarity_matrix(rankings)
    print(f"employee: n={dataset.n}, groups="
          f"{ {g: grp.size for g, grp in dataset.groups.items()} }")
    for ranking in rankings:
        report = audit(dataset, ranking)
        hr = report.per_group["Human Resources"].fpr
        rd = report.per_group["Research Director"].fpr
        print(f"  {ranking.id}: arp={report.arp:.4f} hr={hr:.4f} rd={rd:.4f}")
    print(f"  similarity: {[f'{v:.3f}' for v in matrix.similarity[0]]}")


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    write_scholarship()
    write_employee()


if __name__ == "__main__":
    main()
