from __future__ import annotations

import random
from typing import Sequence

import pytest

from fairfuse.fixtures import fixture_path
from fairfuse.ingestion import load_dataset, load_rankings, load_scores, rankings_from_scores
from fairfuse.model import Candidate, Dataset, Ranking

# acceptance tests append their verdict lines here; the terminal-summary
# hook replays them after the run so capture does not swallow them
CRITERION_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter) -> None:
    if not CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in CRITERION_LINES:
        terminalreporter.write_line(line)


def make_dataset(assignment: Sequence[str], ids: Sequence[str] | None = None) -> Dataset:
    """Dataset with one candidate per label in ``assignment`` (id order)."""
    if ids is None:
        ids = [f"c{i:02d}" for i in range(len(assignment))]
    candidates = tuple(
        Candidate(id=cid, name=cid, protected_value=label, attributes={"grp": label})
        for cid, label in zip(ids, assignment)
    )
    return Dataset(candidates=candidates, protected_attribute="grp")


def make_ranking(order: Sequence[str], rid: str = "base:r", label: str = "r",
                 kind: str = "base") -> Ranking:
    return Ranking(id=rid, label=label, order=tuple(order), kind=kind)


def pattern_instance(pattern: str) -> tuple[Dataset, Ranking]:
    """Instance from a label pattern: "ABBA" -> ranking [a1, b1, b2, a2].

    Candidate ids are the group letter (lowercase) plus a per-group counter,
    dataset candidates sorted by id, ranking order following the pattern.
    """
    counters: dict[str, int] = {}
    order = []
    for ch in pattern:
        counters[ch] = counters.get(ch, 0) + 1
        order.append(f"{ch.lower()}{counters[ch]}")
    assignment = {cid: cid[0].upper() for cid in order}
    ids = sorted(order)
    dataset = make_dataset([assignment[cid] for cid in ids], ids=ids)
    return dataset, make_ranking(order)


def random_instance(rng: random.Random, n: int, m: int,
                    group_count: int) -> tuple[Dataset, list[Ranking]]:
    """Random dataset (every group non-empty) plus m shuffled base rankings."""
    labels = [chr(ord("A") + i) for i in range(group_count)]
    assignment = labels + [rng.choice(labels) for _ in range(n - group_count)]
    rng.shuffle(assignment)
    dataset = make_dataset(assignment)
    ids = list(dataset.ids())
    bases = []
    for j in range(m):
        order = ids[:]
        rng.shuffle(order)
        bases.append(make_ranking(order, rid=f"base:r{j + 1}", label=f"r{j + 1}"))
    return dataset, bases


@pytest.fixture(scope="session")
def employee_dataset() -> Dataset:
    return load_dataset(fixture_path("employee_candidates.csv"), "role")


@pytest.fixture(scope="session")
def employee_bases() -> list[Ranking]:
    return load_rankings(fixture_path("employee_rankings.csv"))


@pytest.fixture(scope="session")
def scholarship_dataset() -> Dataset:
    return load_dataset(fixture_path("scholarship_candidates.csv"), "race")


@pytest.fixture(scope="session")
def scholarship_bases() -> list[Ranking]:
    return rankings_from_scores(load_scores(fixture_path("scholarship_scores.csv")))
