"""CSV ingestion and synthetic-ranking generation.

Three file shapes are understood, all comma-separated UTF-8 with a header
row (quoting per RFC 4180):

* candidates: ``id,name,<attr>,...`` -- ``id`` mandatory, ``name`` optional
  (deterministic names are assigned by row order when absent), every other
  column becomes a candidate attribute. A column is numeric when every cell
  parses as a finite number; the protected column is always categorical.
* scores: ``id,<ranker>,...`` -- one numeric column per ranker, higher is
  better unless a column is converted with ``higher_is_better=False``.
* explicit rankings: ``position,<ranker>,...`` -- rows are rank positions
  1..n, cells are candidate ids.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    DuplicateId,
    EmptyFile,
    MalformedRow,
    MissingColumn,
    NonFiniteScore,
    UnknownColumn,
)
from .model import Candidate, Dataset, Ranking
from .wordlist import name_for


@dataclass(frozen=True)
class ScoreTable:
    """Per-ranker numeric scores aligned with ``candidate_ids``."""

    candidate_ids: tuple[str, ...]
    columns: dict[str, tuple[float, ...]]


def _read_rows(text: str, source: str) -> tuple[list[str], list[list[str]]]:
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise EmptyFile(f"{source}: no header row found", source=source)
    header, data = rows[0], rows[1:]
    if not data:
        raise EmptyFile(f"{source}: header but no data rows", source=source)
    for i, row in enumerate(data):
        if len(row) != len(header):
            raise MalformedRow(
                f"{source}: row {i + 2} has {len(row)} cells, header has {len(header)}",
                source=source, row=i + 2,
            )
    return header, data


def _parse_number(cell: str) -> float | None:
    try:
        value = float(cell)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def parse_dataset(text: str, protected: str, source: str = "<memory>") -> Dataset:
    """Build a :class:`Dataset` from candidates-CSV text."""
    header, data = _read_rows(text, source)
    if "id" not in header:
        raise MissingColumn(f"{source}: no 'id' column", source=source, column="id")
    if protected not in header:
        raise MissingColumn(f"{source}: no {protected!r} column for the protected attribute",
                            source=source, column=protected)
    id_col = header.index("id")
    name_col = header.index("name") if "name" in header else None
    attr_cols = [(i, col) for i, col in enumerate(header) if i != id_col and col != "name"]

    numeric = {}
    for i, col in attr_cols:
        if col == protected:
            numeric[col] = False
        else:
            numeric[col] = all(_parse_number(row[i]) is not None for row in data)

    candidates = []
    seen: set[str] = set()
    for rownum, row in enumerate(data):
        cid = row[id_col].strip()
        if not cid:
            raise MalformedRow(f"{source}: row {rownum + 2} has an empty id",
                               source=source, row=rownum + 2)
        if cid in seen:
            raise DuplicateId(f"{source}: candidate id {cid!r} appears twice",
                              source=source, id=cid, row=rownum + 2)
        seen.add(cid)
        attributes: dict[str, str | float] = {}
        for i, col in attr_cols:
            cell = row[i].strip()
            attributes[col] = _parse_number(cell) if numeric[col] else cell
        name = row[name_col].strip() if name_col is not None else name_for(rownum)
        candidates.append(Candidate(
            id=cid,
            name=name,
            protected_value=str(attributes[protected]),
            attributes=attributes,
        ))
    return Dataset(candidates=tuple(candidates), protected_attribute=protected)


def load_dataset(path: str | Path, protected: str) -> Dataset:
    path = Path(path)
    return parse_dataset(path.read_text(encoding="utf-8"), protected, source=str(path))


def serialize_dataset(dataset: Dataset) -> str:
    """Candidates-CSV text that parses back to an identical dataset."""
    attr_names = list(dataset.candidates[0].attributes)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["id", "name", *attr_names])
    for cand in dataset.candidates:
        cells = [cand.id, cand.name]
        for attr in attr_names:
            value = cand.attributes[attr]
            cells.append(repr(value) if isinstance(value, float) else value)
        writer.writerow(cells)
    return out.getvalue()


def write_dataset_csv(dataset: Dataset, path: str | Path) -> None:
    Path(path).write_text(serialize_dataset(dataset), encoding="utf-8")


def parse_scores(text: str, source: str = "<memory>") -> ScoreTable:
    """Build a :class:`ScoreTable` from scores-CSV text."""
    header, data = _read_rows(text, source)
    if "id" not in header:
        raise MissingColumn(f"{source}: no 'id' column", source=source, column="id")
    id_col = header.index("id")
    ranker_cols = [(i, col) for i, col in enumerate(header) if i != id_col]
    if not ranker_cols:
        raise MissingColumn(f"{source}: no score columns besides 'id'", source=source)

    ids = []
    seen: set[str] = set()
    columns: dict[str, list[float]] = {col: [] for _, col in ranker_cols}
    for rownum, row in enumerate(data):
        cid = row[id_col].strip()
        if cid in seen:
            raise DuplicateId(f"{source}: candidate id {cid!r} appears twice",
                              source=source, id=cid, row=rownum + 2)
        seen.add(cid)
        ids.append(cid)
        for i, col in ranker_cols:
            value = _parse_number(row[i].strip())
            if value is None:
                raise NonFiniteScore(
                    f"{source}: row {rownum + 2}, column {col!r}: "
                    f"{row[i]!r} is not a finite number",
                    source=source, row=rownum + 2, column=col,
                )
            columns[col].append(value)
    return ScoreTable(
        candidate_ids=tuple(ids),
        columns={col: tuple(vals) for col, vals in columns.items()},
    )


def load_scores(path: str | Path) -> ScoreTable:
    path = Path(path)
    return parse_scores(path.read_text(encoding="utf-8"), source=str(path))


def scores_to_ranking(table: ScoreTable, column: str, *,
                      higher_is_better: bool = True) -> Ranking:
    """Rank candidates by one score column; ties break by id ascending."""
    if column not in table.columns:
        raise UnknownColumn(f"no score column {column!r}", column=column,
                            available=sorted(table.columns))
    scores = table.columns[column]
    for cid, value in zip(table.candidate_ids, scores):
        if not math.isfinite(value):
            raise NonFiniteScore(f"column {column!r}: score for {cid!r} is not finite",
                                 column=column, id=cid)
    paired = sorted(
        zip(table.candidate_ids, scores),
        key=(lambda p: (-p[1], p[0])) if higher_is_better else (lambda p: (p[1], p[0])),
    )
    return Ranking(
        id=f"base:{column}",
        label=column,
        order=tuple(cid for cid, _ in paired),
        kind="base",
    )


def rankings_from_scores(table: ScoreTable) -> list[Ranking]:
    """One ranking per score column, in column order."""
    return [scores_to_ranking(table, column) for column in table.columns]


def parse_rankings(text: str, source: str = "<memory>") -> list[Ranking]:
    """Parse explicit-ranking CSV text into one ranking per column."""
    header, data = _read_rows(text, source)
    if "position" not in header:
        raise MissingColumn(f"{source}: no 'position' column", source=source,
                            column="position")
    pos_col = header.index("position")
    ranker_cols = [(i, col) for i, col in enumerate(header) if i != pos_col]
    if not ranker_cols:
        raise MissingColumn(f"{source}: no ranking columns besides 'position'",
                            source=source)
    try:
        data.sort(key=lambda row: int(row[pos_col]))
    except ValueError:
        raise MalformedRow(f"{source}: non-integer position cell", source=source) from None
    for rownum, row in enumerate(data):
        if int(row[pos_col]) != rownum + 1:
            raise MalformedRow(
                f"{source}: positions must run 1..n, found {row[pos_col]!r} "
                f"where {rownum + 1} was expected",
                source=source, row=rownum + 2,
            )
    rankings = []
    for i, col in ranker_cols:
        order = tuple(row[i].strip() for row in data)
        dupes = {cid for cid in order if order.count(cid) > 1}
        if dupes:
            raise DuplicateId(
                f"{source}: column {col!r} ranks {sorted(dupes)!r} more than once",
                source=source, column=col, ids=sorted(dupes),
            )
        rankings.append(Ranking(id=f"base:{col}", label=col, order=order, kind="base"))
    return rankings


def load_rankings(path: str | Path) -> list[Ranking]:
    path = Path(path)
    return parse_rankings(path.read_text(encoding="utf-8"), source=str(path))


def serialize_rankings(rankings: list[Ranking]) -> str:
    """Explicit-ranking CSV text for a list of equal-length rankings."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["position", *(r.label for r in rankings)])
    for pos in range(rankings[0].n):
        writer.writerow([pos + 1, *(r.order[pos] for r in rankings)])
    return out.getvalue()


def write_rankings_csv(rankings: list[Ranking], path: str | Path) -> None:
    Path(path).write_text(serialize_rankings(rankings), encoding="utf-8")


def synthesize_rankings(seed_ranking: Ranking, count: int, swaps: int,
                        seed: int) -> list[Ranking]:
    """Perturbed copies of ``seed_ranking`` for testing and demos.

    Each output applies ``swaps`` random adjacent transpositions to the seed
    order, so its Kendall-Tau distance from the seed is at most ``swaps``.
    The generator is ``random.Random(seed)`` (MT19937) drawing one
    ``randrange(n - 1)`` per transposition, outputs consuming the stream in
    sequence -- fixtures built from a given seed are reproducible anywhere.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if swaps < 0:
        raise ValueError(f"swaps must be >= 0, got {swaps}")
    rng = random.Random(seed)
    n = seed_ranking.n
    out = []
    for i in range(count):
        order = list(seed_ranking.order)
        if n >= 2:
            for _ in range(swaps):
                j = rng.randrange(n - 1)
                order[j], order[j + 1] = order[j + 1], order[j]
        out.append(Ranking(
            id=f"synth:{i + 1}",
            label=f"synth-{i + 1}",
            order=tuple(order),
            kind="base",
        ))
    return out
