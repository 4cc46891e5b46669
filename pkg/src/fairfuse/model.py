"""Core data model: candidates, groups, datasets, and rankings.

All values are immutable once constructed, so they can be shared freely
between threads and cached without defensive copies. A :class:`Dataset`
derives its group structure from the protected attribute at construction
time and validates the partition invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import CandidateSetMismatch, InvalidDataset

AttributeValue = str | float

RANKING_KINDS = ("base", "consensus", "edited")


@dataclass(frozen=True)
class Candidate:
    """One entity to be ranked.

    ``protected_value`` duplicates ``attributes[protected_attribute]`` for
    convenient access; :class:`Dataset` checks the two never disagree.
    """

    id: str
    name: str
    protected_value: str
    attributes: Mapping[str, AttributeValue] = field(default_factory=dict)


@dataclass(frozen=True)
class Group:
    """All candidates sharing one value of the protected attribute."""

    label: str
    member_ids: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.member_ids)


@dataclass(frozen=True)
class Dataset:
    """The candidate set plus its protected-attribute group structure.

    Groups are derived, not supplied: every distinct protected value becomes
    one group, member order follows candidate order, and the group map is
    keyed by label in lexicographic order so downstream reports are
    deterministic.
    """

    candidates: tuple[Candidate, ...]
    protected_attribute: str
    groups: Mapping[str, Group] = field(init=False, repr=False, compare=False)
    _label_of: Mapping[str, str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.candidates) < 2:
            raise InvalidDataset(
                f"a dataset needs at least 2 candidates, got {len(self.candidates)}",
                n=len(self.candidates),
            )
        seen: set[str] = set()
        members: dict[str, list[str]] = {}
        label_of: dict[str, str] = {}
        for cand in self.candidates:
            if cand.id in seen:
                raise InvalidDataset(f"duplicate candidate id {cand.id!r}", id=cand.id)
            seen.add(cand.id)
            declared = cand.attributes.get(self.protected_attribute)
            if declared is None:
                raise InvalidDataset(
                    f"candidate {cand.id!r} lacks protected attribute "
                    f"{self.protected_attribute!r}",
                    id=cand.id,
                    attribute=self.protected_attribute,
                )
            if str(declared) != cand.protected_value:
                raise InvalidDataset(
                    f"candidate {cand.id!r}: protected_value {cand.protected_value!r} "
                    f"disagrees with attributes[{self.protected_attribute!r}] = {declared!r}",
                    id=cand.id,
                )
            members.setdefault(cand.protected_value, []).append(cand.id)
            label_of[cand.id] = cand.protected_value
        groups = {
            label: Group(label=label, member_ids=tuple(members[label]))
            for label in sorted(members)
        }
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "_label_of", label_of)

    @property
    def n(self) -> int:
        return len(self.candidates)

    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.candidates)

    def candidate(self, candidate_id: str) -> Candidate:
        for cand in self.candidates:
            if cand.id == candidate_id:
                return cand
        raise KeyError(candidate_id)

    def group_label_of(self, candidate_id: str) -> str:
        return self._label_of[candidate_id]

    def validate_ranking(self, ranking: "Ranking | Sequence[str]") -> None:
        """Raise :class:`CandidateSetMismatch` unless the order permutes this dataset.

        Accepts either a :class:`Ranking` or a bare id sequence.
        """
        if isinstance(ranking, Ranking):
            rid, order = ranking.id, ranking.order
        else:
            rid, order = None, tuple(ranking)
        if set(order) != set(self._label_of) or len(order) != self.n:
            raise CandidateSetMismatch(
                f"ranking {rid!r} is not a permutation of the dataset "
                f"({len(order)} entries vs {self.n} candidates)",
                ranking_id=rid,
            )


@dataclass(frozen=True)
class Ranking:
    """A complete ordering of candidate ids, position 1 = most favorable."""

    id: str
    label: str
    order: tuple[str, ...]
    kind: str = "base"

    def __post_init__(self):
        if self.kind not in RANKING_KINDS:
            raise ValueError(f"unknown ranking kind {self.kind!r}")
        if len(set(self.order)) != len(self.order):
            raise ValueError(f"ranking {self.id!r} contains duplicate candidate ids")

    @property
    def n(self) -> int:
        return len(self.order)

    def positions(self) -> dict[str, int]:
        """Candidate id -> 1-based rank position."""
        return {cid: i + 1 for i, cid in enumerate(self.order)}


def ensure_same_candidates(r1: Ranking, r2: Ranking) -> None:
    """Raise :class:`CandidateSetMismatch` unless both rankings cover the same ids."""
    if set(r1.order) != set(r2.order):
        raise CandidateSetMismatch(
            f"rankings {r1.id!r} and {r2.id!r} rank different candidate sets",
            left=r1.id,
            right=r2.id,
        )
