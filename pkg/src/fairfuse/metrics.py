"""Pairwise ranking metrics: Kendall-Tau distance, group favoritism, parity.

The favoritism metrics decompose a ranking into candidate pairs. A pair is
*mixed* when its two candidates belong to different groups; the fraction of
its mixed pairs a group wins (its members placed first) is the group's
favored-pair rate. 0.5 means even-handed treatment, 0 a group stuck at the
bottom, 1 a group monopolizing the top. The parity score of a whole ranking
is the largest absolute gap between any two groups' rates: 0 is statistical
parity, 1 is one group entirely above another.

Everything here is a pure function of immutable inputs. Rates are computed
in exact rational arithmetic (integer win counts over integer pair counts)
and only converted to floats at the boundary, so equality comparisons and
threshold checks never depend on float rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import NoMixedPairs, SingleGroup
from .model import Dataset, Group, Ranking, ensure_same_candidates

# Above this size, pair counting loses to merge-sort inversion counting.
_PAIR_COUNT_MAX_N = 64

DEFAULT_HISTOGRAM_BINS = 10


@dataclass(frozen=True)
class GroupRate:
    """Favored-pair rate of one group in one ranking."""

    fpr: float
    wins: int
    mixed_pair_count: int

    @property
    def exact(self) -> Fraction:
        return Fraction(self.wins, self.mixed_pair_count)


@dataclass(frozen=True)
class GroupAudit:
    """Per-group slice of a fairness report."""

    fpr: float
    wins: int
    mixed_pair_count: int
    positions: tuple[int, ...]
    histogram: tuple[int, ...]

    @property
    def exact(self) -> Fraction:
        return Fraction(self.wins, self.mixed_pair_count)


@dataclass(frozen=True)
class FairnessReport:
    """Full fairness audit of one ranking.

    ``extreme_groups`` is the (highest-rate, lowest-rate) label pair, ties
    broken by lexicographically smallest label; ``arp`` is exactly the rate
    gap between those two groups.
    """

    ranking_id: str
    per_group: Mapping[str, GroupAudit]
    arp: float
    arp_exact: Fraction
    extreme_groups: tuple[str, str]


@dataclass(frozen=True)
class SimilarityMatrix:
    """Pairwise Kendall-Tau distances plus the normalized similarity."""

    ranking_ids: tuple[str, ...]
    kt: tuple[tuple[int, ...], ...]
    similarity: tuple[tuple[float, ...], ...]


def _rank_sequence(r1: Ranking, r2: Ranking) -> list[int]:
    """Positions of r1's candidates within r2; inversions = discordant pairs."""
    pos2 = {cid: i for i, cid in enumerate(r2.order)}
    return [pos2[cid] for cid in r1.order]


def kendall_tau_pair_count(r1: Ranking, r2: Ranking) -> int:
    """Kendall-Tau distance by explicit enumeration of all candidate pairs."""
    ensure_same_candidates(r1, r2)
    seq = _rank_sequence(r1, r2)
    n = len(seq)
    return sum(1 for i in range(n) for j in range(i + 1, n) if seq[i] > seq[j])


def kendall_tau_inversion_count(r1: Ranking, r2: Ranking) -> int:
    """Kendall-Tau distance by merge-sort inversion counting, O(n log n)."""
    ensure_same_candidates(r1, r2)
    seq = _rank_sequence(r1, r2)
    return _count_inversions(seq)


def _count_inversions(seq: Sequence[int]) -> int:
    if len(seq) < 2:
        return 0
    work = list(seq)
    buf = [0] * len(work)
    total = 0
    width = 1
    n = len(work)
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if work[i] <= work[j]:
                    buf[k] = work[i]
                    i += 1
                else:
                    buf[k] = work[j]
                    j += 1
                    total += mid - i
                k += 1
            buf[k:hi] = work[i:mid] if i < mid else work[j:hi]
            work[lo:hi] = buf[lo:hi]
        width *= 2
    return total


def kendall_tau(r1: Ranking, r2: Ranking) -> int:
    """Number of candidate pairs the two rankings order oppositely.

    Dispatches to pair counting for small inputs and inversion counting for
    large ones; the two implementations are interchangeable and tested to
    agree exactly.
    """
    if r1.n <= _PAIR_COUNT_MAX_N:
        return kendall_tau_pair_count(r1, r2)
    return kendall_tau_inversion_count(r1, r2)


def max_kendall_tau(n: int) -> int:
    """Distance between a ranking and its reversal: n(n-1)/2."""
    return n * (n - 1) // 2


def similarity(r1: Ranking, r2: Ranking) -> float:
    """Normalized agreement in [0, 1]; 1 means identical, 0 means reversed."""
    return 1.0 - kendall_tau(r1, r2) / max_kendall_tau(r1.n)


def wins_by_label(order: Sequence[str], label_of: Mapping[str, str],
                  group_sizes: Mapping[str, int]) -> dict[str, int]:
    """Mixed pairs won per group, in one top-to-bottom pass over ``order``.

    A group wins a mixed pair when its member occupies the better position.
    For the member at 0-based position ``i`` the number of non-members below
    is ``(n - i - 1) - (members of its group still below)``.
    """
    n = len(order)
    seen = {label: 0 for label in group_sizes}
    wins = {label: 0 for label in group_sizes}
    for i, cid in enumerate(order):
        label = label_of[cid]
        seen[label] += 1
        below = n - i - 1
        same_below = group_sizes[label] - seen[label]
        wins[label] += below - same_below
    return wins


def fpr(group: Group, ranking: Ranking) -> GroupRate:
    """Favored-pair rate of ``group`` within ``ranking``.

    Raises:
        NoMixedPairs: if the group is empty or covers every ranked candidate.
        UnknownCandidate-like KeyError never occurs; membership is checked
            against the ranking directly.
    """
    n = ranking.n
    members = set(group.member_ids)
    g = len(members & set(ranking.order))
    if g != group.size or g == 0 or g == n:
        if g != group.size:
            raise NoMixedPairs(
                f"group {group.label!r} has members missing from ranking {ranking.id!r}",
                group=group.label,
            )
        raise NoMixedPairs(
            f"group {group.label!r} admits no mixed pairs in a ranking of {n}",
            group=group.label,
            size=g,
            n=n,
        )
    wins = 0
    members_seen = 0
    for i, cid in enumerate(ranking.order):
        if cid in members:
            members_seen += 1
            wins += (n - i - 1) - (g - members_seen)
    mixed = g * (n - g)
    return GroupRate(fpr=wins / mixed, wins=wins, mixed_pair_count=mixed)


def _group_rates(dataset: Dataset, ranking: Ranking) -> dict[str, GroupRate]:
    dataset.validate_ranking(ranking)
    sizes = {label: grp.size for label, grp in dataset.groups.items()}
    wins = wins_by_label(ranking.order, dataset._label_of, sizes)
    rates = {}
    for label in dataset.groups:
        g = sizes[label]
        mixed = g * (dataset.n - g)
        if mixed == 0:
            raise NoMixedPairs(
                f"group {label!r} admits no mixed pairs", group=label, size=g, n=dataset.n
            )
        rates[label] = GroupRate(fpr=wins[label] / mixed, wins=wins[label],
                                 mixed_pair_count=mixed)
    return rates


def _extremes(rates: Mapping[str, GroupRate]) -> tuple[str, str, Fraction]:
    """(argmax label, argmin label, exact gap); ties to the smallest label."""
    exact = {label: rate.exact for label, rate in rates.items()}
    hi_rate = max(exact.values())
    lo_rate = min(exact.values())
    hi = min(label for label, value in exact.items() if value == hi_rate)
    lo = min(label for label, value in exact.items() if value == lo_rate)
    return hi, lo, hi_rate - lo_rate


def arp(dataset: Dataset, ranking: Ranking) -> float:
    """Largest absolute favored-pair-rate gap between any two groups."""
    return float(arp_exact(dataset, ranking))


def arp_exact(dataset: Dataset, ranking: Ranking) -> Fraction:
    """Exact-rational variant of :func:`arp`."""
    if len(dataset.groups) < 2:
        raise SingleGroup(
            "parity is undefined for a single group",
            groups=list(dataset.groups),
        )
    _, _, gap = _extremes(_group_rates(dataset, ranking))
    return gap


def position_histogram(positions: Iterable[int], n: int, bins: int) -> tuple[int, ...]:
    """Bin 1-based rank positions into ``bins`` equal-width bins.

    Bin width is ``n // bins`` (at least 1); the last bin absorbs any
    remainder so every position lands somewhere.
    """
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    width = max(1, n // bins)
    counts = [0] * bins
    for pos in positions:
        counts[min((pos - 1) // width, bins - 1)] += 1
    return tuple(counts)


def audit(dataset: Dataset, ranking: Ranking,
          bins: int = DEFAULT_HISTOGRAM_BINS) -> FairnessReport:
    """Full fairness audit: per-group rates, position histograms, parity.

    Raises:
        SingleGroup: when the dataset has fewer than two groups.
        CandidateSetMismatch: when the ranking does not permute the dataset.
    """
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    if len(dataset.groups) < 2:
        raise SingleGroup(
            "parity is undefined for a single group",
            groups=list(dataset.groups),
        )
    rates = _group_rates(dataset, ranking)
    pos_of = ranking.positions()
    per_group = {}
    for label, grp in dataset.groups.items():
        positions = tuple(sorted(pos_of[cid] for cid in grp.member_ids))
        per_group[label] = GroupAudit(
            fpr=rates[label].fpr,
            wins=rates[label].wins,
            mixed_pair_count=rates[label].mixed_pair_count,
            positions=positions,
            histogram=position_histogram(positions, dataset.n, bins),
        )
    hi, lo, gap = _extremes(rates)
    return FairnessReport(
        ranking_id=ranking.id,
        per_group=per_group,
        arp=float(gap),
        arp_exact=gap,
        extreme_groups=(hi, lo),
    )


def similarity_matrix(rankings: Sequence[Ranking]) -> SimilarityMatrix:
    """Symmetric Kendall-Tau and similarity matrices over ``rankings``.

    Row/column order follows the input order. Needs at least two rankings
    over a common candidate set.
    """
    if len(rankings) < 2:
        raise ValueError(f"need at least 2 rankings, got {len(rankings)}")
    k = len(rankings)
    n = rankings[0].n
    kt = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            d = kendall_tau(rankings[i], rankings[j])
            kt[i][j] = kt[j][i] = d
    denom = max_kendall_tau(n)
    sim = tuple(
        tuple(1.0 - kt[i][j] / denom for j in range(k)) for i in range(k)
    )
    return SimilarityMatrix(
        ranking_ids=tuple(r.id for r in rankings),
        kt=tuple(tuple(row) for row in kt),
        similarity=sim,
    )
