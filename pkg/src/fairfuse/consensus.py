"""Consensus generation: Copeland aggregation plus a parity repair loop.

The unconstrained path scores each candidate by its pairwise majority wins
across the base rankings (ties worth half a point) and sorts by score. The
fairness-constrained path starts from that ordering and repairs it with
deterministic adjacent swaps until the parity gap drops to the requested
bound: each step demotes a member of the currently most-favored group below
a neighbor from the least-favored group (falling back to any non-member),
always at the deepest eligible position so the top of the ranking is
disturbed last. Swaps only ever cross groups, so the relative order within
every group is preserved verbatim from the Copeland ordering.

The repair loop is a heuristic, not an exact optimizer; exhaustive oracles
(:func:`brute_force_kemeny`, :func:`brute_force_fair_kemeny`) are provided
so its cost gap and feasibility calls can be measured on small instances
instead of trusted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    EmptyRankingSet,
    PositionOutOfRange,
    SingleGroup,
    ThresholdOutOfRange,
    TooLarge,
    UnknownCandidate,
)
from .metrics import kendall_tau, wins_by_label
from .model import Dataset, Ranking, ensure_same_candidates

DEFAULT_ORACLE_MAX_N = 10

# Permutations are evaluated in vectorized blocks of this many rows.
_ORACLE_BLOCK = 200_000


@dataclass(frozen=True)
class PreferenceMatrix:
    """Pairwise preference counts across the base rankings.

    ``counts[i][j]`` is the number of base rankings placing candidate
    ``candidate_ids[i]`` above ``candidate_ids[j]``; ids are sorted
    ascending so the matrix is deterministic.
    """

    candidate_ids: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]
    m: int


def _exact_bound(delta: float | Fraction) -> Fraction:
    """Exact form of a caller-supplied gap bound (floats read as decimals)."""
    if isinstance(delta, Fraction):
        return delta
    return Fraction(repr(float(delta)))


def exact_delta(t: float) -> Fraction:
    """Maximum permitted parity gap for threshold ``t``, as an exact rational.

    ``t`` arrives as a decimal (JSON number or CLI flag), so the intended
    value is the decimal itself, not the nearest binary float: ``repr``
    recovers that decimal, making ``1 - 0.8`` exactly ``1/5`` rather than
    a hair below it. Gap values are rationals too, so feasibility at the
    boundary never flickers.
    """
    return Fraction(1) - Fraction(repr(float(t)))


@dataclass(frozen=True)
class GenerationRequest:
    """Fairness threshold for one consensus generation.

    ``t`` in [0, 1]; the generated ranking must keep its parity gap at or
    below ``delta = 1 - t``. ``t = 0`` imposes nothing, ``t = 1`` demands
    perfect parity.
    """

    t: float

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise ThresholdOutOfRange(f"threshold must be in [0, 1], got {self.t}", t=self.t)

    @property
    def delta(self) -> float:
        return 1.0 - self.t

    @property
    def delta_exact(self) -> Fraction:
        return exact_delta(self.t)


@dataclass(frozen=True)
class SwapStep:
    """One repair swap: at 1-based ``position``, ``id_up`` rose and ``id_down`` fell."""

    position: int
    id_up: str
    id_down: str


@dataclass(frozen=True)
class ConsensusResult:
    """A generated consensus ranking plus everything needed to audit it."""

    ranking: Ranking
    achieved_arp: float | None
    achieved_arp_exact: Fraction | None
    feasible: bool
    threshold_used: float
    copeland_scores: Mapping[str, float]
    swap_trace: tuple[SwapStep, ...]
    total_kt_cost: int


@dataclass(frozen=True)
class KemenyResult:
    """Exhaustive minimum-distance consensus."""

    ranking: Ranking
    cost: int


@dataclass(frozen=True)
class FairKemenyResult:
    """Exhaustive minimum-distance consensus under a parity bound.

    When no permutation satisfies the bound, ``ranking`` and ``cost`` are
    ``None`` and ``min_achievable_arp`` reports how close any permutation
    can get.
    """

    ranking: Ranking | None
    cost: int | None
    feasible: bool
    min_achievable_arp: float
    min_achievable_arp_exact: Fraction


def _validate_base(base: Sequence[Ranking]) -> None:
    if not base:
        raise EmptyRankingSet("at least one base ranking is required")
    for other in base[1:]:
        ensure_same_candidates(base[0], other)


def preference_matrix(base: Sequence[Ranking]) -> PreferenceMatrix:
    """Count, for every ordered candidate pair, how many bases prefer it."""
    _validate_base(base)
    ids = tuple(sorted(base[0].order))
    idx = {cid: i for i, cid in enumerate(ids)}
    n = len(ids)
    counts = [[0] * n for _ in range(n)]
    for ranking in base:
        order = ranking.order
        for a in range(n):
            ia = idx[order[a]]
            row = counts[ia]
            for b in range(a + 1, n):
                row[idx[order[b]]] += 1
    return PreferenceMatrix(
        candidate_ids=ids,
        counts=tuple(tuple(row) for row in counts),
        m=len(base),
    )


def copeland_scores(pm: PreferenceMatrix) -> dict[str, float]:
    """Majority wins per candidate: 1 per pairwise win, 0.5 per tie."""
    n = len(pm.candidate_ids)
    scores = {cid: 0.0 for cid in pm.candidate_ids}
    for i in range(n):
        for j in range(i + 1, n):
            cij, cji = pm.counts[i][j], pm.counts[j][i]
            if cij > cji:
                scores[pm.candidate_ids[i]] += 1.0
            elif cji > cij:
                scores[pm.candidate_ids[j]] += 1.0
            else:
                scores[pm.candidate_ids[i]] += 0.5
                scores[pm.candidate_ids[j]] += 0.5
    return scores


def _copeland_order(base: Sequence[Ranking]) -> tuple[tuple[str, ...], dict[str, float]]:
    scores = copeland_scores(preference_matrix(base))
    order = tuple(sorted(scores, key=lambda cid: (-scores[cid], cid)))
    return order, scores


def _total_kt_cost(order: tuple[str, ...], base: Sequence[Ranking]) -> int:
    probe = Ranking(id="_cost", label="_cost", order=order, kind="consensus")
    return sum(kendall_tau(probe, b) for b in base)


def _rate_fractions(order: Sequence[str], dataset: Dataset) -> dict[str, Fraction]:
    sizes = {label: grp.size for label, grp in dataset.groups.items()}
    wins = wins_by_label(order, dataset._label_of, sizes)
    n = len(order)
    return {
        label: Fraction(wins[label], sizes[label] * (n - sizes[label]))
        for label in dataset.groups
    }


def _gap_and_extremes(rates: Mapping[str, Fraction]) -> tuple[Fraction, str, str]:
    hi_rate = max(rates.values())
    lo_rate = min(rates.values())
    hi = min(label for label, value in rates.items() if value == hi_rate)
    lo = min(label for label, value in rates.items() if value == lo_rate)
    return hi_rate - lo_rate, hi, lo


def _find_repair_swap(order: Sequence[str], label_of: Mapping[str, str],
                      hi_label: str, lo_label: str) -> int | None:
    """Deepest adjacent index k whose occupant is in the most-favored group
    and whose successor is in the least-favored group; falls back to any
    non-member successor; ``None`` when no cross-group swap exists."""
    relaxed = None
    for k in range(len(order) - 2, -1, -1):
        if label_of[order[k]] != hi_label:
            continue
        succ = label_of[order[k + 1]]
        if succ == lo_label:
            return k
        if succ != hi_label and relaxed is None:
            relaxed = k
    return relaxed


def copeland_ranking(base: Sequence[Ranking], dataset: Dataset | None = None, *,
                     ranking_id: str = "consensus", label: str = "copeland") -> ConsensusResult:
    """Unconstrained consensus: Copeland score descending, ties by id.

    Equivalent to :func:`fair_copeland` at threshold 0. When ``dataset`` is
    given (and has two or more groups) the result carries its audited parity
    gap; otherwise ``achieved_arp`` is ``None``.
    """
    order, scores = _copeland_order(base)
    ranking = Ranking(id=ranking_id, label=label, order=order, kind="consensus")
    achieved = None
    if dataset is not None and len(dataset.groups) >= 2:
        gap, _, _ = _gap_and_extremes(_rate_fractions(order, dataset))
        achieved = gap
    return ConsensusResult(
        ranking=ranking,
        achieved_arp=None if achieved is None else float(achieved),
        achieved_arp_exact=achieved,
        feasible=True,
        threshold_used=0.0,
        copeland_scores=scores,
        swap_trace=(),
        total_kt_cost=_total_kt_cost(order, base),
    )


def fair_copeland(base: Sequence[Ranking], dataset: Dataset, req: GenerationRequest, *,
                  ranking_id: str | None = None,
                  label: str | None = None) -> ConsensusResult:
    """Consensus under a parity bound, by swap repair of the Copeland order.

    Deterministic: identical inputs yield identical results including the
    swap trace. If the repair loop cannot reach the bound (no eligible swap
    remains, the trajectory revisits an order it already tried, or the hard
    cap of n**3 swaps is hit), the earliest state with the lowest parity gap
    seen along the way is returned with ``feasible=False``, and the trace is
    the prefix of swaps leading to exactly that state.

    Raises:
        SingleGroup: fewer than two groups in the dataset.
        EmptyRankingSet: no base rankings.
        CandidateSetMismatch: bases and dataset disagree on candidates.
    """
    _validate_base(base)
    if len(dataset.groups) < 2:
        raise SingleGroup("parity-constrained generation needs at least two groups",
                          groups=list(dataset.groups))
    dataset.validate_ranking(base[0])

    start_order, scores = _copeland_order(base)
    delta = req.delta_exact
    label_of = dataset._label_of

    order = list(start_order)
    n = dataset.n
    sizes = {lbl: grp.size for lbl, grp in dataset.groups.items()}
    dens = {lbl: size * (n - size) for lbl, size in sizes.items()}
    wins = wins_by_label(order, label_of, sizes)

    def current_rates() -> dict[str, Fraction]:
        return {lbl: Fraction(wins[lbl], dens[lbl]) for lbl in dens}

    rates = current_rates()
    gap, hi, lo = _gap_and_extremes(rates)

    trace: list[SwapStep] = []
    best_gap, best_len, best_order = gap, 0, tuple(order)
    cap = n ** 3
    seen = {tuple(order)}

    while gap > delta and len(trace) < cap:
        k = _find_repair_swap(order, label_of, hi, lo)
        if k is None:
            break
        moving_down, moving_up = order[k], order[k + 1]
        order[k], order[k + 1] = moving_up, moving_down
        # an adjacent cross-group swap flips exactly one mixed pair
        down_group, up_group = label_of[moving_down], label_of[moving_up]
        if down_group != up_group:
            wins[down_group] -= 1
            wins[up_group] += 1
        trace.append(SwapStep(position=k + 1, id_up=moving_up, id_down=moving_down))
        rates = current_rates()
        gap, hi, lo = _gap_and_extremes(rates)
        if gap < best_gap:
            best_gap, best_len, best_order = gap, len(trace), tuple(order)
        state = tuple(order)
        if state in seen:
            # the next swap depends only on the current order, so a repeat
            # proves a cycle: no state better than best_order can follow
            break
        seen.add(state)

    if gap <= delta:
        feasible = True
        final_order, final_gap, final_trace = tuple(order), gap, tuple(trace)
    else:
        feasible = False
        final_order, final_gap, final_trace = best_order, best_gap, tuple(trace[:best_len])

    rid = ranking_id if ranking_id is not None else f"consensus:t={req.t:g}"
    rlabel = label if label is not None else f"consensus (t={req.t:g})"
    return ConsensusResult(
        ranking=Ranking(id=rid, label=rlabel, order=final_order, kind="consensus"),
        achieved_arp=float(final_gap),
        achieved_arp_exact=final_gap,
        feasible=feasible,
        threshold_used=req.t,
        copeland_scores=scores,
        swap_trace=final_trace,
        total_kt_cost=_total_kt_cost(final_order, base),
    )


def apply_edit(ranking: Ranking, candidate_id: str, new_position: int) -> Ranking:
    """Move one candidate to ``new_position`` (1-based), shifting the rest.

    All other relative orders are preserved. The result is marked
    ``kind="edited"``; callers are responsible for re-auditing it.
    """
    if candidate_id not in ranking.order:
        raise UnknownCandidate(f"candidate {candidate_id!r} not in ranking {ranking.id!r}",
                               candidate=candidate_id, ranking_id=ranking.id)
    if not 1 <= new_position <= ranking.n:
        raise PositionOutOfRange(
            f"position {new_position} outside 1..{ranking.n}",
            position=new_position, n=ranking.n,
        )
    order = [cid for cid in ranking.order if cid != candidate_id]
    order.insert(new_position - 1, candidate_id)
    return Ranking(id=ranking.id, label=ranking.label, order=tuple(order), kind="edited")


# --- exhaustive oracles ----------------------------------------------------


def _permutation_blocks(n: int, block_size: int = _ORACLE_BLOCK) -> Iterator[list[tuple[int, ...]]]:
    source = itertools.permutations(range(n))
    while True:
        block = list(itertools.islice(source, block_size))
        if not block:
            return
        yield block


def _check_oracle_size(n: int, max_n: int) -> None:
    if n > max_n:
        raise TooLarge(f"{n} candidates exceed the enumeration cap of {max_n}",
                       n=n, max_n=max_n)


def brute_force_kemeny(base: Sequence[Ranking], max_n: int = DEFAULT_ORACLE_MAX_N) -> KemenyResult:
    """Exact minimum total Kendall-Tau consensus by full enumeration.

    Permutations are generated in lexicographic id order and evaluated in
    vectorized blocks; the first permutation attaining the minimum wins, so
    ties resolve to the lexicographically smallest id sequence regardless of
    block size.
    """
    _validate_base(base)
    pm = preference_matrix(base)
    n = len(pm.candidate_ids)
    _check_oracle_size(n, max_n)
    # disagreements[i][j]: cost of placing candidate i above candidate j
    disagreements = np.array(pm.counts, dtype=np.int64).T
    best_cost: int | None = None
    best_perm: tuple[int, ...] | None = None
    for block in _permutation_blocks(n):
        perms = np.array(block, dtype=np.intp)
        costs = np.zeros(len(block), dtype=np.int64)
        for i in range(n):
            for j in range(i + 1, n):
                costs += disagreements[perms[:, i], perms[:, j]]
        local = int(np.argmin(costs))
        if best_cost is None or costs[local] < best_cost:
            best_cost = int(costs[local])
            best_perm = block[local]
    assert best_perm is not None
    order = tuple(pm.candidate_ids[i] for i in best_perm)
    ranking = Ranking(id="oracle:kemeny", label="kemeny", order=order, kind="consensus")
    return KemenyResult(ranking=ranking, cost=best_cost)


def _wins_from_label_seq(labels: Sequence[int], sizes: Sequence[int]) -> list[int]:
    n = len(labels)
    seen = [0] * len(sizes)
    wins = [0] * len(sizes)
    for i, v in enumerate(labels):
        seen[v] += 1
        wins[v] += (n - i - 1) - (sizes[v] - seen[v])
    return wins


def _arp_from_label_seq(labels: Sequence[int], sizes: Sequence[int]) -> Fraction:
    n = len(labels)
    wins = _wins_from_label_seq(labels, sizes)
    rates = [Fraction(w, s * (n - s)) for w, s in zip(wins, sizes)]
    return max(rates) - min(rates)


def oracle_profile(base: Sequence[Ranking], dataset: Dataset,
                   deltas: Sequence[float | Fraction],
                   max_n: int = DEFAULT_ORACLE_MAX_N,
                   ) -> tuple[Fraction, dict[Fraction, tuple[tuple[str, ...] | None, int | None]]]:
    """One exhaustive pass answering several parity-bounded minimum queries.

    Returns the minimum parity gap any permutation achieves, plus for each
    requested bound the minimum-cost order satisfying it (ties to the
    lexicographically smallest id sequence) or ``(None, None)`` when the
    bound is unreachable. The parity gap of a permutation depends only on
    its sequence of group labels, so gaps are memoized per label pattern.
    """
    _validate_base(base)
    if len(dataset.groups) < 2:
        raise SingleGroup("parity oracle needs at least two groups",
                          groups=list(dataset.groups))
    dataset.validate_ranking(base[0])
    pm = preference_matrix(base)
    ids = pm.candidate_ids
    n = len(ids)
    _check_oracle_size(n, max_n)

    group_labels = sorted(dataset.groups)
    label_index = {label: v for v, label in enumerate(group_labels)}
    sizes = [dataset.groups[label].size for label in group_labels]
    cand_label = [label_index[dataset.group_label_of(cid)] for cid in ids]
    disagreements = [[pm.counts[j][i] for j in range(n)] for i in range(n)]

    bounds = sorted({_exact_bound(d) for d in deltas})
    loosest = bounds[-1] if bounds else Fraction(0)
    best: dict[Fraction, tuple[int | None, tuple[int, ...] | None]] = {
        d: (None, None) for d in bounds
    }
    gap_memo: dict[tuple[int, ...], Fraction] = {}
    min_gap: Fraction | None = None

    for perm in itertools.permutations(range(n)):
        pattern = tuple(cand_label[i] for i in perm)
        gap = gap_memo.get(pattern)
        if gap is None:
            gap = _arp_from_label_seq(pattern, sizes)
            gap_memo[pattern] = gap
        if min_gap is None or gap < min_gap:
            min_gap = gap
        if gap > loosest:
            continue
        cost = 0
        for a in range(n):
            row = disagreements[perm[a]]
            for b in range(a + 1, n):
                cost += row[perm[b]]
        for d in bounds:
            if gap <= d:
                cur = best[d][0]
                if cur is None or cost < cur:
                    best[d] = (cost, perm)
    assert min_gap is not None
    resolved = {
        d: (None, None) if perm is None else (tuple(ids[i] for i in perm), cost)
        for d, (cost, perm) in best.items()
    }
    return min_gap, resolved


def brute_force_fair_kemeny(base: Sequence[Ranking], dataset: Dataset,
                            delta: float | Fraction,
                            max_n: int = DEFAULT_ORACLE_MAX_N) -> FairKemenyResult:
    """Exact minimum-cost consensus whose parity gap stays within ``delta``.

    Enumerates every permutation; reports the best achievable parity gap
    even when the bound is unreachable.
    """
    bound = _exact_bound(delta)
    min_gap, per_delta = oracle_profile(base, dataset, [bound], max_n=max_n)
    order, cost = per_delta[bound]
    if order is None:
        return FairKemenyResult(ranking=None, cost=None, feasible=False,
                                min_achievable_arp=float(min_gap),
                                min_achievable_arp_exact=min_gap)
    ranking = Ranking(id="oracle:fair-kemeny", label=f"fair-kemeny (delta={float(bound):g})",
                      order=order, kind="consensus")
    return FairKemenyResult(ranking=ranking, cost=cost, feasible=True,
                            min_achievable_arp=float(min_gap),
                            min_achievable_arp_exact=min_gap)


def _label_sequences(remaining: list[int]) -> Iterator[tuple[int, ...]]:
    """Distinct sequences over group indices with the given multiplicities."""
    n = sum(remaining)
    seq: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(seq) == n:
            yield tuple(seq)
            return
        for v in range(len(remaining)):
            if remaining[v]:
                remaining[v] -= 1
                seq.append(v)
                yield from rec()
                seq.pop()
                remaining[v] += 1

    return rec()


@lru_cache(maxsize=None)
def _min_arp_for_sizes(sizes: tuple[int, ...]) -> Fraction:
    best: Fraction | None = None
    for pattern in _label_sequences(list(sizes)):
        gap = _arp_from_label_seq(pattern, sizes)
        if best is None or gap < best:
            best = gap
            if best == 0:
                break
    assert best is not None
    return best


def min_achievable_arp(group_sizes: Sequence[int], max_n: int = 12) -> Fraction:
    """Smallest parity gap any ranking of these group sizes can achieve.

    Exhausts every distinct group-label pattern (the gap depends only on
    which group occupies each position, never on the individual member), so
    the search space is the multinomial coefficient rather than n!.
    Relabeling groups permutes the rates without changing the gap, so the
    result is cached per sorted size tuple.
    """
    sizes = tuple(sorted(int(s) for s in group_sizes))
    if len(sizes) < 2:
        raise SingleGroup("parity needs at least two groups", sizes=list(sizes))
    if any(s < 1 for s in sizes):
        raise ValueError(f"group sizes must be positive, got {sizes}")
    n = sum(sizes)
    _check_oracle_size(n, max_n)
    return _min_arp_for_sizes(sizes)
