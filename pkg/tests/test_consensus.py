from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairfuse.consensus import (
    GenerationRequest,
    apply_edit,
    brute_force_fair_kemeny,
    brute_force_kemeny,
    copeland_ranking,
    copeland_scores,
    exact_delta,
    fair_copeland,
    min_achievable_arp,
    preference_matrix,
)
from fairfuse.errors import (
    EmptyRankingSet,
    PositionOutOfRange,
    SingleGroup,
    ThresholdOutOfRange,
    TooLarge,
    UnknownCandidate,
)
from fairfuse.metrics import arp_exact, kendall_tau

from conftest import make_dataset, make_ranking, pattern_instance, random_instance
from oracles import oracle_arp, oracle_kemeny, oracle_min_arp


def _repeat_base(order, copies=3):
    return [make_ranking(order, rid=f"base:r{i + 1}", label=f"r{i + 1}")
            for i in range(copies)]


def _total_cost(order, base):
    probe = make_ranking(order, rid="probe")
    return sum(kendall_tau(probe, b) for b in base)


class TestPreferenceMatrix:
    def test_counts_above_occurrences(self):
        base = [
            make_ranking(["a", "b", "c"], rid="base:r1"),
            make_ranking(["b", "a", "c"], rid="base:r2"),
            make_ranking(["a", "c", "b"], rid="base:r3"),
        ]
        pm = preference_matrix(base)
        assert pm.candidate_ids == ("a", "b", "c")
        assert pm.m == 3
        idx = {cid: i for i, cid in enumerate(pm.candidate_ids)}
        assert pm.counts[idx["a"]][idx["b"]] == 2
        assert pm.counts[idx["b"]][idx["a"]] == 1
        assert pm.counts[idx["a"]][idx["c"]] == 3
        assert pm.counts[idx["c"]][idx["a"]] == 0
        assert pm.counts[idx["b"]][idx["c"]] == 2

    def test_diagonal_zero_and_complement(self):
        rng = random.Random(31)
        _, bases = random_instance(rng, 7, 4, 2)
        pm = preference_matrix(bases)
        n, m = len(pm.candidate_ids), pm.m
        for i in range(n):
            assert pm.counts[i][i] == 0
            for j in range(n):
                if i != j:
                    assert pm.counts[i][j] + pm.counts[j][i] == m

    def test_empty_base_rejected(self):
        with pytest.raises(EmptyRankingSet):
            preference_matrix([])


class TestCopeland:
    def test_majority_and_tie_scores(self):
        base = [
            make_ranking(["a", "b", "c"], rid="base:r1"),
            make_ranking(["b", "a", "c"], rid="base:r2"),
        ]
        scores = copeland_scores(preference_matrix(base))
        # a vs b splits 1-1, both beat c outright
        assert scores == {"a": 1.5, "b": 1.5, "c": 0.0}

    def test_unanimous_base(self):
        base = _repeat_base(["x", "y", "z"])
        result = copeland_ranking(base)
        assert result.ranking.order == ("x", "y", "z")
        assert result.copeland_scores == {"x": 2.0, "y": 1.0, "z": 0.0}
        assert result.total_kt_cost == 0
        assert result.feasible is True
        assert result.achieved_arp is None
        assert result.swap_trace == ()

    def test_score_ties_break_by_id_ascending(self):
        base = [
            make_ranking(["b", "a"], rid="base:r1"),
            make_ranking(["a", "b"], rid="base:r2"),
        ]
        result = copeland_ranking(base)
        assert result.copeland_scores == {"a": 0.5, "b": 0.5}
        assert result.ranking.order == ("a", "b")

    def test_dataset_attaches_parity_gap(self):
        dataset, ranking = pattern_instance("AABB")
        result = copeland_ranking(_repeat_base(ranking.order), dataset)
        assert result.achieved_arp == 1.0
        assert result.achieved_arp_exact == Fraction(1)

    def test_minimizes_cost_on_small_random_instances(self):
        # Copeland is not Kemeny in general, but its cost can never beat the
        # exhaustive optimum; check the ordering holds
        rng = random.Random(37)
        for _ in range(15):
            n = rng.randint(2, 6)
            _, bases = random_instance(rng, n, rng.randint(1, 4), 2)
            result = copeland_ranking(bases)
            _, best_cost = oracle_kemeny([b.order for b in bases])
            assert result.total_kt_cost >= best_cost


class TestExactDelta:
    def test_decimal_thresholds_are_exact(self):
        assert exact_delta(0.8) == Fraction(1, 5)
        assert exact_delta(0.75) == Fraction(1, 4)
        assert exact_delta(0.0) == 1
        assert exact_delta(1.0) == 0

    def test_gap_equal_to_bound_is_feasible(self):
        # rate gap 1/5 at t=0.8 must not flicker infeasible through floats
        dataset, _ = pattern_instance("ABABABABAB")
        best = min_achievable_arp([g.size for g in dataset.groups.values()])
        assert best <= exact_delta(0.8)


class TestFairCopeland:
    def test_hand_traced_repair(self):
        dataset, seed = pattern_instance("AABB")
        base = _repeat_base(seed.order)
        result = fair_copeland(base, dataset, GenerationRequest(t=0.75))
        assert result.ranking.order == ("a1", "b1", "b2", "a2")
        assert [(s.position, s.id_up, s.id_down) for s in result.swap_trace] == [
            (2, "b1", "a2"),
            (3, "b2", "a2"),
        ]
        assert result.feasible is True
        assert result.achieved_arp == 0.0
        assert result.ranking.kind == "consensus"

    def test_threshold_zero_is_plain_copeland(self):
        rng = random.Random(41)
        for _ in range(20):
            n = rng.randint(2, 8)
            dataset, bases = random_instance(rng, n, rng.randint(1, 4), 2)
            relaxed = fair_copeland(bases, dataset, GenerationRequest(t=0.0))
            plain = copeland_ranking(bases, dataset)
            assert relaxed.ranking.order == plain.ranking.order
            assert relaxed.swap_trace == ()
            assert relaxed.feasible is True

    def test_two_singletons_cannot_reach_half_gap(self):
        dataset, seed = pattern_instance("AB")
        result = fair_copeland(_repeat_base(seed.order), dataset,
                               GenerationRequest(t=0.5))
        assert result.feasible is False
        assert result.achieved_arp == 1.0

    def test_infeasible_keeps_best_prefix(self):
        dataset, seed = pattern_instance("AB")
        result = fair_copeland(_repeat_base(seed.order), dataset,
                               GenerationRequest(t=0.5))
        # every order of two singleton groups has gap 1, so no swap helps
        assert result.swap_trace == ()
        assert result.achieved_arp_exact == Fraction(1)

    def test_within_group_order_survives_repair(self):
        rng = random.Random(43)
        for _ in range(25):
            n = rng.randint(3, 10)
            groups = rng.randint(2, min(4, n))
            dataset, bases = random_instance(rng, n, rng.randint(1, 3), groups)
            result = fair_copeland(bases, dataset, GenerationRequest(t=1.0))
            start = fair_copeland(bases, dataset, GenerationRequest(t=0.0))
            for grp in dataset.groups.values():
                before = [c for c in start.ranking.order if c in grp.member_ids]
                after = [c for c in result.ranking.order if c in grp.member_ids]
                assert before == after

    def test_each_swap_moves_one_mixed_pair(self):
        # replay the trace; every step flips exactly one cross-group pair
        rng = random.Random(47)
        for _ in range(20):
            n = rng.randint(3, 9)
            groups = rng.randint(2, min(4, n))
            dataset, bases = random_instance(rng, n, rng.randint(1, 3), groups)
            result = fair_copeland(bases, dataset, GenerationRequest(t=1.0))
            order = list(fair_copeland(bases, dataset,
                                       GenerationRequest(t=0.0)).ranking.order)
            label_of = {cid: dataset.group_label_of(cid) for cid in dataset.ids()}
            prev_gap = oracle_arp(order, label_of)
            for step in result.swap_trace:
                k = step.position - 1
                assert order[k] == step.id_down and order[k + 1] == step.id_up
                assert label_of[step.id_down] != label_of[step.id_up]
                order[k], order[k + 1] = order[k + 1], order[k]
                prev_gap = oracle_arp(order, label_of)
            assert tuple(order) == result.ranking.order
            assert prev_gap == result.achieved_arp_exact

    def test_deterministic(self):
        rng = random.Random(53)
        dataset, bases = random_instance(rng, 9, 3, 3)
        first = fair_copeland(bases, dataset, GenerationRequest(t=0.9))
        second = fair_copeland(bases, dataset, GenerationRequest(t=0.9))
        assert first.ranking.order == second.ranking.order
        assert first.swap_trace == second.swap_trace
        assert first.achieved_arp_exact == second.achieved_arp_exact

    def test_achieved_gap_never_worse_than_start(self):
        rng = random.Random(59)
        for _ in range(30):
            n = rng.randint(3, 10)
            groups = rng.randint(2, min(4, n))
            dataset, bases = random_instance(rng, n, rng.randint(1, 3), groups)
            t = rng.choice([0.25, 0.5, 0.75, 1.0])
            result = fair_copeland(bases, dataset, GenerationRequest(t=t))
            start = copeland_ranking(bases, dataset)
            assert result.achieved_arp_exact <= start.achieved_arp_exact
            if result.feasible:
                assert result.achieved_arp_exact <= exact_delta(t)
            else:
                assert result.achieved_arp_exact > exact_delta(t)

    def test_threshold_out_of_range(self):
        with pytest.raises(ThresholdOutOfRange):
            GenerationRequest(t=1.5)
        with pytest.raises(ThresholdOutOfRange):
            GenerationRequest(t=-0.1)

    def test_single_group_dataset_rejected(self):
        dataset, seed = pattern_instance("AAA")
        with pytest.raises(SingleGroup):
            fair_copeland(_repeat_base(seed.order), dataset,
                          GenerationRequest(t=0.5))


class TestApplyEdit:
    def test_move_down(self):
        r = make_ranking(["a1", "b1", "b2", "a2"], rid="gen:1", kind="consensus")
        edited = apply_edit(r, "a2", 2)
        assert edited.order == ("a1", "a2", "b1", "b2")
        assert edited.kind == "edited"
        assert edited.id == r.id

    def test_move_to_front_and_back(self):
        r = make_ranking(["a", "b", "c", "d"])
        assert apply_edit(r, "c", 1).order == ("c", "a", "b", "d")
        assert apply_edit(r, "a", 4).order == ("b", "c", "d", "a")

    def test_noop_position(self):
        r = make_ranking(["a", "b", "c"])
        assert apply_edit(r, "b", 2).order == r.order

    def test_edit_changes_audit(self):
        dataset, r = pattern_instance("ABBA")
        assert arp_exact(dataset, r) == 0
        edited = apply_edit(r, "a2", 2)
        assert arp_exact(dataset, edited) == 1

    def test_relative_order_of_others_preserved(self):
        rng = random.Random(61)
        ids = [f"c{i}" for i in range(8)]
        for _ in range(30):
            order = ids[:]
            rng.shuffle(order)
            r = make_ranking(order)
            cid = rng.choice(ids)
            edited = apply_edit(r, cid, rng.randint(1, 8))
            rest_before = [c for c in r.order if c != cid]
            rest_after = [c for c in edited.order if c != cid]
            assert rest_before == rest_after

    def test_unknown_candidate(self):
        r = make_ranking(["a", "b"])
        with pytest.raises(UnknownCandidate):
            apply_edit(r, "zz", 1)

    def test_position_out_of_range(self):
        r = make_ranking(["a", "b"])
        with pytest.raises(PositionOutOfRange):
            apply_edit(r, "a", 0)
        with pytest.raises(PositionOutOfRange):
            apply_edit(r, "a", 3)


class TestBruteForceKemeny:
    def test_unanimous(self):
        base = _repeat_base(["p", "q", "r"])
        result = brute_force_kemeny(base)
        assert result.ranking.order == ("p", "q", "r")
        assert result.cost == 0

    def test_near_unanimous(self):
        base = [
            make_ranking(["a", "b", "c"], rid="base:r1"),
            make_ranking(["a", "b", "c"], rid="base:r2"),
            make_ranking(["b", "a", "c"], rid="base:r3"),
        ]
        result = brute_force_kemeny(base)
        assert result.ranking.order == ("a", "b", "c")
        assert result.cost == 1

    def test_condorcet_cycle_tie_breaks_lexicographically(self):
        # all three rotations cost 4; the lexicographically smallest wins
        base = [
            make_ranking(["a", "b", "c"], rid="base:r1"),
            make_ranking(["b", "c", "a"], rid="base:r2"),
            make_ranking(["c", "a", "b"], rid="base:r3"),
        ]
        result = brute_force_kemeny(base)
        assert result.cost == 4
        assert result.ranking.order == ("a", "b", "c")

    def test_matches_permutation_oracle(self):
        rng = random.Random(67)
        for _ in range(12):
            n = rng.randint(2, 6)
            _, bases = random_instance(rng, n, rng.randint(1, 5), 2)
            result = brute_force_kemeny(bases)
            expect_order, expect_cost = oracle_kemeny([b.order for b in bases])
            assert result.cost == expect_cost
            assert result.ranking.order == expect_order
            assert _total_cost(result.ranking.order, bases) == result.cost

    def test_size_guard(self):
        ids = [f"c{i}" for i in range(11)]
        with pytest.raises(TooLarge):
            brute_force_kemeny([make_ranking(ids)])


class TestBruteForceFairKemeny:
    def test_full_slack_equals_kemeny(self):
        rng = random.Random(71)
        for _ in range(10):
            n = rng.randint(2, 6)
            groups = rng.randint(2, min(3, n))
            dataset, bases = random_instance(rng, n, rng.randint(1, 4), groups)
            fair = brute_force_fair_kemeny(bases, dataset, 1.0)
            plain = brute_force_kemeny(bases)
            assert fair.feasible is True
            assert fair.cost == plain.cost

    def test_singleton_groups_at_half_bound(self):
        dataset, seed = pattern_instance("AB")
        result = brute_force_fair_kemeny(_repeat_base(seed.order), dataset, 0.5)
        assert result.feasible is False
        assert result.ranking is None and result.cost is None
        assert result.min_achievable_arp_exact == Fraction(1)

    def test_block_profile_reaches_zero_gap(self):
        dataset, seed = pattern_instance("AABB")
        result = brute_force_fair_kemeny(_repeat_base(seed.order), dataset, 0.25)
        assert result.feasible is True
        assert result.min_achievable_arp_exact == 0
        label_of = {cid: dataset.group_label_of(cid) for cid in dataset.ids()}
        assert oracle_arp(result.ranking.order, label_of) <= Fraction(1, 4)

    def test_cost_sandwich(self):
        # kemeny <= fair-kemeny <= heuristic at the same bound
        rng = random.Random(73)
        for _ in range(10):
            n = rng.randint(3, 6)
            groups = rng.randint(2, min(3, n))
            dataset, bases = random_instance(rng, n, rng.randint(1, 3), groups)
            t = rng.choice([0.25, 0.5, 0.75])
            fair = brute_force_fair_kemeny(bases, dataset, 1.0 - t)
            plain = brute_force_kemeny(bases)
            heuristic = fair_copeland(bases, dataset, GenerationRequest(t=t))
            if fair.feasible:
                assert plain.cost <= fair.cost
                if heuristic.feasible:
                    assert fair.cost <= heuristic.total_kt_cost
            else:
                assert heuristic.feasible is False


class TestMinAchievableArp:
    def test_matches_label_permutation_oracle(self):
        rng = random.Random(79)
        for _ in range(12):
            group_count = rng.randint(2, 3)
            sizes = [rng.randint(1, 3) for _ in range(group_count)]
            labels = [chr(ord("A") + i) for i, s in enumerate(sizes) for _ in range(s)]
            assert min_achievable_arp(sizes) == oracle_min_arp(labels)

    def test_known_values(self):
        assert min_achievable_arp([1, 1]) == 1
        assert min_achievable_arp([2, 2]) == 0
        # B A B holds both rates at exactly one half
        assert min_achievable_arp([1, 2]) == 0
        # singleton vs triple: rates move in steps of 1/3, gap |2a - 1|
        assert min_achievable_arp([1, 3]) == Fraction(1, 3)

    def test_single_group_rejected(self):
        with pytest.raises(SingleGroup):
            min_achievable_arp([4])

    def test_size_guard(self):
        with pytest.raises(TooLarge):
            min_achievable_arp([8, 8])


@st.composite
def _small_instances(draw):
    n = draw(st.integers(min_value=2, max_value=6))
    group_count = draw(st.integers(min_value=2, max_value=min(3, n)))
    seed = draw(st.integers(min_value=0, max_value=10_000))
    rng = random.Random(seed)
    return random_instance(rng, n, draw(st.integers(min_value=1, max_value=3)),
                           group_count)


@settings(max_examples=60, deadline=None)
@given(_small_instances(), st.sampled_from([0.0, 0.25, 0.5, 0.75, 1.0]))
def test_heuristic_never_beats_oracle_cost(instance, t):
    dataset, bases = instance
    heuristic = fair_copeland(bases, dataset, GenerationRequest(t=t))
    oracle = brute_force_fair_kemeny(bases, dataset, 1.0 - t)
    if heuristic.feasible:
        # a feasible heuristic proves the oracle finds something at least as cheap
        assert oracle.feasible is True
        assert oracle.cost <= heuristic.total_kt_cost
    assert heuristic.achieved_arp_exact >= oracle.min_achievable_arp_exact
