"""Independent brute-force reference implementations.

Everything here recomputes results the slow, obvious way: explicit
enumeration of candidate pairs or whole permutations, with no code shared
with the package internals. Tests compare package output against these.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from typing import Mapping, Sequence


def group_sizes(label_of: Mapping[str, str]) -> dict[str, int]:
    sizes: Counter[str] = Counter(label_of.values())
    return dict(sizes)


def pair_wins(order: Sequence[str], label_of: Mapping[str, str]) -> dict[str, int]:
    """Mixed-pair wins per group by checking every pair explicitly."""
    wins: Counter[str] = Counter()
    for label in set(label_of.values()):
        wins[label] = 0
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            gi, gj = label_of[order[i]], label_of[order[j]]
            if gi != gj:
                wins[gi] += 1
    return dict(wins)


def oracle_fpr(order: Sequence[str], label_of: Mapping[str, str], label: str) -> Fraction:
    n = len(order)
    size = sum(1 for v in label_of.values() if v == label)
    wins = pair_wins(order, label_of)[label]
    return Fraction(wins, size * (n - size))


def oracle_arp(order: Sequence[str], label_of: Mapping[str, str]) -> Fraction:
    """Max absolute rate difference over explicit group pairs."""
    labels = sorted(set(label_of.values()))
    rates = [oracle_fpr(order, label_of, label) for label in labels]
    best = Fraction(0)
    for a, b in itertools.combinations(rates, 2):
        best = max(best, abs(a - b))
    return best


def oracle_kendall_tau(a: Sequence[str], b: Sequence[str]) -> int:
    pa = {cid: i for i, cid in enumerate(a)}
    pb = {cid: i for i, cid in enumerate(b)}
    ids = list(a)
    count = 0
    for x, y in itertools.combinations(ids, 2):
        if (pa[x] - pa[y]) * (pb[x] - pb[y]) < 0:
            count += 1
    return count


def oracle_kemeny(bases: Sequence[Sequence[str]]) -> tuple[tuple[str, ...], int]:
    """Minimum total distance permutation, lexicographically smallest on ties."""
    ids = sorted(bases[0])
    best_perm: tuple[str, ...] | None = None
    best_cost = None
    for perm in itertools.permutations(ids):
        cost = sum(oracle_kendall_tau(perm, base) for base in bases)
        if best_cost is None or cost < best_cost:
            best_perm, best_cost = perm, cost
    assert best_perm is not None and best_cost is not None
    return best_perm, best_cost


def oracle_min_arp(labels: Sequence[str]) -> Fraction:
    """Smallest parity gap any arrangement of these group labels allows."""
    fake_ids = [f"x{i}" for i in range(len(labels))]
    best: Fraction | None = None
    for perm in set(itertools.permutations(labels)):
        label_of = dict(zip(fake_ids, perm))
        gap = oracle_arp(fake_ids, label_of)
        if best is None or gap < best:
            best = gap
            if best == 0:
                break
    assert best is not None
    return best
