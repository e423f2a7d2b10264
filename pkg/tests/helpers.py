"""Shared helpers for the test suite: random inputs and tiny oracles."""

from __future__ import annotations

import random
from collections import Counter

from qpw.quiver import Quiver, build_quiver


def random_quiver(rng: random.Random, n: int | None = None, max_entry: int = 3, max_n: int = 8) -> Quiver:
    """Random 2-cycle-free quiver given by a skew-symmetric matrix."""
    if n is None:
        n = rng.randint(2, max_n)
    b = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            e = rng.randint(-max_entry, max_entry)
            b[i][j] = e
            b[j][i] = -e
    return build_quiver(matrix=b)


def arrow_step_mutation_counts(q: Quiver, k: int) -> dict[tuple[int, int], int]:
    """Arrow-level mutation oracle, independent of the matrix formula.

    (1) add a composite arrow i->j for every length-2 path i->k->j,
    (2) reverse every arrow incident to k,
    (3) cancel a maximal set of disjoint 2-cycles.
    Returns surviving arrow counts per ordered vertex pair.
    """
    counts: Counter[tuple[int, int]] = Counter()
    for a in q.arrows:
        counts[(a.src, a.tgt)] += 1
    new: Counter[tuple[int, int]] = Counter()
    for (s, t), c in counts.items():
        if t == k:
            for (s2, t2), c2 in counts.items():
                if s2 == k:
                    new[(s, t2)] += c * c2
    for (s, t), c in counts.items():
        if k in (s, t):
            new[(t, s)] += c
        else:
            new[(s, t)] += c
    for i in range(q.n):
        for j in range(i + 1, q.n):
            m = min(new[(i, j)], new[(j, i)])
            if m:
                new[(i, j)] -= m
                new[(j, i)] -= m
    return {pair: c for pair, c in new.items() if c > 0}


def counts_from_matrix(b) -> dict[tuple[int, int], int]:
    n = len(b)
    return {(i, j): b[i][j] for i in range(n) for j in range(n) if b[i][j] > 0}


def perm_shuffled(rng: random.Random, n: int) -> list[int]:
    sigma = list(range(n))
    rng.shuffle(sigma)
    return sigma
