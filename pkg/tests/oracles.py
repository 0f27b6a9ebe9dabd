"""Independent reference implementations used only to check the library.

These deliberately use different algorithms from the code under test:
exhaustive search, naive recursion, direct recounting.
"""

from __future__ import annotations

import heapq
from collections import Counter
from functools import lru_cache


def levenshtein_recursive(a: tuple, b: tuple) -> int:
    """Memoized top-down edit distance (the library uses bottom-up DP)."""

    @lru_cache(maxsize=None)
    def go(i: int, j: int) -> int:
        if i == len(a):
            return len(b) - j
        if j == len(b):
            return len(a) - i
        best = go(i + 1, j + 1) + (a[i] != b[j])
        best = min(best, go(i + 1, j) + 1, go(i, j + 1) + 1)
        return best

    return go(0, 0)


def _all_shifts(state: tuple) -> list[tuple]:
    out = []
    n = len(state)
    for length in range(1, n + 1):
        for start in range(n - length + 1):
            block = state[start : start + length]
            rest = state[:start] + state[start + length :]
            for dest in range(len(rest) + 1):
                if dest == start:
                    continue
                out.append(rest[:dest] + block + rest[dest:])
    return out


def exact_ter_edits(hyp: tuple, ref: tuple) -> int:
    """Exact minimum (shifts + edit distance) over all shift sequences.

    Dijkstra over token orderings: shifts preserve the token multiset, so
    the state space is finite and small for short sequences.
    """
    start = tuple(hyp)
    best = {start: 0}
    frontier = [(0, start)]
    answer = levenshtein_recursive(start, tuple(ref))
    while frontier:
        cost, state = heapq.heappop(frontier)
        if cost > best.get(state, float("inf")) or cost >= answer:
            continue
        answer = min(answer, cost + levenshtein_recursive(state, tuple(ref)))
        for nxt in _all_shifts(state):
            if cost + 1 < best.get(nxt, float("inf")):
                best[nxt] = cost + 1
                heapq.heappush(frontier, (cost + 1, nxt))
    return answer


def ngram_f1_by_enumeration(hyp_units, ref_units, n: int) -> float | None:
    """Direct n-gram F1 recount; None when neither side has n-grams."""
    hyp_ngrams = [tuple(hyp_units[i : i + n]) for i in range(len(hyp_units) - n + 1)]
    ref_ngrams = [tuple(ref_units[i : i + n]) for i in range(len(ref_units) - n + 1)]
    if not hyp_ngrams and not ref_ngrams:
        return None
    matched = sum((Counter(hyp_ngrams) & Counter(ref_ngrams)).values())
    precision = matched / len(hyp_ngrams) if hyp_ngrams else 0.0
    recall = matched / len(ref_ngrams) if ref_ngrams else 0.0
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)
