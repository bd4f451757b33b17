"""The sampling model: an oracle over a hidden profile.

``draw_agent`` returns a uniformly random agent with replacement (cost: zero
comparisons). Each comparison query through an :class:`AgentHandle` costs one
unit; sample complexity is exactly the number of comparisons. Testers receive
opaque handles only, so they cannot detect repeated agents.

Orders are learned by a deterministic top-down merge sort over the queried
subset (ids ascending as the initial sequence), so the comparison count for a
given hidden restriction is a pure function of that restriction's pattern.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptySubsetError, SameAlternativeError, UnknownAlternativeError
from .prefcore import LinearOrder, Profile


@lru_cache(maxsize=None)
def merge_plan(k: int) -> tuple[tuple[int, int, int], ...]:
    """Post-order (lo, mid, hi) merge schedule of recursive top-down merge sort."""
    plan: list[tuple[int, int, int]] = []

    def rec(lo: int, hi: int) -> None:
        if hi - lo <= 1:
            return
        mid = (lo + hi) // 2
        rec(lo, mid)
        rec(mid, hi)
        plan.append((lo, mid, hi))

    rec(0, k)
    return tuple(plan)


def merge_sort_comparisons(pos_of: Sequence[int]) -> int:
    """Comparisons the learner spends on a restriction whose pattern ranks
    relative id r at ``pos_of[r]`` (initial sequence: relative ids ascending)."""
    k = len(pos_of)
    seq = list(range(k))
    tmp = seq[:]
    cost = 0
    for lo, mid, hi in merge_plan(k):
        tmp[lo:hi] = seq[lo:hi]
        i, j, out = lo, mid, lo
        while i < mid and j < hi:
            cost += 1
            if pos_of[tmp[i]] < pos_of[tmp[j]]:
                seq[out] = tmp[i]
                i += 1
            else:
                seq[out] = tmp[j]
                j += 1
            out += 1
        while i < mid:
            seq[out] = tmp[i]
            i += 1
            out += 1
        while j < hi:
            seq[out] = tmp[j]
            j += 1
            out += 1
    return cost


class AgentHandle:
    """Opaque token for one drawn agent; comparisons stay consistent with its
    fixed hidden order."""

    __slots__ = ("_oracle", "_index")

    def __init__(self, oracle: "QueryOracle", index: int):
        self._oracle = oracle
        self._index = index

    def compare(self, x: int, y: int) -> bool:
        return compare(self, x, y)

    def learn_restricted_order(self, subset: Iterable[int]) -> LinearOrder:
        return learn_restricted_order(self, subset)


def compare(handle: AgentHandle, x: int, y: int) -> bool:
    """True iff the hidden agent prefers x over y. Costs one comparison."""
    oracle = handle._oracle
    if x == y:
        raise SameAlternativeError(f"comparison needs two distinct alternatives, got {x} twice")
    if not (0 <= x < oracle.m and 0 <= y < oracle.m):
        raise UnknownAlternativeError(f"alternatives must lie in 0..{oracle.m - 1}")
    oracle._comparisons += 1
    pos = oracle._positions[handle._index]
    return bool(pos[x] < pos[y])


def learn_restricted_order(handle: AgentHandle, subset: Iterable[int]) -> LinearOrder:
    """Exact restriction of the hidden order to ``subset`` via merge sort;
    at most ceil(k log2 k) comparisons for k = |subset| (3 for k = 3)."""
    ids = sorted(set(int(a) for a in subset))
    if not ids:
        raise EmptySubsetError("cannot learn an empty restriction")
    oracle = handle._oracle
    if ids[0] < 0 or ids[-1] >= oracle.m:
        raise UnknownAlternativeError(f"subset {ids} not within 0..{oracle.m - 1}")
    seq = ids[:]
    tmp = seq[:]
    for lo, mid, hi in merge_plan(len(seq)):
        tmp[lo:hi] = seq[lo:hi]
        i, j, out = lo, mid, lo
        while i < mid and j < hi:
            if compare(handle, tmp[i], tmp[j]):
                seq[out] = tmp[i]
                i += 1
            else:
                seq[out] = tmp[j]
                j += 1
            out += 1
        while i < mid:
            seq[out] = tmp[i]
            i += 1
            out += 1
        while j < hi:
            seq[out] = tmp[j]
            j += 1
            out += 1
    return LinearOrder(tuple(seq))


class QueryOracle:
    """Stateful access to a hidden profile with exact query accounting."""

    def __init__(self, profile: Profile, seed=0):
        self._profile = profile
        self._positions = profile.positions()
        self._rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        self._comparisons = 0
        self._agents_drawn = 0

    @property
    def m(self) -> int:
        return self._profile.m

    @property
    def n(self) -> int:
        return self._profile.n

    @property
    def rng(self) -> np.random.Generator:
        """Auxiliary randomness source (e.g. alternative sampling by testers)."""
        return self._rng

    @property
    def query_count(self) -> int:
        return self._comparisons

    @property
    def agents_drawn(self) -> int:
        return self._agents_drawn

    def draw_agent(self) -> AgentHandle:
        """Uniform over agents, with replacement; costs zero comparisons."""
        idx = int(self._rng.integers(0, self.n))
        self._agents_drawn += 1
        return AgentHandle(self, idx)


def query_count(oracle: QueryOracle) -> int:
    return oracle.query_count


def draw_agent(oracle: QueryOracle) -> AgentHandle:
    return oracle.draw_agent()
