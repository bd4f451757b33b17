"""Query oracle tests: sampling model, learning, exact accounting."""

import itertools

import numpy as np
import pytest

import preftest as pt
import preftest.oracle as oracle_mod
from preftest.errors import EmptySubsetError, SameAlternativeError, UnknownAlternativeError
from preftest.oracle import QueryOracle, compare, learn_restricted_order, merge_sort_comparisons


def fixed_oracle(rows, seed=0) -> QueryOracle:
    return QueryOracle(pt.Profile.from_orders(rows), seed=seed)


class TestDrawAgent:
    def test_single_agent(self):
        oracle = fixed_oracle([(0, 1, 2)])
        for _ in range(5):
            h = oracle.draw_agent()
            assert compare(h, 0, 1) is True
        assert oracle.agents_drawn == 5

    def test_draw_costs_no_comparisons(self):
        oracle = fixed_oracle([(0, 1)] * 3)
        oracle.draw_agent()
        assert oracle.query_count == 0

    def test_uniformity_band(self):
        oracle = fixed_oracle([(0, 1)] * 4, seed=42)
        counts = np.zeros(4, dtype=int)
        for _ in range(40_000):
            counts[oracle.draw_agent()._index] += 1
        assert (np.abs(counts - 10_000) <= 500).all()


class TestCompare:
    def test_direction_and_counting(self):
        oracle = fixed_oracle([(0, 1, 2)])
        h = oracle.draw_agent()
        assert compare(h, 0, 1) is True
        assert oracle.query_count == 1
        assert compare(h, 1, 0) is False
        assert oracle.query_count == 2

    def test_same_alternative_rejected(self):
        h = fixed_oracle([(0, 1)]).draw_agent()
        with pytest.raises(SameAlternativeError):
            compare(h, 0, 0)

    def test_unknown_alternative_rejected(self):
        h = fixed_oracle([(0, 1)]).draw_agent()
        with pytest.raises(UnknownAlternativeError):
            compare(h, 0, 5)


class TestLearnRestrictedOrder:
    def test_singleton_costs_nothing(self):
        oracle = fixed_oracle([(2, 0, 1)])
        h = oracle.draw_agent()
        assert learn_restricted_order(h, {1}).ranking == (1,)
        assert oracle.query_count == 0

    def test_triple_at_most_three(self):
        for hidden in itertools.permutations(range(3)):
            oracle = fixed_oracle([hidden])
            h = oracle.draw_agent()
            learned = learn_restricted_order(h, {0, 1, 2})
            assert learned.ranking == hidden
            assert oracle.query_count <= 3

    def test_matches_restrict(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            m = int(rng.integers(2, 9))
            hidden = tuple(int(a) for a in rng.permutation(m))
            k = int(rng.integers(1, m + 1))
            subset = set(int(a) for a in rng.choice(m, size=k, replace=False))
            oracle = fixed_oracle([hidden])
            learned = learn_restricted_order(oracle.draw_agent(), subset)
            assert learned == pt.restrict(pt.LinearOrder(hidden), subset)

    def test_full_round_trip_m4(self):
        for hidden in itertools.permutations(range(4)):
            oracle = fixed_oracle([hidden])
            learned = learn_restricted_order(oracle.draw_agent(), range(4))
            assert learned.ranking == hidden

    def test_within_sort_budget(self):
        import math

        rng = np.random.default_rng(23)
        for k in range(2, 9):
            for _ in range(30):
                hidden = tuple(int(a) for a in rng.permutation(k))
                oracle = fixed_oracle([hidden])
                learn_restricted_order(oracle.draw_agent(), range(k))
                assert oracle.query_count <= math.ceil(k * math.log2(k))

    def test_empty_subset_rejected(self):
        with pytest.raises(EmptySubsetError):
            learn_restricted_order(fixed_oracle([(0, 1)]).draw_agent(), set())


class TestConsistencyAndAccounting:
    def test_compare_consistent_with_learned_order(self):
        oracle = fixed_oracle([(3, 1, 0, 2)], seed=2)
        h = oracle.draw_agent()
        learned = learn_restricted_order(h, range(4))
        for x, y in itertools.combinations(range(4), 2):
            assert compare(h, x, y) == learned.prefers(x, y)

    def test_double_count_instrumentation(self, monkeypatch):
        calls = {"n": 0}
        real = oracle_mod.compare

        def counting(handle, x, y):
            calls["n"] += 1
            return real(handle, x, y)

        monkeypatch.setattr(oracle_mod, "compare", counting)
        oracle = fixed_oracle([(4, 2, 0, 3, 1)], seed=0)
        h = oracle.draw_agent()
        learn_restricted_order(h, range(5))
        oracle_mod.compare(h, 0, 1)
        assert oracle.query_count == calls["n"]

    def test_cost_is_pure_function_of_pattern(self):
        # learning the same hidden restriction pattern always costs the same
        for hidden in itertools.permutations(range(5)):
            oracle = fixed_oracle([hidden])
            learn_restricted_order(oracle.draw_agent(), range(5))
            pos_of = [0] * 5
            for rank, a in enumerate(hidden):
                pos_of[a] = rank
            assert oracle.query_count == merge_sort_comparisons(pos_of)

    def test_merge_sort_cost_k3_table(self):
        costs = {}
        for pattern in itertools.permutations(range(3)):
            pos_of = [0] * 3
            for rank, a in enumerate(pattern):
                pos_of[a] = rank
            costs[pattern] = merge_sort_comparisons(pos_of)
        assert max(costs.values()) == 3
        assert min(costs.values()) >= 2
