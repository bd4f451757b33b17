"""Vectorized Monte Carlo trial batches, exact twins of the oracle-path testers.

A batch runs ``trials`` independent executions of one tester against a fixed
hidden profile. Trial i consumes its randomness from the i-th spawned child of
``SeedSequence(seed)``, in the same draw order as the oracle path, so running
the oracle tester with the same child seed reproduces each trial's statistic,
decision, and query count exactly (asserted in the test suite).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InstanceTooLargeError, TooFewAlternativesError
from ._exact import exact_frac
from .domains import DomainSpec, m0 as domain_m0, res_value
from .distances import pref_distance
from .kernels import bucket_counts, triple_counts
from .oracle import merge_plan, merge_sort_comparisons
from .prefcore import Profile, all_orders
from .testers import (
    _alt_preconditions,
    _combined_ratio,
    _require_delta,
    _require_eps01,
    budget_bucket,
    budget_full_learn,
    budget_triples,
    combined_sample_size_t,
    sample_size_alg1,
    sample_size_any_eps,
    sample_size_worst,
    sample_size_worst_worst,
)

MC_FULL_LEARN_M_CAP = 7  # m! buckets and maximal-set matrices stay small


@dataclass(frozen=True)
class MCTrials:
    decisions: np.ndarray  # (trials,) 0/1
    statistics: np.ndarray  # (trials,) int64
    queries: np.ndarray  # (trials,) int64
    threshold: float
    sample_size: int
    budget: int
    alt_sample_size: int | None = None


def child_rngs(seed, trials: int) -> list[np.random.Generator]:
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.default_rng(c) for c in ss.spawn(trials)]


@lru_cache(maxsize=None)
def sort_cost_table(k: int) -> np.ndarray:
    """Learning cost (comparisons) per restriction pattern, indexed by the
    pattern's lexicographic rank."""
    costs = np.empty(math.factorial(k), dtype=np.int64)
    for i, pattern in enumerate(all_orders(k)):
        pos_of = [0] * k
        for rank, a in enumerate(pattern):
            pos_of[a] = rank
        costs[i] = merge_sort_comparisons(pos_of)
    costs.setflags(write=False)
    return costs


@lru_cache(maxsize=None)
def perm_code_lut() -> np.ndarray:
    """Map 4*(pa<pb) + 2*(pa<pc) + (pb<pc) to the pattern's lexicographic code."""
    import itertools

    code_of = {perm: i for i, perm in enumerate(itertools.permutations(range(3)))}
    lut = np.zeros(8, dtype=np.int64)
    for positions in itertools.permutations(range(3)):
        pa, pb, pc = positions
        pattern = tuple(sorted(range(3), key=lambda i: positions[i]))
        lut[4 * (pa < pb) + 2 * (pa < pc) + (pb < pc)] = code_of[pattern]
    return lut


def merge_plan_array(k: int) -> np.ndarray:
    return np.asarray(merge_plan(k), dtype=np.int64).reshape(-1, 3)


def restriction_bucket_ids(profile: Profile, subset) -> np.ndarray:
    """Per-agent lexicographic rank of the restriction pattern to ``subset``."""
    subset = sorted(subset)
    k = len(subset)
    pos = profile.positions()[:, subset]
    pattern = np.argsort(pos, axis=1)
    ranks = np.zeros(profile.n, dtype=np.int64)
    for r in range(k):
        smaller_before = (pattern[:, :r] < pattern[:, r : r + 1]).sum(axis=1)
        ranks += (pattern[:, r] - smaller_before) * math.factorial(k - 1 - r)
    return ranks


def _decide_below(stats: np.ndarray, threshold: Fraction) -> np.ndarray:
    """stat < threshold, exactly (no float roundoff at the boundary)."""
    return (stats.astype(object) * threshold.denominator < threshold.numerator).astype(np.int8)


def _decide_at_most(stats: np.ndarray, threshold: Fraction) -> np.ndarray:
    return (stats.astype(object) * threshold.denominator <= threshold.numerator).astype(np.int8)


def _agent_draws(rngs, n: int, count: int) -> np.ndarray:
    return np.stack([rng.integers(0, n, size=count) for rng in rngs]).astype(np.int64)


def mc_bucket_trials(
    profile: Profile,
    domain: DomainSpec,
    algo: str,
    eps_v,
    delta,
    trials: int,
    seed,
    sample_override: int | None = None,
) -> MCTrials:
    """Batched :func:`test_random_outliers` / `test_worst_outliers_small_eps` /
    `test_worst_outliers_any_eps` (``algo`` in {"alg1", "worst", "any-eps"})."""
    e = _require_eps01(eps_v)
    _require_delta(delta)
    if algo == "alg1":
        k = domain_m0(domain)
        ell_full = sample_size_alg1(e, delta)
        ratio = e
    elif algo == "worst":
        k = domain_m0(domain)
        ell_full = sample_size_worst(domain, e, delta)
        ratio = e / res_value(domain, k)
    elif algo == "any-eps":
        ell_full, k = sample_size_any_eps(domain, e, delta)
        ratio = e / res_value(domain, k)
    else:
        raise ValueError(f"unknown bucket algo {algo!r}")
    if profile.m < k:
        raise TooFewAlternativesError(f"need at least {k} alternatives for algo {algo!r}")
    ell = sample_override if sample_override is not None else ell_full
    n_buckets = math.factorial(k)
    threshold = Fraction(ell, 2 * n_buckets) * (1 + ratio)

    bucket_of = restriction_bucket_ids(profile, range(k))
    draws = _agent_draws(child_rngs(seed, trials), profile.n, ell)
    counts, queries = bucket_counts(bucket_of, draws, n_buckets, sort_cost_table(k))
    stats = counts.min(axis=1)
    return MCTrials(
        decisions=_decide_below(stats, threshold),
        statistics=stats,
        queries=queries,
        threshold=float(threshold),
        sample_size=ell,
        budget=budget_bucket(ell, k),
    )


def mc_worst_worst_trials(
    profile: Profile,
    domain: DomainSpec,
    eps_v,
    eps_v_prime,
    delta,
    trials: int,
    seed,
    sample_override: int | None = None,
) -> MCTrials:
    """Batched :func:`test_worst_worst_pref`: full-order learning plus the exact
    distance of each sampled sub-profile."""
    e = _require_eps01(eps_v)
    ep = exact_frac(eps_v_prime)
    _require_delta(delta)
    m = profile.m
    if m > MC_FULL_LEARN_M_CAP:
        raise InstanceTooLargeError(
            f"vectorized full-order trials capped at m <= {MC_FULL_LEARN_M_CAP}; "
            "use the oracle-path tester beyond that"
        )
    ell_full = sample_size_worst_worst(domain, m, e, ep, delta)
    ell = sample_override if sample_override is not None else ell_full
    bucket_of = restriction_bucket_ids(profile, range(m))
    n_buckets = math.factorial(m)
    draws = _agent_draws(child_rngs(seed, trials), profile.n, ell)
    counts, queries = bucket_counts(bucket_of, draws, n_buckets, sort_cost_table(m))

    if domain.enumerate_maximal_sets is not None:
        rank_of = {order: i for i, order in enumerate(all_orders(m))}
        sets = [oset for _w, oset in domain.enumerate_maximal_sets(m)]
        compat = np.zeros((len(sets), n_buckets), dtype=np.int64)
        for si, oset in enumerate(sets):
            for order in oset:
                compat[si, rank_of[order]] = 1
        dist = ell - (counts @ compat.T).max(axis=1)
    else:
        orders = np.asarray(all_orders(m), dtype=np.int64)
        dist = np.empty(trials, dtype=np.int64)
        for t in range(trials):
            rows = np.repeat(orders, counts[t], axis=0)
            dist[t] = pref_distance(Profile(rows), domain).value

    threshold = (e + ep) * Fraction(ell, 2)
    return MCTrials(
        decisions=_decide_at_most(dist, threshold),
        statistics=dist,
        queries=queries,
        threshold=float(threshold),
        sample_size=ell,
        budget=budget_full_learn(ell, m),
    )


def mc_triple_trials(
    profile: Profile,
    domain: DomainSpec,
    eps_a,
    delta,
    trials: int,
    seed,
    eps_v=None,
    worst_pref: bool = False,
    sample_override: int | None = None,
) -> MCTrials:
    """Batched :func:`test_alt_outliers` (eps_v = None) or
    :func:`test_combined_outliers` (eps_v given)."""
    _require_delta(delta)
    ell, t_alt = _alt_preconditions(domain, profile.m, eps_a, delta)
    if eps_v is None:
        t_full = t_alt
        threshold_of = lambda t: Fraction(1)
    else:
        ratio = _combined_ratio(domain, eps_v, worst_pref)
        t_full = combined_sample_size_t(domain, eps_v, delta, ell, worst_pref)
        threshold_of = lambda t: Fraction(t, 12) * (1 + ratio)
    t = sample_override if sample_override is not None else t_full

    rngs = child_rngs(seed, trials)
    alts = np.stack(
        [np.sort(rng.choice(profile.m, size=ell, replace=False)) for rng in rngs]
    ).astype(np.int64)
    draws = np.stack([rng.integers(0, profile.n, size=t) for rng in rngs]).astype(np.int64)
    counts, queries = triple_counts(
        np.ascontiguousarray(profile.positions()),
        draws,
        alts,
        merge_plan_array(ell),
        perm_code_lut(),
    )
    stats = counts.min(axis=1)
    threshold = threshold_of(t)
    return MCTrials(
        decisions=_decide_below(stats, threshold),
        statistics=stats,
        queries=queries,
        threshold=float(threshold),
        sample_size=t,
        budget=budget_triples(t, ell),
        alt_sample_size=ell,
    )
