"""Exact distance oracles at desk scale.

Deleting preferences optimally only ever drops whole distinct-order classes
(membership in a domain depends on the set of distinct orders, not on
multiplicities), so the searches run over distinct orders. Caps raise
``InstanceTooLargeError``; nothing is silently approximated.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapExceededError, InstanceTooLargeError, ProfileFormatError
from ._exact import exact_frac, kept_count
from .domains import DomainSpec, con_value
from .prefcore import Profile

PREF_AXIS_M_CAP = 12
PREF_DISTINCT_CAP = 24
ALT_M_CAP = 12
COMBINED_M_CAP = 10
COMBINED_DISTINCT_CAP = 16
LEMMA_ELL_CAP = 1_000_000


@dataclass(frozen=True)
class DistanceReport:
    value: int
    witness_removed: frozenset[int]  # agent indices (pref) or alternative ids (alt)
    method: str  # "AxisEnum" | "SubsetEnum"


def _removed_agents(inverse: np.ndarray, kept_distinct: set[int]) -> tuple[int, ...]:
    return tuple(int(i) for i in np.flatnonzero(~np.isin(inverse, list(kept_distinct))))


def pref_distance_by_maximal_sets(profile: Profile, domain: DomainSpec) -> DistanceReport:
    """Minimum preference deletions via enumeration of the domain's maximal order
    sets (for single-peaked: distance = n minus the best per-axis compatible count)."""
    if domain.enumerate_maximal_sets is None:
        raise ProfileFormatError(f"domain {domain.name!r} has no maximal-set enumerator")
    if profile.m > PREF_AXIS_M_CAP:
        raise InstanceTooLargeError(f"m={profile.m} exceeds axis-enumeration cap {PREF_AXIS_M_CAP}")
    distinct, counts, inverse = profile.distinct()
    best_kept = -1
    best_removed: tuple[int, ...] | None = None
    for _witness, oset in domain.enumerate_maximal_sets(profile.m):
        kept_idx = {d for d, o in enumerate(distinct) if o in oset}
        kept = int(counts[list(kept_idx)].sum()) if kept_idx else 0
        if kept < best_kept:
            continue
        removed = _removed_agents(inverse, kept_idx)
        if kept > best_kept or removed < best_removed:
            best_kept, best_removed = kept, removed
    return DistanceReport(profile.n - best_kept, frozenset(best_removed), "AxisEnum")


def pref_distance_by_subsets(profile: Profile, domain: DomainSpec) -> DistanceReport:
    """Minimum preference deletions by branch-and-bound over kept distinct-order
    subsets (largest total multiplicity first; infeasible prefixes prune their
    subtree because acceptance is restriction-closed)."""
    distinct, counts, inverse = profile.distinct()
    if len(distinct) > PREF_DISTINCT_CAP:
        raise InstanceTooLargeError(
            f"{len(distinct)} distinct orders exceed subset-enumeration cap {PREF_DISTINCT_CAP}"
        )
    order_idx = sorted(range(len(distinct)), key=lambda d: (-int(counts[d]), d))
    suffix = np.zeros(len(order_idx) + 1, dtype=np.int64)
    for i in range(len(order_idx) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + counts[order_idx[i]]

    best_kept = 0
    best_removed: tuple[int, ...] = tuple(range(profile.n))

    def consider(kept_set: set[int], kept_weight: int) -> None:
        nonlocal best_kept, best_removed
        removed = _removed_agents(inverse, kept_set)
        if kept_weight > best_kept or (kept_weight == best_kept and removed < best_removed):
            best_kept, best_removed = kept_weight, removed

    def dfs(i: int, kept: list[int], kept_weight: int) -> None:
        if kept_weight + suffix[i] < best_kept:
            return
        if i == len(order_idx):
            consider(set(kept), kept_weight)
            return
        d = order_idx[i]
        cand = kept + [d]
        if domain.recognize(Profile.from_orders([distinct[j] for j in cand])) is not None:
            dfs(i + 1, cand, kept_weight + int(counts[d]))
        dfs(i + 1, kept, kept_weight)

    dfs(0, [], 0)
    return DistanceReport(profile.n - best_kept, frozenset(best_removed), "SubsetEnum")


def _verify_pref(profile: Profile, domain: DomainSpec, report: DistanceReport) -> DistanceReport:
    kept = [i for i in range(profile.n) if i not in report.witness_removed]
    if kept and domain.recognize(profile.take_agents(kept)) is None:
        raise AssertionError("distance witness failed re-verification")
    return report


def pref_distance(profile: Profile, domain: DomainSpec) -> DistanceReport:
    """Exact preference-distance: minimum deletions of whole preferences."""
    if domain.enumerate_maximal_sets is not None and profile.m <= PREF_AXIS_M_CAP:
        report = pref_distance_by_maximal_sets(profile, domain)
    else:
        report = pref_distance_by_subsets(profile, domain)
    return _verify_pref(profile, domain, report)


def alt_distance(profile: Profile, domain: DomainSpec) -> DistanceReport:
    """Exact alternative-distance: minimum deletions of whole alternatives.

    Enumerates removal sets by increasing size, lexicographically, so the
    witness is the lexicographically smallest optimal removal set.
    """
    m = profile.m
    if m > ALT_M_CAP:
        raise InstanceTooLargeError(f"m={m} exceeds alternative-enumeration cap {ALT_M_CAP}")
    for k in range(m):
        for removed in itertools.combinations(range(m), k):
            kept = [a for a in range(m) if a not in removed]
            if domain.recognize(profile.restricted(kept)) is not None:
                return DistanceReport(k, frozenset(removed), "SubsetEnum")
    raise AssertionError("unreachable: a single alternative is always in a domain")


def combined_feasible(
    profile: Profile, domain: DomainSpec, eps_v, eps_a
) -> tuple[frozenset[int], frozenset[int]] | None:
    """A witness pair (agents W, alternatives X) with |W| >= (1-eps_v)n,
    |X| >= (1-eps_a)m and accepted restriction, or None."""
    m, n = profile.m, profile.n
    if m > COMBINED_M_CAP:
        raise InstanceTooLargeError(f"m={m} exceeds combined-search cap {COMBINED_M_CAP}")
    if len(profile.distinct()[0]) > COMBINED_DISTINCT_CAP:
        raise InstanceTooLargeError(
            f"distinct orders exceed combined-search cap {COMBINED_DISTINCT_CAP}"
        )
    m_keep = kept_count(eps_a, m)
    n_keep = kept_count(eps_v, n)
    for k_removed in range(0, m - m_keep + 1):
        for removed in itertools.combinations(range(m), k_removed):
            kept_alts = [a for a in range(m) if a not in removed]
            rep = pref_distance(profile.restricted(kept_alts), domain)
            if n - rep.value >= n_keep:
                kept_agents = frozenset(range(n)) - rep.witness_removed
                return kept_agents, frozenset(kept_alts)
    return None


def lemma_subsample_size(domain: DomainSpec, m: int, delta_gap, delta) -> int:
    """ceil((4/gap^2) * (con(m) * m! * m * ln m + ln(1/delta)))."""
    gap = exact_frac(delta_gap)
    if not 0 < gap < 1:
        raise ProfileFormatError("delta_gap must lie in (0, 1)")
    if not 0 < delta < 1:
        raise ProfileFormatError("delta must lie in (0, 1)")
    lead = float(con_value(domain, m) * math.factorial(m) * m)
    return math.ceil(float(Fraction(4) / gap**2) * (lead * math.log(m) + math.log(1 / delta)))


def check_lemma_subsample(
    profile: Profile,
    domain: DomainSpec,
    delta_gap,
    delta,
    trials: int,
    seed,
    ell_cap: int = LEMMA_ELL_CAP,
) -> float:
    """Fraction of with-replacement subsamples whose distance lands within
    (eps +/- delta_gap) * ell of the source profile's relative distance eps."""
    if trials < 1:
        raise ProfileFormatError("trials must be >= 1")
    base = pref_distance(profile, domain)
    eps = Fraction(base.value, profile.n)
    ell = lemma_subsample_size(domain, profile.m, delta_gap, delta)
    if ell > ell_cap:
        raise CapExceededError(f"subsample size {ell} exceeds cap {ell_cap}")
    gap = exact_frac(delta_gap)
    lo = math.ceil((eps - gap) * ell)
    hi = math.floor((eps + gap) * ell)
    rng = np.random.default_rng(seed)

    if domain.enumerate_maximal_sets is not None and profile.m <= 8:
        distinct, _, inverse = profile.distinct()
        n_distinct = len(distinct)
        compat = np.array(
            [
                [o in oset for o in distinct]
                for _w, oset in domain.enumerate_maximal_sets(profile.m)
            ],
            dtype=np.int64,
        )
        draws = rng.integers(0, profile.n, size=(trials, ell))
        flat = inverse[draws] + np.arange(trials)[:, None] * n_distinct
        counts = np.bincount(flat.ravel(), minlength=trials * n_distinct).reshape(
            trials, n_distinct
        )
        dist = ell - (counts @ compat.T).max(axis=1)
    else:
        dist = np.empty(trials, dtype=np.int64)
        rows = profile.order_array()
        for t in range(trials):
            idx = rng.integers(0, profile.n, size=ell)
            dist[t] = pref_distance(Profile(rows[idx]), domain).value
    return float(np.mean((dist >= lo) & (dist <= hi)))
