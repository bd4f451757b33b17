"""Tester algorithms over the query oracle.

Each tester draws agents uniformly with replacement, learns restrictions via
comparison sort, and outputs a :class:`Verdict` (decision 1 = close to the
domain / kind one, 0 = random / far) with exact query accounting. Thresholds
are exact rationals; only the reported fields are floats.

``sample_override`` replaces the derived number of drawn agents while
recomputing any size-dependent threshold at the overridden count (the
empirical harness sweeps this).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    CapExceededError,
    ConfigurationError,
    DegenerateSampleError,
    EpsilonOutOfRangeError,
    TooFewAlternativesError,
)
from ._exact import exact_frac, kept_count
from .domains import DomainSpec, con_value, m0 as domain_m0, m_eps as domain_m_eps, res_value
from .distances import pref_distance
from .oracle import QueryOracle, learn_restricted_order
from .prefcore import Profile, all_orders

BUCKET_FACTORIAL_CAP = math.factorial(8)


@dataclass(frozen=True)
class Verdict:
    decision: int  # 1 = close to domain (kind one), 0 = random / far
    statistic: float  # observed min bucket count, min triple count, or distance
    threshold: float
    queries: int
    sample_size: int  # agents drawn
    alt_sample_size: int | None = None  # alternatives sampled (alt/combined testers)


@dataclass(frozen=True)
class TesterParams:
    eps_v: float = 0.0
    eps_a: float = 0.0
    eps_v_prime: float | None = None
    eps_a_prime: float | None = None
    delta: float = 0.01
    sample_override: int | None = None

    def validate(self) -> None:
        if not (0 <= self.eps_v <= 1) or not (0 <= self.eps_a <= 1):
            raise ConfigurationError("eps_v and eps_a must lie in [0, 1]")
        if self.eps_v_prime is not None and not (self.eps_v < self.eps_v_prime <= 1):
            raise ConfigurationError("need 0 <= eps_v < eps_v_prime <= 1")
        if self.eps_a_prime is not None and not (self.eps_a < self.eps_a_prime <= 1):
            raise ConfigurationError("need 0 <= eps_a < eps_a_prime <= 1")
        _require_delta(self.delta)
        if self.sample_override is not None and self.sample_override < 1:
            raise ConfigurationError("sample_override must be >= 1")


def _require_delta(delta) -> None:
    if not (0 < delta < 0.5):
        raise ConfigurationError(f"delta must lie in (0, 1/2), got {delta}")


def _require_eps01(eps) -> Fraction:
    e = exact_frac(eps)
    if not (0 <= e < 1):
        raise ConfigurationError(f"eps must lie in [0, 1), got {eps}")
    return e


# ---------------------------------------------------------------------------
# Sample sizes (ceilings of the closed forms; delta only needs to be positive
# here so the identities like ln(6/delta) = 1 at delta = 6/e stay expressible)
# ---------------------------------------------------------------------------


def sample_size_alg1(eps_v, delta) -> int:
    """ceil(72 / (1-eps_v)^2 * ln(6/delta))."""
    e = _require_eps01(eps_v)
    if delta <= 0:
        raise ConfigurationError("delta must be positive")
    return math.ceil(float(Fraction(72) / (1 - e) ** 2) * math.log(6 / delta))


def sample_size_worst(domain: DomainSpec, eps_v, delta) -> int:
    """ceil(72 / (1 - eps_v/res(m0))^2 * ln(6/delta)); for single-peaked this is
    72/(1-3 eps_v)^2 ln(6/delta)."""
    e = _require_eps01(eps_v)
    if delta <= 0:
        raise ConfigurationError("delta must be positive")
    r = res_value(domain, domain_m0(domain))
    if e >= r:
        raise EpsilonOutOfRangeError(
            f"no such tester exists for eps_v >= res(m0) = {r} (got {eps_v})"
        )
    return math.ceil(float(Fraction(72) / (1 - e / r) ** 2) * math.log(6 / delta))


def sample_size_any_eps(domain: DomainSpec, eps_v, delta) -> tuple[int, int]:
    """(ell, m(eps_v)) with ell = ceil(16 m! m ln m / (1 - eps_v/res(m))^2 * ln(1/delta))
    at m = m(eps_v), the smallest alternative count with res(m) > eps_v."""
    e = _require_eps01(eps_v)
    if delta <= 0:
        raise ConfigurationError("delta must be positive")
    me = domain_m_eps(domain, e)
    if math.factorial(me) > BUCKET_FACTORIAL_CAP:
        raise CapExceededError(f"m(eps_v) = {me} needs {math.factorial(me)} buckets (cap 8!)")
    r = res_value(domain, me)
    lead = Fraction(16 * math.factorial(me) * me) / (1 - e / r) ** 2
    ell = math.ceil(float(lead) * math.log(me) * math.log(1 / delta))
    return ell, me


def sample_size_worst_worst(domain: DomainSpec, m: int, eps_v, eps_v_prime, delta) -> int:
    """ceil(64/(eps' - eps)^2 * (con(m) m! m ln m + ln(1/delta)))."""
    e = _require_eps01(eps_v)
    ep = exact_frac(eps_v_prime)
    if not (e < ep <= 1):
        raise ConfigurationError("need 0 <= eps_v < eps_v_prime <= 1")
    if delta <= 0:
        raise ConfigurationError("delta must be positive")
    lead = float(con_value(domain, m) * math.factorial(m) * m)
    return math.ceil(
        float(Fraction(64) / (ep - e) ** 2) * (lead * math.log(m) + math.log(1 / delta))
    )


def alt_sample_sizes(m: int, eps_a, delta) -> tuple[int, int]:
    """(ell, t): ell = min(ceil((1-eps_a) m), ceil(2 log_{1/eps_a}(1/delta))) sampled
    alternatives and t = ceil(18 ln(2 log_{1/eps_a}(1/delta) / delta)) sampled agents."""
    ea = exact_frac(eps_a)
    if not (0 < ea < 1):
        raise ConfigurationError(f"eps_a must lie in (0, 1), got {eps_a}")
    if delta <= 0:
        raise ConfigurationError("delta must be positive")
    log_term = math.log(1 / delta) / math.log(float(1 / ea))
    ell = min(kept_count(ea, m), math.ceil(2 * log_term))
    t = math.ceil(18 * math.log(2 * log_term / delta))
    return ell, t


def combined_sample_size_t(
    domain: DomainSpec, eps_v, delta, ell: int, worst_pref: bool = False
) -> int:
    """t = ceil(144/(1-eps_v)^2 ln(ell/delta)); the worst-outlier variant replaces
    eps_v by eps_v/res(m0) (3 eps_v for single-peaked)."""
    if delta <= 0:
        raise ConfigurationError("delta must be positive")
    ratio = _combined_ratio(domain, eps_v, worst_pref)
    return math.ceil(float(Fraction(144) / (1 - ratio) ** 2) * math.log(ell / delta))


def _combined_ratio(domain: DomainSpec, eps_v, worst_pref: bool) -> Fraction:
    e = _require_eps01(eps_v)
    if not worst_pref:
        return e
    r = res_value(domain, domain_m0(domain))
    if e >= r:
        raise EpsilonOutOfRangeError(
            f"worst-outlier variant needs eps_v < res(m0) = {r} (got {eps_v})"
        )
    return e / r


# ---------------------------------------------------------------------------
# Query budgets (the stated sample-complexity expressions; every run must stay
# within them)
# ---------------------------------------------------------------------------


def budget_bucket(ell: int, k: int) -> int:
    """6 ell for triple buckets (k = 3), else ell * ceil(k log2 k)."""
    if k == 3:
        return 6 * ell
    return ell * (math.ceil(k * math.log2(k)) if k > 1 else 0)


def budget_full_learn(ell: int, m: int) -> int:
    return ell * (math.ceil(m * math.log2(m)) if m > 1 else 0)


def budget_triples(t: int, ell: int) -> int:
    return t * (math.ceil(ell * math.log2(ell)) if ell > 1 else 0)


# ---------------------------------------------------------------------------
# Bucket testers (fixed alternatives, one bucket per restricted order)
# ---------------------------------------------------------------------------


def _bucket_index(k: int) -> dict[tuple[int, ...], int]:
    return {order: i for i, order in enumerate(all_orders(k))}


def _run_bucket_tester(
    oracle: QueryOracle, k: int, ell: int, threshold: Fraction
) -> Verdict:
    subset = tuple(range(k))
    index = _bucket_index(k)
    counts = [0] * len(index)
    q0 = oracle.query_count
    for _ in range(ell):
        handle = oracle.draw_agent()
        learned = learn_restricted_order(handle, subset)
        counts[index[learned.ranking]] += 1
    stat = min(counts)
    return Verdict(
        decision=int(stat < threshold),
        statistic=float(stat),
        threshold=float(threshold),
        queries=oracle.query_count - q0,
        sample_size=ell,
    )


def test_random_outliers(
    oracle: QueryOracle, domain: DomainSpec, eps_v, delta, sample_override: int | None = None
) -> Verdict:
    """Kind-one (random preference outliers) vs uniformly random profile.

    Buckets the restrictions of ell sampled preferences to the first m0
    alternatives; decides kind one iff some bucket count falls below
    ell/(2 m0!) * (1 + eps_v).
    """
    e = _require_eps01(eps_v)
    _require_delta(delta)
    k = domain_m0(domain)
    if oracle.m < k:
        raise TooFewAlternativesError(
            f"need at least m0 = {k} alternatives for domain {domain.name!r}; "
            f"no tester exists below that (the profile kinds coincide)"
        )
    ell = sample_override if sample_override is not None else sample_size_alg1(e, delta)
    threshold = Fraction(ell, 2 * math.factorial(k)) * (1 + e)
    return _run_bucket_tester(oracle, k, ell, threshold)


def test_worst_outliers_small_eps(
    oracle: QueryOracle, domain: DomainSpec, eps_v, delta, sample_override: int | None = None
) -> Verdict:
    """Kind-one with arbitrary preference outliers, eps_v < res(m0).

    Same bucket statistic as :func:`test_random_outliers` with the threshold
    inflated to ell/(2 m0!) * (1 + eps_v/res(m0)) (1 + 3 eps_v for
    single-peaked)."""
    e = _require_eps01(eps_v)
    _require_delta(delta)
    k = domain_m0(domain)
    if oracle.m < k:
        raise TooFewAlternativesError(f"need at least m0 = {k} alternatives")
    r = res_value(domain, k)
    if e >= r:
        raise EpsilonOutOfRangeError(
            f"no such tester exists for eps_v >= res(m0) = {r} (got {eps_v})"
        )
    ell = sample_override if sample_override is not None else sample_size_worst(domain, e, delta)
    threshold = Fraction(ell, 2 * math.factorial(k)) * (1 + e / r)
    return _run_bucket_tester(oracle, k, ell, threshold)


def test_worst_outliers_any_eps(
    oracle: QueryOracle, domain: DomainSpec, eps_v, delta, sample_override: int | None = None
) -> Verdict:
    """Arbitrary preference outliers for any eps_v, restricted to the first
    m(eps_v) alternatives (m(eps_v)! buckets)."""
    e = _require_eps01(eps_v)
    _require_delta(delta)
    ell_full, me = sample_size_any_eps(domain, e, delta)
    if oracle.m < me:
        raise TooFewAlternativesError(f"need at least m(eps_v) = {me} alternatives")
    r = res_value(domain, me)
    ell = sample_override if sample_override is not None else ell_full
    threshold = Fraction(ell, 2 * math.factorial(me)) * (1 + e / r)
    verdict = _run_bucket_tester(oracle, me, ell, threshold)
    return verdict


# ---------------------------------------------------------------------------
# Distance tester (learn full orders, exact distance on the sampled profile)
# ---------------------------------------------------------------------------


def test_worst_worst_pref(
    oracle: QueryOracle,
    domain: DomainSpec,
    eps_v,
    eps_v_prime,
    delta,
    sample_override: int | None = None,
) -> Verdict:
    """Distance at most eps_v*n vs at least eps_v_prime*n, both arbitrary.

    Learns ell full orders and accepts iff the sampled profile's exact
    preference-distance is at most (eps_v + eps_v_prime) ell / 2."""
    e = _require_eps01(eps_v)
    ep = exact_frac(eps_v_prime)
    _require_delta(delta)
    if not (e < ep <= 1):
        raise ConfigurationError("need 0 <= eps_v < eps_v_prime <= 1")
    m = oracle.m
    ell_full = sample_size_worst_worst(domain, m, e, ep, delta)
    ell = sample_override if sample_override is not None else ell_full
    subset = tuple(range(m))
    q0 = oracle.query_count
    rows = np.empty((ell, m), dtype=np.int64)
    for i in range(ell):
        handle = oracle.draw_agent()
        rows[i] = learn_restricted_order(handle, subset).ranking
    dist = pref_distance(Profile(rows), domain).value
    threshold = (e + ep) * Fraction(ell, 2)
    return Verdict(
        decision=int(dist <= threshold),
        statistic=float(dist),
        threshold=float(threshold),
        queries=oracle.query_count - q0,
        sample_size=ell,
    )


# ---------------------------------------------------------------------------
# Alternative-outlier testers (sampled alternatives, triple pattern census)
# ---------------------------------------------------------------------------


def _triple_pattern_counts(
    learned: list[tuple[int, ...]], alts: tuple[int, ...]
) -> dict[tuple[tuple[int, int, int], tuple[int, ...]], int]:
    counts: dict = {}
    for triple in itertools.combinations(alts, 3):
        for perm in itertools.permutations(triple):
            counts[(triple, perm)] = 0
    for order in learned:
        pos = {a: i for i, a in enumerate(order)}
        for triple in itertools.combinations(alts, 3):
            perm = tuple(sorted(triple, key=pos.__getitem__))
            counts[(triple, perm)] += 1
    return counts


def _draw_restrictions(
    oracle: QueryOracle, alts: tuple[int, ...], t: int
) -> list[tuple[int, ...]]:
    learned = []
    for _ in range(t):
        handle = oracle.draw_agent()
        learned.append(learn_restricted_order(handle, alts).ranking)
    return learned


def _alt_preconditions(domain: DomainSpec, m: int, eps_a, delta) -> tuple[int, int]:
    ea = exact_frac(eps_a)
    if not (0 < ea < 1):
        raise EpsilonOutOfRangeError(f"eps_a must lie in (0, 1), got {eps_a}")
    if con_value(domain, kept_count(ea, m)) == 1:
        raise EpsilonOutOfRangeError(
            f"no such tester exists: con((1-eps_a)m) = 1 at m = {m}, eps_a = {eps_a}"
        )
    ell, t = alt_sample_sizes(m, ea, delta)
    if ell < 3:
        raise DegenerateSampleError(
            f"sampled alternative count ell = {ell} < 3 cannot carry a triple census"
        )
    return ell, t


def test_alt_outliers(
    oracle: QueryOracle,
    domain: DomainSpec,
    eps_a,
    delta,
    sample_override: int | None = None,
    rng: np.random.Generator | None = None,
) -> Verdict:
    """Alternative outliers vs uniformly random profile (coupon-collector census).

    Samples ell alternatives without replacement and t preferences restricted
    to them; decides kind one iff some sampled triple is missing at least one
    of its six patterns (min pattern count < 1)."""
    _require_delta(delta)
    ell, t_full = _alt_preconditions(domain, oracle.m, eps_a, delta)
    t = sample_override if sample_override is not None else t_full
    rng = rng if rng is not None else oracle.rng
    alts = tuple(int(a) for a in np.sort(rng.choice(oracle.m, size=ell, replace=False)))
    q0 = oracle.query_count
    learned = _draw_restrictions(oracle, alts, t)
    stat = min(_triple_pattern_counts(learned, alts).values())
    return Verdict(
        decision=int(stat < 1),
        statistic=float(stat),
        threshold=1.0,
        queries=oracle.query_count - q0,
        sample_size=t,
        alt_sample_size=ell,
    )


def test_combined_outliers(
    oracle: QueryOracle,
    domain: DomainSpec,
    eps_v,
    eps_a,
    delta,
    worst_pref: bool = False,
    sample_override: int | None = None,
    rng: np.random.Generator | None = None,
) -> Verdict:
    """Simultaneous preference and alternative outliers vs random profile.

    Samples ell alternatives as in :func:`test_alt_outliers`, then t
    preferences; the statistic is the minimum over ordered triples (a, b, c)
    of the count of learned orders ranking a > b > c, compared against
    (t/12) (1 + eps_v) (worst-outlier variant: 1 + eps_v/res(m0))."""
    _require_delta(delta)
    ratio = _combined_ratio(domain, eps_v, worst_pref)
    ell, _ = _alt_preconditions(domain, oracle.m, eps_a, delta)
    t_full = combined_sample_size_t(domain, eps_v, delta, ell, worst_pref)
    t = sample_override if sample_override is not None else t_full
    rng = rng if rng is not None else oracle.rng
    alts = tuple(int(a) for a in np.sort(rng.choice(oracle.m, size=ell, replace=False)))
    q0 = oracle.query_count
    learned = _draw_restrictions(oracle, alts, t)
    stat = min(_triple_pattern_counts(learned, alts).values())
    threshold = Fraction(t, 12) * (1 + ratio)
    return Verdict(
        decision=int(stat < threshold),
        statistic=float(stat),
        threshold=float(threshold),
        queries=oracle.query_count - q0,
        sample_size=t,
        alt_sample_size=ell,
    )
