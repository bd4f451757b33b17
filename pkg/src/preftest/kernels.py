"""Hot Monte Carlo kernels: numba ``@njit`` with a pure-numpy fallback.

The numba lane is used when numba imports cleanly; setting the environment
variable ``PREFTEST_NO_NUMBA`` to anything but ``0`` forces the numpy lane.
Both lanes are exact twins (same counts, same query accounting); the
benchmark under ``benchmarks/`` times one against the other.

All inputs are int64 arrays prepared by :mod:`preftest.mc`:

- ``bucket_of``: per-agent bucket id (lexicographic rank of the agent's
  restriction pattern).
- ``draws``: (trials, samples) agent indices.
- ``alts``: (trials, k) sampled alternative ids, ascending within a row.
- ``merges``: the (lo, mid, hi) merge-sort schedule matching the oracle's
  learner, so per-sample query costs reproduce the oracle path bit for bit.
- ``lut``: maps the three pairwise position comparisons of a triple to the
  lexicographic code of its preference pattern.
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("PREFTEST_NO_NUMBA", "").strip()
_DISABLED = _flag not in ("", "0")

try:
    if _DISABLED:
        raise ImportError("numba disabled via PREFTEST_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    njit = None
    HAVE_NUMBA = False


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# Bucket census: count each agent draw into its restriction-pattern bucket.
# ---------------------------------------------------------------------------


def _bucket_counts_np(bucket_of, draws, n_buckets, cost):
    trials = draws.shape[0]
    flat = bucket_of[draws]
    offsets = flat + np.arange(trials, dtype=np.int64)[:, None] * n_buckets
    counts = np.bincount(offsets.ravel(), minlength=trials * n_buckets)
    queries = cost[flat].sum(axis=1)
    return counts.reshape(trials, n_buckets).astype(np.int64), queries.astype(np.int64)


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _bucket_counts_nb(bucket_of, draws, n_buckets, cost):  # pragma: no cover - jit
        trials, samples = draws.shape
        counts = np.zeros((trials, n_buckets), dtype=np.int64)
        queries = np.zeros(trials, dtype=np.int64)
        for t in range(trials):
            for i in range(samples):
                b = bucket_of[draws[t, i]]
                counts[t, b] += 1
                queries[t] += cost[b]
        return counts, queries

else:
    _bucket_counts_nb = None


def bucket_counts(bucket_of, draws, n_buckets, cost):
    """(trials, n_buckets) draw counts and per-trial learning-query totals."""
    if HAVE_NUMBA:
        return _bucket_counts_nb(bucket_of, draws, np.int64(n_buckets), cost)
    return _bucket_counts_np(bucket_of, draws, n_buckets, cost)


# ---------------------------------------------------------------------------
# Triple census: per trial, count each sampled preference's pattern on every
# triple of the trial's sampled alternatives, and account the merge-sort
# queries spent learning the full restriction.
# ---------------------------------------------------------------------------


def _merge_cost_from_positions(p, merges, buf, tmp):
    k = p.shape[0]
    for j in range(k):
        buf[j] = p[j]
    c = 0
    for s in range(merges.shape[0]):
        lo, mid, hi = merges[s, 0], merges[s, 1], merges[s, 2]
        for j in range(lo, hi):
            tmp[j] = buf[j]
        i, jj, out = lo, mid, lo
        while i < mid and jj < hi:
            c += 1
            if tmp[i] < tmp[jj]:
                buf[out] = tmp[i]
                i += 1
            else:
                buf[out] = tmp[jj]
                jj += 1
            out += 1
        while i < mid:
            buf[out] = tmp[i]
            i += 1
            out += 1
        while jj < hi:
            buf[out] = tmp[jj]
            jj += 1
            out += 1
    return c


def _triple_counts_np(pos, draws, alts, merges, lut):
    trials, samples = draws.shape
    k = alts.shape[1]
    triples = [(a, b, c) for a in range(k) for b in range(a + 1, k) for c in range(b + 1, k)]
    n_cells = len(triples) * 6
    p = pos[draws[:, :, None], alts[:, None, :]]  # (trials, samples, k)
    codes = np.empty((trials, samples, len(triples)), dtype=np.int64)
    for idx, (a, b, c) in enumerate(triples):
        pa, pb, pc = p[..., a], p[..., b], p[..., c]
        key = 4 * (pa < pb) + 2 * (pa < pc) + (pb < pc)
        codes[..., idx] = lut[key]
    cell = codes + 6 * np.arange(len(triples), dtype=np.int64)
    base = np.arange(trials, dtype=np.int64)[:, None, None] * n_cells
    counts = np.bincount((cell + base).ravel(), minlength=trials * n_cells)

    # Query accounting: cost depends only on the restriction's rank pattern.
    ranks = np.argsort(np.argsort(p, axis=2), axis=2)
    keys = (ranks * (k ** np.arange(k, dtype=np.int64))).sum(axis=2)
    uniq, inv = np.unique(keys, return_inverse=True)
    buf = np.empty(k, dtype=np.int64)
    tmp = np.empty(k, dtype=np.int64)
    uniq_cost = np.empty(len(uniq), dtype=np.int64)
    for i, key in enumerate(uniq):
        digits = (key // (k ** np.arange(k, dtype=np.int64))) % k
        uniq_cost[i] = _merge_cost_from_positions(digits, merges, buf, tmp)
    queries = uniq_cost[inv].reshape(trials, samples).sum(axis=1)
    return counts.reshape(trials, n_cells).astype(np.int64), queries.astype(np.int64)


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _triple_counts_nb(pos, draws, alts, merges, lut):  # pragma: no cover - jit
        trials, samples = draws.shape
        k = alts.shape[1]
        n_triples = k * (k - 1) * (k - 2) // 6
        counts = np.zeros((trials, n_triples * 6), dtype=np.int64)
        queries = np.zeros(trials, dtype=np.int64)
        p = np.empty(k, dtype=np.int64)
        buf = np.empty(k, dtype=np.int64)
        tmp = np.empty(k, dtype=np.int64)
        for t in range(trials):
            for s in range(samples):
                agent = draws[t, s]
                for j in range(k):
                    p[j] = pos[agent, alts[t, j]]
                for j in range(k):
                    buf[j] = p[j]
                c = 0
                for mi in range(merges.shape[0]):
                    lo, mid, hi = merges[mi, 0], merges[mi, 1], merges[mi, 2]
                    for j in range(lo, hi):
                        tmp[j] = buf[j]
                    i, jj, out = lo, mid, lo
                    while i < mid and jj < hi:
                        c += 1
                        if tmp[i] < tmp[jj]:
                            buf[out] = tmp[i]
                            i += 1
                        else:
                            buf[out] = tmp[jj]
                            jj += 1
                        out += 1
                    while i < mid:
                        buf[out] = tmp[i]
                        i += 1
                        out += 1
                    while jj < hi:
                        buf[out] = tmp[jj]
                        jj += 1
                        out += 1
                queries[t] += c
                tri = 0
                for a in range(k):
                    for b in range(a + 1, k):
                        for cc in range(b + 1, k):
                            key = 0
                            if p[a] < p[b]:
                                key += 4
                            if p[a] < p[cc]:
                                key += 2
                            if p[b] < p[cc]:
                                key += 1
                            counts[t, tri * 6 + lut[key]] += 1
                            tri += 1
        return counts, queries

else:
    _triple_counts_nb = None


def triple_counts(pos, draws, alts, merges, lut):
    """(trials, C(k,3)*6) pattern counts and per-trial learning-query totals."""
    if HAVE_NUMBA:
        return _triple_counts_nb(pos, draws, alts, merges, lut)
    return _triple_counts_np(pos, draws, alts, merges, lut)
