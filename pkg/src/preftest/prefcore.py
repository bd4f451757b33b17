"""Core data model: alternatives, linear orders, profiles, and profile generators.

Alternatives are plain integer ids 0..m-1. A :class:`LinearOrder` ranks all of
them, most-preferred first. A :class:`Profile` stacks n such orders in a
read-only integer array (row i = agent i's ranking).

All generators are pure functions of their arguments, including the seed.
Seeded randomness uses numpy's PCG64 via ``np.random.default_rng``, so outputs
are bit-reproducible for a fixed numpy major version.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .errors import (
    DivisibilityError,
    DuplicateAlternativeError,
    EmptySubsetError,
    ProfileFormatError,
    UnknownAlternativeError,
)
from ._exact import kept_count

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, type hints only
    from .domains import DomainSpec

Alternative = int


@dataclass(frozen=True)
class LinearOrder:
    """A strict total order over {0..m-1}; ``ranking[0]`` is most preferred."""

    ranking: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.ranking)

    def __iter__(self):
        return iter(self.ranking)

    def position(self, alt: int) -> int:
        """Rank of ``alt`` (0 = most preferred)."""
        return self.ranking.index(alt)

    def prefers(self, x: int, y: int) -> bool:
        return self.ranking.index(x) < self.ranking.index(y)


def make_order(ids: Sequence[int]) -> LinearOrder:
    """Build a LinearOrder from a permutation of 0..m-1, most-preferred first."""
    ids = tuple(int(i) for i in ids)
    if len(set(ids)) != len(ids):
        raise DuplicateAlternativeError(f"ranking repeats an alternative: {ids}")
    if not ids or sorted(ids) != list(range(len(ids))):
        raise UnknownAlternativeError(
            f"ranking must be a permutation of 0..{max(len(ids) - 1, 0)}: {ids}"
        )
    return LinearOrder(ids)


def restrict(order: LinearOrder, subset: Iterable[int]) -> LinearOrder:
    """Project an order onto a subset of alternatives, preserving relative ranks."""
    keep = set(subset)
    if not keep:
        raise EmptySubsetError("restriction subset is empty")
    if not keep <= set(order.ranking):
        raise UnknownAlternativeError(f"subset {sorted(keep)} not within the order's alternatives")
    return LinearOrder(tuple(a for a in order.ranking if a in keep))


class Profile:
    """An immutable stack of n linear orders over the alternatives {0..m-1}."""

    __slots__ = ("_orders", "_positions")

    def __init__(self, orders):
        arr = np.ascontiguousarray(np.asarray(orders, dtype=np.int64))
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ProfileFormatError(f"profile array must be (n>=1, m>=1), got {arr.shape}")
        m = arr.shape[1]
        if not (np.sort(arr, axis=1) == np.arange(m)).all():
            raise ProfileFormatError("every row must be a permutation of 0..m-1")
        arr.setflags(write=False)
        self._orders = arr
        self._positions = None

    @classmethod
    def from_orders(cls, orders: Iterable[LinearOrder | Sequence[int]]) -> "Profile":
        rows = [tuple(o) for o in orders]
        return cls(np.asarray(rows, dtype=np.int64))

    @property
    def n(self) -> int:
        return self._orders.shape[0]

    @property
    def m(self) -> int:
        return self._orders.shape[1]

    def order_array(self) -> np.ndarray:
        """(n, m) read-only array; row i lists agent i's alternatives by rank."""
        return self._orders

    def positions(self) -> np.ndarray:
        """(n, m) read-only array; ``positions()[i, a]`` is the rank of a for agent i."""
        if self._positions is None:
            pos = np.argsort(self._orders, axis=1)
            pos.setflags(write=False)
            self._positions = pos
        return self._positions

    def order_at(self, i: int) -> LinearOrder:
        return LinearOrder(tuple(int(a) for a in self._orders[i]))

    def distinct(self) -> tuple[list[tuple[int, ...]], np.ndarray, np.ndarray]:
        """Distinct order tuples plus their multiplicities and each agent's index into them."""
        uniq, inverse, counts = np.unique(
            self._orders, axis=0, return_inverse=True, return_counts=True
        )
        orders = [tuple(int(a) for a in row) for row in uniq]
        return orders, counts, inverse.ravel()

    def restricted(self, subset: Iterable[int]) -> "Profile":
        """Profile of all orders projected onto ``subset`` (relabelled to 0..k-1 by id rank)."""
        keep = sorted(set(int(a) for a in subset))
        if not keep:
            raise EmptySubsetError("restriction subset is empty")
        if keep[0] < 0 or keep[-1] >= self.m:
            raise UnknownAlternativeError(f"subset {keep} not within 0..{self.m - 1}")
        pos = self.positions()[:, keep]
        return Profile(np.argsort(pos, axis=1))

    def take_agents(self, indices: Iterable[int]) -> "Profile":
        idx = sorted(set(int(i) for i in indices))
        return Profile(self._orders[idx])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, Profile) and np.array_equal(self._orders, other._orders)

    def __repr__(self) -> str:
        return f"Profile(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class GroundTruth:
    """Generation certificate: which agents/alternatives witness the structured part."""

    kind: str  # "type1" (structured up to outliers) or "type2" (fully random)
    inlier_indices: frozenset[int]
    kept_alternatives: frozenset[int]
    axis: LinearOrder | None = None


def all_orders(m: int) -> list[tuple[int, ...]]:
    """All m! orders in lexicographic sequence."""
    return list(itertools.permutations(range(m)))


def relabel_alternatives(profile: Profile, sigma: Sequence[int]) -> Profile:
    """Apply an alternative relabelling a -> sigma[a] to every order."""
    sig = np.asarray(sigma, dtype=np.int64)
    return Profile(sig[profile.order_array()])


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def gen_uniform_profile(m: int, n: int, seed) -> tuple[Profile, GroundTruth]:
    """n i.i.d. uniform orders over m alternatives (seeded shuffle per row)."""
    if m < 1 or n < 1:
        raise ProfileFormatError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    rng = _as_rng(seed)
    arr = rng.permuted(np.tile(np.arange(m, dtype=np.int64), (n, 1)), axis=1)
    truth = GroundTruth(
        kind="type2",
        inlier_indices=frozenset(range(n)),
        kept_alternatives=frozenset(range(m)),
    )
    return Profile(arr), truth


def _sp_order_ids(axis: Sequence[int], rng: np.random.Generator) -> tuple[int, ...]:
    """One order single-peaked w.r.t. ``axis``, uniform over all 2^(m-1) of them.

    Built bottom-up: each step removes the left (bit 0) or right (bit 1) end of
    the remaining axis interval as the next-lowest-ranked alternative; the last
    survivor is the peak.
    """
    m = len(axis)
    lo, hi = 0, m - 1
    bottom_up = []
    for _ in range(m - 1):
        if rng.integers(0, 2) == 0:
            bottom_up.append(axis[lo])
            lo += 1
        else:
            bottom_up.append(axis[hi])
            hi -= 1
    bottom_up.append(axis[lo])
    return tuple(int(a) for a in reversed(bottom_up))


def gen_sp_order_uniform(axis: LinearOrder, seed) -> LinearOrder:
    """Uniform draw from the single-peaked orders w.r.t. ``axis``."""
    return LinearOrder(_sp_order_ids(axis.ranking, _as_rng(seed)))


def _flood_order(sampler, m_keep: int, rng: np.random.Generator, tries: int = 2000):
    """An order outside the sampler's witness set, or None if none can be found."""
    for _ in range(tries):
        cand = tuple(int(a) for a in rng.permutation(m_keep))
        if not sampler.contains(cand):
            return cand
    return None


def _adversary_flood(sampler, m_keep, n_out, rng):
    """All outliers are copies of one order missing from the witness set."""
    cand = _flood_order(sampler, m_keep, rng)
    if cand is None:  # tiny domains cover every order; no order is missing
        return [tuple(int(a) for a in rng.permutation(m_keep)) for _ in range(n_out)]
    return [cand] * n_out


def _adversary_uniform_complement(sampler, m_keep, n_out, rng):
    """Each outlier uniform over the orders outside the witness set."""
    out = []
    for _ in range(n_out):
        cand = _flood_order(sampler, m_keep, rng)
        if cand is None:
            cand = tuple(int(a) for a in rng.permutation(m_keep))
        out.append(cand)
    return out


ADVERSARY_STRATEGIES = {
    "missing-order-flood": _adversary_flood,
    "uniform-complement": _adversary_uniform_complement,
}


def gen_type1_profile(
    domain: "DomainSpec",
    m: int,
    n: int,
    eps_v,
    eps_a,
    outlier_mode: str = "random",
    seed=0,
    adversary: str = "missing-order-flood",
) -> tuple[Profile, GroundTruth]:
    """A kind-1 profile: inlier agents restricted to a kept set lie in the domain.

    ceil((1-eps_v)n) inliers, ceil((1-eps_a)m) kept alternatives. Outlier agents'
    restrictions to the kept set are uniform ("random") or produced by a named
    adversary strategy ("adversarial"). Deleted alternatives are interleaved into
    every order at uniformly random positions.
    """
    if m < 1 or n < 1:
        raise ProfileFormatError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    if not (0 <= eps_v < 1) or not (0 <= eps_a < 1):
        raise ProfileFormatError("eps_v and eps_a must lie in [0, 1)")
    if outlier_mode not in ("random", "adversarial"):
        raise ProfileFormatError(f"unknown outlier mode {outlier_mode!r}")
    if outlier_mode == "adversarial" and adversary not in ADVERSARY_STRATEGIES:
        raise ProfileFormatError(f"unknown adversary strategy {adversary!r}")

    rng = _as_rng(seed)
    m_keep = kept_count(eps_a, m)
    n_in = kept_count(eps_v, n)
    kept = np.sort(rng.choice(m, size=m_keep, replace=False))
    inliers = np.sort(rng.choice(n, size=n_in, replace=False))
    is_inlier = np.zeros(n, dtype=bool)
    is_inlier[inliers] = True

    sampler = domain.in_domain_sampler(m_keep, rng)
    rel_rows = np.empty((n, m_keep), dtype=np.int64)
    if sampler.draw_batch is not None:
        rel_rows[is_inlier] = sampler.draw_batch(rng, n_in)
    else:
        rel_rows[is_inlier] = [sampler.draw(rng) for _ in range(n_in)]
    n_out = n - n_in
    if n_out:
        if outlier_mode == "random":
            rel_rows[~is_inlier] = rng.permuted(
                np.tile(np.arange(m_keep, dtype=np.int64), (n_out, 1)), axis=1
            )
        else:
            rel_rows[~is_inlier] = ADVERSARY_STRATEGIES[adversary](sampler, m_keep, n_out, rng)

    rows = kept[rel_rows]
    deleted = np.setdiff1d(np.arange(m), kept)
    if deleted.size:
        d = deleted.size
        perm = rng.permuted(np.tile(np.arange(m, dtype=np.int64), (n, 1)), axis=1)
        slots = perm[:, :d]  # uniform position set for the deleted alternatives
        dperm = rng.permuted(np.tile(deleted, (n, 1)), axis=1)
        full = np.empty((n, m), dtype=np.int64)
        rows_idx = np.arange(n)[:, None]
        full[rows_idx, slots] = dperm
        full[rows_idx, np.sort(perm[:, d:], axis=1)] = rows
        rows = full

    axis = LinearOrder(tuple(int(kept[a]) for a in sampler.witness))
    truth = GroundTruth(
        kind="type1",
        inlier_indices=frozenset(int(i) for i in inliers),
        kept_alternatives=frozenset(int(a) for a in kept),
        axis=axis,
    )
    return Profile(rows), truth


def gen_prop3_profile(domain: "DomainSpec", m: int, n: int) -> Profile:
    """n/m! copies of every order: distance <= res(m)*n yet sample-indistinguishable
    from uniform (each order carries exactly 1/m! of the mass)."""
    if m < 1 or n < 1:
        raise ProfileFormatError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    fact = math.factorial(m)
    if n % fact != 0:
        raise DivisibilityError(f"n={n} must be divisible by m!={fact}")
    copies = n // fact
    rows = np.repeat(np.asarray(all_orders(m), dtype=np.int64), copies, axis=0)
    return Profile(rows)


def _block_rows(m_blocks: int, pattern: tuple[int, int, int]) -> list[int]:
    row = []
    for j in range(m_blocks):
        row.extend(3 * j + k for k in pattern)
    return row


def gen_lb_sp_profile(m_blocks: int, n: int) -> tuple[Profile, Profile]:
    """The hard single-peaked pair: P needs m_blocks alternative deletions, its
    sibling P' (last agent replaced by the first) is single-peaked."""
    if m_blocks < 1:
        raise ProfileFormatError("m_blocks must be >= 1")
    if n < 4 or n % 2 != 0:
        raise ProfileFormatError(f"n must be an even integer >= 4, got {n}")
    asc = _block_rows(m_blocks, (0, 1, 2))
    desc = asc[::-1]
    acb = _block_rows(m_blocks, (0, 2, 1))
    rows = [asc] * (n // 2) + [desc] * (n // 2 - 1) + [acb]
    rows_prime = rows[:-1] + [asc]
    return Profile(np.asarray(rows)), Profile(np.asarray(rows_prime))


def gen_lb_sc_profile(m_blocks: int, n: int) -> tuple[Profile, Profile]:
    """The hard single-crossing pair, analogous to :func:`gen_lb_sp_profile`."""
    if m_blocks < 1:
        raise ProfileFormatError("m_blocks must be >= 1")
    if n < 8 or n % 4 != 0:
        raise ProfileFormatError(f"n must be a multiple of 4 and >= 8, got {n}")
    q = n // 4
    abc = _block_rows(m_blocks, (0, 1, 2))
    acb = _block_rows(m_blocks, (0, 2, 1))
    cab = _block_rows(m_blocks, (2, 0, 1))
    cba = _block_rows(m_blocks, (2, 1, 0))
    bac = _block_rows(m_blocks, (1, 0, 2))
    rows = [abc] * q + [acb] * q + [cab] * q + [cba] * (q - 1) + [bac]
    rows_prime = rows[:-1] + [abc]
    return Profile(np.asarray(rows)), Profile(np.asarray(rows_prime))


# ---------------------------------------------------------------------------
# Profile text format: line 1 "m n", then n space-separated permutations.
# ---------------------------------------------------------------------------


def profile_to_text(profile: Profile) -> str:
    lines = [f"{profile.m} {profile.n}"]
    lines.extend(" ".join(str(a) for a in row) for row in profile.order_array())
    return "\n".join(lines) + "\n"


def profile_from_text(text: str) -> Profile:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ProfileFormatError("empty profile text")
    try:
        m, n = (int(tok) for tok in lines[0].split())
    except ValueError as exc:
        raise ProfileFormatError(f"bad header line {lines[0]!r}") from exc
    if len(lines) - 1 != n:
        raise ProfileFormatError(f"header says n={n} but found {len(lines) - 1} order lines")
    rows = []
    for ln in lines[1:]:
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError as exc:
            raise ProfileFormatError(f"bad order line {ln!r}") from exc
        if len(row) != m or sorted(row) != list(range(m)):
            raise ProfileFormatError(f"line {ln!r} is not a permutation of 0..{m - 1}")
        rows.append(row)
    return Profile(np.asarray(rows, dtype=np.int64))


def write_profile(path, profile: Profile) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(profile_to_text(profile))


def read_profile(path) -> Profile:
    with open(path, "r", encoding="utf-8") as fh:
        return profile_from_text(fh.read())
