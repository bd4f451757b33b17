"""Domain abstraction and the shipped recognizers.

A domain here is neutral (closed under relabelling alternatives) and normal
(closed under restriction). A :class:`DomainSpec` bundles a recognizer, the
exact content function con(m) (max fraction of the m! orders a domain profile
can contain as distinct orders), and an in-domain sampler used by the
generators. Content/residue arithmetic is exact rational; floats appear only
at final threshold comparisons in the testers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import InstanceTooLargeError, NotFoundWithinCapError, ProfileFormatError
from ._exact import exact_frac
from .prefcore import LinearOrder, Profile, _sp_order_ids, all_orders

_SEARCH_CAP = 20  # upper limit when searching con/res for a critical m
_SP_NODE_CAP = 200_000  # endpoint-elimination search guard


@dataclass(frozen=True)
class Witness:
    """Certificate of domain membership: a societal axis or a voter order."""

    kind: str  # "axis" or "voter-order"
    value: tuple[int, ...]


@dataclass(frozen=True)
class InDomainSampler:
    """Seeded source of orders from one member set of a domain.

    ``draw_batch`` is an optional vectorized twin of ``draw`` (it may consume
    the generator stream differently; only determinism per seed matters).
    """

    witness: tuple[int, ...]
    draw: Callable[[np.random.Generator], tuple[int, ...]]
    contains: Callable[[tuple[int, ...]], bool]
    draw_batch: Callable[[np.random.Generator, int], np.ndarray] | None = None


@dataclass(frozen=True)
class DomainSpec:
    name: str
    recognize: Callable[[Profile], Witness | None]
    con: Callable[[int], Fraction]
    in_domain_sampler: Callable[[int, np.random.Generator], InDomainSampler] | None = None
    enumerate_maximal_sets: Callable[[int], Iterator[tuple[Witness, frozenset]]] | None = None


# ---------------------------------------------------------------------------
# Single-peaked
# ---------------------------------------------------------------------------


def order_is_sp(order: Sequence[int], axis: Sequence[int]) -> bool:
    """True iff ``order`` is single-peaked w.r.t. ``axis``: walking the order
    bottom-up, the next alternative is always an endpoint of the remaining
    axis interval."""
    ax = list(axis)
    lo, hi = 0, len(ax) - 1
    for a in reversed(list(order)):
        if a == ax[lo]:
            lo += 1
        elif a == ax[hi]:
            hi -= 1
        else:
            return False
    return True


def is_sp_wrt_axis(profile: Profile, axis: LinearOrder) -> bool:
    if len(axis) != profile.m:
        raise ProfileFormatError("axis must cover the profile's alternative set")
    distinct, _, _ = profile.distinct()
    return all(order_is_sp(o, axis.ranking) for o in distinct)


def _sp_bottoms(distinct: list[tuple[int, ...]], remaining: frozenset) -> set[int]:
    bs = set()
    for order in distinct:
        for a in reversed(order):
            if a in remaining:
                bs.add(a)
                break
    return bs


def recognize_sp(profile: Profile) -> Witness | None:
    """Witness axis if the profile is single-peaked, else None.

    Endpoint elimination: the lowest-ranked remaining alternative of every
    order must sit at an end of the axis under construction; branch on the
    left/right assignment and validate completed axes. Deterministic output:
    the lexicographically smallest canonical axis among those found (an axis
    and its reversal are the same witness).
    """
    m = profile.m
    if m <= 2:
        return Witness("axis", tuple(range(m)))
    distinct, _, _ = profile.distinct()
    found: set[tuple[int, ...]] = set()
    nodes = 0
    stack: list[tuple[tuple, tuple, frozenset]] = [((), (), frozenset(range(m)))]
    while stack:
        nodes += 1
        if nodes > _SP_NODE_CAP:
            raise InstanceTooLargeError("single-peaked recognition search exceeded node cap")
        left, right, remaining = stack.pop()
        if len(remaining) <= 1:
            axis = left + tuple(remaining) + right[::-1]
            if all(order_is_sp(o, axis) for o in distinct):
                found.add(min(axis, axis[::-1]))
            continue
        bs = _sp_bottoms(distinct, remaining)
        if len(bs) > 2:
            continue
        if len(bs) == 2:
            x, y = sorted(bs)
            rem = remaining - bs
            stack.append((left + (x,), right + (y,), rem))
            stack.append((left + (y,), right + (x,), rem))
        else:
            (x,) = bs
            rem = remaining - bs
            stack.append((left + (x,), right, rem))
            stack.append((left, right + (x,), rem))
    if not found:
        return None
    return Witness("axis", min(found))


def enumerate_axes(m: int) -> list[tuple[int, ...]]:
    """All axes up to reversal (canonical form: first endpoint < last endpoint)."""
    if m == 1:
        return [(0,)]
    return [p for p in itertools.permutations(range(m)) if p[0] < p[-1]]


def sp_orders_for_axis(axis: Sequence[int]) -> frozenset:
    """The 2^(m-1) orders single-peaked w.r.t. ``axis``."""
    m = len(axis)
    out = set()
    for bits in itertools.product((0, 1), repeat=m - 1):
        lo, hi = 0, m - 1
        bottom_up = []
        for b in bits:
            if b == 0:
                bottom_up.append(axis[lo])
                lo += 1
            else:
                bottom_up.append(axis[hi])
                hi -= 1
        bottom_up.append(axis[lo])
        out.add(tuple(reversed(bottom_up)))
    return frozenset(out)


def _sp_maximal_sets(m: int) -> Iterator[tuple[Witness, frozenset]]:
    for axis in enumerate_axes(m):
        yield Witness("axis", axis), sp_orders_for_axis(axis)


def sp_orders_batch(axis, count: int, rng: np.random.Generator) -> np.ndarray:
    """(count, m) orders single-peaked w.r.t. ``axis``, i.i.d. uniform (vectorized
    left/right endpoint elimination)."""
    ax = np.asarray(axis, dtype=np.int64)
    m = ax.shape[0]
    out = np.empty((count, m), dtype=np.int64)
    if m == 1:
        out[:] = ax[0]
        return out
    bits = rng.integers(0, 2, size=(count, m - 1))
    lo = np.zeros(count, dtype=np.int64)
    hi = np.full(count, m - 1, dtype=np.int64)
    for step in range(m - 1):
        left = bits[:, step] == 0
        out[:, m - 1 - step] = ax[np.where(left, lo, hi)]
        lo += left
        hi -= ~left
    out[:, 0] = ax[lo]
    return out


def _sp_sampler(m: int, rng: np.random.Generator) -> InDomainSampler:
    axis = tuple(int(a) for a in rng.permutation(m))
    return InDomainSampler(
        witness=axis,
        draw=lambda r, _axis=axis: _sp_order_ids(_axis, r),
        contains=lambda o, _axis=axis: order_is_sp(o, _axis),
        draw_batch=lambda r, count, _axis=axis: sp_orders_batch(_axis, count, r),
    )


def con_single_peaked(m: int) -> Fraction:
    if m < 1:
        raise ProfileFormatError("content is defined for m >= 1")
    return Fraction(2 ** (m - 1), math.factorial(m))


# ---------------------------------------------------------------------------
# Single-crossing
# ---------------------------------------------------------------------------


def _pair_matrix(orders: Sequence[Sequence[int]], m: int) -> np.ndarray:
    """(k, m, m) booleans: entry [i, x, y] says order i prefers x over y."""
    arr = np.asarray(orders, dtype=np.int64).reshape(len(orders), m)
    pos = np.argsort(arr, axis=1)
    return pos[:, :, None] < pos[:, None, :]


def sc_order_sequence_ok(orders: Sequence[Sequence[int]], m: int) -> bool:
    """True iff along the given sequence every alternative pair flips at most once."""
    if len(orders) <= 2:
        return True
    prefers = _pair_matrix(orders, m)
    flips = (prefers[1:] != prefers[:-1]).sum(axis=0)
    return bool((flips <= 1).all())


def is_sc_wrt_voter_order(profile: Profile, voter_order: Sequence[int]) -> bool:
    seq = [tuple(profile.order_array()[i]) for i in voter_order]
    return sc_order_sequence_ok(seq, profile.m)


def recognize_sc(profile: Profile) -> Witness | None:
    """Witness voter order if the profile is single-crossing, else None.

    For each distinct order taken as a potential endpoint, sorts the distinct
    orders by pairwise-swap count from it and verifies the crossing condition.
    In a valid single-crossing sequence the disagreement sets against an
    endpoint are nested, so the sort recovers the sequence exactly.
    """
    m = profile.m
    distinct, _, inverse = profile.distinct()
    agents_of = [np.flatnonzero(inverse == d) for d in range(len(distinct))]
    prefers = _pair_matrix(distinct, m)
    iu = np.triu_indices(m, k=1)
    candidates: list[tuple[int, ...]] = []
    for p in range(len(distinct)):
        swap_dist = (prefers[:, iu[0], iu[1]] != prefers[p, iu[0], iu[1]]).sum(axis=1)
        seq = sorted(range(len(distinct)), key=lambda d: (int(swap_dist[d]), int(agents_of[d][0])))
        if not sc_order_sequence_ok([distinct[d] for d in seq], m):
            continue
        for s in (seq, seq[::-1]):
            voters = tuple(int(i) for d in s for i in agents_of[d])
            candidates.append(voters)
    if not candidates:
        return None
    return Witness("voter-order", min(candidates))


def swap_chain(base: Sequence[int]) -> list[tuple[int, ...]]:
    """A maximal single-crossing chain: base to reversed(base) by adjacent swaps,
    each alternative pair flipping exactly once (C(m,2)+1 orders)."""
    cur = list(base)
    chain = [tuple(cur)]
    m = len(cur)
    for i in range(1, m):
        val = base[i]
        j = cur.index(val)
        while j > 0:
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            chain.append(tuple(cur))
            j -= 1
    return chain


def _sc_sampler(m: int, rng: np.random.Generator) -> InDomainSampler:
    base = tuple(int(a) for a in rng.permutation(m))
    chain = swap_chain(base)
    members = frozenset(chain)
    chain_arr = np.asarray(chain, dtype=np.int64)
    return InDomainSampler(
        witness=base,
        draw=lambda r, _ch=chain: _ch[int(r.integers(0, len(_ch)))],
        contains=lambda o, _mem=members: o in _mem,
        draw_batch=lambda r, count, _arr=chain_arr: _arr[r.integers(0, _arr.shape[0], size=count)],
    )


def con_single_crossing(m: int) -> Fraction:
    if m < 1:
        raise ProfileFormatError("content is defined for m >= 1")
    return Fraction(math.comb(m, 2) + 1, math.factorial(m))


# ---------------------------------------------------------------------------
# Content / residue arithmetic
# ---------------------------------------------------------------------------


def con_value(domain: DomainSpec, m: int) -> Fraction:
    if m < 1:
        raise ProfileFormatError("content is defined for m >= 1")
    value = Fraction(domain.con(m))
    if not 0 <= value <= 1:
        raise ProfileFormatError(f"con({m}) = {value} outside [0, 1]")
    return value


def res_value(domain: DomainSpec, m: int) -> Fraction:
    return 1 - con_value(domain, m)


def m0(domain: DomainSpec, cap: int = _SEARCH_CAP) -> int:
    """Smallest m with con(m) < 1 (the first size at which the domain excludes anything)."""
    for m in range(1, cap + 1):
        if con_value(domain, m) < 1:
            return m
    raise NotFoundWithinCapError(f"con stays 1 up to m={cap} for domain {domain.name!r}")


def m_eps(domain: DomainSpec, eps_v, cap: int = _SEARCH_CAP) -> int:
    """Smallest m with res(m) > eps_v."""
    eps = exact_frac(eps_v)
    if not 0 <= eps < 1:
        raise ProfileFormatError("eps_v must lie in [0, 1)")
    for m in range(1, cap + 1):
        if res_value(domain, m) > eps:
            return m
    raise NotFoundWithinCapError(
        f"res never exceeds {eps} up to m={cap} for domain {domain.name!r}"
    )


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


def single_peaked_domain() -> DomainSpec:
    return DomainSpec(
        name="single-peaked",
        recognize=recognize_sp,
        con=con_single_peaked,
        in_domain_sampler=_sp_sampler,
        enumerate_maximal_sets=_sp_maximal_sets,
    )


def single_crossing_domain() -> DomainSpec:
    return DomainSpec(
        name="single-crossing",
        recognize=recognize_sc,
        con=con_single_crossing,
        in_domain_sampler=_sc_sampler,
    )


DOMAINS: dict[str, Callable[[], DomainSpec]] = {
    "single-peaked": single_peaked_domain,
    "single-crossing": single_crossing_domain,
}


def get_domain(name: str) -> DomainSpec:
    try:
        return DOMAINS[name]()
    except KeyError:
        raise ProfileFormatError(
            f"unknown domain {name!r}; available: {', '.join(sorted(DOMAINS))}"
        ) from None


# ---------------------------------------------------------------------------
# Census search (recognizer-driven, no content formula involved)
# ---------------------------------------------------------------------------


def max_distinct_accepted(domain: DomainSpec, m: int) -> int:
    """Size of the largest set of distinct orders accepted as one profile.

    Branch and bound over subsets of all m! orders, using only the recognizer:
    acceptance is downward closed, so an infeasible prefix prunes its subtree.
    """
    orders = all_orders(m)
    best = 0

    def feasible(sel: list[tuple[int, ...]]) -> bool:
        return domain.recognize(Profile.from_orders(sel)) is not None

    def dfs(idx: int, kept: list[tuple[int, ...]]) -> None:
        nonlocal best
        best = max(best, len(kept))
        if idx == len(orders) or len(kept) + (len(orders) - idx) <= best:
            return
        cand = kept + [orders[idx]]
        if feasible(cand):
            dfs(idx + 1, cand)
        dfs(idx + 1, kept)

    dfs(0, [])
    return best
