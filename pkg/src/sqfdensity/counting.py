"""Counting ``A(T, P)[x]``, the square-free numbers ``n <= x`` in ``A(T, P)``.

Three independent routes:

* :func:`count_naive` factors every ``n <= x`` (oracle, ``x <= 10**6``);
* :func:`count_sieve` is a segmented sieve.  Multiplication by
  ``s = prod T`` is a bijection from the square-free ``k <= x/s`` coprime to
  ``s`` onto the members of ``A(T, .)`` up to ``x``, so the kernel only ever
  sieves ``k <= x // s`` with every prime of ``T`` added to the forbidden set;
* :func:`count_squarefree_mobius` evaluates ``sum_{d <= sqrt x} mu(d) floor(x/d^2)``
  for the unconstrained case.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .density import SIX_OVER_PI2, ConstraintError, PrimeConstraint, density
from .primes import (
    SEGMENT_SIZE,
    ResidueClass,
    _small_sieve,
    class_prime_array,
    factorize,
    prime_array,
    sieve_segment,
)
from .products import log_partial_product

NAIVE_MAX_X = 10**6
MOBIUS_MAX_X = 10**14
X_CAP_ENV = "SQFDENSITY_MAX_X"
DEFAULT_X_CAP = 10**10

# Strikers with step <= this use strided slices; larger ones go to buckets.
SLICE_STEP_MAX = 1 << 12
MIN_SEGMENT = 1 << 8
MAX_SEGMENT = 1 << 26


class SieveConfigError(ValueError):
    """The segment configuration cannot serve the requested range."""


def x_cap() -> int:
    raw = os.environ.get(X_CAP_ENV)
    return int(raw) if raw else DEFAULT_X_CAP


@dataclass(frozen=True)
class CountQuery:
    x: int
    constraint: PrimeConstraint = PrimeConstraint()

    def __post_init__(self) -> None:
        if not isinstance(self.x, (int, np.integer)) or self.x < 0:
            raise ValueError(f"x must be a non-negative integer, got {self.x!r}")
        object.__setattr__(self, "x", int(self.x))


@dataclass(frozen=True)
class CountReport:
    query: CountQuery
    count: int
    ratio: float
    predicted: float
    deviation: float
    # True when P is a residue class: predicted is then the (6/pi^2) *
    # partial-product upper envelope at M = x, not a limit.
    predicted_is_bound: bool = False

    @property
    def x(self) -> int:
        return self.query.x


# --------------------------------------------------------------------------
# naive oracle


def in_A(n: int, c: PrimeConstraint) -> bool:
    """Membership of ``n`` in ``A(T, P)`` by full factorization."""
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return False
    if not c.T.issubset(f):
        return False
    return not any(c.forbids(p) for p in f)


def count_naive(q: CountQuery) -> int:
    if q.x > NAIVE_MAX_X:
        raise ValueError(f"count_naive is an oracle for x <= {NAIVE_MAX_X}, got {q.x}")
    return sum(1 for n in range(1, q.x + 1) if in_A(n, q.constraint))


# --------------------------------------------------------------------------
# segmented sieve


class _Buckets:
    """Large-step strikers, filed by the segment holding their next multiple."""

    def __init__(self, origin: int, end: int, seg: int):
        self.origin, self.end, self.seg = origin, end, seg
        self._slots: dict[int, list[tuple[np.ndarray, np.ndarray]]] = {}

    def add(self, nxt: np.ndarray, step: np.ndarray) -> None:
        keep = nxt < self.end
        nxt, step = nxt[keep], step[keep]
        if not nxt.size:
            return
        idx = (nxt - self.origin) // self.seg
        order = np.argsort(idx, kind="stable")
        idx, nxt, step = idx[order], nxt[order], step[order]
        cuts = np.flatnonzero(np.diff(idx)) + 1
        starts = np.concatenate(([0], cuts))
        for i, a, b in zip(idx[starts].tolist(), starts.tolist(), [*cuts.tolist(), len(idx)]):
            self._slots.setdefault(i, []).append((nxt[a:b].copy(), step[a:b].copy()))

    def pop(self, i: int) -> tuple[np.ndarray, np.ndarray] | None:
        parts = self._slots.pop(i, None)
        if not parts:
            return None
        if len(parts) == 1:
            return parts[0]
        return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def _count_range(
    lo: int,
    hi: int,
    forbidden: tuple[int, ...],
    cls: ResidueClass | None,
    seg: int,
) -> int:
    """Count square-free ``k`` in ``[lo, hi)`` divisible by no forbidden prime.

    With ``cls`` set, every prime of that class is forbidden as well.
    """
    if hi <= lo:
        return 0
    base = _small_sieve(math.isqrt(hi - 1))
    small: list[int] = []

    # Strikers known up front (prime squares, explicit primes) live in one
    # dense array pair scanned every segment.  Class primes found while
    # sieving are filed into buckets instead, since there can be ~x/log x.
    strikes = [base * base, np.asarray(forbidden, dtype=np.int64)]
    if cls is not None and lo > 2:
        strikes.append(class_prime_array(cls, lo - 1))
    steps = np.unique(np.concatenate(strikes))
    small.extend(steps[steps <= SLICE_STEP_MAX].tolist())
    dense_step = steps[steps > SLICE_STEP_MAX]
    dense_next = -(-lo // dense_step) * dense_step
    buckets = _Buckets(lo, hi, seg)

    total = 0
    for i, s_lo in enumerate(range(lo, hi, seg)):
        s_hi = min(s_lo + seg, hi)
        if cls is not None:
            ps = sieve_segment(s_lo, s_hi, base)
            ps = ps[ps % cls.modulus == cls.residue]
            small.extend(ps[ps <= SLICE_STEP_MAX].tolist())
            big = ps[ps > SLICE_STEP_MAX]
            if big.size:
                buckets.add(big, big)
        mask = np.ones(s_hi - s_lo, dtype=np.bool_)
        for st in small:
            mask[-s_lo % st :: st] = False

        hit = np.flatnonzero(dense_next < s_hi)
        while hit.size:
            mask[dense_next[hit] - s_lo] = False
            dense_next[hit] += dense_step[hit]
            hit = hit[dense_next[hit] < s_hi]

        got = buckets.pop(i)
        if got is not None:
            nxt, step = got
            spill_n, spill_s = [], []
            while nxt.size:
                mask[nxt - s_lo] = False
                nxt = nxt + step
                inside = nxt < s_hi
                spill_n.append(nxt[~inside])
                spill_s.append(step[~inside])
                nxt, step = nxt[inside], step[inside]
            buckets.add(np.concatenate(spill_n), np.concatenate(spill_s))
        total += int(np.count_nonzero(mask))
    return total


def _reduced(q: CountQuery) -> tuple[int, tuple[int, ...], ResidueClass | None]:
    c = q.constraint
    bound = q.x // c.t_product
    if c.is_class:
        return bound, tuple(sorted(c.T)), c.P
    return bound, tuple(sorted(c.T | c.P)), None


def count_sieve(
    q: CountQuery,
    *,
    workers: int = 1,
    segment_size: int = SEGMENT_SIZE,
) -> int:
    """Segmented-sieve count of ``A(T, P)[x]``.

    ``workers > 1`` splits ``[1, x/s]`` into contiguous chunks counted in
    separate processes; the sum does not depend on the split.
    """
    cap = x_cap()
    if q.x > cap:
        raise ValueError(f"x={q.x} exceeds the counting cap {cap} (set {X_CAP_ENV})")
    if not MIN_SEGMENT <= segment_size <= MAX_SEGMENT:
        raise SieveConfigError(
            f"segment size {segment_size} outside [{MIN_SEGMENT}, {MAX_SEGMENT}]; "
            "cannot hold a sieving block"
        )
    bound, forbidden, cls = _reduced(q)
    if bound < 1:
        return 0
    end = bound + 1
    if workers <= 1 or bound < 4 * segment_size:
        return _count_range(1, end, forbidden, cls, segment_size)
    nseg = -(-bound // segment_size)
    per = -(-nseg // workers)
    edges = [1 + k * per * segment_size for k in range(workers)] + [end]
    edges = sorted({min(e, end) for e in edges})
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futs = [
            pool.submit(_count_range, a, b, forbidden, cls, segment_size)
            for a, b in zip(edges, edges[1:])
        ]
        return sum(f.result() for f in futs)


# --------------------------------------------------------------------------
# Moebius route


def mobius_array(n: int) -> np.ndarray:
    """``mu(0..n)`` as int8 (``mu(0)`` set to 0)."""
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    for p in prime_array(n).tolist():
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu


def count_squarefree_mobius(x: int) -> int:
    if x < 0 or x > MOBIUS_MAX_X:
        raise ValueError(f"count_squarefree_mobius needs 0 <= x <= {MOBIUS_MAX_X}, got {x}")
    r = math.isqrt(x)
    if r == 0:
        return 0
    mu = mobius_array(r)[1:].astype(np.int64)
    d = np.arange(1, r + 1, dtype=np.int64)
    return int(np.dot(mu, x // (d * d)))


# --------------------------------------------------------------------------
# identities


def _counter(method: str):
    if method == "sieve":
        return count_sieve
    if method == "naive":
        return count_naive
    raise ValueError(f"unknown counting method {method!r}")


def bijection_identity(
    x: int,
    T: Iterable[int],
    S: Iterable[int],
    P: Iterable[int] = (),
    *,
    method: str = "sieve",
) -> tuple[int, int]:
    """Return ``(A(T, S u P)[x], A(T u S, P)[x*s])`` with ``s = prod S``."""
    T, S, P = frozenset(T), frozenset(S), frozenset(P)
    if not S:
        raise ConstraintError("S must be nonempty")
    if T & S or S & P or T & P:
        raise ConstraintError("T, S and P must be pairwise disjoint")
    count = _counter(method)
    lhs = count(CountQuery(x, PrimeConstraint(T, S | P)))
    rhs = count(CountQuery(x * math.prod(S), PrimeConstraint(T | S, P)))
    return lhs, rhs


def partition_identity(
    x: int, T: Iterable[int], *, method: str = "sieve"
) -> tuple[int, list[int]]:
    """Return ``A[x]`` and the list ``A(T \\ S, S)[x]`` over all subsets ``S`` of ``T``."""
    T = sorted(PrimeConstraint(T).T)
    if len(T) > 10:
        raise ValueError("partition_identity enumerates 2^|T| subsets; |T| <= 10")
    count = _counter(method)
    total = count(CountQuery(x))
    parts = []
    for k in range(len(T) + 1):
        for S in combinations(T, k):
            rest = frozenset(T) - frozenset(S)
            parts.append(count(CountQuery(x, PrimeConstraint(rest, S))))
    return total, parts


def induction_identity(
    x: int, T: Iterable[int], p: int, *, method: str = "sieve"
) -> tuple[int, int]:
    """Return ``(A(T, {})[x/p], E(x/p) + E(x))`` where ``E = A(T u {p}, {})[.]``."""
    T = frozenset(T)
    if p in T:
        raise ConstraintError(f"p={p} must not lie in T")
    count = _counter(method)
    lhs = count(CountQuery(x // p, PrimeConstraint(T)))
    with_p = PrimeConstraint(T | {p})
    rhs = count(CountQuery(x // p, with_p)) + count(CountQuery(x, with_p))
    return lhs, rhs


# --------------------------------------------------------------------------
# reports


def predicted_density(c: PrimeConstraint, x: int) -> tuple[float, bool]:
    """Limit density for explicit ``P``; for a class, the bound at ``M = x``."""
    if not c.is_class:
        return density(c).value, False
    t_part = math.prod(1.0 / (1 + t) for t in c.T)
    sel = c.P if c.P.is_coprime else class_prime_array(c.P, x).tolist()
    log_tail = log_partial_product(sel, x) if x >= 2 else 0.0
    return SIX_OVER_PI2 * t_part * math.exp(log_tail), True


def make_report(q: CountQuery, count: int) -> CountReport:
    ratio = count / q.x if q.x else 0.0
    predicted, is_bound = predicted_density(q.constraint, q.x)
    return CountReport(q, count, ratio, predicted, ratio - predicted, is_bound)


def empirical_density(q: CountQuery, *, workers: int = 1) -> CountReport:
    return make_report(q, count_sieve(q, workers=workers))
