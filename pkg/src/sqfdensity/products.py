"""Partial products of ``prod p/(1+p)`` over a set of primes.

When the forbidden primes ``P`` form an infinite set, the density factor
``prod_{p in P} p/(1+p)`` is the limit of the partial products taken over
``p <= M``.  For a residue class ``r mod m`` with ``gcd(r, m) = 1`` that limit
is 0, because ``sum 1/p`` over the class diverges like ``log log M / phi(m)``
and ``-log(p/(1+p)) > 1/(2p)``.

Exact :class:`~fractions.Fraction` partials are kept for the first
``EXACT_FACTORS`` factors; after that the trace continues in log space only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .density import SIX_OVER_PI2, ConstraintError
from .primes import ResidueClass, class_prime_array, is_prime, totient

EXACT_FACTORS = 10_000
DEFAULT_TRUNCATION_CAP = 10**9

Selector = Union[Sequence[int], ResidueClass]


class TruncationCapError(RuntimeError):
    """The epsilon search exceeded its cutoff cap without crossing."""


@dataclass(frozen=True)
class TraceEntry:
    prime: int
    partial: Fraction | None  # None once past EXACT_FACTORS
    log_partial: float


@dataclass(frozen=True)
class ProductTrace:
    selector: tuple[int, ...] | ResidueClass
    limit: int
    entries: tuple[TraceEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def primes(self) -> list[int]:
        return [e.prime for e in self.entries]

    @property
    def final_partial(self) -> Fraction | None:
        """Exact value of the full product up to ``limit`` (1 if empty).

        ``None`` when the trace is longer than ``EXACT_FACTORS``.
        """
        if not self.entries:
            return Fraction(1)
        return self.entries[-1].partial

    @property
    def final_log(self) -> float:
        return self.entries[-1].log_partial if self.entries else 0.0


def _normalize(selector: Selector) -> tuple[int, ...] | ResidueClass:
    if isinstance(selector, ResidueClass):
        if not selector.is_coprime:
            raise ConstraintError(
                f"residue class {selector} needs gcd(r, m) = 1 "
                f"(gcd is {math.gcd(selector.residue, selector.modulus)})"
            )
        return selector
    primes = sorted(int(p) for p in selector)
    if len(set(primes)) != len(primes):
        raise ConstraintError("explicit selector contains duplicates")
    bad = [p for p in primes if not is_prime(p)]
    if bad:
        raise ConstraintError(f"explicit selector contains non-primes {bad}")
    return tuple(primes)


def selector_primes(selector: Selector, M: int) -> np.ndarray:
    """The selector's primes ``<= M`` in increasing order (int64)."""
    sel = _normalize(selector)
    if isinstance(sel, ResidueClass):
        return class_prime_array(sel, M)
    return np.asarray([p for p in sel if p <= M], dtype=np.int64)


def _first_primes(sel: tuple[int, ...] | ResidueClass, count: int) -> list[int]:
    if isinstance(sel, tuple):
        if count > len(sel):
            raise ValueError(f"selector has only {len(sel)} primes, {count} requested")
        return list(sel[:count])
    if count == 0:
        return []
    # Dirichlet: roughly phi(m)/(count * log) spacing; just double until enough.
    limit = max(64, 2 * count * sel.modulus)
    while True:
        ps = class_prime_array(sel, limit)
        if len(ps) >= count:
            return [int(p) for p in ps[:count]]
        limit *= 2


def log_factors(primes: np.ndarray) -> np.ndarray:
    """``log(p/(1+p))`` for each prime."""
    return -np.log1p(1.0 / primes.astype(np.float64))


def partial_product(selector: Selector, M: int) -> ProductTrace:
    if M < 0:
        raise ValueError(f"M must be >= 0, got {M}")
    sel = _normalize(selector)
    primes = selector_primes(sel, M)
    entries = []
    exact = Fraction(1)
    # Neumaier-compensated running sum keeps log_partial within a few ulps.
    total = comp = 0.0
    for k, p in enumerate(primes.tolist()):
        term = -math.log1p(1.0 / p)
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
        if k < EXACT_FACTORS:
            exact *= Fraction(p, p + 1)
            entries.append(TraceEntry(p, exact, total + comp))
        else:
            entries.append(TraceEntry(p, None, total + comp))
    return ProductTrace(sel, M, tuple(entries))


def log_partial_product(selector: Selector, M: int) -> float:
    """``log prod_{p <= M} p/(1+p)`` over the selector, float only."""
    return math.fsum(log_factors(selector_primes(selector, M)).tolist())


def telescoping_check(selector: Selector, L: int) -> tuple[Fraction, Fraction]:
    """Both sides of ``sum_k 1/(1+p_k) prod_{i<k} p_i/(1+p_i) = 1 - prod_{i<=L} p_i/(1+p_i)``.

    The sum side accumulates the running prefix product; the product side is
    computed from scratch.
    """
    if L < 0:
        raise ValueError(f"L must be >= 0, got {L}")
    ps = _first_primes(_normalize(selector), L)
    sum_side = Fraction(0)
    prefix = Fraction(1)
    for p in ps:
        sum_side += Fraction(1, 1 + p) * prefix
        prefix *= Fraction(p, 1 + p)
    product_side = 1 - math.prod((Fraction(p, 1 + p) for p in ps), start=Fraction(1))
    return sum_side, product_side


def log_product_bound(selector: Selector, M: int) -> tuple[float, float]:
    """Return ``(-log prod p/(1+p), 1/2 * sum 1/p)`` over the selector's primes ``<= M``.

    Termwise ``log(1 + 1/p) > 1/(1+p) > 1/(2p)``, so the first value is
    strictly larger whenever the selector has a prime ``<= M``.
    """
    if M < 0:
        raise ValueError(f"M must be >= 0, got {M}")
    ps = selector_primes(selector, M).tolist()
    neg_log = math.fsum(math.log1p(1.0 / p) for p in ps)
    half_recip = 0.5 * math.fsum(1.0 / p for p in ps)
    return neg_log, half_recip


def truncation_for_epsilon(
    selector: ResidueClass, eps: float, cap: int = DEFAULT_TRUNCATION_CAP
) -> tuple[int, float]:
    """Least cutoff ``M`` with ``6/pi^2 * prod_{p <= M, p in class} p/(1+p) <= eps``.

    The enumeration bound doubles until the bound is met, then the crossing
    prime is located by binary search over the cumulative log products.
    Returns ``(M, achieved_bound)``.
    """
    if not isinstance(selector, ResidueClass):
        raise TypeError("truncation_for_epsilon needs a ResidueClass selector")
    sel = _normalize(selector)
    if not 0 < eps < SIX_OVER_PI2:
        raise ValueError(f"eps must satisfy 0 < eps < 6/pi^2, got {eps}")
    target = math.log(eps / SIX_OVER_PI2)
    limit = 1 << 10
    while True:
        limit = min(limit, cap)
        ps = class_prime_array(sel, limit)
        cum = np.cumsum(log_factors(ps))
        if len(cum) and cum[-1] <= target:
            # cum is strictly decreasing; find the first index at or below target
            i = int(np.searchsorted(-cum, -target, side="left"))
            return int(ps[i]), SIX_OVER_PI2 * math.exp(cum[i])
        if limit >= cap:
            reached = SIX_OVER_PI2 * math.exp(cum[-1]) if len(cum) else SIX_OVER_PI2
            raise TruncationCapError(
                f"no cutoff M <= {cap} brings 6/pi^2 * partial product below {eps} "
                f"for class {sel}; bound at M={cap} is {reached:.6g}"
            )
        limit *= 2


def ap_reciprocal_sum(c: ResidueClass, M: int) -> tuple[float, float, float]:
    """Return ``(sum 1/p, log log M / phi(m), difference)`` over class primes ``p <= M``."""
    sel = _normalize(c)
    if M < 3:
        raise ValueError(f"M must be >= 3 for log log M, got {M}")
    s = math.fsum((1.0 / class_prime_array(sel, M)).tolist())
    ref = math.log(math.log(M)) / totient(sel.modulus)
    return s, ref, s - ref
