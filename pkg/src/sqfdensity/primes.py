"""Prime generation, residue classes of primes, and small-integer arithmetic.

Sieving is segmented: ``[0, limit]`` is processed in blocks of
``SEGMENT_SIZE`` flags so the working set stays cache-sized.  Isolated
primality queries use a deterministic Miller-Rabin test valid for all
64-bit inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

SEGMENT_SIZE = 1 << 18

# Deterministic witness set for n < 2**64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class ResidueClass:
    """The integers congruent to ``residue`` modulo ``modulus``."""

    modulus: int
    residue: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(
                f"residue must satisfy 0 <= r < m, got r={self.residue}, m={self.modulus}"
            )

    @property
    def is_coprime(self) -> bool:
        return math.gcd(self.residue, self.modulus) == 1

    def contains(self, n: int) -> bool:
        return n % self.modulus == self.residue

    def __str__(self) -> str:
        return f"{self.residue} mod {self.modulus}"


@dataclass(frozen=True)
class PrimeList:
    """All primes up to ``limit`` (inclusive), strictly increasing."""

    limit: int
    primes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.primes)

    def __getitem__(self, i):
        return self.primes[i]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.primes, dtype=np.int64)


def _small_sieve(n: int) -> np.ndarray:
    """Plain Eratosthenes; returns primes <= n as int64."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=np.bool_)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def sieve_segment(lo: int, hi: int, base_primes: np.ndarray) -> np.ndarray:
    """Return the primes in ``[lo, hi)``.

    ``base_primes`` must contain every prime ``<= isqrt(hi - 1)``.
    """
    lo = max(lo, 2)
    if hi <= lo:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(hi - lo, dtype=np.bool_)
    for p in base_primes:
        p = int(p)
        sq = p * p
        if sq >= hi:
            break
        start = max(sq, -(-lo // p) * p)
        flags[start - lo :: p] = False
    return np.flatnonzero(flags).astype(np.int64) + lo


def iter_prime_segments(
    limit: int, start: int = 0, segment_size: int = SEGMENT_SIZE
) -> Iterator[np.ndarray]:
    """Yield arrays of the primes in ``[start, limit]``, one block at a time."""
    if limit < 2:
        return
    base = _small_sieve(math.isqrt(limit))
    lo = max(start, 0)
    while lo <= limit:
        hi = min(lo + segment_size, limit + 1)
        yield sieve_segment(lo, hi, base)
        lo = hi


def prime_array(limit: int) -> np.ndarray:
    """Primes ``<= limit`` as an int64 numpy array."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    if limit <= SEGMENT_SIZE:
        return _small_sieve(limit)
    return np.concatenate(list(iter_prime_segments(limit)))


def primes_up_to(limit: int) -> PrimeList:
    if limit < 0:
        raise ValueError(f"limit must be >= 0, got {limit}")
    return PrimeList(limit, tuple(int(p) for p in prime_array(limit)))


def class_prime_array(c: ResidueClass, limit: int) -> np.ndarray:
    ps = prime_array(limit)
    return ps[ps % c.modulus == c.residue]


def primes_in_class(c: ResidueClass, limit: int) -> PrimeList:
    """Primes ``p <= limit`` with ``p % m == r``.

    Classes with ``gcd(r, m) > 1`` are allowed here; they hold at most one
    prime.
    """
    if limit < 0:
        raise ValueError(f"limit must be >= 0, got {limit}")
    return PrimeList(limit, tuple(int(p) for p in class_prime_array(c, limit)))


def is_prime(n: int) -> bool:
    """Deterministic primality test for ``n < 2**64``."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    if n >= 1 << 64:
        raise ValueError("is_prime is deterministic only below 2**64")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def smallest_prime_factor(n: int) -> int:
    if n < 2:
        raise ValueError(f"smallest_prime_factor is undefined for n={n}")
    if n % 2 == 0:
        return 2
    if n % 3 == 0:
        return 3
    # 6k +- 1 wheel
    d = 5
    while d * d <= n:
        if n % d == 0:
            return d
        if n % (d + 2) == 0:
            return d + 2
        d += 6
    return n


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division, ``{prime: exponent}``."""
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    out: dict[int, int] = {}
    while n > 1:
        p = smallest_prime_factor(n)
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out[p] = e
    return out


def is_squarefree(n: int) -> bool:
    if n < 1:
        raise ValueError(f"is_squarefree requires n >= 1, got {n}")
    return all(e == 1 for e in factorize(n).values())


def totient(m: int) -> int:
    if m < 1:
        raise ValueError(f"totient requires m >= 1, got {m}")
    result = m
    for p in factorize(m):
        result -= result // p
    return result

