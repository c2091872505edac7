"""Exact densities of square-free numbers with prescribed prime divisors.

For disjoint prime sets ``T`` (finite, every prime must divide) and ``P``
(no prime may divide), the square-free numbers ``A(T, P)`` have natural
density::

    6/pi^2 * prod_{p in T} 1/(1+p) * prod_{p in P} p/(1+p)

The rational part is kept exact as a :class:`fractions.Fraction`; the
constant ``6/pi^2`` is applied only when a float is requested.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Union

from .primes import ResidueClass, is_prime

SIX_OVER_PI2 = 6.0 / math.pi**2


class ConstraintError(ValueError):
    """A prime constraint is malformed (composite entry, overlap, ...)."""


class ResidueClassDensityError(ConstraintError):
    """Raised when an exact density is requested for a residue-class ``P``.

    The product over an infinite class of primes is a limit; use
    :func:`sqfdensity.products.partial_product` instead.
    """


Forbidden = Union[frozenset, ResidueClass]


def _prime_set(values: Iterable[int], name: str) -> frozenset:
    values = list(values)
    for v in values:
        if not isinstance(v, int) or isinstance(v, bool):
            raise ConstraintError(f"{name} entries must be integers, got {v!r}")
        if not is_prime(v):
            raise ConstraintError(f"{name} contains non-prime {v}")
    out = frozenset(values)
    if len(out) != len(values):
        raise ConstraintError(f"{name} contains duplicate entries")
    return out


@dataclass(frozen=True)
class PrimeConstraint:
    """The pair ``(T, P)``: primes that must divide, primes that must not.

    ``P`` is either a finite frozenset of primes or a :class:`ResidueClass`
    standing for every prime in that class.
    """

    T: frozenset = field(default_factory=frozenset)
    P: Forbidden = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "T", _prime_set(self.T, "T"))
        if isinstance(self.P, ResidueClass):
            bad = sorted(t for t in self.T if self.P.contains(t))
            if bad:
                raise ConstraintError(
                    f"T and P must be disjoint: {bad} lie in the class {self.P}"
                )
        else:
            object.__setattr__(self, "P", _prime_set(self.P, "P"))
            overlap = self.T & self.P
            if overlap:
                raise ConstraintError(f"T and P must be disjoint, both contain {sorted(overlap)}")

    @property
    def is_class(self) -> bool:
        return isinstance(self.P, ResidueClass)

    @property
    def t_product(self) -> int:
        """``s = prod T``; every member of ``A(T, P)`` is a multiple of it."""
        return math.prod(self.T)

    def forbids(self, p: int) -> bool:
        if self.is_class:
            return self.P.contains(p)
        return p in self.P

    def to_dict(self) -> dict:
        if self.is_class:
            p = {"kind": "class", "m": self.P.modulus, "r": self.P.residue}
        else:
            p = {"kind": "explicit", "primes": sorted(self.P)}
        return {"T": sorted(self.T), "P": p}

    def __str__(self) -> str:
        t = "{" + ",".join(map(str, sorted(self.T))) + "}"
        if self.is_class:
            return f"T={t} P=[{self.P}]"
        return f"T={t} P={{" + ",".join(map(str, sorted(self.P))) + "}"


@dataclass(frozen=True)
class DensityValue:
    factor: Fraction
    value: float

    @property
    def among_squarefree(self) -> Fraction:
        """Proportion of square-free numbers lying in ``A(T, P)``."""
        return self.factor


def _require_explicit(c: PrimeConstraint) -> None:
    if c.is_class:
        raise ResidueClassDensityError(
            f"P is the residue class {c.P}; its product is a limit, "
            "see sqfdensity.products.partial_product / truncation_for_epsilon"
        )


def density_factor(c: PrimeConstraint) -> Fraction:
    _require_explicit(c)
    f = Fraction(1)
    for t in c.T:
        f *= Fraction(1, 1 + t)
    for p in c.P:
        f *= Fraction(p, 1 + p)
    return f


def density(c: PrimeConstraint) -> DensityValue:
    f = density_factor(c)
    return DensityValue(f, SIX_OVER_PI2 * float(f))


def divisor_sum_check(T: Iterable[int]) -> tuple[int, int]:
    """Return ``(sum over subsets S of T of prod S, prod over T of (1+p))``.

    The two sides are computed by different routes (subset enumeration vs a
    product) and must agree.
    """
    T = sorted(_prime_set(T, "T"))
    lhs = sum(math.prod(S) for k in range(len(T) + 1) for S in combinations(T, k))
    rhs = math.prod(1 + p for p in T)
    return lhs, rhs
