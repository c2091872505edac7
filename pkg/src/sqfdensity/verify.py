"""Identity suites run by ``sqfdensity verify``.

Every check compares two independently computed quantities that must be
equal exactly.  Random instances come from a fixed seed, so a suite is
reproducible.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator

from .counting import (
    CountQuery,
    bijection_identity,
    count_naive,
    count_sieve,
    count_squarefree_mobius,
    induction_identity,
    partition_identity,
)
from .density import PrimeConstraint, divisor_sum_check
from .primes import ResidueClass, primes_up_to
from .products import log_product_bound, partial_product, telescoping_check

SMALL_PRIMES = primes_up_to(50).primes


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    ok: bool
    detail: str


def random_constraint(rng: random.Random, max_modulus: int = 12) -> PrimeConstraint:
    """Random ``(T, P)`` with ``|T|, |P| <= 3``; ``P`` explicit or a residue class."""
    T = set(rng.sample(SMALL_PRIMES[:8], rng.randint(0, 3)))
    if rng.random() < 0.5:
        m = rng.randint(1, max_modulus)
        r = rng.randrange(m)
        cls = ResidueClass(m, r)
        T = {t for t in T if not cls.contains(t)}
        return PrimeConstraint(T, cls)
    pool = [p for p in SMALL_PRIMES[:10] if p not in T]
    return PrimeConstraint(T, rng.sample(pool, rng.randint(0, 3)))


def _oracle(rng: random.Random) -> Iterator[Check]:
    for _ in range(40):
        q = CountQuery(rng.randint(0, 3000), random_constraint(rng))
        a, b = count_sieve(q), count_naive(q)
        yield Check("oracle", f"x={q.x} {q.constraint}", a == b, f"sieve={a} naive={b}")
    for x in (10**3, 10**4, 10**5):
        a, b = count_squarefree_mobius(x), count_sieve(CountQuery(x))
        yield Check("oracle", f"mobius x={x}", a == b, f"mobius={a} sieve={b}")


def _disjoint_triple(rng: random.Random):
    pool = list(SMALL_PRIMES[:8])
    rng.shuffle(pool)
    a, b, c = rng.randint(0, 2), rng.randint(1, 2), rng.randint(0, 2)
    return pool[:a], pool[a : a + b], pool[a + b : a + b + c]


def _bijection(rng: random.Random) -> Iterator[Check]:
    for _ in range(30):
        T, S, P = _disjoint_triple(rng)
        x = rng.randint(0, 2000)
        lhs, rhs = bijection_identity(x, T, S, P, method="naive")
        yield Check("bijection", f"x={x} T={T} S={S} P={P}", lhs == rhs, f"{lhs} vs {rhs}")


def _partition(rng: random.Random) -> Iterator[Check]:
    for size in range(5):
        T = sorted(rng.sample(SMALL_PRIMES[:8], size))
        total, parts = partition_identity(1000, T)
        yield Check("partition", f"x=1000 T={T}", total == sum(parts), f"{total} vs {sum(parts)}")
    for p in (2, 3, 7):
        lhs, rhs = induction_identity(1000, [], p)
        yield Check("partition", f"induction x=1000 p={p}", lhs == rhs, f"{lhs} vs {rhs}")


def _telescoping(rng: random.Random) -> Iterator[Check]:
    for cls in (ResidueClass(4, 1), ResidueClass(4, 3), ResidueClass(3, 1)):
        a, b = telescoping_check(cls, 100)
        yield Check("telescoping", f"class {cls} L=100", a == b, "")
        trace = partial_product(cls, 2000)
        ok = all(e.partial is not None for e in trace.entries) and all(
            b.partial < a.partial for a, b in zip(trace.entries, trace.entries[1:])
        )
        yield Check("telescoping", f"monotone {cls} M=2000", ok, "")
        neg_log, half = log_product_bound(cls, 2000)
        yield Check("telescoping", f"log bound {cls} M=2000", neg_log > half, f"{neg_log} > {half}")


def _divisor_sum(rng: random.Random) -> Iterator[Check]:
    for size in range(9):
        T = rng.sample(SMALL_PRIMES, size)
        lhs, rhs = divisor_sum_check(T)
        yield Check("divisor-sum", f"T={sorted(T)}", lhs == rhs, f"{lhs} vs {rhs}")


SUITES: dict[str, Callable[[random.Random], Iterator[Check]]] = {
    "oracle": _oracle,
    "bijection": _bijection,
    "partition": _partition,
    "telescoping": _telescoping,
    "divisor-sum": _divisor_sum,
}


def run_suite(name: str, seed: int = 20100) -> list[Check]:
    """Run one suite, or every suite for ``"identities"`` / ``"all"``."""
    if name in ("identities", "all"):
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise KeyError(name)
    rng = random.Random(seed)
    return [chk for n in names for chk in SUITES[n](rng)]
