"""Scripted sweeps that check the density claims against sieve counts.

Each experiment counts ``A(T, P)[x]`` for an increasing list of ``x`` and
returns a :class:`SweepResult` whose verdict is a pure function of its rows,
so a verdict can be recomputed from a serialized report.
"""
from __future__ import annotations

import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import IO, Callable, Sequence, Union

from .counting import CountQuery, CountReport, count_sieve, empirical_density
from .density import SIX_OVER_PI2, ConstraintError, PrimeConstraint
from .primes import ResidueClass

DEFAULT_X_LIST = (10**4, 10**5, 10**6, 10**7)
EXTENDED_X_LIST = (10**8, 10**9)
MAX_SWEEP_X = 10**9
TOLERANCE = 1e-3

CSV_FIELDS = ("label", "x", "count", "ratio", "predicted", "deviation", "verdict")


@dataclass(frozen=True)
class Row:
    """The serialized part of a :class:`CountReport`."""

    x: int
    count: int
    ratio: float
    predicted: float
    deviation: float

    @classmethod
    def from_report(cls, r: CountReport) -> Row:
        return cls(r.x, r.count, r.ratio, r.predicted, r.deviation)


# Verdict rules.  Each sees only the rows.


def _limit_rule(rows: Sequence[Row]) -> bool:
    last = rows[-1]
    return abs(last.ratio - last.predicted) < TOLERANCE


def _among_rule(rows: Sequence[Row]) -> bool:
    # compare proportions among square-free numbers, i.e. ratio / (6/pi^2)
    last = rows[-1]
    return abs(last.ratio - last.predicted) / SIX_OVER_PI2 < TOLERANCE


def _decay_rule(rows: Sequence[Row]) -> bool:
    decreasing = all(b.ratio < a.ratio for a, b in zip(rows, rows[1:]))
    return decreasing and rows[-1].ratio <= rows[-1].predicted


RULES: dict[str, Callable[[Sequence[Row]], bool]] = {
    "limit": _limit_rule,
    "among": _among_rule,
    "decay": _decay_rule,
}


@dataclass(frozen=True)
class SweepResult:
    label: str
    constraint: PrimeConstraint
    rule: str
    reports: tuple[CountReport, ...]

    @property
    def rows(self) -> tuple[Row, ...]:
        return tuple(Row.from_report(r) for r in self.reports)

    @property
    def verdict(self) -> bool:
        return verdict_from_rows(self.rule, self.rows)

    @property
    def final(self) -> CountReport:
        return self.reports[-1]


def verdict_from_rows(rule: str, rows: Sequence[Row]) -> bool:
    if not rows:
        raise ValueError("a sweep needs at least one row")
    return RULES[rule](rows)


def _check_x_list(x_list: Sequence[int]) -> list[int]:
    xs = [int(x) for x in x_list]
    if not xs:
        raise ValueError("x_list must be nonempty")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError(f"x_list must be strictly increasing, got {xs}")
    if xs[0] < 1 or xs[-1] > MAX_SWEEP_X:
        raise ValueError(f"x_list entries must lie in [1, {MAX_SWEEP_X}]")
    return xs


def sweep(
    label: str,
    constraint: PrimeConstraint,
    x_list: Sequence[int],
    rule: str = "limit",
    *,
    workers: int = 1,
) -> SweepResult:
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}")
    xs = _check_x_list(x_list)
    reports = tuple(empirical_density(CountQuery(x, constraint), workers=workers) for x in xs)
    return SweepResult(label, constraint, rule, reports)


def proportion_among_squarefree(constraint: PrimeConstraint, x: int, *, workers: int = 1) -> float:
    """``A(T, P)[x] / A[x]``: the share of square-free numbers ``<= x`` in ``A(T, P)``."""
    total = count_sieve(CountQuery(x), workers=workers)
    return count_sieve(CountQuery(x, constraint), workers=workers) / total if total else 0.0


def run_gegenbauer(x_list: Sequence[int] = DEFAULT_X_LIST, *, workers: int = 1) -> SweepResult:
    return sweep("gegenbauer", PrimeConstraint(), x_list, "limit", workers=workers)


def run_jameson(
    x_list: Sequence[int] = DEFAULT_X_LIST, *, workers: int = 1
) -> tuple[SweepResult, SweepResult]:
    """Odd square-free numbers (density 4/pi^2) and even ones (2/pi^2)."""
    odd = sweep("jameson-odd", PrimeConstraint(P={2}), x_list, "limit", workers=workers)
    even = sweep("jameson-even", PrimeConstraint(T={2}), x_list, "limit", workers=workers)
    return odd, even


def run_example2(x_list: Sequence[int] = DEFAULT_X_LIST, *, workers: int = 1) -> SweepResult:
    """Square-free multiples of 30 not divisible by 7; 7/576 of the square-free numbers."""
    c = PrimeConstraint(T={2, 3, 5}, P={7})
    return sweep("example2", c, x_list, "among", workers=workers)


def run_bertram(
    m: int, r: int, x_list: Sequence[int] = DEFAULT_X_LIST, *, workers: int = 1
) -> SweepResult:
    """Square-free numbers with no prime factor ``= r mod m``; their density is 0."""
    c = ResidueClass(m, r % m if m > 0 else r)
    if not c.is_coprime:
        raise ConstraintError(f"run_bertram needs gcd(r, m) = 1, got r={r}, m={m}")
    return sweep(f"bertram-{m}-{c.residue}", PrimeConstraint(P=c), x_list, "decay", workers=workers)


EXPERIMENTS = ("gegenbauer", "jameson", "example2", "bertram")


# --------------------------------------------------------------------------
# reports


class ReportError(OSError):
    """The report destination could not be written."""


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _row_fields(res: SweepResult, row: Row) -> dict:
    return {
        "label": res.label,
        "x": row.x,
        "count": row.count,
        "ratio": _fmt(row.ratio),
        "predicted": _fmt(row.predicted),
        "deviation": _fmt(row.deviation),
        "verdict": "pass" if res.verdict else "fail",
    }


def render_report(results: Sequence[SweepResult], fmt: str = "csv") -> str:
    results = list(results)
    if not results:
        raise ValueError("emit_report needs at least one result")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for res in results:
            for row in res.rows:
                w.writerow(_row_fields(res, row))
        return buf.getvalue()
    if fmt == "json":
        out = []
        for res in results:
            for row in res.rows:
                obj = _row_fields(res, row)
                for k in ("ratio", "predicted", "deviation"):
                    obj[k] = float(obj[k])
                obj["constraint"] = res.constraint.to_dict()
                out.append(obj)
        return json.dumps(out, indent=2) + "\n"
    raise ValueError(f"unknown report format {fmt!r}; use csv or json")


def emit_report(
    results: Sequence[SweepResult],
    fmt: str = "csv",
    destination: Union[str, os.PathLike, IO[str], None] = None,
) -> None:
    """Write the report to a path, an open text stream, or stdout (``None`` / ``"-"``)."""
    text = render_report(results, fmt)
    if destination is None or destination == "-":
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        try:
            with open(destination, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise ReportError(f"cannot write report to {destination}: {exc}") from exc


def load_rows(text: str, fmt: str = "csv") -> dict[str, list[Row]]:
    """Parse a report back into rows grouped by label."""
    if fmt == "csv":
        records = list(csv.DictReader(io.StringIO(text)))
    elif fmt == "json":
        records = json.loads(text)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    grouped: dict[str, list[Row]] = {}
    for rec in records:
        grouped.setdefault(rec["label"], []).append(
            Row(int(rec["x"]), int(rec["count"]), float(rec["ratio"]),
                float(rec["predicted"]), float(rec["deviation"]))
        )
    return grouped


def rule_for_label(label: str) -> str:
    if label.startswith("bertram"):
        return "decay"
    if label.startswith("example2"):
        return "among"
    return "limit"

