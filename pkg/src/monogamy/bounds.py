"""Closed-form bounds on the monogamy game values."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

SQRT_E = math.sqrt(math.e)
COS_PI_8 = math.cos(math.pi / 8)
REL_TOL = 1e-12


def _require_even(n: int) -> None:
    if n < 2 or n % 2:
        raise ValueError(f"n must be an even integer >= 2, got {n}")


def binomial_sum_bound(n: int) -> float:
    """``C(n, n/2)^-1 * sum_k C(n/2, k)^2 * 2^(-k/2)``.

    Binomials are exact integers; each ratio is reduced exactly before the
    single irrational factor is applied.
    """
    _require_even(n)
    half = n // 2
    total = comb(n, half)
    return math.fsum(
        float(Fraction(comb(half, k) ** 2, total)) * 2.0 ** (-k / 2) for k in range(half + 1)
    )


def analytic_bound(n: int) -> float:
    """``sqrt(e) * cos(pi/8)^n``."""
    _require_even(n)
    return SQRT_E * COS_PI_8**n


def tfkw_reference_bound(n: int) -> float:
    """``(1/2 + 1/(2 sqrt 2))^n``, the bound for the full-string variant."""
    if n < 1:
        raise ValueError("n must be positive")
    return (0.5 + 0.5 / math.sqrt(2)) ** n


def trivial_floor(n: int) -> float:
    """Value of the strategy where one player is always right and the other guesses."""
    return 2.0 ** (-n / 2)


def central_binomial_ratio(n: int) -> Fraction:
    """``C(n/2, n/4) / C(n, n/2)`` for n divisible by 4."""
    if n % 4:
        raise ValueError("n must be divisible by 4")
    return Fraction(comb(n // 2, n // 4), comb(n, n // 2))


def leq(a: float, b: float, rel: float = REL_TOL) -> bool:
    return a <= b + rel * max(abs(a), abs(b))


@dataclass
class BoundTableRow:
    n: int
    binomial_sum: float
    analytic: float
    tfkw_ref: float
    trivial_floor: float


def bound_row(n: int) -> BoundTableRow:
    return BoundTableRow(n, binomial_sum_bound(n), analytic_bound(n), tfkw_reference_bound(n), trivial_floor(n))


def bound_table(n_max: int) -> list[BoundTableRow]:
    _require_even(n_max)
    return [bound_row(n) for n in range(2, n_max + 1, 2)]


def table_csv(rows: list[BoundTableRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "binomial_sum", "analytic", "tfkw", "trivial_floor"])
    for r in rows:
        w.writerow([r.n, repr(r.binomial_sum), repr(r.analytic), repr(r.tfkw_ref), repr(r.trivial_floor)])
    return buf.getvalue()


def table_json(rows: list[BoundTableRow]) -> str:
    cols = ("n", "binomial_sum", "analytic", "tfkw", "trivial_floor")
    out = [dict(zip(cols, (r.n, r.binomial_sum, r.analytic, r.tfkw_ref, r.trivial_floor))) for r in rows]
    return json.dumps({"schema": 1, "rows": out}, indent=2) + "\n"


@dataclass
class BoundTableCheck:
    n_max: int
    passed: bool = True
    failures: list[str] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)


def verify_lemma6(n_max: int) -> BoundTableCheck:
    """Check the binomial bound and its central-ratio step for even n <= n_max."""
    _require_even(n_max)
    if n_max > 64:
        raise ValueError("n_max limited to 64")
    rep = BoundTableCheck(n_max)
    prev = None
    for n in range(2, n_max + 1, 2):
        lhs, rhs = binomial_sum_bound(n), analytic_bound(n)
        row = {"n": n, "binomial_sum": lhs, "analytic": rhs, "ok": leq(lhs, rhs)}
        if not row["ok"]:
            rep.failures.append(f"n={n}: binomial sum {lhs!r} > analytic {rhs!r}")
        if prev is not None and not lhs < prev:
            rep.failures.append(f"n={n}: binomial sum not strictly decreasing")
        prev = lhs
        if n % 4 == 0:
            ratio = float(central_binomial_ratio(n))
            cap = SQRT_E / 2.0 ** (n / 2)
            row["central_ratio"], row["central_cap"] = ratio, cap
            if not leq(ratio, cap):
                rep.failures.append(f"n={n}: central ratio {ratio!r} > {cap!r}")
        rep.rows.append(row)
    rep.passed = not rep.failures
    return rep
