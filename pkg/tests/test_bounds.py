import csv
import io
import json
import math

import pytest

from monogamy.bounds import (
    analytic_bound,
    binomial_sum_bound,
    bound_table,
    central_binomial_ratio,
    table_csv,
    table_json,
    tfkw_reference_bound,
    trivial_floor,
    verify_lemma6,
)

COS = math.cos(math.pi / 8)


def oracle_binomial_sum(n):
    # straightforward float evaluation, independent of the exact-ratio path
    return sum(math.comb(n // 2, k) ** 2 * 2.0 ** (-k / 2) for k in range(n // 2 + 1)) / math.comb(n, n // 2)


def test_binomial_sum_hand_values():
    assert binomial_sum_bound(2) == pytest.approx(0.5 * (1 + 2 ** -0.5), rel=1e-15)
    assert binomial_sum_bound(2) == pytest.approx(0.85355339, abs=5e-9)
    assert binomial_sum_bound(4) == pytest.approx((1 + 4 * 2 ** -0.5 + 0.5) / 6, rel=1e-15)
    assert binomial_sum_bound(4) == pytest.approx(0.72140452, abs=5e-9)
    # half-angle identity
    assert binomial_sum_bound(2) == pytest.approx(COS**2, rel=1e-15)


@pytest.mark.parametrize("n", range(2, 65, 2))
def test_binomial_sum_matches_oracle(n):
    assert binomial_sum_bound(n) == pytest.approx(oracle_binomial_sum(n), rel=1e-12)


def test_binomial_sum_strictly_decreasing():
    vals = [binomial_sum_bound(n) for n in range(2, 65, 2)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(0 < v <= 1 for v in vals)


def test_odd_rejected():
    for f in (binomial_sum_bound, analytic_bound):
        with pytest.raises(ValueError):
            f(3)


def test_analytic_values():
    assert analytic_bound(2) == pytest.approx(math.sqrt(math.e) * COS**2, rel=1e-15)
    assert analytic_bound(2) > 1
    assert analytic_bound(8) == pytest.approx(0.87512, abs=5e-6)
    for n in range(2, 62, 2):
        assert analytic_bound(n + 2) / analytic_bound(n) == pytest.approx(COS**2, rel=1e-12)


def test_analytic_below_one_iff_n_at_least_8():
    for n in range(2, 65, 2):
        assert (analytic_bound(n) < 1) == (n >= 8)


def test_tfkw_values():
    assert tfkw_reference_bound(1) == pytest.approx(0.8535534, abs=5e-8)
    assert tfkw_reference_bound(2) == pytest.approx(0.7285534, abs=5e-8)
    for n in range(2, 65, 2):
        assert tfkw_reference_bound(n) <= analytic_bound(n)


def test_trivial_floor():
    assert trivial_floor(2) == 0.5
    assert trivial_floor(4) == 0.25


def test_central_ratio_exact():
    r = central_binomial_ratio(64)
    assert r.numerator * math.comb(64, 32) == math.comb(32, 16) * r.denominator
    for n in range(4, 65, 4):
        assert float(central_binomial_ratio(n)) <= math.sqrt(math.e) / 2 ** (n / 2)


def test_bound_table_check():
    rep = verify_lemma6(64)
    assert rep.passed and not rep.failures and len(rep.rows) == 32
    row4 = rep.rows[1]
    assert row4["binomial_sum"] == pytest.approx(0.72140452, abs=5e-9)
    assert row4["analytic"] == pytest.approx(1.2012, abs=1e-4)
    # the gap widens slowly with n; at n = 64 it is about a factor 2
    ratios = [binomial_sum_bound(n) / analytic_bound(n) for n in range(2, 65, 2)]
    assert all(0 < r <= 1 for r in ratios)
    assert ratios[-1] == pytest.approx(0.4798, abs=1e-4)
    with pytest.raises(ValueError):
        verify_lemma6(66)


def test_csv_table():
    text = table_csv(bound_table(8))
    assert "\r" not in text and text.endswith("\n")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["n", "binomial_sum", "analytic", "tfkw", "trivial_floor"]
    assert len(rows) == 5
    assert float(rows[4][2]) == pytest.approx(0.87512, abs=5e-6)
    # round-trip exactness of the printed floats
    assert float(rows[1][1]) == binomial_sum_bound(2)


def test_json_table_deterministic():
    a, b = table_json(bound_table(64)), table_json(bound_table(64))
    assert a == b
    doc = json.loads(a)
    assert doc["schema"] == 1 and len(doc["rows"]) == 32
    assert set(doc["rows"][0]) == {"n", "binomial_sum", "analytic", "tfkw", "trivial_floor"}
