import math

import numpy as np
import pytest

from coinflip.errors import FairPointNotFound
from coinflip.fair import (
    CSV_COLUMNS,
    bias_report,
    find_fair_theta,
    parse_grid,
    sweep_csv,
    sweep_curves,
)


def test_fair_n1_is_the_3_4_5_angle():
    fp = find_fair_theta(1)
    assert fp.theta_star == pytest.approx(math.atan2(3, 4), abs=1e-9)
    assert fp.theta_deg == pytest.approx(36.87, abs=0.01)
    assert fp.p_fair == pytest.approx(0.9, abs=1e-6)
    assert 2 * math.cos(fp.theta_star) - math.sin(fp.theta_star) == pytest.approx(1, abs=1e-9)


def test_fair_n2():
    fp = find_fair_theta(2)
    assert fp.theta_deg == pytest.approx(26.92, abs=0.01)
    assert fp.p_fair == pytest.approx(0.8975, abs=5e-4)
    assert abs(fp.alice_at_star - fp.bob_at_star) <= 1e-9


@pytest.mark.parametrize("n,expected", [(3, 0.8967), (4, 0.8962), (5, 0.8960), (6, 0.8958)])
def test_fair_table(n, expected):
    fp = find_fair_theta(n)
    assert fp.p_fair == pytest.approx(expected, abs=5e-4)
    if n == 6:
        assert fp.theta_deg == pytest.approx(15.89, abs=0.05)


def test_fair_values_decrease_with_n():
    values = [find_fair_theta(n).p_fair for n in range(1, 5)]
    assert np.all(np.diff(values) < 0)


def test_no_sign_change_reports_endpoints(monkeypatch):
    import coinflip.fair as fair

    monkeypatch.setattr(fair, "fairness_gap", lambda n, t: 1.0)
    with pytest.raises(FairPointNotFound) as err:
        fair.find_fair_theta(1)
    assert err.value.g_low == 1.0 and err.value.g_high == 1.0


def test_sweep_n1_columns_exact():
    grid = np.linspace(0.1, 1.4, 9)
    for row in sweep_curves(1, grid):
        assert row.alice == pytest.approx((1 + math.cos(row.theta)) / 2, abs=1e-15)
        assert row.bob_dual == pytest.approx((3 + math.sin(row.theta)) / 4, abs=1e-9)


def test_sweep_n2_crosses_once_at_fair_angle():
    grid = np.radians(np.linspace(5, 85, 81))
    rows = sweep_curves(2, grid[::-1])
    thetas = [r.theta for r in rows]
    assert thetas == sorted(thetas)
    gap = np.array([r.bob_dual - r.alice for r in rows])
    changes = np.nonzero(np.diff(np.sign(gap)))[0]
    assert len(changes) == 1
    star = find_fair_theta(2).theta_star
    assert thetas[changes[0]] <= star <= thetas[changes[0] + 1]
    assert np.all(np.diff([r.alice for r in rows]) < 0)
    assert np.all(np.diff([r.bob_dual for r in rows]) > 0)


def test_sweep_quartic_columns_dominated():
    rows = sweep_curves(2, np.radians([15.0, 30.0, 60.0]))
    for r in rows:
        real = [v for v in r.quartic_values if not math.isnan(v)]
        above = [v for v in real if v >= r.n1_reference - 1e-9]
        assert len(above) >= 1
        assert min(above, key=lambda v: abs(v - r.bob_dual)) == pytest.approx(r.bob_dual, abs=1e-8)


def test_sweep_csv_format():
    text = sweep_csv(sweep_curves(1, [0.5, 0.3]))
    lines = text.strip().split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1].startswith("0.3,")
    assert len(lines) == 3


def test_bias_report_fields():
    rep = bias_report(2, 0.5).to_dict()
    assert rep["theta_deg"] == pytest.approx(math.degrees(0.5))
    assert abs(rep["gap"]) <= 1e-6


def test_parse_grid():
    assert np.allclose(parse_grid("10:20:3"), [10, 15, 20])
    for bad in ("1:2", "1:2:0", "a:b:c"):
        with pytest.raises(ValueError):
            parse_grid(bad)
