import math

import numpy as np
import pytest

from coinflip.bob import bob_bias_n1_closed, solve_dual
from coinflip.errors import AnalyticPathError
from coinflip.two_qubit import (
    conjectured_primal_n2,
    conjectured_state,
    conjectured_value,
    conjectured_value_direct,
    real_root_count,
    root_candidates,
    root_transition,
    two_qubit_analytic,
)

FAIR2 = math.radians(26.92)


def test_valid_root_at_fair_angle():
    res = two_qubit_analytic(FAIR2)
    assert res.valid_root_value == pytest.approx(0.8975, abs=5e-4)
    assert res.valid_root_value == pytest.approx(solve_dual(2, FAIR2).value, abs=1e-6)
    assert res.xi == pytest.approx(-0.2098, abs=5e-4)
    assert res.chi == pytest.approx(0.6197, abs=5e-4)


def test_quartic_path_matches_dual_on_grid():
    for deg in range(10, 81):
        t = math.radians(deg)
        assert abs(two_qubit_analytic(t).valid_root_value - solve_dual(2, t).value) <= 1e-8


def test_exactly_one_root_admissible():
    for deg in range(10, 81, 5):
        cands = root_candidates(math.radians(deg))
        assert sum(c.admissible for c in cands) == 1


def test_other_real_roots_fall_below_single_qubit_or_break_psd():
    for deg in (15, 30, 44):
        t = math.radians(deg)
        floor = bob_bias_n1_closed(t)
        rejected = [c for c in root_candidates(t) if c.is_real and not c.admissible]
        assert len(rejected) == 3
        for c in rejected:
            assert c.value < floor or c.min_eig < -1e-9


def test_root_transition():
    tc = root_transition()
    assert 0.80 <= tc <= 0.81
    assert real_root_count(tc - 1e-4) == 4
    assert real_root_count(tc + 1e-4) == 2


def test_analytic_path_rejects_endpoints():
    with pytest.raises(ValueError):
        two_qubit_analytic(0.0)


def test_no_admissible_root_is_an_error(monkeypatch):
    import coinflip.two_qubit as tq

    monkeypatch.setattr(tq, "bob_bias_n1_closed", lambda t: 2.0)
    with pytest.raises(AnalyticPathError):
        tq.two_qubit_analytic(0.5)


def test_conjectured_state_unit_norm():
    for f in np.linspace(0, 2 * math.pi, 17):
        assert np.linalg.norm(conjectured_state(f)) == pytest.approx(1.0, abs=1e-15)


def test_functional_equals_direct_expectation():
    rng = np.random.default_rng(0)
    for _ in range(50):
        f, t = rng.uniform(0, 2 * math.pi), rng.uniform(0.01, 1.56)
        assert conjectured_value(f, t) == pytest.approx(conjectured_value_direct(f, t), abs=1e-14)


def test_conjectured_maximizer_at_fair_angle():
    f_star, value = conjectured_primal_n2(FAIR2)
    assert f_star == pytest.approx(0.1177, abs=1e-3)
    assert value == pytest.approx(0.8975, abs=5e-4)
    assert value == pytest.approx(solve_dual(2, FAIR2).value, abs=1e-6)


def test_conjectured_value_never_exceeds_dual():
    for t in np.linspace(0.02, 1.55, 50):
        assert conjectured_primal_n2(t)[1] <= solve_dual(2, t).value + 1e-9
