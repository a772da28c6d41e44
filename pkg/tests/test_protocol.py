import math

import numpy as np
import pytest

from coinflip.errors import SizingError
from coinflip.protocol import (
    PreparationLabel,
    ProtocolParams,
    RunRecord,
    all_product_states,
    is_unit,
    prep_state,
    qubit_state,
)
from coinflip.simulation import run_honest


def test_params_validation():
    ProtocolParams(2, 0.4)
    with pytest.raises(ValueError):
        ProtocolParams(1, 0.0)
    with pytest.raises(ValueError):
        ProtocolParams(1, math.pi / 2)
    with pytest.raises(SizingError):
        ProtocolParams(0, 0.3)
    with pytest.raises(SizingError):
        ProtocolParams(11, 0.3)
    with pytest.raises(TypeError):
        ProtocolParams(1.5, 0.3)
    assert ProtocolParams.from_degrees(1, 36.87).theta_deg == pytest.approx(36.87)


def test_max_n_env_cap(monkeypatch):
    import importlib

    import coinflip.config as config

    monkeypatch.setenv("COINFLIP_MAX_N", "3")
    assert importlib.reload(config).TOL.max_n == 3
    monkeypatch.setenv("COINFLIP_MAX_N", "50")
    assert importlib.reload(config).TOL.max_n == 10
    monkeypatch.delenv("COINFLIP_MAX_N")
    importlib.reload(config)


def test_single_qubit_states():
    t = 0.7
    assert np.allclose(qubit_state(t, 0, 0), [math.cos(t / 2), math.sin(t / 2)])
    assert abs(np.vdot(qubit_state(t, 0, 0), qubit_state(t, 0, 1))) < 1e-15
    assert abs(np.vdot(qubit_state(t, 1, 0), qubit_state(t, 1, 1))) < 1e-15
    # Bloch overlap of the two up states, axes 2*theta apart
    overlap = abs(np.vdot(qubit_state(t, 0, 0), qubit_state(t, 1, 0))) ** 2
    assert overlap == pytest.approx((1 + math.cos(2 * t)) / 2, abs=1e-14)


def test_prep_state_ordering():
    p = ProtocolParams(2, 0.5)
    v = prep_state(p, PreparationLabel((0, 1), (0, 1)))
    expected = np.kron(qubit_state(0.5, 0, 0), qubit_state(0.5, 1, 1))
    assert np.allclose(v, expected)
    assert is_unit(v)


def test_preparation_label_validation():
    with pytest.raises(ValueError):
        PreparationLabel((0, 2), (0, 0))
    with pytest.raises(ValueError):
        PreparationLabel((0, 1), (0,))


def test_all_product_states_orthonormal_within_basis():
    states = all_product_states(3, 0.4)
    for x in range(8):
        gram = states[x].conj() @ states[x].T
        assert np.allclose(gram, np.eye(8), atol=1e-13)


def test_honest_lossless_run():
    rec = run_honest(ProtocolParams(2, 0.4), 0.0, 11)
    assert isinstance(rec, RunRecord)
    assert rec.completed and not rec.aborted and rec.restarts == 0
    assert rec.outcome in (0, 1)


def test_honest_runs_never_abort_and_restart_under_loss():
    restarts = [run_honest(ProtocolParams(2, 0.4), 0.5, s).restarts for s in range(200)]
    assert max(restarts) > 0
    assert all(not run_honest(ProtocolParams(1, 0.3), 0.3, s).aborted for s in range(50))


def test_loss_probability_bounds():
    with pytest.raises(ValueError):
        run_honest(ProtocolParams(1, 0.3), 1.0, 0)
