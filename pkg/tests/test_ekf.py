import numpy as np
import pytest

from quadsim import ekf
from quadsim.dynamics import NX, hover_input, rk4_step
from quadsim.ekf import EkfBelief, BoundednessMonitor
from quadsim.errors import NonFiniteState, SingularInnovation
from quadsim.linearize import jacobian_A, jacobian_B
from quadsim.params import NoiseConfig, QuadParams

P = QuadParams()
TS = 0.01


def test_predict_standard_hover_matches_matrix_oracle():
    b = EkfBelief(np.zeros(NX), 1e-4 * np.eye(NX))
    out = ekf.predict(b, hover_input(P), P, TS, NoiseConfig(q_scalar=0.0))
    assert np.abs(out.xhat).max() < 1e-12
    F = np.eye(NX) + TS * jacobian_A(np.zeros(NX), hover_input(P), P)
    assert np.allclose(out.P, F @ b.P @ F.T, rtol=0, atol=1e-18)


def test_predict_standard_adds_q_on_diagonal():
    rng = np.random.default_rng(0)
    x = rng.uniform(-1, 1, NX)
    b = EkfBelief(x, 1e-3 * np.eye(NX))
    u = (20.0, 1e-4, 0, 0)
    out = ekf.predict(b, u, P, TS, NoiseConfig(q_scalar=1e-5))
    F = np.eye(NX) + TS * jacobian_A(x, u, P)
    assert np.allclose(out.P, F @ b.P @ F.T + 1e-5 * np.eye(NX), atol=1e-16)
    assert np.array_equal(out.xhat, rk4_step(x, u, P, TS))


def test_predict_paper_literal():
    b = EkfBelief(np.zeros(NX), 1e-4 * np.eye(NX))
    out = ekf.predict(b, (0, 0, 0, 0), P, TS, NoiseConfig(q_scalar=0.0), mode="paper_literal")
    assert np.array_equal(out.xhat, np.zeros(NX))
    rng = np.random.default_rng(1)
    x = rng.uniform(-1, 1, NX)
    u = np.array([19.0, 1e-4, 0, -1e-4])
    out = ekf.predict(EkfBelief(x, 1e-4 * np.eye(NX)), u, P, TS, NoiseConfig(), mode="paper_literal")
    A, B = jacobian_A(x, u, P), jacobian_B(x, u, P)
    assert np.allclose(out.xhat, x + TS * (A @ x + B @ u), atol=1e-14)
    assert np.allclose(out.P, A @ (1e-4 * np.eye(NX)) @ A.T + 1e-5 * np.eye(NX), atol=1e-16)


def test_predict_rejects_unknown_mode():
    with pytest.raises(ValueError):
        ekf.predict(ekf.initial_belief(np.zeros(NX)), hover_input(P), P, TS, NoiseConfig(), "bogus")


def test_update_uninformative_measurement():
    prior = EkfBelief(np.arange(12.0) * 0.1, 1e-4 * np.eye(NX))
    y = np.ones(NX) * 5
    post = ekf.update(prior, y, NoiseConfig(r_scalar=1e12))
    assert np.abs(ekf.gain(prior, NoiseConfig(r_scalar=1e12))).max() < 1e-10
    assert np.abs(post.xhat - prior.xhat).max() < 1e-10


def test_update_perfect_measurement():
    rng = np.random.default_rng(2)
    M = rng.standard_normal((NX, NX))
    prior = EkfBelief(rng.standard_normal(NX), M @ M.T * 1e-3 + 1e-4 * np.eye(NX))
    y = rng.standard_normal(NX)
    assert np.abs(ekf.gain(prior, NoiseConfig(r_scalar=0.0)) - np.eye(NX)).max() < 1e-10
    post = ekf.update(prior, y, NoiseConfig(r_scalar=0.0))
    assert np.abs(post.xhat - y).max() < 1e-10


def test_update_scalar_closed_form():
    p, r = 1e-4, 1e-6
    prior = EkfBelief(np.zeros(NX), p * np.eye(NX))
    K = ekf.gain(prior, NoiseConfig(r_scalar=r))
    assert np.allclose(K, p / (p + r) * np.eye(NX), atol=1e-15)
    assert K[0, 0] == pytest.approx(0.990099, abs=1e-6)
    post = ekf.update(prior, np.ones(NX), NoiseConfig(r_scalar=r))
    assert np.allclose(post.P, p * r / (p + r) * np.eye(NX), atol=1e-18)


def test_update_singular_innovation():
    prior = EkfBelief(np.zeros(NX), np.zeros((NX, NX)))
    with pytest.raises(SingularInnovation):
        ekf.update(prior, np.zeros(NX), NoiseConfig(r_scalar=0.0))


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_predict_overflow_raises():
    s = np.zeros(NX)
    s[9:12] = 1e3
    with pytest.raises(NonFiniteState):
        ekf.predict(EkfBelief(s, 1e308 * np.eye(NX)), hover_input(P), P, TS, NoiseConfig())


def test_step_deterministic_and_symmetric():
    rng = np.random.default_rng(3)
    y = rng.standard_normal(NX) * 0.01
    b0 = ekf.initial_belief(y)
    a = ekf.step(b0, hover_input(P), y, P, TS, NoiseConfig())
    b = ekf.step(b0, hover_input(P), y, P, TS, NoiseConfig())
    assert np.array_equal(a.xhat, b.xhat) and np.array_equal(a.P, b.P)
    assert np.array_equal(a.P, a.P.T)
    assert np.linalg.eigvalsh(a.P).min() > 0


def test_monitor_counts_violations():
    m = BoundednessMonitor(a_max=1.0)
    m.record(np.eye(NX), np.eye(NX) * 1e-3, step=1)
    m.record(np.zeros((NX, NX)), np.eye(NX) * 1e-3, step=2)
    assert m.violations == 1
    assert m.a_norms[0] == pytest.approx(np.sqrt(12))
