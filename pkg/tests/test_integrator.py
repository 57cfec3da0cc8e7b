import numpy as np
import pytest

from ideawaves.integrator import (
    CycleInfo,
    Converged,
    IntegrationError,
    Trajectory,
    Undecided,
    detect_asymptotics,
    hopf_sweep,
    simulate,
    step_rk4,
)
from ideawaves.model import Params, State, endemic_equilibrium, fixed_point, flow

X0 = State(0.9, 0.1, 0.1)
STABLE_BOTH = Params(0.5, 0.4, 0.45, 3.0)
HOPF_DOT = Params(0.5, 0.4, 1.75, 1.75)


def test_step_at_fixed_point_is_stationary():
    fp = fixed_point(HOPF_DOT).state
    np.testing.assert_allclose(step_rk4(fp, HOPF_DOT, 0.1).as_array(), fp.as_array(), atol=1e-14)


def test_frozen_gamma_keeps_gamma():
    p = Params(0.5, 0.4)
    s = X0
    for _ in range(50):
        s = step_rk4(s, p, 0.2)
    assert s.gamma_var == 0.1


def test_step_matches_kernel():
    one = step_rk4(X0, STABLE_BOTH, 0.05).as_array()
    np.testing.assert_allclose(simulate(STABLE_BOTH, X0, 0.05, 0.05).states[-1], one, rtol=0, atol=1e-15)


def test_local_error_is_fifth_order():
    def err(dt):
        ref = simulate(STABLE_BOTH, X0, dt, dt / 100).states[-1]
        return np.abs(step_rk4(X0, STABLE_BOTH, dt).as_array() - ref).max()

    ratio = err(0.2) / err(0.1)
    assert 24 < ratio < 40  # 2**5 = 32


def test_step_rejects_bad_dt():
    with pytest.raises(ValueError):
        step_rk4(X0, STABLE_BOTH, 0.0)


def test_blowup_is_reported():
    # a huge step throws the state out of the simplex
    with pytest.raises(IntegrationError) as exc:
        simulate(Params(50.0, 0.4, 1.0, 1.0), X0, 10.0, 2.0)
    assert exc.value.t > 0 and len(exc.value.state) == 3
    with pytest.raises(IntegrationError):
        step_rk4(X0, Params(50.0, 0.4, 1.0, 1.0), 2.0)


def test_simulate_sampling_and_times():
    tr = simulate(STABLE_BOTH, X0, 1.0, 0.01, sample_stride=30)
    np.testing.assert_allclose(tr.times, [0, 0.3, 0.6, 0.9, 1.0])
    assert np.all(np.diff(tr.times) > 0)
    assert tr.state(0) == X0


def test_conservation_and_positivity():
    tr = simulate(Params(0.5, 0.4, 1.5, 2.5), X0, 1000, 0.01, 10)
    assert np.abs(tr.s + tr.i + tr.r - 1.0).max() < 1e-15
    for col in (tr.s, tr.i, tr.r):
        assert col.min() >= -1e-9
    assert tr.gamma.min() > 0


def test_constant_trajectory_from_fixed_point():
    fp = fixed_point(HOPF_DOT).state
    tr = simulate(HOPF_DOT, fp, 50, 0.01, 10)
    assert np.abs(tr.states - fp.as_array()).max() < 1e-12


def test_frozen_gamma_converges_to_endemic_equilibrium():
    p = Params(0.5, 0.4)
    tr = simulate(p, State(0.9, 0.1, 0.2), 1000, 0.01, 10)
    eq = endemic_equilibrium(p, 0.2).state
    assert np.abs(tr.states[-1] - eq.as_array()).max() < 1e-9
    assert max(abs(v) for v in flow(tr.final, p)) < 1e-9
    assert isinstance(detect_asymptotics(tr, p), Converged)


@pytest.mark.parametrize("ad", [(0.65, 0.6), (0.95, 0.6), (0.45, 3.0)])
def test_stable_caption_runs_converge(ad):
    p = Params(0.5, 0.4, *ad)
    assert isinstance(detect_asymptotics(simulate(p, X0, 1000, 0.01, 10), p), Converged)


def test_unstable_caption_runs_cycle():
    for p in (HOPF_DOT, Params(0.5, 0.4, 1.5, 2.5)):
        tr = simulate(p, X0, 1000, 0.01, 10)
        v = detect_asymptotics(tr, p)
        assert isinstance(v, CycleInfo) and v.period > 0 and v.period_spread < 0.01
        late = tr.i[tr.times >= 500]
        assert 0 < late.min() and late.max() < 1


def test_detect_rejects_short():
    with pytest.raises(ValueError):
        detect_asymptotics(simulate(HOPF_DOT, X0, 5, 0.01), HOPF_DOT)


def test_damped_oscillation_not_a_cycle():
    # alpha = delta = 1.45 still rings at t = 3000 but decays: must not be called a cycle
    p = Params(0.5, 0.4, 1.45, 1.45)
    v = detect_asymptotics(simulate(p, X0, 3000, 0.01, 10), p)
    assert isinstance(v, Undecided)


def test_hopf_sweep_amplitude_grows_past_hopf():
    entries = hopf_sweep(0.5, 0.4, [1.55, 1.6, 1.75, 2.0])
    amps = [e.verdict.amplitude_i for e in entries]
    assert all(e.kind == "cycle" for e in entries)
    assert amps == sorted(amps)


def test_hopf_sweep_marginal_and_empty():
    assert hopf_sweep(0.5, 0.4, []) == []
    (e,) = hopf_sweep(0.5, 0.4, [1.5])
    assert e.kind in ("undecided", "cycle")
    if e.kind == "cycle":
        lin = hopf_sweep(0.5, 0.4, [1.55])[0].verdict.amplitude_i
        assert e.verdict.amplitude_i < lin


def test_trajectory_csv_round_trip(tmp_path):
    tr = simulate(HOPF_DOT, X0, 20, 0.01, 7)
    path = tmp_path / "traj.csv"
    tr.write_csv(path)
    back = Trajectory.read_csv(path)
    assert np.array_equal(back.times, tr.times)
    assert np.array_equal(back.states, tr.states)
    assert path.read_text().splitlines()[0] == "t,s,i,r,gamma"
