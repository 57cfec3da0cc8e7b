"""Fixed-step RK4 integration and classification of long-run behaviour."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .model import (
    DomainError,
    Params,
    State,
    endemic_equilibrium,
    fixed_point,
    flow_xyz,
)

SLACK = 1e-9
DEFAULT_INITIAL = State(0.9, 0.1, 0.1)


class IntegrationError(ArithmeticError):
    """The numerical solution left the state domain by more than the allowed slack."""

    def __init__(self, t, state):
        self.t = t
        self.state = tuple(state)
        s, i, g = self.state
        super().__init__(f"integration blew up at t={t:.6g}: s={s!r}, i={i!r}, gamma={g!r}")


def _clamp(s, i, g):
    """Project round-off excursions back into the domain; ``None`` if beyond slack."""
    if not (math.isfinite(s) and math.isfinite(i) and math.isfinite(g)):
        return None
    if s < -SLACK or i < -SLACK or s + i > 1.0 + SLACK or not g > 0:
        return None
    s = max(s, 0.0)
    i = max(i, 0.0)
    tot = s + i
    if tot > 1.0:
        s, i = s / tot, i / tot
    return s, i, g


def step_rk4(state: State, params: Params, dt, t=0.0) -> State:
    """One classical Runge-Kutta step of size ``dt``."""
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    s, i, g = state.s, state.i, state.gamma_var
    k1 = flow_xyz(s, i, g, params)
    k2 = flow_xyz(s + 0.5 * dt * k1[0], i + 0.5 * dt * k1[1], g + 0.5 * dt * k1[2], params)
    k3 = flow_xyz(s + 0.5 * dt * k2[0], i + 0.5 * dt * k2[1], g + 0.5 * dt * k2[2], params)
    k4 = flow_xyz(s + dt * k3[0], i + dt * k3[1], g + dt * k3[2], params)
    h = dt / 6.0
    new = (
        s + h * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        i + h * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        g + h * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    )
    clamped = _clamp(*new)
    if clamped is None:
        raise IntegrationError(t + dt, new)
    return State(*clamped)


@njit(cache=True)
def _rk4_kernel(s, i, g, beta, xi, alpha, delta, dt, n, stride, slack):
    # returns (samples, number written, failing step or -1)
    m = n // stride + 2
    out = np.empty((m, 3))
    out[0, 0] = s
    out[0, 1] = i
    out[0, 2] = g
    j = 1
    h = dt / 6.0
    for k in range(n):
        a1 = -beta * s * i + xi * (1.0 - s - i)
        b1 = beta * s * i - g * i
        c1 = g * (alpha * i - delta * s)
        ss = s + 0.5 * dt * a1
        ii = i + 0.5 * dt * b1
        gg = g + 0.5 * dt * c1
        a2 = -beta * ss * ii + xi * (1.0 - ss - ii)
        b2 = beta * ss * ii - gg * ii
        c2 = gg * (alpha * ii - delta * ss)
        ss = s + 0.5 * dt * a2
        ii = i + 0.5 * dt * b2
        gg = g + 0.5 * dt * c2
        a3 = -beta * ss * ii + xi * (1.0 - ss - ii)
        b3 = beta * ss * ii - gg * ii
        c3 = gg * (alpha * ii - delta * ss)
        ss = s + dt * a3
        ii = i + dt * b3
        gg = g + dt * c3
        a4 = -beta * ss * ii + xi * (1.0 - ss - ii)
        b4 = beta * ss * ii - gg * ii
        c4 = gg * (alpha * ii - delta * ss)
        s = s + h * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        i = i + h * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        g = g + h * (c1 + 2.0 * c2 + 2.0 * c3 + c4)
        ok = np.isfinite(s) and np.isfinite(i) and np.isfinite(g)
        if not ok or s < -slack or i < -slack or s + i > 1.0 + slack or not g > 0.0:
            out[j, 0] = s
            out[j, 1] = i
            out[j, 2] = g
            return out, j, k + 1
        if s < 0.0:
            s = 0.0
        if i < 0.0:
            i = 0.0
        if s + i > 1.0:
            tot = s + i
            s = s / tot
            i = i / tot
        if (k + 1) % stride == 0 or k + 1 == n:
            out[j, 0] = s
            out[j, 1] = i
            out[j, 2] = g
            j += 1
    return out, j, -1


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (n, 3): s, i, gamma

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states differ in length")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self):
        return len(self.times)

    @property
    def s(self):
        return self.states[:, 0]

    @property
    def i(self):
        return self.states[:, 1]

    @property
    def gamma(self):
        return self.states[:, 2]

    @property
    def r(self):
        return 1.0 - self.states[:, 0] - self.states[:, 1]

    def state(self, k) -> State:
        return State(*self.states[k])

    @property
    def final(self) -> State:
        return self.state(-1)

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "s", "i", "r", "gamma"])
            for t, (s, i, g), r in zip(self.times, self.states, self.r):
                w.writerow(["%.17g" % v for v in (t, s, i, r, g)])

    @classmethod
    def read_csv(cls, path):
        with open(path, newline="") as fh:
            r = csv.reader(fh)
            header = next(r)
            if header != ["t", "s", "i", "r", "gamma"]:
                raise ValueError(f"unexpected trajectory header {header}")
            rows = [[float(v) for v in row] for row in r]
        arr = np.array(rows, dtype=float).reshape(-1, 5)
        return cls(arr[:, 0].copy(), arr[:, [1, 2, 4]].copy())


def simulate(params: Params, initial: State = DEFAULT_INITIAL, t_end=1000.0, dt=0.01, sample_stride=1) -> Trajectory:
    """Integrate from ``initial`` to ``t_end``, keeping every ``sample_stride``-th step.

    The last step is always recorded. Raises :class:`IntegrationError` when the
    solution leaves the domain by more than ``1e-9``.
    """
    if not t_end > 0 or not dt > 0:
        raise ValueError(f"t_end and dt must be > 0, got t_end={t_end}, dt={dt}")
    if int(sample_stride) < 1:
        raise ValueError(f"sample_stride must be >= 1, got {sample_stride}")
    stride = int(sample_stride)
    n = max(1, int(math.ceil(t_end / dt - 1e-9)))
    beta, xi, alpha, delta = params.as_tuple()
    out, count, fail = _rk4_kernel(
        initial.s, initial.i, initial.gamma_var, beta, xi, alpha, delta, float(dt), n, stride, SLACK
    )
    if fail >= 0:
        raise IntegrationError(fail * dt, out[count])
    steps = np.arange(0, n + 1, stride)
    if steps[-1] != n:
        steps = np.append(steps, n)
    return Trajectory(steps * float(dt), out[:count].copy())


# -- asymptotic classification ----------------------------------------------------


@dataclass(frozen=True)
class Converged:
    distance: float  # max-norm distance of the final state to the equilibrium
    kind: str = field(default="converged", init=False)


@dataclass(frozen=True)
class CycleInfo:
    period: float
    amplitude_i: float
    periods: tuple = ()
    amplitudes: tuple = ()
    kind: str = field(default="cycle", init=False)

    @property
    def period_spread(self) -> float:
        p = np.asarray(self.periods)
        return float((p.max() - p.min()) / p.mean()) if len(p) else 0.0


@dataclass(frozen=True)
class Undecided:
    reason: str
    kind: str = field(default="undecided", init=False)


CONVERGENCE_TOL = 1e-6
MIN_PEAKS = 5
SPREAD_TOL = 0.01
MIN_AMPLITUDE = 1e-4


def _equilibrium(traj, params):
    if params.frozen_gamma:
        return endemic_equilibrium(params, traj.gamma[0]).state
    return fixed_point(params).state


def _refined_peaks(t, y):
    """Local maxima by three-point comparison, located by parabolic interpolation."""
    k = np.where((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:]))[0] + 1
    y0, y1, y2 = y[k - 1], y[k], y[k + 1]
    den = y0 - 2.0 * y1 + y2
    with np.errstate(divide="ignore", invalid="ignore"):
        off = np.where(den != 0, 0.5 * (y0 - y2) / den, 0.0)
    h = t[1] - t[0]
    return k, t[k] + off * h, y1 - 0.25 * (y0 - y2) * off


def detect_asymptotics(trajectory: Trajectory, params: Params, min_peaks=MIN_PEAKS):
    """Return :class:`Converged`, :class:`CycleInfo` or :class:`Undecided`.

    Converged when the last state is within ``1e-6`` of the equilibrium. Otherwise
    the second half of ``I(t)`` is searched for local maxima; the last
    ``min_peaks`` must be evenly spaced and the per-cycle peak-to-trough range
    of ``I`` must exceed ``1e-4`` and be stationary (both to 1% relative spread).
    """
    if len(trajectory) < 1000:
        raise ValueError(f"trajectory too short for classification ({len(trajectory)} < 1000 samples)")
    eq = _equilibrium(trajectory, params).as_array()
    dist = float(np.max(np.abs(trajectory.states[-1] - eq)))
    if dist < CONVERGENCE_TOL:
        return Converged(dist)

    half = len(trajectory) // 2
    t = trajectory.times[half:]
    y = trajectory.i[half:]
    idx, tp, _ = _refined_peaks(t, y)
    if len(idx) < min_peaks:
        return Undecided(f"only {len(idx)} maxima of I after the transient")
    idx, tp = idx[-min_peaks:], tp[-min_peaks:]
    periods = np.diff(tp)
    spread = (periods.max() - periods.min()) / periods.mean()
    amps = np.array([y[a:b + 1].max() - y[a:b + 1].min() for a, b in zip(idx[:-1], idx[1:])])
    if amps[-1] <= MIN_AMPLITUDE:
        return Undecided(f"oscillation amplitude {amps[-1]:.3g} below {MIN_AMPLITUDE}")
    if not spread < SPREAD_TOL:
        return Undecided(f"period spread {spread:.3%} not below 1%")
    amp_spread = (amps.max() - amps.min()) / amps.mean()
    if not amp_spread < SPREAD_TOL:
        return Undecided(f"amplitude not stationary (spread {amp_spread:.3%})")
    return CycleInfo(float(periods.mean()), float(amps[-1]), tuple(periods.tolist()), tuple(amps.tolist()))


@dataclass(frozen=True)
class SweepEntry:
    alpha: float
    verdict: object

    @property
    def kind(self) -> str:
        return self.verdict.kind


def hopf_sweep(beta, xi, alpha_values, initial: State = DEFAULT_INITIAL, t_end=10000.0, dt=0.01, sample_stride=10):
    """Classify the long-run behaviour of the alpha == delta model for each alpha."""
    out = []
    for a in alpha_values:
        params = Params(beta, xi, a, a)
        traj = simulate(params, initial, t_end, dt, sample_stride)
        out.append(SweepEntry(float(a), detect_asymptotics(traj, params)))
    return out


__all__ = [
    "IntegrationError",
    "DomainError",
    "Trajectory",
    "Converged",
    "CycleInfo",
    "Undecided",
    "SweepEntry",
    "step_rk4",
    "simulate",
    "detect_asymptotics",
    "hopf_sweep",
    "DEFAULT_INITIAL",
]
