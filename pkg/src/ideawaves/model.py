"""State space, flow field and fixed points of the feedback SIRS model.

The reduced state is ``(S, I, Gamma)`` with ``R = 1 - S - I``. The recovery
rate ``Gamma`` evolves as ``dGamma/dt = Gamma * (alpha*I - delta*S)``; with
``alpha = delta = 0`` it stays frozen and the system is the textbook SIRS.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

DOMAIN_SLACK = 1e-12
RESIDUAL_TOL = 1e-10


class DomainError(ValueError):
    """Raised for parameters or states outside the model domain."""


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class Params:
    """Rates of the model.

    beta : transmission rate
    xi : re-susceptibility rate (R -> S)
    alpha : interest saturation
    delta : influencing enthusiasm
    """

    beta: float
    xi: float
    alpha: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        for name in ("beta", "xi", "alpha", "delta"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.beta <= 0 or self.xi <= 0:
            raise DomainError(f"beta and xi must be > 0, got beta={self.beta}, xi={self.xi}")
        if self.alpha < 0 or self.delta < 0:
            raise DomainError(
                f"alpha and delta must be >= 0, got alpha={self.alpha}, delta={self.delta}"
            )

    @property
    def frozen_gamma(self) -> bool:
        return self.alpha == 0.0 and self.delta == 0.0

    def as_tuple(self):
        return (self.beta, self.xi, self.alpha, self.delta)

    def to_dict(self):
        return {"beta": self.beta, "xi": self.xi, "alpha": self.alpha, "delta": self.delta}

    @classmethod
    def from_dict(cls, d):
        return cls(d["beta"], d["xi"], d.get("alpha", 0.0), d.get("delta", 0.0))


@dataclass(frozen=True)
class State:
    s: float
    i: float
    gamma_var: float

    def __post_init__(self):
        for name in ("s", "i", "gamma_var"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        check_domain(self.s, self.i, self.gamma_var, DOMAIN_SLACK)

    @property
    def r(self) -> float:
        return 1.0 - self.s - self.i

    def as_array(self):
        return np.array([self.s, self.i, self.gamma_var])

    def to_dict(self):
        return {"s": self.s, "i": self.i, "gamma": self.gamma_var}

    @classmethod
    def from_dict(cls, d):
        return cls(d["s"], d["i"], d["gamma"])


def check_domain(s, i, g, slack=DOMAIN_SLACK):
    """Raise DomainError unless ``s, i >= 0``, ``s + i <= 1`` and ``g > 0`` (up to slack)."""
    if s < -slack or i < -slack or s + i > 1.0 + slack or not g > 0:
        raise DomainError(f"state (s={s}, i={i}, gamma={g}) outside the domain")


def to_json(params: Params | None = None, state: State | None = None) -> str:
    """Serialise params and/or state as one flat JSON object."""
    out = {}
    if params is not None:
        out.update(params.to_dict())
    if state is not None:
        out.update(state.to_dict())
    return json.dumps(out, allow_nan=False)


def from_json(text: str):
    """Inverse of :func:`to_json`. Returns ``(params, state)``; missing halves are None."""
    d = json.loads(text)
    params = Params.from_dict(d) if "beta" in d else None
    state = State.from_dict(d) if "s" in d else None
    return params, state


@dataclass(frozen=True)
class FixedPoint:
    state: State
    residual_norm: float


@dataclass(frozen=True)
class CubicCoeffs:
    """Coefficients of ``a3*lam**3 + a2*lam**2 + a1*lam + a0``."""

    a3: float
    a2: float
    a1: float
    a0: float

    def as_array(self):
        return np.array([self.a3, self.a2, self.a1, self.a0])


def flow(state: State, params: Params):
    """Right-hand side ``(dS/dt, dI/dt, dGamma/dt)``."""
    return flow_xyz(state.s, state.i, state.gamma_var, params)


def flow_xyz(s, i, g, params: Params):
    beta, xi, alpha, delta = params.as_tuple()
    return (
        -beta * s * i + xi * (1.0 - s - i),
        beta * s * i - g * i,
        g * (alpha * i - delta * s),
    )


def _residual(state, params):
    return max(abs(v) for v in flow(state, params))


def _require_feedback(params):
    if params.alpha <= 0 or params.delta <= 0:
        raise DomainError("the interior fixed point needs alpha > 0 and delta > 0")


def fixed_point(params: Params) -> FixedPoint:
    """The unique interior equilibrium.

    ``S*`` is the positive root of ``(delta*beta/xi) S^2 + (alpha+delta) S - alpha = 0``,
    ``I* = (delta/alpha) S*`` and ``Gamma* = beta S*``.
    """
    _require_feedback(params)
    beta, xi, alpha, delta = params.as_tuple()
    k = delta * beta / xi
    disc = (alpha + delta) ** 2 + 4.0 * alpha * delta * beta / xi
    s = (-(alpha + delta) + math.sqrt(disc)) / (2.0 * k)
    if not s > 0:
        # cancellation when k is tiny relative to alpha + delta; use the conjugate form
        s = 2.0 * alpha / ((alpha + delta) + math.sqrt(disc))
    return _make_fixed_point(s, delta / alpha * s, beta * s, params)


def fixed_point_restricted(beta, xi) -> FixedPoint:
    """Equilibrium of the ``alpha == delta`` model: ``S* = I* = 1 / (1 + sqrt((beta+xi)/xi))``."""
    if not (beta > 0 and xi > 0):
        raise DomainError(f"beta and xi must be > 0, got beta={beta}, xi={xi}")
    s = 1.0 / (1.0 + math.sqrt((beta + xi) / xi))
    # flow does not depend on the common value of alpha = delta at this point
    return _make_fixed_point(s, s, beta * s, Params(beta, xi, 1.0, 1.0))


def endemic_equilibrium(params: Params, gamma) -> FixedPoint:
    """Equilibrium of the frozen-Gamma (standard SIRS) model with recovery rate ``gamma``.

    ``S* = gamma/beta``, ``I* = xi (1 - S*) / (xi + gamma)``. If ``gamma >= beta`` the
    idea dies out and the disease-free state ``(1, 0, gamma)`` is returned.
    """
    if not params.frozen_gamma:
        raise DomainError("endemic_equilibrium applies to alpha = delta = 0 only")
    gamma = float(gamma)
    if not gamma > 0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    s = gamma / params.beta
    if s >= 1.0:
        return _make_fixed_point(1.0, 0.0, gamma, params)
    return _make_fixed_point(s, params.xi * (1.0 - s) / (params.xi + gamma), gamma, params)


def _make_fixed_point(s, i, g, params):
    state = State(s, i, g)
    res = _residual(state, params)
    if not res < RESIDUAL_TOL:
        raise ArithmeticError(f"fixed point residual {res:.3e} exceeds {RESIDUAL_TOL}")
    return FixedPoint(state, res)


def jacobian(state: State, params: Params):
    beta, xi, alpha, delta = params.as_tuple()
    s, i, g = state.s, state.i, state.gamma_var
    return np.array(
        [
            [-(beta * i + xi), -(beta * s + xi), 0.0],
            [beta * i, beta * s - g, -i],
            [-delta * g, alpha * g, alpha * i - delta * s],
        ]
    )


def char_poly_at(state: State, params: Params) -> CubicCoeffs:
    """Coefficients of ``det(J - lam*I)`` at an arbitrary state.

    Expanded in closed form: ``a2 = tr J``, ``a1 = -(sum of principal 2x2 minors)``,
    ``a0 = det J``. At the fixed point this reduces to :func:`char_poly_fixed_point`.
    """
    beta, xi, alpha, delta = params.as_tuple()
    s, i, g = state.s, state.i, state.gamma_var
    a2 = (alpha - beta) * i + (beta - delta) * s - g - xi
    a1 = (
        -g * (beta * i + delta * s + xi)
        + alpha * beta * i * (i - s)
        - beta * delta * s * (i - s)
        + xi * (alpha * i - beta * i + beta * s - delta * s)
    )
    a0 = (
        -g * delta * (2.0 * beta * s * i + xi * (s + i))
        + beta * xi * (i - s) * (alpha * i - delta * s)
    )
    return CubicCoeffs(-1.0, a2, a1, a0)


def char_poly_fixed_point(params: Params) -> CubicCoeffs:
    """Characteristic polynomial at the interior fixed point; every coefficient is negative."""
    beta, xi, alpha, delta = params.as_tuple()
    fp = fixed_point(params).state
    s, i, g = fp.s, fp.i, fp.gamma_var
    return CubicCoeffs(
        -1.0,
        -(beta * i + xi),
        -(alpha * g + beta * beta * s + beta * xi) * i,
        -(beta * delta * s + delta * xi + alpha * beta * i + alpha * xi) * g * i,
    )
