"""Local stability of the interior fixed point and the Hopf point of the alpha == delta model."""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import CubicCoeffs, Params, char_poly_at, fixed_point


class RegionLabel(enum.Enum):
    UNSTABLE = "unstable"
    STABLE_FIRST = "stable_first"
    STABLE_SECOND = "stable_second"
    STABLE_BOTH = "stable_both"

    @property
    def stable(self) -> bool:
        return self is not RegionLabel.UNSTABLE


def _second_condition(params):
    """``delta < alpha^2 xi / ((alpha-beta)(alpha-beta-xi))``, only where the denominator is > 0."""
    beta, xi, alpha, delta = params.as_tuple()
    den = (alpha - beta) * (alpha - beta - xi)
    if not den > 0:
        return False
    return delta < alpha * alpha * xi / den


def is_locally_unstable(params: Params) -> bool:
    """Routh-Hurwitz test: unstable iff ``alpha > beta + xi`` and ``delta >= alpha^2 xi / ((alpha-beta)(alpha-beta-xi))``."""
    beta, xi, alpha, delta = params.as_tuple()
    if not alpha > beta + xi:
        return False
    return delta >= alpha * alpha * xi / ((alpha - beta) * (alpha - beta - xi))


def classify_region(params: Params) -> RegionLabel:
    first = params.alpha <= params.beta + params.xi
    second = _second_condition(params)
    if first and second:
        return RegionLabel.STABLE_BOTH
    if first:
        return RegionLabel.STABLE_FIRST
    if second:
        return RegionLabel.STABLE_SECOND
    return RegionLabel.UNSTABLE


# -- cubic roots -----------------------------------------------------------------


@dataclass(frozen=True)
class ReducedCubic:
    """``y^3 + p*y + q = 0`` together with ``discriminant = q^2/4 + p^3/27``."""

    p: float
    q: float
    discriminant: float

    def roots(self):
        return depressed_roots(self.p, self.q)


def depressed_roots(p, q):
    """Roots of ``y^3 + p y + q``. One real root first when the discriminant is positive."""
    disc = q * q / 4.0 + p ** 3 / 27.0
    if disc > 0:
        sq = math.sqrt(disc)
        # pick the cube root without cancellation, get the other from u*v = -p/3
        u = np.cbrt(-q / 2.0 - math.copysign(sq, q))
        v = -p / (3.0 * u) if u != 0 else 0.0
        y0 = u + v
        re = -y0 / 2.0
        im = math.sqrt(3.0) / 2.0 * abs(u - v)
        return [complex(y0, 0.0), complex(re, im), complex(re, -im)]
    if p == 0:
        return [0j, 0j, 0j]
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * q / (p * m)
    theta = math.acos(max(-1.0, min(1.0, arg))) / 3.0
    return [complex(m * math.cos(theta - 2.0 * math.pi * k / 3.0), 0.0) for k in range(3)]


def reduce_cubic(coeffs: CubicCoeffs) -> tuple[ReducedCubic, float]:
    """Depressed form of a general cubic and the shift ``-b/(3a)`` with ``lam = y + shift``."""
    a, b, c, d = coeffs.a3, coeffs.a2, coeffs.a1, coeffs.a0
    p = c / a - b * b / (3.0 * a * a)
    q = d / a - b * c / (3.0 * a * a) + 2.0 * b ** 3 / (27.0 * a ** 3)
    return ReducedCubic(p, q, q * q / 4.0 + p ** 3 / 27.0), -b / (3.0 * a)


def _polish(z, coeffs):
    a, b, c, d = coeffs
    f = ((a * z + b) * z + c) * z + d
    df = (3.0 * a * z + 2.0 * b) * z + c
    if df == 0:
        return z
    z1 = z - f / df
    f1 = ((a * z1 + b) * z1 + c) * z1 + d
    return z1 if abs(f1) <= abs(f) else z


def cubic_roots(coeffs: CubicCoeffs):
    """Closed-form roots of the cubic, each refined by one Newton step."""
    reduced, shift = reduce_cubic(coeffs)
    cs = (coeffs.a3, coeffs.a2, coeffs.a1, coeffs.a0)
    roots = [_polish(y + shift, cs) for y in reduced.roots()]
    # keep exact conjugacy after polishing
    if reduced.discriminant > 0:
        r0, r1 = roots[0], roots[1]
        roots = [complex(r0.real, 0.0), complex(r1.real, abs(r1.imag)), complex(r1.real, -abs(r1.imag))]
    return roots


@dataclass(frozen=True)
class EigenTriple:
    """Eigenvalues sorted by descending real part (positive imaginary part first on ties)."""

    values: tuple

    @property
    def max_real(self) -> float:
        return self.values[0].real

    @property
    def n_real(self) -> int:
        return sum(1 for z in self.values if z.imag == 0.0)

    def __iter__(self):
        return iter(self.values)


def _sorted_triple(roots):
    return EigenTriple(tuple(sorted(roots, key=lambda z: (-z.real, -z.imag))))


def eigenvalues_at_fixed_point(params: Params) -> EigenTriple:
    fp = fixed_point(params).state
    return _sorted_triple(cubic_roots(char_poly_at(fp, params)))


# -- restricted model (alpha == delta) -------------------------------------------


def cardano_reduce(beta, xi, alpha) -> ReducedCubic:
    """Depressed characteristic cubic at the fixed point of the alpha == delta model.

    Uses ``b = -sqrt(xi (beta + xi))``; the shift back to the eigenvalue is
    ``lam = y - b/3`` (``a = -1``).
    """
    b = -math.sqrt(xi * (beta + xi))
    p = (alpha * xi + (alpha + 2.0 / 3.0 * beta) * (beta + xi) + (2.0 * alpha + beta) * b) / beta * xi
    q = (-5.0 / 3.0 * alpha / beta * (xi + b) ** 2 + xi * b / 3.0 + 7.0 / 27.0 * b * b) * b
    return ReducedCubic(p, q, q * q / 4.0 + p ** 3 / 27.0)


def restricted_shift(beta, xi) -> float:
    """``-b/(3a)`` for the restricted cubic, i.e. ``-sqrt(xi (beta+xi)) / 3``."""
    return -math.sqrt(xi * (beta + xi)) / 3.0


def p_positive_threshold(beta, xi) -> float:
    """alpha above which the restricted depressed cubic has ``p > 0`` (hence one real root)."""
    sx, sb = math.sqrt(xi), math.sqrt(beta + xi)
    return (sx - 2.0 / 3.0 * sb) / (sx - sb) ** 2 * beta * sb


@dataclass(frozen=True)
class HopfPoint:
    alpha: float
    condition_holds: bool  # beta > 11 xi / 25


def hopf_alpha(beta, xi) -> HopfPoint:
    """Crossing point ``alpha = beta + xi + sqrt(xi (beta + xi))`` along alpha == delta."""
    alpha = beta + xi + math.sqrt(xi * (beta + xi))
    return HopfPoint(alpha, beta > 11.0 / 25.0 * xi)


def locate_hopf(beta, xi, lo, hi, tol=1e-8, max_iter=200) -> float:
    """Bisection on the sign of the leading eigenvalue real part along alpha == delta."""

    def g(a):
        return eigenvalues_at_fixed_point(Params(beta, xi, a, a)).max_real

    glo, ghi = g(lo), g(hi)
    if glo * ghi > 0:
        raise ValueError(f"no sign change of max Re(lambda) on [{lo}, {hi}]")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if (gm > 0) == (ghi > 0):
            hi, ghi = mid, gm
        else:
            lo, glo = mid, gm
    return 0.5 * (lo + hi)


# -- parameter-plane map ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StabilityMap:
    beta: float
    xi: float
    alphas: np.ndarray
    deltas: np.ndarray
    labels: list  # labels[i][j] for (alphas[i], deltas[j])

    def rows(self):
        for i, a in enumerate(self.alphas):
            for j, d in enumerate(self.deltas):
                yield float(a), float(d), self.labels[i][j]

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["alpha", "delta", "label"])
            for a, d, lab in self.rows():
                w.writerow([repr(a), repr(d), lab.value])


def grid_axis(lo, hi, n):
    """``n`` points on the half-open interval ``(lo, hi]``."""
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo < 0 or hi <= lo:
        raise ValueError(f"invalid range ({lo}, {hi}]")
    if n < 1:
        raise ValueError(f"resolution must be >= 1, got {n}")
    return np.linspace(lo, hi, n + 1)[1:]


def stability_map(beta, xi, alpha_range, delta_range, resolution) -> StabilityMap:
    alphas = grid_axis(*alpha_range, resolution)
    deltas = grid_axis(*delta_range, resolution)
    labels = [[classify_region(Params(beta, xi, a, d)) for d in deltas] for a in alphas]
    return StabilityMap(beta, xi, alphas, deltas, labels)


def read_stability_csv(path):
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        if header != ["alpha", "delta", "label"]:
            raise ValueError(f"unexpected header {header}")
        return [(float(a), float(d), RegionLabel(lab)) for a, d, lab in r]


__all__ = [
    "RegionLabel",
    "ReducedCubic",
    "EigenTriple",
    "HopfPoint",
    "StabilityMap",
    "is_locally_unstable",
    "classify_region",
    "eigenvalues_at_fixed_point",
    "cubic_roots",
    "reduce_cubic",
    "depressed_roots",
    "cardano_reduce",
    "restricted_shift",
    "p_positive_threshold",
    "hopf_alpha",
    "locate_hopf",
    "stability_map",
    "grid_axis",
    "read_stability_csv",
]
