import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ideawaves.model import CubicCoeffs, Params, char_poly_fixed_point, fixed_point, jacobian
from ideawaves.stability import (
    RegionLabel,
    cardano_reduce,
    classify_region,
    cubic_roots,
    eigenvalues_at_fixed_point,
    grid_axis,
    hopf_alpha,
    is_locally_unstable,
    p_positive_threshold,
    read_stability_csv,
    restricted_shift,
    stability_map,
)

B, X = 0.5, 0.4
CAPTIONS = {
    (0.65, 0.6): RegionLabel.STABLE_FIRST,
    (0.95, 0.6): RegionLabel.STABLE_SECOND,
    (0.45, 3.0): RegionLabel.STABLE_BOTH,
    (1.5, 2.5): RegionLabel.UNSTABLE,
    (1.75, 1.75): RegionLabel.UNSTABLE,
}


@pytest.mark.parametrize("ad, label", CAPTIONS.items())
def test_caption_labels(ad, label):
    p = Params(B, X, *ad)
    assert classify_region(p) is label
    assert is_locally_unstable(p) == (label is RegionLabel.UNSTABLE)


@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("delta", [0.01, 1.0, 100.0])
def test_first_condition_implies_stable(alpha, delta):
    assert not is_locally_unstable(Params(B, X, alpha, delta))


def test_boundary_tie_is_unstable():
    a = 1.5
    d = a * a * X / ((a - B) * (a - B - X))
    assert is_locally_unstable(Params(B, X, a, d))
    assert classify_region(Params(B, X, a, d)) is RegionLabel.UNSTABLE


@pytest.mark.parametrize("alpha, sign", [(1.0, -1), (1.75, 1)])
def test_eigenvalue_signs_along_diagonal(alpha, sign):
    ev = eigenvalues_at_fixed_point(Params(B, X, alpha, alpha))
    assert np.sign(ev.max_real) == sign
    if sign < 0:
        assert all(z.real < 0 for z in ev)


def test_eigenvalues_at_hopf_point():
    ev = eigenvalues_at_fixed_point(Params(B, X, 1.5, 1.5))
    assert abs(ev.max_real) < 1e-6
    assert ev.n_real == 1


rate = st.floats(0.01, 5.0)


@settings(max_examples=300, deadline=None)
@given(rate, rate, rate, rate)
def test_closed_form_eigenvalues_match_numpy(beta, xi, alpha, delta):
    p = Params(beta, xi, alpha, delta)
    ours = sorted(eigenvalues_at_fixed_point(p), key=lambda z: (z.real, z.imag))
    ref = sorted(np.linalg.eigvals(jacobian(fixed_point(p).state, p)), key=lambda z: (z.real, z.imag))
    np.testing.assert_allclose(ours, ref, atol=1e-9)
    # exact conjugate symmetry
    cplx = [z for z in ours if z.imag != 0]
    if cplx:
        assert abs(cplx[0] - cplx[1].conjugate()) < 1e-12


@pytest.mark.parametrize(
    "coeffs", [(1, -6, 11, -6), (1, 0, 0, -8), (-1, -1, -1, -1), (2, 0, 0, 0), (1, -3, 3, -1)]
)
def test_cubic_roots_against_numpy(coeffs):
    ours = sorted(cubic_roots(CubicCoeffs(*map(float, coeffs))), key=lambda z: (z.real, z.imag))
    ref = sorted(np.roots(coeffs), key=lambda z: (z.real, z.imag))
    np.testing.assert_allclose(ours, ref, atol=1e-5)  # triple roots are ill-conditioned


def test_cardano_example():
    red = cardano_reduce(B, X, 1.5)
    assert red.discriminant > 0
    roots = np.roots(char_poly_fixed_point(Params(B, X, 1.5, 1.5)).as_array())
    assert sum(abs(z.imag) < 1e-12 for z in roots) == 1


@settings(max_examples=200, deadline=None)
@given(rate, rate, rate)
def test_cardano_roots_match_char_poly(beta, xi, alpha):
    red = cardano_reduce(beta, xi, alpha)
    lam = sorted((y + restricted_shift(beta, xi) for y in red.roots()), key=lambda z: (z.real, z.imag))
    ref = sorted(eigenvalues_at_fixed_point(Params(beta, xi, alpha, alpha)), key=lambda z: (z.real, z.imag))
    np.testing.assert_allclose(lam, ref, atol=1e-9)
    if red.p > 0:
        assert red.discriminant > 0


@settings(max_examples=200, deadline=None)
@given(rate, rate, st.floats(0.0, 10.0))
def test_p_positive_above_threshold(beta, xi, extra):
    alpha = max(p_positive_threshold(beta, xi), 0.0) + extra + 1e-6
    red = cardano_reduce(beta, xi, alpha)
    assert red.p > -1e-12 * max(1.0, abs(alpha))


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 5.0), st.floats(0.01, 5.0))
def test_hopf_alpha_inside_p_positive_region(beta, xi):
    if not beta > 11 / 25 * xi * (1 + 1e-6):
        return
    assert hopf_alpha(beta, xi).alpha > p_positive_threshold(beta, xi)


def test_hopf_alpha_values():
    h = hopf_alpha(0.5, 0.4)
    assert h.alpha == pytest.approx(1.5, abs=1e-15) and h.condition_holds
    assert hopf_alpha(0.3, 0.1).alpha == pytest.approx(0.6, abs=1e-15)
    assert not hopf_alpha(11 / 25 * 0.5, 0.5).condition_holds


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.05, 3.0))
def test_hopf_point_spectrum(beta, xi):
    if not beta > 11 / 25 * xi * 1.01:
        return
    a = hopf_alpha(beta, xi).alpha
    ev = eigenvalues_at_fixed_point(Params(beta, xi, a, a))
    real = [z for z in ev if z.imag == 0]
    pair = [z for z in ev if z.imag != 0]
    assert len(real) == 1 and real[0].real < 0
    assert all(abs(z.real) < 1e-8 for z in pair)


def test_stability_map_grid_and_csv(tmp_path):
    smap = stability_map(B, X, (0, 3), (0, 3), 60)
    assert len(smap.alphas) == 60 and smap.alphas[-1] == 3.0 and smap.alphas[0] > 0
    # first condition does not depend on delta: the alpha = beta + xi boundary is vertical
    for i, a in enumerate(smap.alphas):
        firsts = {lab in (RegionLabel.STABLE_FIRST, RegionLabel.STABLE_BOTH) for lab in smap.labels[i]}
        assert firsts == {a <= B + X}
    path = tmp_path / "map.csv"
    smap.write_csv(path)
    rows = read_stability_csv(path)
    assert len(rows) == 3600
    assert all(classify_region(Params(B, X, a, d)) is lab for a, d, lab in rows[::97])


def test_stability_map_single_cell():
    smap = stability_map(B, X, (0, 1.75), (0, 1.75), 1)
    assert smap.labels == [[classify_region(Params(B, X, 1.75, 1.75))]]


@pytest.mark.parametrize("lo, hi", [(3, 1), (1, 1), (-1, 2), (0, float("inf"))])
def test_grid_axis_rejects_bad_ranges(lo, hi):
    with pytest.raises(ValueError):
        grid_axis(lo, hi, 10)
