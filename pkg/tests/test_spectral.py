import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from biwhitham.kernel import kernel_Kp_reg, symbol
from biwhitham.spectral import (
    apply_K,
    build_grid,
    dct_coefficients,
    evaluate_series,
    interpolate,
    synthesize,
)


def test_nodes_n4():
    g = build_grid(4)
    np.testing.assert_allclose(g.nodes, np.pi * np.array([1, 3, 5, 7]) / 8, rtol=0, atol=1e-15)


@pytest.mark.parametrize("n", [8, 33, 512])
def test_nodes_and_weights(n):
    g = build_grid(n)
    assert np.all(np.diff(g.nodes) > 0)
    assert 0 < g.nodes[0] and g.nodes[-1] < np.pi
    assert g.weights[0] == 1 / n
    assert np.all(g.weights[1:] == 2 / n)


def test_too_small():
    with pytest.raises(ValueError):
        build_grid(1)


def test_grid_is_immutable():
    g = build_grid(8)
    with pytest.raises(ValueError):
        g.multiplier_matrix[0, 0] = 1.0


def test_matrix_preserves_constants():
    g = build_grid(4)
    np.testing.assert_allclose(g.multiplier_matrix @ np.ones(4), np.ones(4), atol=1e-14)


def test_matrix_definition():
    g = build_grid(6)
    x = g.nodes
    brute = np.zeros((6, 6))
    for i in range(6):
        for j in range(6):
            brute[i, j] = sum(symbol(float(n)) * g.weights[n] * math.cos(n * x[j]) * math.cos(n * x[i]) for n in range(6))
    np.testing.assert_allclose(g.multiplier_matrix, brute, atol=1e-15)


def test_constant_coefficients():
    g = build_grid(16)
    a = dct_coefficients(np.full(16, 2.5), g)
    assert a[0] == pytest.approx(2.5, abs=1e-14)
    assert np.max(np.abs(a[1:])) < 1e-14


def test_single_mode_coefficients():
    g = build_grid(32)
    a = dct_coefficients(np.cos(g.nodes), g)
    expect = np.zeros(32)
    expect[1] = 1.0
    assert np.max(np.abs(a - expect)) < 1e-13


def test_coefficients_match_quadrature_sum():
    g = build_grid(10)
    v = np.sin(g.nodes) ** 3 + g.nodes
    brute = [g.weights[n] * np.sum(v * np.cos(n * g.nodes)) for n in range(10)]
    np.testing.assert_allclose(dct_coefficients(v, g), brute, atol=1e-14)


def test_length_mismatch():
    g = build_grid(8)
    with pytest.raises(ValueError):
        dct_coefficients(np.ones(7), g)
    with pytest.raises(ValueError):
        apply_K(np.ones(9), g)


@given(st.lists(st.floats(-10, 10), min_size=16, max_size=16))
def test_round_trip(values):
    g = build_grid(16)
    v = np.array(values)
    assert np.max(np.abs(synthesize(dct_coefficients(v, g), g) - v)) < 1e-13


def test_apply_constant():
    g = build_grid(32)
    np.testing.assert_allclose(apply_K(np.full(32, -0.7), g), -0.7, atol=1e-14)


def test_apply_single_mode():
    g = build_grid(64)
    out = apply_K(np.cos(g.nodes), g)
    assert np.max(np.abs(out - math.tanh(1.0) * np.cos(g.nodes))) < 1e-13


@settings(max_examples=25)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_fft_and_matrix_paths_agree(seed):
    g = build_grid(48)
    v = np.random.default_rng(seed).normal(size=48)
    assert np.max(np.abs(apply_K(v, g) - apply_K(v, g, method="matrix"))) < 1e-12


def test_unknown_method():
    with pytest.raises(ValueError):
        apply_K(np.ones(8), build_grid(8), method="dft")


def test_self_adjoint():
    g = build_grid(40)
    D = np.eye(40) * np.pi / 40
    np.testing.assert_allclose(D @ g.multiplier_matrix, g.multiplier_matrix.T @ D, atol=1e-15)


def test_spectrum():
    g = build_grid(24)
    eig = np.sort(np.linalg.eigvals(g.multiplier_matrix).real)
    np.testing.assert_allclose(eig, np.sort(symbol(np.arange(24.0))), atol=1e-13)
    assert eig.min() > 0 and eig.max() <= 1 + 1e-14


def test_positive_entries():
    # discrete counterpart of K_p > 0
    for n in (16, 128):
        assert build_grid(n).multiplier_matrix.min() > 0


def _convolution_oracle(f, x):
    """int_{-pi}^{pi} K_p(s) f(x - s) ds with the log pole integrated by QAWS."""
    g = lambda s: f(x - s) + f(x + s)  # noqa: E731
    smooth, _ = integrate.quad(lambda s: kernel_Kp_reg(s) * g(s), 0, np.pi, epsabs=1e-13, limit=200)
    # -(1/pi) int_0^pi log(pi s / 4) g(s) ds
    logw, _ = integrate.quad(g, 0, np.pi, weight="alg-loga", wvar=(0, 0), epsabs=1e-13)
    plain, _ = integrate.quad(g, 0, np.pi, epsabs=1e-13)
    return smooth - (logw + math.log(np.pi / 4) * plain) / np.pi


def test_apply_matches_convolution_quadrature():
    g = build_grid(256)
    f = lambda x: np.exp(np.cos(x))  # noqa: E731
    out = apply_K(f(g.nodes), g)
    idx = [0, 40, 128, 200, 255]
    oracle = np.array([_convolution_oracle(f, g.nodes[i]) for i in idx])
    assert np.max(np.abs(out[idx] - oracle)) < 1e-6


def test_apply_matches_bessel_series():
    # exp(cos x) = I0(1) + 2 sum I_n(1) cos(nx)
    g = build_grid(128)
    n = np.arange(60)
    coeff = 2 * special.iv(n, 1.0)
    coeff[0] /= 2
    exact = evaluate_series(symbol(n.astype(float)) * coeff, g.nodes)
    assert np.max(np.abs(apply_K(np.exp(np.cos(g.nodes)), g) - exact)) < 1e-13


def test_refinement_consistency():
    f = lambda x: 1 / (1.5 - np.cos(x))  # noqa: E731
    ga, gb = build_grid(64), build_grid(128)
    ca = dct_coefficients(apply_K(f(ga.nodes), ga), ga)
    cb = dct_coefficients(apply_K(f(gb.nodes), gb), gb)
    assert np.max(np.abs(ca[:32] - cb[:32])) < 1e-12


def test_interpolate_band_limited():
    ga, gb = build_grid(16), build_grid(64)
    f = lambda x: 0.3 + np.cos(x) - 0.2 * np.cos(5 * x)  # noqa: E731
    np.testing.assert_allclose(interpolate(f(ga.nodes), ga, gb), f(gb.nodes), atol=1e-14)
