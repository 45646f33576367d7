import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtfa.grid import GaussianSpec, GridMismatchError, GridSpec, SampledSignal, lp_norm, sample
from qtfa.qwft import (PhaseSpaceField, dilation_covariance_check, gaussian_qwft_closed, gaussian_qwft_modulus2,
                       iter_qwft, parseval_qwft_check, plancherel_qwft_check, qwft, qwft_point, reconstruct)
from qtfa.suites import band_limited_signal
from qtfa.validation import gaussian_pair, gaussian_qwft_modulus_check, reconstruction_check

seeds = st.integers(0, 2**32 - 1)
SMALL = GridSpec(1, 8, 3.0)


def _random(grid, seed, real=False):
    vals = np.random.default_rng(seed).standard_normal(grid.shape + (4,))
    if real:
        vals[..., 1:] = 0
    return SampledSignal(grid, vals)


@given(seeds, st.data())
def test_field_matches_pointwise_sum(seed, data):
    f, g = _random(SMALL, seed), _random(SMALL, seed + 1)
    G = qwft(f, g)
    xi = data.draw(st.tuples(*[st.integers(0, 7)] * 2))
    wi = data.draw(st.tuples(*[st.integers(0, 7)] * 2))
    x = SMALL.axis_nodes()[list(xi)]
    w = G.w_grid.axis_nodes()[list(wi)]
    np.testing.assert_allclose(G.at(xi, wi), qwft_point(f, g, x, w), atol=1e-12)


@given(seeds)
def test_plancherel_random(seed):
    f, g = _random(SMALL, seed), _random(SMALL, seed + 7)
    assert plancherel_qwft_check(f, g).passed


@given(seeds)
def test_parseval_random(seed):
    r = np.random.default_rng(seed)
    f1, f2, g1, g2 = (SampledSignal(SMALL, r.standard_normal(SMALL.shape + (4,))) for _ in range(4))
    assert parseval_qwft_check(f1, f2, g1, g2).passed


@given(seeds)
def test_reconstruction_random(seed):
    f, g = _random(SMALL, seed), _random(SMALL, seed + 3, real=True)
    assert reconstruction_check(f, g).passed


def test_reconstruction_rejects_quaternion_window():
    f = _random(SMALL, 1)
    g = _random(SMALL, 2)
    with pytest.raises(ValueError):
        reconstruct(qwft(f, g), g)
    with pytest.raises(GridMismatchError):
        reconstruct(qwft(f, _random(SMALL, 2, real=True)), _random(GridSpec(1, 8, 2.0), 1, real=True))


def test_streaming_matches_field():
    f, g = _random(SMALL, 5), _random(SMALL, 6)
    G = qwft(f, g)
    flat = G.values.reshape((SMALL.size,) + G.w_grid.shape + (4,))
    for start, block in iter_qwft(f, g, chunk=5):
        np.testing.assert_array_equal(block, flat[start : start + len(block)])


def test_closed_form_with_phase():
    grid = GridSpec(1, 64, 8.0)
    f, g = gaussian_pair(1.0, 0.5, grid)
    x = np.array([1.5, -0.75])
    for w in (np.array([0.0, 0.0]), np.array([0.9, -1.3]), np.array([2.2, 0.4])):
        np.testing.assert_allclose(qwft_point(f, g, x, w), gaussian_qwft_closed(1.0, 0.5, x, w, 1), atol=1e-10)


def test_closed_form_modulus_consistent():
    x = np.array([[0.3, 1.2]])
    w = np.array([[-0.4, 2.0]])
    full = gaussian_qwft_closed(2.0, 1.0, x, w, 1)
    m2 = gaussian_qwft_modulus2(2.0, 1.0, np.sum(x**2, -1), np.sum(w**2, -1), 1)
    np.testing.assert_allclose(np.sum(full**2, -1), m2, rtol=1e-14)


def test_gaussian_modulus_converges():
    rep = gaussian_qwft_modulus_check(1.0, 0.5, GridSpec(1, 64, 8.0))
    assert rep.passed, rep.summary()
    assert rep.metadata["max_norm_relative"] < 1e-13


@pytest.mark.parametrize("a,b,peak_rel", [(0.5, 0.5, 1e-8), (1.0, 0.5, 1e-5), (2.0, 1.0, 1e-2)])
def test_gaussian_modulus_default_grid_regime(a, b, peak_rel):
    # at N = 32 the error relative to the peak stays small; the tail-relative error does not
    rep = gaussian_qwft_modulus_check(a, b, GridSpec(1, 32, 8.0))
    assert rep.metadata["max_norm_relative"] < peak_rel
    assert rep.metadata["compared_nodes"] > 0


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_dilation_covariance(lam):
    grid = GridSpec(1, 32, 8.0)
    f = sample(GaussianSpec(0.7, 0.3, "separable"), grid)
    g = sample(GaussianSpec(0.5, 0.5, "window"), grid)
    assert dilation_covariance_check(f, g, lam).passed


def test_dilation_needs_closed_form():
    f = _random(SMALL, 0)
    with pytest.raises(ValueError):
        dilation_covariance_check(f, f, 2.0)


def test_field_shape_validated():
    with pytest.raises(ValueError):
        PhaseSpaceField(SMALL, SMALL.dual(), np.zeros((8, 8, 8, 4)))


def test_random_pair_plancherel_default_grid():
    grid = GridSpec(1, 32, 8.0)
    f = band_limited_signal(grid, 11)
    g = band_limited_signal(grid, 12)
    assert lp_norm(f) == pytest.approx(1.0)
    assert plancherel_qwft_check(f, g).passed
