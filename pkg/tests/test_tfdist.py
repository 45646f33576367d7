import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtfa.grid import GridSpec, SampledSignal, reflect, sample
from qtfa.qwft import qwft
from qtfa.tfdist import (ambiguity, ambiguity_grid, ambiguity_point, ambiguity_relation_check, measure_scaling_check,
                         wigner, wigner_norm_check, wigner_point, wigner_relation_check, wigner_valid)
from qtfa.validation import gaussian_pair

seeds = st.integers(0, 2**32 - 1)
SMALL = GridSpec(1, 8, 3.0)


def _random(grid, seed):
    return SampledSignal(grid, np.random.default_rng(seed).standard_normal(grid.shape + (4,)))


@given(seeds, st.data())
def test_ambiguity_matches_brute_force(seed, data):
    f, g = _random(SMALL, seed), _random(SMALL, seed + 1)
    A = ambiguity(f, g)
    xi = data.draw(st.tuples(st.integers(0, 3), st.integers(0, 3)))
    wi = data.draw(st.tuples(st.integers(0, 7), st.integers(0, 7)))
    x = A.x_grid.axis_nodes()[list(xi)]
    w = A.w_grid.axis_nodes()[list(wi)]
    np.testing.assert_allclose(A.at(xi, wi), ambiguity_point(f, g, x, w), atol=1e-12)


@given(seeds, st.data())
def test_wigner_matches_brute_force(seed, data):
    f, g = _random(SMALL, seed), _random(SMALL, seed + 1)
    W = wigner(f, g)
    xi = data.draw(st.tuples(st.integers(0, 7), st.integers(0, 7)))
    wi = data.draw(st.tuples(st.integers(0, 7), st.integers(0, 7)))
    x = W.x_grid.axis_nodes()[list(xi)]
    w = W.w_grid.axis_nodes()[list(wi)]
    np.testing.assert_allclose(W.at(xi, wi), wigner_point(f, g, x, w), atol=1e-11)


@given(seeds)
def test_relations_random(seed):
    f, g = _random(SMALL, seed), _random(SMALL, seed + 2)
    full, mod = ambiguity_relation_check(f, g)
    assert full.passed and mod.passed
    assert wigner_relation_check(f, g).passed


def test_relations_gaussian_default_grid():
    grid = GridSpec(1, 32, 8.0)
    f, g = gaussian_pair(1.0, 0.5, grid)
    G = qwft(f, g)
    reps = ambiguity_relation_check(f, g, G=G)
    assert all(r.passed for r in reps)
    rep = wigner_relation_check(f, g, Gr=qwft(f, reflect(g)))
    assert rep.passed
    assert rep.metadata["compared_nodes"] == 16**4


def test_valid_subgrid_shape():
    grid = GridSpec(1, 16, 4.0)
    f, g = gaussian_pair(0.5, 0.5, grid)
    V = wigner_valid(wigner(f, g))
    assert V.values.shape == (8, 8, 8, 8, 4)
    assert V.x_grid == GridSpec(1, 8, 2.0)
    assert V.w_grid.step == pytest.approx(grid.dual().step)
    assert V.metadata["restricted"]
    with pytest.raises(ValueError):
        wigner_valid(qwft(f, g))


def test_gaussian_wigner_peak():
    # |W(f, f)(0, 0)| = 2^{2d} |<f, f~>| for the even unit Gaussian
    grid = GridSpec(1, 32, 8.0)
    f, _ = gaussian_pair(0.5, 0.5, grid)
    W = wigner(f, f)
    assert W.modulus()[16, 16, 16, 16] == pytest.approx(4.0, rel=1e-9)


def test_ambiguity_grid_requires_even():
    assert ambiguity_grid(GridSpec(1, 8, 1.0)) == GridSpec(1, 4, 1.0)
    with pytest.raises(ValueError):
        ambiguity_grid(GridSpec(1, 7, 1.0))


@pytest.mark.parametrize("kind", ["qwft", "ambiguity", "wigner"])
def test_measure_scaling(kind):
    grid = GridSpec(1, 16, 4.0)
    f, g = gaussian_pair(0.5, 0.5, grid)
    F = {"qwft": qwft, "ambiguity": ambiguity, "wigner": lambda a, b: wigner_valid(wigner(a, b))}[kind](f, g)
    assert measure_scaling_check(F, (1, 1)).passed
    with pytest.raises(ValueError):
        measure_scaling_check(F, (8, 8))


@pytest.mark.parametrize("a,b", [(0.25, 0.25), (0.5, 0.5), (1.0, 0.5)])
def test_wigner_norm_has_no_power_of_two(a, b):
    f, g = gaussian_pair(a, b, GridSpec(1, 32, 8.0))
    rep = wigner_norm_check(f, g)
    assert rep.passed, rep.summary()
    assert rep.lhs == pytest.approx(1.0, rel=1e-5)


def test_wigner_norm_aliases_when_under_resolved():
    f, g = gaussian_pair(2.0, 2.0, GridSpec(1, 32, 8.0))
    rep = wigner_norm_check(f, g)
    assert not rep.passed and rep.lhs > 1.01
