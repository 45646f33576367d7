import math
from functools import lru_cache

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from qtfa import uncertainty as U
from qtfa.grid import GaussianSpec, GridSpec, SampledSignal, dilate, sample
from qtfa.qwft import PhaseSpaceField, qwft
from qtfa.special import EULER_GAMMA
from qtfa.suites import band_limited_signal, random_pair
from qtfa.validation import gaussian_pair

GRID = GridSpec(1, 32, 8.0)
SMALL = GridSpec(1, 8, 3.0)
seeds = st.integers(0, 2**32 - 1)


@lru_cache(maxsize=None)
def pair_field(a, b, kind):
    f, g = gaussian_pair(a, b, GRID)
    return f, g, U.phase_field(f, g, kind)


# ------------------------------------------------------------ constants

def test_lieb_constant():
    assert U.lieb_constant(2, 1) == pytest.approx(1.0, abs=1e-15)
    assert U.lieb_constant(2, 3) == pytest.approx(1.0, abs=1e-15)
    for p in (2.5, 3, 4, 10):
        c = U.lieb_constant(p, 1)
        q = p / (p - 1)
        assert c == pytest.approx((4 / p) ** (1 / p) * (1 / q) ** (1 / q))
        assert c < 1
    with pytest.raises(ValueError):
        U.lieb_constant(1.5, 1)


def test_heisenberg_constants_against_mpmath():
    for p, q, d in [(1, 1, 1), (1, 2, 1), (2, 1, 1), (1.5, 3, 2), (2, 2, 3)]:
        B = mpmath.mpf(4) ** d * p * q * mpmath.gamma(d) ** 2 / (mpmath.gamma(mpmath.mpf(d) / p) * mpmath.gamma(mpmath.mpf(d) / q))
        pre = mpmath.mpf(p / q) ** (mpmath.mpf(q) / (p + q)) + mpmath.mpf(q / p) ** (mpmath.mpf(p) / (p + q))
        E = (4**d * B) ** (mpmath.mpf(p * q) / (d * (p + q))) / (mpmath.e * pre)
        assert U.heisenberg_B(p, q, d) == pytest.approx(float(B), rel=1e-13)
        assert U.heisenberg_constant(p, q, d) == pytest.approx(float(E), rel=1e-13)


def test_heisenberg_special_case():
    assert U.heisenberg_constant(1, 1, 1) == pytest.approx(2 / math.e, abs=1e-12)


def test_log_constant():
    assert U.log_constant(1) == pytest.approx(-EULER_GAMMA - math.log(2), abs=1e-15)
    assert U.log_constant(2) == pytest.approx(-EULER_GAMMA + math.log(2), abs=1e-15)
    for d in (1, 2, 3, 5):
        assert U.log_constant(d) == pytest.approx(float(mpmath.digamma(d / 2)) + math.log(2), abs=1e-14)


def test_cube_log_mean():
    assert U.cube_log_mean(1) == pytest.approx(math.log(0.5) - 1, abs=1e-12)
    c2, _ = integrate.dblquad(lambda y, x: 0.5 * math.log(x * x + y * y) if x or y else 0.0, 0, 0.5, 0, 0.5,
                              epsabs=1e-13)
    assert U.cube_log_mean(2) == pytest.approx(4 * c2, abs=1e-9)
    u = np.random.default_rng(0).uniform(-0.5, 0.5, size=(400_000, 4))
    mc = float(np.mean(0.5 * np.log(np.sum(u**2, axis=1))))
    assert U.cube_log_mean(4) == pytest.approx(mc, abs=5e-3)


@pytest.mark.parametrize("eps,p,d", [(0.5, 1, 1), (1, 2, 1), (1.5, 3, 1), (1, 2, 2), (3.5, 1.5, 2)])
def test_price_constant_against_direct_formula(eps, p, d):
    mp = mpmath.mpf
    n, k = 2 * d, 2 * d + mp(eps)
    den = (mp(2) ** (eps * (n + 2 * p + 2) / (k * (p + 1)))
           * mp(eps) ** (2 * eps / k)
           * mpmath.gamma(n) ** (eps / (k * (p + 1)))
           * (n - mp(eps)) ** ((n - eps) / k + eps / (k * (p + 1))))
    M = (k / den) ** (p * (p + 1))
    assert U.local_price_constant(eps, p, d) == pytest.approx(float(M), rel=1e-12)
    ratio = mp(2) ** (2 * d * (p - 2) * (p + 1) + 4 * d + 4 * p * d * eps / k)
    assert U.local_price_constant(eps, p, d, wigner_variant=True) == pytest.approx(float(M * ratio), rel=1e-12)


def test_price_constant_domain():
    with pytest.raises(ValueError):
        U.local_price_constant(2.0, 2, 1)
    with pytest.raises(ValueError):
        U.local_price_constant(1.0, 0.5, 1)


# ---------------------------------------------------------- sets, entropy

def test_concentration_sets():
    _, _, G = pair_field(0.5, 0.5, "qwft")
    full = U.ConcentrationSet.full(G)
    assert full.measure == pytest.approx(G.total_measure)
    assert U.epsilon_of(G, full) == 0.0
    assert U.epsilon_of(G, U.ConcentrationSet.empty(G)) == 1.0
    lvl = U.ConcentrationSet.super_level(G, 0.3)
    assert lvl.measure + lvl.complement().measure == pytest.approx(full.measure)
    assert U.ConcentrationSet.super_level(G, 0.5).count < lvl.count
    box = U.ConcentrationSet.box(G, 2.0, 1.0)
    assert box.count == 9**2 * 5**2  # 9 x-nodes in [-2, 2], 5 w-nodes of step pi/8 in [-1, 1]
    with pytest.raises(ValueError):
        U.epsilon_of(G, U.ConcentrationSet(np.ones((2, 2), bool), 1.0))


def test_entropy_of_uniform_density():
    P = np.full(100, 1 / 50.0)
    assert U.entropy(P, 0.5) == pytest.approx(math.log(50.0))
    assert U.entropy(np.array([0.0, 2.0]), 0.5) == pytest.approx(-math.log(2.0))
    with pytest.raises(ValueError):
        U.entropy(np.array([-1.0]))


# ----------------------------------------------------- discrete-exact checks

@given(seeds, st.floats(0.0, 1.0))
def test_donoho_stark_any_set(seed, frac):
    r = np.random.default_rng(seed)
    f = SampledSignal(SMALL, r.standard_normal(SMALL.shape + (4,)))
    g = SampledSignal(SMALL, r.standard_normal(SMALL.shape + (4,)))
    G = qwft(f, g)
    mask = r.uniform(size=G.values.shape[:-1]) < frac
    if not mask.any():
        mask.flat[0] = True
    assert U.donoho_stark_check(f, g, U.ConcentrationSet(mask, G.cell_weight), G).passed


@settings(max_examples=5)
@given(st.integers(0, 1000))
def test_lieb_random_pairs(seed):
    f, g = random_pair(GRID, seed, 0)
    G = qwft(f, g)
    for p in (2.5, 3, 4):
        assert U.lieb_check(f, g, p, G).passed
    eq = U.lieb_check(f, g, 2, G)
    assert abs(eq.margin) <= 1e-9


# -------------------------------------------------------- Gaussian family

@pytest.mark.parametrize("kind", U.KINDS)
@pytest.mark.parametrize("ab", [(0.5, 0.5), (1.0, 0.5)])
def test_family_checks(kind, ab):
    f, g, F = pair_field(*ab, kind)
    reps = [
        U.entropy_bound_check(f, g, kind, F),
        U.log_uncertainty_qwft_check(f, g, kind, F),
        U.lieb_support_check(f, g, 4, kind, F),
        U.heisenberg_qwft_check(f, g, 1, 1, kind, "radial", F),
    ]
    for tau in (0.1, 0.3, 0.5):
        reps.append(U.lieb_concentration_check(f, g, U.ConcentrationSet.super_level(F, tau), 4, kind, F))
    for half in (1.0, 2.0, 4.0):
        for eps, p in [(0.5, 1), (1, 2), (1.5, 3)]:
            reps.append(U.local_price_check(f, g, U.ConcentrationSet.box(F, half, half), eps, p, kind, F))
    bad = [r.summary() for r in reps if not r.passed]
    assert not bad


@pytest.mark.parametrize("pq", [(1, 1), (1, 2), (2, 1)])
def test_heisenberg_moments(pq):
    f, g, G = pair_field(0.5, 0.5, "qwft")
    rep = U.heisenberg_qwft_check(f, g, *pq, "qwft", "moments", G)
    assert rep.passed, rep.summary()
    with pytest.raises(ValueError):
        U.heisenberg_qwft_check(f, g, *pq, "wigner", "moments")


def test_wigner_radial_uses_factor():
    f, g, W = pair_field(0.5, 0.5, "wigner")
    rep = U.heisenberg_qwft_check(f, g, 1, 2, "wigner", "radial", W)
    assert rep.constant_values["factor"] == pytest.approx(4 ** (-2 / 3))


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
def test_log_uncertainty_qft_dilations(lam):
    f = dilate(sample(GaussianSpec(0.5, 0.5, "signal"), GRID), lam)
    rep = U.log_uncertainty_qft_check(f)
    assert rep.passed and rep.margin > 0


def test_log_uncertainty_qft_random():
    for seed in range(5):
        assert U.log_uncertainty_qft_check(band_limited_signal(GRID, seed)).passed


def test_component_heisenberg_random():
    for seed in range(5):
        f = band_limited_signal(GRID, seed)
        assert U.component_heisenberg_qft_check(f, 0).passed
        assert U.component_heisenberg_qft_check(f, 1).passed
        assert U.radial_heisenberg_qft_check(f).passed


def test_component_heisenberg_gaussian_saturates_at_fine_grid():
    f = sample(GaussianSpec(1.0, 1.0, "signal"), GridSpec(1, 64, 8.0))
    rep = U.component_heisenberg_qft_check(f, 0)
    assert rep.passed
    assert rep.lhs / rep.rhs == pytest.approx(1.0, abs=1e-6)


def test_entropy_bound_metadata_records_form():
    f, g, G = pair_field(0.5, 0.5, "qwft")
    rep = U.entropy_bound_check(f, g, "qwft", G)
    assert rep.passed
    assert "discrete_mass" in rep.metadata


def test_restricts_unrestricted_wigner():
    from qtfa.tfdist import wigner
    f, g = gaussian_pair(0.5, 0.5, GridSpec(1, 16, 6.0))
    full = wigner(f, g)
    rep = U.entropy_bound_check(f, g, "wigner", full)
    assert rep.passed
