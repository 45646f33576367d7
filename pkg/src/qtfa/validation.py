"""Oracle comparisons: fast paths against brute force, discrete against closed form."""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .grid import GaussianSpec, GridSpec, SampledSignal, lp_norm, sample
from .qft import gaussian_spec_qft, qft_direct, qft_fast
from .quaternion import qabs, qabs2
from .qwft import PhaseSpaceField, gaussian_qwft_modulus2, iter_qwft, qwft, reconstruct
from .reports import InequalityReport
from .special import EULER_GAMMA
from .uncertainty import entropy, log_constant

__all__ = [
    "qft_oracle_check",
    "gaussian_qft_check",
    "gaussian_qwft_modulus_check",
    "reconstruction_check",
    "gaussian_entropy_check",
    "gaussian_moment_product_check",
    "component_saturation_check",
    "log_constant_check",
    "gaussian_pair",
]


def _params(grid: GridSpec, **extra) -> dict:
    return dict({"d": grid.d, "N": grid.n_per_axis, "L": grid.half_extent}, **extra)


def gaussian_pair(a: float, b: float, grid: GridSpec) -> tuple[SampledSignal, SampledSignal]:
    """Unit-norm Gaussian signal ``(4a)^{d/2} e^{-a|x|^2}`` and window with rate ``b``."""
    return sample(GaussianSpec(a, b, "signal"), grid), sample(GaussianSpec(a, b, "window"), grid)


def qft_oracle_check(f: SampledSignal, tol: float = 1e-10) -> InequalityReport:
    """FFT path against the brute-force sum on every dual-grid node."""
    fast = qft_fast(f)
    direct = qft_direct(f, fast.grid.coords())
    return InequalityReport.pointwise("qft_fast_vs_direct", fast.values, direct, tol, parameters=_params(f.grid))


def gaussian_qft_check(spec: GaussianSpec, grid: GridSpec, tol: float = 1e-4) -> InequalityReport:
    """Discrete ``F_Q`` of a sampled Gaussian against its closed form, max-norm relative."""
    f = sample(spec, grid)
    F = qft_fast(f)
    exact = gaussian_spec_qft(spec, F.grid.coords(), grid.d)
    return InequalityReport.pointwise(
        "gaussian_qft_closed_form", F.values, exact, tol, parameters=_params(grid, a=spec.a, b=spec.b, kind=spec.kind),
    )


def gaussian_qwft_modulus_check(a: float, b: float, grid: GridSpec, tol: float = 1e-4, floor: float = 1e-8,
                                G: Optional[PhaseSpaceField] = None) -> InequalityReport:
    """``|G_g f|^2`` against its closed form, pointwise relative where the closed form exceeds ``floor * max``.

    Streams over ``x`` when no field is given, so N = 64 fits in memory.
    """
    f, g = gaussian_pair(a, b, grid)
    d = grid.d
    freq = grid.dual()
    w2 = freq.radius2()
    x2_all = grid.radius2().reshape(-1)
    peak = (4 * a * b) ** d / (a + b) ** (2 * d)
    worst = 0.0
    worst_abs = 0.0
    compared = 0
    if G is not None:
        blocks = [(0, G.values.reshape((grid.size,) + freq.shape + (4,)))]
    else:
        blocks = iter_qwft(f, g)
    for start, block in blocks:
        m2 = qabs2(block)
        x2 = x2_all[start : start + block.shape[0]].reshape((-1,) + (1,) * freq.ndim)
        exact = gaussian_qwft_modulus2(a, b, x2, w2[None], d)
        region = exact > floor * peak
        if np.any(region):
            dev = np.abs(m2[region] - exact[region])
            worst = max(worst, float(np.max(dev / exact[region])))
            worst_abs = max(worst_abs, float(np.max(dev)))
            compared += int(np.count_nonzero(region))
    return InequalityReport(
        "gaussian_qwft_modulus", worst, tol, tol - worst, bool(worst <= tol), {},
        _params(grid, a=a, b=b), "equality",
        {"relative_deviation": worst, "max_abs_deviation": worst_abs, "max_norm_relative": worst_abs / peak,
         "compared_nodes": compared, "floor": floor, "tolerance": tol},
    )


def reconstruction_check(f: SampledSignal, g: SampledSignal, tol: float = 1e-8,
                         G: Optional[PhaseSpaceField] = None) -> InequalityReport:
    """Round trip ``f -> G_g f -> f`` with a real window."""
    G = qwft(f, g) if G is None else G
    back = reconstruct(G, g)
    return InequalityReport.pointwise("reconstruction", back.values, f.values, tol, parameters=_params(f.grid))


def gaussian_entropy_check(a: float, grid: GridSpec, tol: float = 1e-4,
                           G: Optional[PhaseSpaceField] = None) -> InequalityReport:
    """Entropy of ``|G_g f|^2`` for the normalized pair ``a = b`` against the analytic value ``2d``."""
    f, g = gaussian_pair(a, a, grid)
    G = qwft(f, g) if G is None else G
    value = entropy(G)
    exact = 2.0 * grid.d
    return InequalityReport.equality(
        "gaussian_entropy", value, exact, 0.0, atol=tol, parameters=_params(grid, a=a, b=a),
        discrete_mass=float(np.sum(G.modulus2()) * G.cell_weight), absolute_error=value - exact,
    )


def gaussian_moment_product_check(a: float, grid: GridSpec, tol: float = 1e-3,
                                  G: Optional[PhaseSpaceField] = None) -> InequalityReport:
    """``(iint |x|^2 |G|^2)(iint |w|^2 |G|^2) = 4`` for the normalized pair ``a = b``, d = 1."""
    f, g = gaussian_pair(a, a, grid)
    G = qwft(f, g) if G is None else G
    m2 = G.modulus2()
    mx = float(np.sum(G.x_radius2() * m2)) * G.cell_weight
    mw = float(np.sum(G.w_radius2() * m2)) * G.cell_weight
    # general d: (d/a)(4 a d) = 4 d^2
    exact = 4.0 * grid.d**2
    return InequalityReport.equality(
        "gaussian_moment_product", mx * mw, exact, 0.0, atol=tol, parameters=_params(grid, a=a, b=a),
        x_moment=mx, w_moment=mw, absolute_error=mx * mw - exact,
    )


def component_saturation_check(f: SampledSignal, axis: int = 0, tol: float = 0.05) -> InequalityReport:
    """Ratio of the component Heisenberg product to ``||f||^4 / 4``; Gaussians sit at 1."""
    F = qft_fast(f)
    x = f.grid.coords()[..., axis]
    w = F.grid.coords()[..., axis]
    mx = float(np.sum(x**2 * qabs(f.values) ** 2)) * f.grid.cell_weight
    mw = float(np.sum(w**2 * qabs(F.values) ** 2)) * F.grid.cell_weight
    ratio = mx * mw / (lp_norm(f) ** 4 / 4)
    return InequalityReport.equality("component_saturation", ratio, 1.0, tol, parameters=_params(f.grid, axis=axis))


def log_constant_check(tol: float = 1e-12) -> InequalityReport:
    """``D_2 = -gamma - ln 2``."""
    value = log_constant(1)
    exact = -EULER_GAMMA - math.log(2)
    return InequalityReport("log_constant_D2", value, exact, tol - abs(value - exact), abs(value - exact) <= tol,
                            {"D_2d": value}, {"d": 1}, "equality", {"tolerance": tol})
