"""Quaternion ambiguity function and Wigner-Ville transform.

Half-shifts are kept on grid nodes without interpolation:

* the ambiguity function lives on the even-index subgrid ``GridSpec(d, N/2, L)``
  (spacing ``2*Delta``), so ``x/2`` is always a whole number of cells;
* the Wigner transform substitutes ``t = 2s`` and sums over the signal grid
  with weight ``2^{2d}`` per cell, so ``x +- t/2 = x +- s`` are nodes. Its
  doubled-frequency kernel is read off the dual grid at index ``2m mod N``.

Both are exact cyclic quadratures, so their relations to the QWFT hold to
rounding. Wigner values at ``x`` or ``w`` outside the central half of each
axis are cyclic images; :func:`wigner_valid` cuts them away.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .grid import FrequencyGrid, GridSpec, SampledSignal, reflect, roll_stack, translate
from .qft import qft_batch, qft_direct
from .quaternion import exp_i, exp_j, qconj, qmul
from .qwft import PhaseSpaceField, _batch_size, _check_pair, qwft
from .reports import InequalityReport

__all__ = [
    "ambiguity_grid",
    "ambiguity",
    "ambiguity_point",
    "wigner",
    "wigner_point",
    "wigner_valid",
    "ambiguity_relation_check",
    "wigner_relation_check",
    "measure_scaling_check",
    "wigner_norm_check",
]


def _require_even(grid: GridSpec, what: str):
    if grid.n_per_axis % 4:
        raise ValueError(f"{what} needs N divisible by 4 for on-grid half shifts, got N={grid.n_per_axis}")


def ambiguity_grid(grid: GridSpec) -> GridSpec:
    """The even-index subgrid that carries the ambiguity function's ``x``."""
    _require_even(grid, "ambiguity")
    return GridSpec(grid.d, grid.n_per_axis // 2, grid.half_extent)


def ambiguity(f: SampledSignal, g: SampledSignal, chunk: Optional[int] = None) -> PhaseSpaceField:
    """``A(f,g)(x,w) = sum_t exp_i(-t1.w1) f(t + x/2) conj(g(t - x/2)) exp_j(-t2.w2) * weight``."""
    _check_pair(f, g)
    grid = f.grid
    xg = ambiguity_grid(grid)
    freq = grid.dual()
    # x = -L + k*(2 Delta), so x/2 is a shift of k - N/4 cells
    half = np.indices(xg.shape).reshape(grid.ndim, -1).T - grid.n_per_axis // 4
    conj_g = qconj(g.values)
    out = np.empty((xg.size,) + freq.shape + (4,))
    step = _batch_size(grid, chunk)
    for start in range(0, xg.size, step):
        sh = half[start : start + step]
        prod = qmul(roll_stack(f.values, -sh), roll_stack(conj_g, sh))
        out[start : start + sh.shape[0]] = qft_batch(prod, grid, lead=1)
    return PhaseSpaceField(xg, freq, out.reshape(xg.shape + freq.shape + (4,)), "ambiguity",
                           {"x_subgrid": "even-index", "x_stride": 2})


def ambiguity_point(f: SampledSignal, g: SampledSignal, x, w) -> np.ndarray:
    """Brute-force sum of the ambiguity integral at one ``x`` (``x/2`` grid-aligned)."""
    _check_pair(f, g)
    x = np.asarray(x, dtype=np.float64)
    fs = translate(f, -x / 2)
    gs = translate(g, x / 2)
    prod = SampledSignal(f.grid, qmul(fs.values, qconj(gs.values)))
    return qft_direct(prod, np.asarray(w, dtype=np.float64))


def _doubled_index(n: int) -> np.ndarray:
    # centered index m (position m + n/2) -> position of 2m mod n in centered order
    m = np.arange(n) - n // 2
    return (2 * m + n // 2) % n


def wigner(f: SampledSignal, g: SampledSignal, chunk: Optional[int] = None) -> PhaseSpaceField:
    """``W(f,g)(x,w) = sum_t exp_i(-w1.t1) f(x + t/2) conj(g(x - t/2)) exp_j(-w2.t2) * weight``.

    ``x`` runs over the signal grid and ``w`` over its dual; see the module
    notes for which nodes are cyclic images.
    """
    _check_pair(f, g)
    grid = f.grid
    _require_even(grid, "wigner")
    freq = grid.dual()
    n = grid.n_per_axis
    xs = np.indices(grid.shape).reshape(grid.ndim, -1).T - n // 2
    conj_g = qconj(g.values)
    # conj(g)(x - s) as a function of s: reflect, then shift by x
    conj_g_ref = reflect(SampledSignal(grid, conj_g)).values
    dbl = np.ix_(*([_doubled_index(n)] * grid.ndim))
    out = np.empty((grid.size,) + freq.shape + (4,))
    step = _batch_size(grid, chunk)
    scale = 2.0 ** (2 * grid.d)
    for start in range(0, grid.size, step):
        sh = xs[start : start + step]
        prod = qmul(roll_stack(f.values, -sh), roll_stack(conj_g_ref, sh))
        spec = qft_batch(prod, grid, lead=1)
        out[start : start + sh.shape[0]] = scale * spec[(slice(None),) + dbl]
    return PhaseSpaceField(grid, freq, out.reshape(grid.shape + freq.shape + (4,)), "wigner",
                           {"t_substitution": "t = 2s", "valid": "central half of x and w axes"})


def wigner_point(f: SampledSignal, g: SampledSignal, x, w) -> np.ndarray:
    """Brute-force Wigner sum at one grid-aligned ``x``: ``t = 2s`` over the signal grid."""
    _check_pair(f, g)
    x = np.asarray(x, dtype=np.float64)
    grid = f.grid
    fx = translate(f, -x)
    gx = translate(reflect(g), x)
    prod = SampledSignal(grid, qmul(fx.values, qconj(gx.values)))
    return 2.0 ** (2 * grid.d) * qft_direct(prod, 2 * np.asarray(w, dtype=np.float64))


def _central(n: int) -> slice:
    return slice(n // 4, n // 4 + n // 2)


def wigner_valid(W: PhaseSpaceField) -> PhaseSpaceField:
    """Restrict a Wigner field to ``x`` and ``w`` whose doubles stay on the grid."""
    if W.kind != "wigner":
        raise ValueError("expected a Wigner field")
    xg, wg = W.x_grid, W.w_grid
    n = xg.n_per_axis
    sub = (_central(n),) * (2 * xg.ndim)
    x_sub = GridSpec(xg.d, n // 2, xg.half_extent / 2)
    w_sub = FrequencyGrid(wg.d, n // 2, wg.step)
    meta = dict(W.metadata, restricted=True)
    return PhaseSpaceField(x_sub, w_sub, W.values[sub], "wigner", meta)


def ambiguity_relation_check(f, g, A: Optional[PhaseSpaceField] = None, G: Optional[PhaseSpaceField] = None,
                             tol: float = 1e-12) -> list[InequalityReport]:
    """``A = exp_i(w1.x1/2) G exp_j(w2.x2/2)`` and ``|A| = |G|`` on the ambiguity subgrid."""
    A = ambiguity(f, g) if A is None else A
    G = qwft(f, g) if G is None else G
    d = f.d
    n = f.grid.n_per_axis
    sub = (slice(0, n, 2),) * (2 * d)
    Gs = G.values[sub]
    x = A.x_grid.coords().reshape(A.x_grid.shape + (1,) * (2 * d) + (2 * d,))
    w = A.w_grid.coords().reshape((1,) * (2 * d) + A.w_grid.shape + (2 * d,))
    th1 = np.sum(w[..., :d] * x[..., :d], -1) / 2
    th2 = np.sum(w[..., d:] * x[..., d:], -1) / 2
    predicted = qmul(qmul(exp_i(th1), Gs), exp_j(th2))
    params = {"d": d, "N": n, "L": f.grid.half_extent}
    full = InequalityReport.pointwise("ambiguity_qwft_relation", A.values, predicted, tol, parameters=params)
    mod = InequalityReport.pointwise("ambiguity_modulus_relation", A.modulus(), np.sqrt(np.sum(Gs**2, -1)), tol,
                                     parameters=params)
    return [full, mod]


def wigner_relation_check(f, g, W: Optional[PhaseSpaceField] = None, Gr: Optional[PhaseSpaceField] = None,
                          tol: float = 1e-10) -> InequalityReport:
    """``|W(x,w)| = 2^{2d} |G_{g reflected} f(2x, 2w)|`` on the valid subgrid.

    Nodes whose doubled coordinates leave the grid are excluded and counted.
    """
    W = wigner(f, g) if W is None else W
    Gr = qwft(f, reflect(g)) if Gr is None else Gr
    d = f.d
    n = f.grid.n_per_axis
    nd = 2 * d
    central = (_central(n),) * (2 * nd)
    # x index k (x = -L + k Delta) doubles to 2k - N/2; w position p doubles to 2p - N/2
    doubled = (slice(0, n, 2),) * (2 * nd)
    lhs = W.modulus()[central]
    rhs = 2.0 ** (2 * d) * Gr.modulus()[doubled]
    excluded = W.values[..., 0].size - lhs.size
    return InequalityReport.pointwise(
        "wigner_modulus_relation", lhs, rhs, tol,
        parameters={"d": d, "N": n, "L": f.grid.half_extent},
        excluded_nodes=excluded, compared_nodes=int(lhs.size),
    )


def measure_scaling_check(field_: PhaseSpaceField, half_cells=(2, 2), factor: int = 2) -> InequalityReport:
    """Discrete measures of a centered box ``U`` and of ``V = factor * U``.

    ``half_cells`` gives the x and w half-widths of ``U`` in cells, which
    keeps both boxes grid-aligned; the ratio ``mu(V)/mu(U)`` should then be
    ``factor^{4d}`` exactly. Boxes that would leave the grid are rejected.
    """
    kx, kw = (int(k) for k in half_cells)
    d = field_.d
    xs = field_.x_grid.axis_nodes()
    ws = field_.w_grid.axis_nodes()
    hx, hw = kx * field_.x_grid.spacing, kw * field_.w_grid.spacing
    if factor * kx > field_.x_grid.n_per_axis // 2 or factor * kw > field_.w_grid.n_per_axis // 2:
        raise ValueError("scaled box leaves the grid")

    def count(scale):
        tol_x = 1e-9 * field_.x_grid.spacing
        tol_w = 1e-9 * field_.w_grid.spacing
        nx = np.count_nonzero((xs >= -scale * hx - tol_x) & (xs < scale * hx - tol_x))
        nw = np.count_nonzero((ws >= -scale * hw - tol_w) & (ws < scale * hw - tol_w))
        return (nx ** (2 * d)) * (nw ** (2 * d)) * field_.cell_weight

    mu_u, mu_v = count(1), count(factor)
    ratio = mu_v / mu_u if mu_u else math.inf
    return InequalityReport.equality(
        "measure_scaling", ratio, float(factor) ** (4 * d), 1e-12,
        parameters={"half_cells_x": kx, "half_cells_w": kw, "factor": factor, "d": d},
        mu_U=mu_u, mu_V=mu_v,
    )


def wigner_norm_check(f, g, W: Optional[PhaseSpaceField] = None, tol: float = 1e-5) -> InequalityReport:
    """``||W(f,g)||^2 = ||f||^2 ||g||^2`` over the valid subgrid.

    Substituting the modulus relation gives ``2^{4d}`` from the modulus and
    ``2^{-4d}`` from the change of variables, so no power of two survives.
    Only a continuum identity: use well-localized inputs.
    """
    W = wigner(f, g) if W is None else W
    if not W.metadata.get("restricted"):
        W = wigner_valid(W)
    w = f.grid.cell_weight
    nf2 = float(np.sum(f.values**2)) * w
    ng2 = float(np.sum(g.values**2)) * w
    d = f.d
    return InequalityReport.equality(
        "wigner_norm", W.norm(2) ** 2, nf2 * ng2, tol,
        parameters={"d": d, "N": f.grid.n_per_axis, "L": f.grid.half_extent},
        stated_factor_elsewhere=2.0 ** (2 * d),
    )
