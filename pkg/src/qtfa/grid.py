"""Uniform grids on R^{2d} and quaternion-valued samples on them.

All integrals use the normalized measure ``dmu_m = dx / (2 pi)^{m/2}`` and a
plain left Riemann sum over grid nodes. Translations are cyclic on the
periodic box ``[-L, L)^{2d}``, which keeps discrete norm identities exact;
analytic comparisons therefore need signals that are negligible near the
boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from . import fft as _fft
from .quaternion import as_quaternion_array, qabs, qabs2, qconj, qmul

__all__ = [
    "GridSpec",
    "FrequencyGrid",
    "GaussianSpec",
    "SampledSignal",
    "GridMismatchError",
    "sample",
    "zeros",
    "lp_norm",
    "qinner",
    "sc_inner",
    "translate",
    "reflect",
    "roll_stack",
    "dilate",
    "convolve",
]


class GridMismatchError(ValueError):
    """Two signals or fields live on different grids."""


class _UniformGrid:
    d: int
    n_per_axis: int

    @property
    def origin(self) -> float:
        raise NotImplementedError

    @property
    def spacing(self) -> float:
        raise NotImplementedError

    @property
    def ndim(self) -> int:
        return 2 * self.d

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_per_axis,) * self.ndim

    @property
    def size(self) -> int:
        return self.n_per_axis**self.ndim

    @property
    def cell_weight(self) -> float:
        """Discrete ``dmu_{2d}`` of one cell."""
        return self.spacing**self.ndim / (2 * math.pi) ** self.d

    @property
    def total_measure(self) -> float:
        return self.size * self.cell_weight

    def axis_nodes(self) -> np.ndarray:
        return self.origin + self.spacing * np.arange(self.n_per_axis)

    def coords(self) -> np.ndarray:
        """Node coordinates, shape ``self.shape + (2d,)``."""
        ax = self.axis_nodes()
        mesh = np.meshgrid(*([ax] * self.ndim), indexing="ij")
        return np.stack(mesh, axis=-1)

    def radius2(self) -> np.ndarray:
        ax2 = self.axis_nodes() ** 2
        r2 = np.zeros(self.shape)
        for axis in range(self.ndim):
            r2 = r2 + ax2.reshape([-1 if a == axis else 1 for a in range(self.ndim)])
        return r2

    def zero_index(self) -> Optional[int]:
        """Per-axis index of the node at 0, if there is one."""
        k = -self.origin / self.spacing
        kr = round(k)
        if abs(k - kr) < 1e-9 and 0 <= kr < self.n_per_axis:
            return int(kr)
        return None


@dataclass(frozen=True)
class GridSpec(_UniformGrid):
    """Nodes ``-L + k*Delta`` (k = 0..N-1) on each of the 2d axes, ``Delta = 2L/N``."""

    d: int = 1
    n_per_axis: int = 32
    half_extent: float = 8.0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d!r}")
        if int(self.n_per_axis) != self.n_per_axis or self.n_per_axis < 1:
            raise ValueError(f"n_per_axis must be a positive integer, got {self.n_per_axis!r}")
        if not (self.half_extent > 0 and math.isfinite(self.half_extent)):
            raise ValueError(f"half_extent must be positive, got {self.half_extent!r}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "n_per_axis", int(self.n_per_axis))
        object.__setattr__(self, "half_extent", float(self.half_extent))

    @property
    def origin(self) -> float:
        return -self.half_extent

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_extent / self.n_per_axis

    def dual(self) -> "FrequencyGrid":
        """The DFT-dual frequency grid, ``N * Delta * Delta_w = 2 pi``."""
        return FrequencyGrid(self.d, self.n_per_axis, 2 * math.pi / (self.n_per_axis * self.spacing))

    def shift_index(self, x0) -> np.ndarray:
        """Integer per-axis index shift for a grid-aligned displacement ``x0``."""
        x0 = np.broadcast_to(np.asarray(x0, dtype=np.float64), (self.ndim,))
        k = x0 / self.spacing
        kr = np.round(k)
        if np.any(np.abs(k - kr) > 1e-9 * max(1.0, float(np.max(np.abs(k))))):
            raise ValueError(f"shift {x0.tolist()} is not a multiple of the spacing {self.spacing}")
        return kr.astype(np.intp)

    def node_index(self, x) -> np.ndarray:
        """Per-axis index of the grid node at coordinate ``x`` (must be a node)."""
        x = np.broadcast_to(np.asarray(x, dtype=np.float64), (self.ndim,))
        return self.shift_index(x - self.origin)


@dataclass(frozen=True)
class FrequencyGrid(_UniformGrid):
    """Nodes ``m * step`` for ``m = -N/2 .. N/2-1`` on each of the 2d axes."""

    d: int = 1
    n_per_axis: int = 32
    step: float = math.pi / 8

    def __post_init__(self):
        if self.d < 1 or self.n_per_axis < 1 or not self.step > 0:
            raise ValueError("invalid frequency grid")

    @property
    def origin(self) -> float:
        return -(self.n_per_axis // 2) * self.step

    @property
    def spacing(self) -> float:
        return self.step

    def dual(self) -> GridSpec:
        """The signal grid whose DFT-dual this is."""
        return GridSpec(self.d, self.n_per_axis, math.pi / self.step)


@dataclass(frozen=True)
class GaussianSpec:
    """Closed-form Gaussian signal/window family.

    ``kind='signal'``:    ``(4a)^{d/2} exp(-a|x|^2)`` (unit norm)
    ``kind='window'``:    ``(4b)^{d/2} exp(-b|x|^2)`` (unit norm)
    ``kind='separable'``: ``exp(-(a|s|^2 + b|t|^2)/2)`` with ``x = (s, t)``

    ``amplitude`` overrides the leading constant; :meth:`dilated` uses it to
    keep the constant fixed while the exponent rescales.
    """

    a: float = 0.5
    b: float = 0.5
    kind: str = "signal"
    amplitude: Optional[float] = None

    KINDS = ("signal", "window", "separable")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown Gaussian kind {self.kind!r}")
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"Gaussian parameters must be positive, got a={self.a}, b={self.b}")

    def resolved_amplitude(self, d: int) -> float:
        if self.amplitude is not None:
            return float(self.amplitude)
        if self.kind == "signal":
            return (4 * self.a) ** (d / 2)
        if self.kind == "window":
            return (4 * self.b) ** (d / 2)
        return 1.0

    def exponent(self, coords: np.ndarray, d: int) -> np.ndarray:
        if self.kind == "separable":
            s, t = coords[..., :d], coords[..., d:]
            return -(self.a * np.sum(s**2, axis=-1) + self.b * np.sum(t**2, axis=-1)) / 2
        rate = self.a if self.kind == "signal" else self.b
        return -rate * np.sum(coords**2, axis=-1)

    def __call__(self, coords: np.ndarray, d: int) -> np.ndarray:
        return self.resolved_amplitude(d) * np.exp(self.exponent(coords, d))

    def dilated(self, lam: float, d: int) -> "GaussianSpec":
        """Spec of ``x -> self(lam * x)``."""
        return GaussianSpec(self.a * lam**2, self.b * lam**2, self.kind, self.resolved_amplitude(d))


ClosedForm = Union[GaussianSpec, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Quaternion samples on a :class:`GridSpec` (or frequency grid).

    ``values`` has shape ``grid.shape + (4,)`` and is read-only. ``source``
    optionally keeps the closed form the samples came from.
    """

    grid: _UniformGrid
    values: np.ndarray
    source: Optional[ClosedForm] = field(default=None, repr=False)

    def __post_init__(self):
        vals = as_quaternion_array(self.values)
        if vals.shape != self.grid.shape + (4,):
            raise ValueError(f"values shape {vals.shape} does not match grid shape {self.grid.shape + (4,)}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("signal values must be finite")
        vals = np.array(vals, dtype=np.float64, copy=True)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def d(self) -> int:
        return self.grid.d

    def with_values(self, values, source=None) -> "SampledSignal":
        return SampledSignal(self.grid, values, source)

    def __add__(self, other: "SampledSignal") -> "SampledSignal":
        _check_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "SampledSignal") -> "SampledSignal":
        _check_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def scale(self, c: float) -> "SampledSignal":
        """Multiply by a real scalar."""
        return self.with_values(self.values * float(c))

    def conj(self) -> "SampledSignal":
        return self.with_values(qconj(self.values))

    def modulus(self) -> np.ndarray:
        return qabs(self.values)

    def is_real(self) -> bool:
        return not np.any(self.values[..., 1:])


def _check_same_grid(f, g):
    if f.grid != g.grid:
        raise GridMismatchError(f"grid mismatch: {f.grid} vs {g.grid}")


def _evaluate(source: ClosedForm, coords: np.ndarray, d: int) -> np.ndarray:
    if isinstance(source, GaussianSpec):
        vals = source(coords, d)
    else:
        vals = source(coords)
    return as_quaternion_array(vals)


def sample(source: ClosedForm, grid: GridSpec) -> SampledSignal:
    """Evaluate a closed form at the grid nodes.

    ``source`` is a :class:`GaussianSpec` or a callable mapping coordinates of
    shape ``(..., 2d)`` to real or quaternion values.
    """
    vals = _evaluate(source, grid.coords(), grid.d)
    if vals.shape != grid.shape + (4,):
        vals = np.broadcast_to(vals, grid.shape + (4,))
    if not np.all(np.isfinite(vals)):
        raise ValueError("closed form produced non-finite samples")
    return SampledSignal(grid, vals, source)


def zeros(grid) -> SampledSignal:
    return SampledSignal(grid, np.zeros(grid.shape + (4,)))


def lp_norm(f: SampledSignal, p: float = 2) -> float:
    """``(sum |f|^p * weight)^(1/p)``; ``p = inf`` gives the max modulus."""
    if p == math.inf or p == "inf":
        return float(np.max(f.modulus())) if f.values.size else 0.0
    p = float(p)
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    mod = f.modulus()
    if p == 2:
        return math.sqrt(float(np.sum(mod**2)) * f.grid.cell_weight)
    return float(np.sum(mod**p) * f.grid.cell_weight) ** (1 / p)


def qinner(f: SampledSignal, g: SampledSignal) -> np.ndarray:
    """Quaternion inner product ``sum f conj(g) * weight`` (length-4 array)."""
    _check_same_grid(f, g)
    prod = qmul(f.values, qconj(g.values))
    return prod.reshape(-1, 4).sum(axis=0) * f.grid.cell_weight


def sc_inner(f: SampledSignal, g: SampledSignal) -> float:
    """Real scalar part of :func:`qinner`, symmetric in ``f`` and ``g``."""
    _check_same_grid(f, g)
    return float(np.sum(f.values * g.values)) * f.grid.cell_weight


def translate(f: SampledSignal, x0) -> SampledSignal:
    """Cyclic ``T_{x0} f(t) = f(t - x0)`` for a grid-aligned ``x0``."""
    shift = f.grid.shift_index(x0)
    vals = np.roll(f.values, tuple(int(s) for s in shift), axis=tuple(range(f.grid.ndim)))
    return f.with_values(vals)


def reflect(f: SampledSignal) -> SampledSignal:
    """``f(-x)`` on the grid (node ``-L`` maps to itself cyclically)."""
    axes = tuple(range(f.grid.ndim))
    vals = np.roll(np.flip(f.values, axis=axes), 1, axis=axes)
    return f.with_values(vals)


def roll_stack(values: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """Stack of cyclic rolls: ``out[m, k] = values[(k - shifts[m]) mod N]``.

    ``values`` has shape ``(N,)*ndim + (4,)`` and ``shifts`` has shape ``(M, ndim)``.
    """
    shifts = np.asarray(shifts, dtype=np.intp)
    m, ndim = shifts.shape
    n = values.shape[0]
    k = np.arange(n)
    index = []
    for axis in range(ndim):
        idx = (k[None, :] - shifts[:, axis, None]) % n
        index.append(idx.reshape((m,) + (1,) * axis + (n,) + (1,) * (ndim - axis - 1)))
    return values[tuple(index)]


def dilate(f: SampledSignal, lam: float) -> SampledSignal:
    """``f_lam(x) = f(lam x)``.

    Uses the stored closed form when there is one, otherwise nearest-node
    resampling with zero outside the box.
    """
    if not lam > 0:
        raise ValueError(f"dilation factor must be positive, got {lam}")
    grid = f.grid
    if isinstance(f.source, GaussianSpec):
        return sample(f.source.dilated(lam, grid.d), grid)
    if f.source is not None:
        src = f.source
        return sample(lambda c: as_quaternion_array(src(lam * c)), grid)
    idx = np.rint((lam * grid.axis_nodes() - grid.origin) / grid.spacing).astype(np.intp)
    inside = (idx >= 0) & (idx < grid.n_per_axis)
    vals = f.values
    for axis in range(grid.ndim):
        vals = np.take(vals, np.clip(idx, 0, grid.n_per_axis - 1), axis=axis)
        mask = inside.reshape([-1 if a == axis else 1 for a in range(grid.ndim)] + [1])
        vals = vals * mask
    return f.with_values(vals)


# Hamilton table as (left component, right component) -> (output component, sign)
_HAMILTON = [
    (0, 0, 0, 1), (1, 1, 0, -1), (2, 2, 0, -1), (3, 3, 0, -1),
    (0, 1, 1, 1), (1, 0, 1, 1), (2, 3, 1, 1), (3, 2, 1, -1),
    (0, 2, 2, 1), (1, 3, 2, -1), (2, 0, 2, 1), (3, 1, 2, 1),
    (0, 3, 3, 1), (1, 2, 3, 1), (2, 1, 3, -1), (3, 0, 3, 1),
]


def convolve(f: SampledSignal, g: SampledSignal) -> SampledSignal:
    """``(f*g)(x) = sum_y f(y) g(x - y) * weight`` with zero outside the box."""
    _check_same_grid(f, g)
    grid = f.grid
    n = grid.n_per_axis
    if not _fft.is_power_of_two(n):
        raise ValueError("convolve needs a power-of-two grid")
    axes = tuple(range(grid.ndim))
    pad = [(0, n)] * grid.ndim
    fhat = [_fft.fftn(np.pad(f.values[..., c], pad), axes) for c in range(4)]
    ghat = [_fft.fftn(np.pad(g.values[..., c], pad), axes) for c in range(4)]
    out_hat = [0j, 0j, 0j, 0j]
    for lc, rc, oc, sign in _HAMILTON:
        out_hat[oc] = out_hat[oc] + sign * fhat[lc] * ghat[rc]
    window = tuple(slice(n // 2, n // 2 + n) for _ in axes)
    comps = [_fft.ifftn(h, axes).real[window] for h in out_hat]
    return f.with_values(np.stack(comps, axis=-1) * grid.cell_weight)
