"""scikit-learn style wrappers over the functional core.

Samples are quaternion signals on one grid. ``X`` is either the full array
``(n_samples, *grid.shape, 4)`` or its flattened form
``(n_samples, grid.size * 4)``; outputs keep the layout of the input.

    >>> est = QWFTTransformer(n_per_axis=16, window=0.5)
    >>> fields = est.fit_transform(X)
    >>> back = est.inverse_transform(fields)
"""
from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .grid import GaussianSpec, GridSpec, SampledSignal, sample
from .qft import iqft, qft_fast
from .qwft import PhaseSpaceField, qwft, reconstruct
from .tfdist import ambiguity, wigner_valid, wigner
from . import uncertainty as U

__all__ = ["QFTTransformer", "QWFTTransformer", "UncertaintyVerifier"]


class _GridMixin:
    """Shared grid parameters and input handling."""

    def _make_grid(self) -> GridSpec:
        return GridSpec(self.d, self.n_per_axis, self.half_extent)

    def _fit_grid(self, X):
        self.grid_ = self._make_grid()
        X = np.asarray(X, dtype=np.float64)
        self._signals(X)
        self.n_features_in_ = self.grid_.size * 4
        return X

    def _signals(self, X) -> tuple[np.ndarray, bool]:
        grid = self.grid_
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 2 and X.shape[1] == grid.size * 4:
            return X.reshape((X.shape[0],) + grid.shape + (4,)), True
        if X.shape[1:] == grid.shape + (4,):
            return X, False
        raise ValueError(f"expected samples of shape {grid.shape + (4,)} or {grid.size * 4} flat features, "
                         f"got array of shape {X.shape}")


class QFTTransformer(_GridMixin, TransformerMixin, BaseEstimator):
    """Two-sided quaternion Fourier transform of each sample (FFT path)."""

    def __init__(self, d: int = 1, n_per_axis: int = 32, half_extent: float = 8.0):
        self.d = d
        self.n_per_axis = n_per_axis
        self.half_extent = half_extent

    def fit(self, X, y=None):
        self._fit_grid(X)
        self.dual_grid_ = self.grid_.dual()
        return self

    def transform(self, X):
        check_is_fitted(self, "grid_")
        vals, flat = self._signals(X)
        out = np.stack([qft_fast(SampledSignal(self.grid_, v)).values for v in vals])
        return out.reshape(len(out), -1) if flat else out

    def inverse_transform(self, X):
        check_is_fitted(self, "grid_")
        vals, flat = self._signals(X)
        out = np.stack([iqft(SampledSignal(self.dual_grid_, v), self.grid_).values for v in vals])
        return out.reshape(len(out), -1) if flat else out


class QWFTTransformer(_GridMixin, TransformerMixin, BaseEstimator):
    """Phase-space field of each sample against one window.

    ``window`` is a Gaussian rate ``b`` (float), a :class:`GaussianSpec`, or a
    sampled array on the grid. ``kind`` picks the QWFT, the ambiguity
    function, or the Wigner-Ville transform (valid subgrid only). Only the
    QWFT has an ``inverse_transform``.
    """

    def __init__(self, d: int = 1, n_per_axis: int = 32, half_extent: float = 8.0, window=0.5,
                 kind: str = "qwft"):
        self.d = d
        self.n_per_axis = n_per_axis
        self.half_extent = half_extent
        self.window = window
        self.kind = kind

    def _window(self) -> SampledSignal:
        w = self.window
        if isinstance(w, GaussianSpec):
            return sample(w, self.grid_)
        if np.isscalar(w):
            return sample(GaussianSpec(1.0, float(w), "window"), self.grid_)
        vals = np.asarray(w, dtype=np.float64).reshape(self.grid_.shape + (4,))
        return SampledSignal(self.grid_, vals)

    def fit(self, X, y=None):
        if self.kind not in U.KINDS:
            raise ValueError(f"kind must be one of {U.KINDS}, got {self.kind!r}")
        self._fit_grid(X)
        self.window_ = self._window()
        return self

    def _field(self, f: SampledSignal) -> PhaseSpaceField:
        if self.kind == "qwft":
            return qwft(f, self.window_)
        if self.kind == "ambiguity":
            return ambiguity(f, self.window_)
        return wigner_valid(wigner(f, self.window_))

    def transform(self, X):
        check_is_fitted(self, "window_")
        vals, flat = self._signals(X)
        fields = [self._field(SampledSignal(self.grid_, v)) for v in vals]
        self.field_grids_ = (fields[0].x_grid, fields[0].w_grid) if fields else None
        out = np.stack([F.values for F in fields])
        return out.reshape(len(out), -1) if flat else out

    def inverse_transform(self, X):
        check_is_fitted(self, "window_")
        if self.kind != "qwft":
            raise ValueError("inverse_transform is only defined for kind='qwft'")
        grid = self.grid_
        wg = grid.dual()
        shape = grid.shape + wg.shape + (4,)
        X = np.asarray(X, dtype=np.float64)
        flat = X.ndim == 2
        X = X.reshape((X.shape[0],) + shape)
        out = np.stack([reconstruct(PhaseSpaceField(grid, wg, v, "qwft"), self.window_).values for v in X])
        return out.reshape(len(out), -1) if flat else out


_CHECKS = ("lieb", "entropy", "logarithmic", "heisenberg")


class UncertaintyVerifier(_GridMixin, TransformerMixin, BaseEstimator):
    """Maps each sample to the margins of a fixed set of inequality checks.

    Column ``j`` of the output is the margin of ``checks[j]`` (non-negative
    means the inequality holds). The full reports of the last call are kept
    in ``reports_``.
    """

    def __init__(self, d: int = 1, n_per_axis: int = 32, half_extent: float = 8.0, window=0.5,
                 kind: str = "qwft", checks=_CHECKS, p: float = 4.0):
        self.d = d
        self.n_per_axis = n_per_axis
        self.half_extent = half_extent
        self.window = window
        self.kind = kind
        self.checks = checks
        self.p = p

    def fit(self, X, y=None):
        bad = [c for c in self.checks if c not in _CHECKS]
        if bad:
            raise ValueError(f"unknown checks {bad}; choose from {_CHECKS}")
        if self.kind not in U.KINDS:
            raise ValueError(f"kind must be one of {U.KINDS}, got {self.kind!r}")
        self._fit_grid(X)
        self.window_ = QWFTTransformer._window(self)
        return self

    def _reports(self, f: SampledSignal) -> list:
        g = self.window_
        F = U.phase_field(f, g, self.kind)
        out = []
        for name in self.checks:
            if name == "lieb":
                out.append(U.lieb_check(f, g, self.p, qwft(f, g) if self.kind != "qwft" else F))
            elif name == "entropy":
                out.append(U.entropy_bound_check(f, g, self.kind, F))
            elif name == "logarithmic":
                out.append(U.log_uncertainty_qwft_check(f, g, self.kind, F))
            else:
                form = "moments" if self.kind == "qwft" else "radial"
                out.append(U.heisenberg_qwft_check(f, g, 1, 1, self.kind, form, F))
        return out

    def transform(self, X):
        check_is_fitted(self, "window_")
        vals, _ = self._signals(X)
        self.reports_ = [self._reports(SampledSignal(self.grid_, v)) for v in vals]
        return np.array([[r.margin for r in reps] for reps in self.reports_], dtype=np.float64)

    def score(self, X, y=None) -> float:
        """Fraction of (sample, check) pairs that pass."""
        self.transform(X)
        flags = [r.passed for reps in self.reports_ for r in reps]
        return float(np.mean(flags)) if flags else 1.0
