"""Signal spec files and binary dumps.

Signal spec (JSON)::

    {"d": 1, "n_per_axis": 32, "half_extent": 8.0, "kind": "signal", "a": 0.5, "b": 0.5}

``kind`` is a :class:`GaussianSpec` kind or ``"random"`` (band-limited
noise, extra optional keys ``seed`` and ``band``). Grid keys may be omitted
and then fall back to the defaults or the CLI overrides.

Binary dumps are little-endian float64: an 8-value header, then the
quaternion components in row-major order.

* signal: ``[d, N, L, grid_kind, step, 0, 0, 0]`` with ``grid_kind`` 0 for
  a :class:`GridSpec` and 1 for a :class:`FrequencyGrid`;
* field: ``[d, N_x, L_x, N_w, w_step, field_kind, restricted, 0]`` with
  ``field_kind`` 0/1/2 for qwft/ambiguity/wigner, x-major and w-minor.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .grid import FrequencyGrid, GaussianSpec, GridSpec, SampledSignal, sample
from .qwft import PhaseSpaceField

__all__ = [
    "SpecError",
    "SignalSpec",
    "load_signal_spec",
    "save_signal_spec",
    "write_signal",
    "read_signal",
    "write_field",
    "read_field",
    "HEADER_SIZE",
]

HEADER_SIZE = 8
_LE = "<f8"
_FIELD_KINDS = ("qwft", "ambiguity", "wigner")


class SpecError(ValueError):
    """A spec file is unreadable or describes an invalid signal."""


@dataclass(frozen=True)
class SignalSpec:
    kind: str = "signal"
    a: float = 0.5
    b: float = 0.5
    d: Optional[int] = None
    n_per_axis: Optional[int] = None
    half_extent: Optional[float] = None
    seed: int = 0
    band: float = 0.5

    def grid(self, d=None, n=None, L=None) -> GridSpec:
        """Grid from the spec; explicit arguments win."""
        d = d if d is not None else (self.d if self.d is not None else 1)
        n = n if n is not None else (self.n_per_axis if self.n_per_axis is not None else 32)
        L = L if L is not None else (self.half_extent if self.half_extent is not None else 8.0)
        try:
            return GridSpec(int(d), int(n), float(L))
        except (TypeError, ValueError) as exc:
            raise SpecError(str(exc)) from exc

    def build(self, grid: GridSpec) -> SampledSignal:
        if self.kind == "random":
            from .suites import band_limited_signal

            return band_limited_signal(grid, self.seed, band=self.band)
        return sample(GaussianSpec(self.a, self.b, self.kind), grid)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "a": self.a, "b": self.b}
        for key in ("d", "n_per_axis", "half_extent"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.kind == "random":
            out.update(seed=self.seed, band=self.band)
        return out


def load_signal_spec(path) -> SignalSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read spec {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SpecError(f"spec {path} must be a JSON object")
    known = {"d", "n_per_axis", "half_extent", "kind", "a", "b", "seed", "band"}
    unknown = set(raw) - known
    if unknown:
        raise SpecError(f"unknown keys in {path}: {sorted(unknown)}")
    kind = raw.get("kind", "signal")
    if kind not in GaussianSpec.KINDS + ("random",):
        raise SpecError(f"unknown kind {kind!r} in {path}")
    try:
        spec = SignalSpec(
            kind=kind,
            a=float(raw.get("a", 0.5)),
            b=float(raw.get("b", 0.5)),
            d=None if raw.get("d") is None else int(raw["d"]),
            n_per_axis=None if raw.get("n_per_axis") is None else int(raw["n_per_axis"]),
            half_extent=None if raw.get("half_extent") is None else float(raw["half_extent"]),
            seed=int(raw.get("seed", 0)),
            band=float(raw.get("band", 0.5)),
        )
    except (TypeError, ValueError) as exc:
        raise SpecError(f"bad value in {path}: {exc}") from exc
    if kind != "random" and not (spec.a > 0 and spec.b > 0):
        raise SpecError(f"Gaussian parameters must be positive in {path}")
    return spec


def save_signal_spec(spec: SignalSpec, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write(path, header, values):
    head = np.zeros(HEADER_SIZE, dtype=_LE)
    head[: len(header)] = header
    with open(path, "wb") as fh:
        fh.write(head.tobytes())
        fh.write(np.ascontiguousarray(values, dtype=_LE).tobytes())


def _read(path):
    raw = np.fromfile(path, dtype=_LE)
    if raw.size < HEADER_SIZE:
        raise SpecError(f"{path} is too short for a dump header")
    return raw[:HEADER_SIZE], raw[HEADER_SIZE:]


def write_signal(f: SampledSignal, path):
    grid = f.grid
    if isinstance(grid, FrequencyGrid):
        header = [grid.d, grid.n_per_axis, grid.n_per_axis * grid.step / 2, 1, grid.step]
    else:
        header = [grid.d, grid.n_per_axis, grid.half_extent, 0, grid.spacing]
    _write(path, header, f.values)


def read_signal(path) -> SampledSignal:
    head, body = _read(path)
    d, n, L, kind, step = int(head[0]), int(head[1]), float(head[2]), int(head[3]), float(head[4])
    grid = FrequencyGrid(d, n, step) if kind == 1 else GridSpec(d, n, L)
    expected = grid.size * 4
    if body.size != expected:
        raise SpecError(f"{path}: expected {expected} values, found {body.size}")
    return SampledSignal(grid, body.reshape(grid.shape + (4,)).astype(np.float64))


def write_field(F: PhaseSpaceField, path):
    header = [F.d, F.x_grid.n_per_axis, F.x_grid.half_extent, F.w_grid.n_per_axis, F.w_grid.step,
              _FIELD_KINDS.index(F.kind), float(bool(F.metadata.get("restricted")))]
    _write(path, header, F.values)


def read_field(path) -> PhaseSpaceField:
    head, body = _read(path)
    d, nx, Lx, nw, step = int(head[0]), int(head[1]), float(head[2]), int(head[3]), float(head[4])
    kind = _FIELD_KINDS[int(head[5])]
    xg = GridSpec(d, nx, Lx)
    wg = FrequencyGrid(d, nw, step)
    shape = xg.shape + wg.shape + (4,)
    if body.size != int(np.prod(shape)):
        raise SpecError(f"{path}: expected {int(np.prod(shape))} values, found {body.size}")
    meta = {"restricted": True} if head[6] else {}
    return PhaseSpaceField(xg, wg, body.reshape(shape).astype(np.float64), kind, meta)
