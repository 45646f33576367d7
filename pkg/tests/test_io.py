import json

import numpy as np
import pytest

from qtfa.grid import GaussianSpec, GridSpec, lp_norm
from qtfa.io import (HEADER_SIZE, SignalSpec, SpecError, load_signal_spec, read_field, read_signal,
                     save_signal_spec, write_field, write_signal)
from qtfa.qft import qft_fast
from qtfa.qwft import qwft
from qtfa.tfdist import wigner, wigner_valid
from qtfa.validation import gaussian_pair


def _write(tmp_path, obj, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return p


def test_spec_roundtrip(tmp_path):
    spec = SignalSpec(kind="separable", a=0.3, b=0.7, d=1, n_per_axis=16, half_extent=4.0)
    p = tmp_path / "spec.json"
    save_signal_spec(spec, p)
    assert load_signal_spec(p) == spec
    rnd = SignalSpec(kind="random", seed=9, band=0.25)
    save_signal_spec(rnd, p)
    assert load_signal_spec(p) == rnd


def test_spec_grid_overrides(tmp_path):
    spec = load_signal_spec(_write(tmp_path, {"kind": "signal", "a": 1.0, "n_per_axis": 16}))
    assert spec.grid() == GridSpec(1, 16, 8.0)
    assert spec.grid(n=64, L=4.0) == GridSpec(1, 64, 4.0)
    f = spec.build(spec.grid())
    assert f.source == GaussianSpec(1.0, 0.5, "signal")


def test_random_spec_builds_unit_signal(tmp_path):
    spec = load_signal_spec(_write(tmp_path, {"kind": "random", "seed": 3}))
    f = spec.build(GridSpec(1, 16, 6.0))
    assert lp_norm(f) == pytest.approx(1.0)
    assert np.array_equal(f.values, spec.build(GridSpec(1, 16, 6.0)).values)


@pytest.mark.parametrize("content", [
    "{not json", "[1, 2]", {"kind": "cosine"}, {"a": -1.0}, {"kind": "signal", "colour": "red"},
    {"a": "big"}, {"n_per_axis": 0},
])
def test_bad_specs(tmp_path, content):
    p = _write(tmp_path, content)
    with pytest.raises(SpecError):
        spec = load_signal_spec(p)
        spec.grid()


def test_missing_spec(tmp_path):
    with pytest.raises(SpecError):
        load_signal_spec(tmp_path / "absent.json")


def test_signal_dump_roundtrip(tmp_path):
    f, _ = gaussian_pair(0.5, 0.5, GridSpec(1, 16, 6.0))
    for sig in (f, qft_fast(f)):
        p = tmp_path / "sig.bin"
        write_signal(sig, p)
        back = read_signal(p)
        assert back.grid == sig.grid
        assert np.array_equal(back.values, sig.values)
        assert p.stat().st_size == 8 * (HEADER_SIZE + sig.values.size)


def test_field_dump_roundtrip(tmp_path):
    f, g = gaussian_pair(0.5, 0.5, GridSpec(1, 8, 3.0))
    for F in (qwft(f, g), wigner_valid(wigner(f, g))):
        p = tmp_path / "field.bin"
        write_field(F, p)
        back = read_field(p)
        assert back.kind == F.kind
        assert back.x_grid == F.x_grid and back.w_grid == F.w_grid
        assert np.array_equal(back.values, F.values)
        assert bool(back.metadata.get("restricted")) == bool(F.metadata.get("restricted"))


def test_dump_little_endian_header(tmp_path):
    f, g = gaussian_pair(0.5, 0.5, GridSpec(1, 8, 3.0))
    p = tmp_path / "field.bin"
    write_field(qwft(f, g), p)
    head = np.frombuffer(p.read_bytes()[: 8 * HEADER_SIZE], dtype="<f8")
    assert head[:4].tolist() == [1.0, 8.0, 3.0, 8.0]


def test_truncated_dumps(tmp_path):
    p = tmp_path / "short.bin"
    p.write_bytes(b"\x00" * 16)
    with pytest.raises(SpecError):
        read_signal(p)
    f, _ = gaussian_pair(0.5, 0.5, GridSpec(1, 8, 3.0))
    write_signal(f, p)
    p.write_bytes(p.read_bytes()[:-8])
    with pytest.raises(SpecError):
        read_signal(p)
