import numpy as np
import pytest

from qtfa.grid import GridSpec, SampledSignal, lp_norm
from qtfa.qft import qft_fast
from qtfa.suites import SUITES, band_limited_signal, random_pair, run_suite, run_suites, suite_jobs, thread_count

GRID = GridSpec(1, 32, 8.0)


def test_band_limited_signal_properties():
    f = band_limited_signal(GRID, 5)
    assert lp_norm(f) == pytest.approx(1.0)
    assert np.array_equal(f.values, band_limited_signal(GRID, 5).values)
    assert not np.array_equal(f.values, band_limited_signal(GRID, 6).values)
    # the envelope makes the box edge negligible
    edge = np.abs(f.values[0]).max()
    assert edge < 1e-6 * np.abs(f.values).max()
    # the envelope smears the band edge a little, but nothing reaches Nyquist
    F = qft_fast(f)
    r2 = F.grid.radius2()
    wmax = np.pi / GRID.spacing
    m2 = np.sum(F.values**2, -1)
    assert m2[r2 > (0.9 * wmax) ** 2].sum() < 1e-6 * m2.sum()


def test_band_limited_without_envelope_is_band_limited():
    f = band_limited_signal(GRID, 1, band=0.25, width=1e9)
    F = qft_fast(f)
    outside = F.grid.radius2() > (0.25 * np.pi / GRID.spacing) ** 2
    assert np.abs(F.values[outside]).max() < 1e-12


def test_band_validation():
    with pytest.raises(ValueError):
        band_limited_signal(GRID, 0, band=0.0)


def test_random_pairs_independent():
    f0, g0 = random_pair(GRID, 7, 0)
    f1, _ = random_pair(GRID, 7, 1)
    assert not np.array_equal(f0.values, g0.values)
    assert not np.array_equal(f0.values, f1.values)
    assert np.array_equal(random_pair(GRID, 7, 1)[0].values, f1.values)


def test_thread_count(monkeypatch):
    monkeypatch.setenv("QTFA_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("QTFA_THREADS", "0")
    assert thread_count() == 1
    monkeypatch.setenv("QTFA_THREADS", "many")
    assert thread_count() >= 1


def test_every_suite_has_jobs():
    small = GridSpec(1, 16, 6.0)
    for name in SUITES:
        assert suite_jobs(name, small, 0), name
    with pytest.raises(ValueError):
        suite_jobs("nope", small, 0)


def test_reports_tagged_and_ordered():
    small = GridSpec(1, 16, 6.0)
    a = run_suite("plancherel", small, seed=2, threads=1)
    b = run_suite("plancherel", small, seed=2, threads=3)
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]
    assert all(r.metadata["suite"] == "plancherel" and "input" in r.metadata for r in a)


def test_run_suites_all_concatenates():
    small = GridSpec(1, 8, 3.0)
    names = [r.metadata["suite"] for r in run_suites("all", small, seed=0, threads=1)]
    assert list(dict.fromkeys(names)) == list(SUITES)
