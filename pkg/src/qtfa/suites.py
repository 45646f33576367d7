"""Named verification suites and the seeded random-signal generator.

A suite is a list of jobs. Each job owns one input (a signal, or a
signal/window pair) and returns its reports. Jobs share a per-suite field
cache, run on a thread pool capped by ``QTFA_THREADS``, and their reports are
collected in submission order, so the output does not depend on scheduling.
"""
from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional

import numpy as np

from .grid import GaussianSpec, GridSpec, SampledSignal, lp_norm, sample
from .qft import derivative_check, iqft, plancherel_qft_check
from .qwft import PhaseSpaceField, dilation_covariance_check, parseval_qwft_check, plancherel_qwft_check
from .reports import InequalityReport
from .tfdist import ambiguity_relation_check, measure_scaling_check, wigner, wigner_norm_check, wigner_relation_check
from . import uncertainty as U
from . import validation as V

__all__ = [
    "SUITES",
    "GAUSSIAN_FAMILY",
    "band_limited_signal",
    "random_pair",
    "thread_count",
    "suite_jobs",
    "run_suite",
    "run_suites",
]

SUITES = ("plancherel", "lieb", "donoho-stark", "entropy", "logarithmic", "heisenberg", "price", "relations")
GAUSSIAN_FAMILY = (0.25, 0.5, 1.0, 2.0)
RANDOM_PAIRS = 20
KINDS = ("qwft", "ambiguity", "wigner")


def band_limited_signal(grid: GridSpec, seed, band: float = 0.5, width: Optional[float] = None,
                        normalize: bool = True) -> SampledSignal:
    """Seeded band-limited quaternion noise with a Gaussian envelope.

    Random dual-grid coefficients inside ``|w| <= band * w_max`` (``w_max`` is
    the Nyquist frequency ``pi/Delta``) are inverse-transformed, then
    multiplied by ``exp(-|x|^2 / (2 width^2))`` with ``width = L/6`` by
    default so the result also decays toward the box edge.
    """
    if not 0 < band <= 1:
        raise ValueError(f"band must lie in (0, 1], got {band}")
    rng = np.random.default_rng(seed)
    freq = grid.dual()
    w_max = np.pi / grid.spacing
    coeff = rng.standard_normal(freq.shape + (4,))
    coeff[freq.radius2() > (band * w_max) ** 2] = 0.0
    values = iqft(SampledSignal(freq, coeff), grid).values
    width = grid.half_extent / 6 if width is None else float(width)
    values = values * np.exp(-grid.radius2() / (2 * width**2))[..., None]
    f = SampledSignal(grid, values)
    if normalize:
        f = f.scale(1.0 / lp_norm(f))
    return f


def random_pair(grid: GridSpec, seed: int, index: int) -> tuple[SampledSignal, SampledSignal]:
    """The ``index``-th seeded signal/window pair (independent streams)."""
    f = band_limited_signal(grid, np.random.SeedSequence([seed, index, 0]))
    g = band_limited_signal(grid, np.random.SeedSequence([seed, index, 1]))
    return f, g


def thread_count() -> int:
    raw = os.environ.get("QTFA_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


class _FieldCache:
    """Phase-space fields keyed by ``(input label, kind)``, computed once."""

    def __init__(self):
        self._lock = threading.Lock()
        self._items: dict = {}
        self._locks: dict = {}

    def get(self, key, f, g, kind) -> PhaseSpaceField:
        with self._lock:
            lock = self._locks.setdefault(key + (kind,), threading.Lock())
        with lock:
            item = self._items.get(key + (kind,))
            if item is None:
                item = U.phase_field(f, g, kind)
                self._items[key + (kind,)] = item
            return item


Job = Callable[[], list]


def _family(grid):
    for a in GAUSSIAN_FAMILY:
        f, g = V.gaussian_pair(a, a, grid)
        yield ("gauss", a), f, g


def _randoms(grid, seed, count=RANDOM_PAIRS):
    for k in range(count):
        f, g = random_pair(grid, seed, k)
        yield ("random", k), f, g


def _tag(reports: Iterable[InequalityReport], key) -> list:
    out = []
    for r in reports:
        r.metadata.setdefault("input", f"{key[0]}:{key[1]}")
        out.append(r)
    return out


def _plancherel(grid, seed, cache):
    jobs = []
    for key, f, g in _family(grid):
        jobs.append(lambda key=key, f=f, g=g: _tag(
            [plancherel_qft_check(f), plancherel_qwft_check(f, g, cache.get(key, f, g, "qwft"))], key))
    for key, f, g in _randoms(grid, seed, 10):
        if key[1] < 5:
            jobs.append(lambda key=key, f=f, g=g: _tag(
                [plancherel_qft_check(f), plancherel_qwft_check(f, g, cache.get(key, f, g, "qwft"))], key))
        else:
            jobs.append(lambda key=key, f=f: _tag([plancherel_qft_check(f)], key))
    f1, g1 = random_pair(grid, seed, 100)
    f2, g2 = random_pair(grid, seed, 101)
    jobs.append(lambda: _tag([parseval_qwft_check(f1, f2, g1, g2)], ("random", "100-101")))
    return jobs


def _relations(grid, seed, cache):
    jobs = []
    for key, f, _ in _randoms(grid, seed, 10):
        jobs.append(lambda key=key, f=f: _tag([V.qft_oracle_check(f)], key))
    for a, b in ((1, 1), (0.5, 1), (1, 2), (2, 2), (0.5, 0.5)):
        spec = GaussianSpec(a, b, "separable")
        jobs.append(lambda spec=spec: _tag([V.gaussian_qft_check(spec, grid)], ("separable", f"{spec.a},{spec.b}")))
    for a, b in ((0.5, 0.5), (1, 0.5), (2, 1)):
        jobs.append(lambda a=a, b=b: _tag([V.gaussian_qwft_modulus_check(a, b, grid)], ("gauss", f"{a},{b}")))

    def field_relations(key, f, g):
        G = cache.get(key, f, g, "qwft")
        A = cache.get(key, f, g, "ambiguity")
        out = V.reconstruction_check(f, g, G=G) if not np.any(g.values[..., 1:]) else None
        reps = [out] if out is not None else []
        reps += ambiguity_relation_check(f, g, A=A, G=G)
        W = wigner(f, g)
        reps.append(wigner_relation_check(f, g, W=W))
        # doubled frequencies alias for a >= 1 at N = 32; see the notes
        if key[0] == "gauss" and key[1] <= 0.5:
            reps.append(wigner_norm_check(f, g, W=W))
        reps.append(measure_scaling_check(G))
        return _tag(reps, key)

    for key, f, g in _family(grid):
        jobs.append(lambda key=key, f=f, g=g: field_relations(key, f, g))
    # quaternion-valued signal with a real Gaussian window
    fr = band_limited_signal(grid, np.random.SeedSequence([seed, 200, 0]))
    gr = sample(GaussianSpec(0.5, 0.5, "window"), grid)
    jobs.append(lambda: field_relations(("random", 200), fr, gr))
    for key, f, g in _randoms(grid, seed, 2):
        jobs.append(lambda key=key, f=f, g=g: _tag(
            ambiguity_relation_check(f, g) + [wigner_relation_check(f, g)], key))
    fs = sample(GaussianSpec(0.5, 0.5, "signal"), grid)
    jobs.append(lambda: _tag([derivative_check(fs, ax) for ax in range(grid.ndim)], ("gauss", 0.5)))
    fw = sample(GaussianSpec(0.5, 0.5, "window"), grid)
    jobs.append(lambda: _tag([dilation_covariance_check(fs, fw, 2.0)], ("gauss", 0.5)))
    return jobs


def _lieb(grid, seed, cache):
    jobs = []
    for key, f, g in _family(grid):
        jobs.append(lambda key=key, f=f, g=g: _tag(
            [U.lieb_check(f, g, p, cache.get(key, f, g, "qwft")) for p in (2, 2.5, 3, 4)], key))
    for key, f, g in _randoms(grid, seed):
        jobs.append(lambda key=key, f=f, g=g: _tag(
            [U.lieb_check(f, g, p, cache.get(key, f, g, "qwft")) for p in (2.5, 3, 4)], key))
    return jobs


def _donoho_stark(grid, seed, cache):
    def job(key, f, g):
        G = cache.get(key, f, g, "qwft")
        reps = []
        for tau in (0.1, 0.3, 0.5):
            S = U.ConcentrationSet.super_level(G, tau)
            reps.append(U.donoho_stark_check(f, g, S, G))
            reps.append(U.lieb_concentration_check(f, g, S, 4, "qwft", G))
        reps.append(U.donoho_stark_check(f, g, U.ConcentrationSet.full(G), G))
        for kind in KINDS:
            F = cache.get(key, f, g, kind)
            reps.append(U.lieb_concentration_check(f, g, U.ConcentrationSet.super_level(F, 0.3), 4, kind, F))
            reps.append(U.lieb_support_check(f, g, 4, kind, F))
        return _tag(reps, key)

    return [lambda key=key, f=f, g=g: job(key, f, g) for key, f, g in _family(grid)]


def _entropy(grid, seed, cache):
    jobs = []
    for key, f, g in _family(grid):
        jobs.append(lambda key=key, f=f, g=g: _tag(
            [U.entropy_bound_check(f, g, kind, cache.get(key, f, g, kind)) for kind in KINDS]
            + [V.gaussian_entropy_check(key[1], grid, G=cache.get(key, f, g, "qwft"))], key))
    for key, f, g in _randoms(grid, seed):
        jobs.append(lambda key=key, f=f, g=g: _tag(
            [U.entropy_bound_check(f, g, "qwft", cache.get(key, f, g, "qwft"))], key))
    # un-normalized signal: norm 2
    f2, g2 = V.gaussian_pair(0.5, 0.5, grid)
    f2 = f2.scale(2.0)
    jobs.append(lambda: _tag([U.entropy_bound_check(f2, g2)], ("gauss-scaled", 0.5)))
    return jobs


def _logarithmic(grid, seed, cache):
    jobs = [lambda: [V.log_constant_check()]]
    for key, f, g in _family(grid):
        jobs.append(lambda key=key, f=f, g=g: _tag(
            [U.log_uncertainty_qft_check(f)]
            + [U.log_uncertainty_qwft_check(f, g, kind, cache.get(key, f, g, kind)) for kind in KINDS], key))
    base_f = GaussianSpec(0.5, 0.5, "signal")
    base_g = GaussianSpec(0.5, 0.5, "window")
    for lam in (0.5, 1.0, 2.0):
        def job(lam=lam):
            f = sample(base_f.dilated(lam, grid.d), grid)
            g = sample(base_g.dilated(lam, grid.d), grid)
            reps = [U.log_uncertainty_qft_check(f), U.log_uncertainty_qwft_check(f, g)]
            for r in reps:
                r.parameters["lambda"] = lam
            return _tag(reps, ("dilation", lam))
        jobs.append(job)
    for key, f, g in _randoms(grid, seed, 3):
        jobs.append(lambda key=key, f=f: _tag([U.log_uncertainty_qft_check(f)], key))
    return jobs


def _heisenberg(grid, seed, cache):
    jobs = [lambda: [_constant_report()]]
    pq = ((1, 1), (1, 2), (2, 1))
    for key, f, g in _family(grid):
        def job(key=key, f=f, g=g):
            G = cache.get(key, f, g, "qwft")
            reps = [U.component_heisenberg_qft_check(f, ax) for ax in range(grid.ndim)]
            reps.append(U.radial_heisenberg_qft_check(f))
            reps.append(V.gaussian_moment_product_check(key[1], grid, G=G))
            reps += [U.heisenberg_qwft_check(f, g, p, q, "qwft", "moments", G) for p, q in pq]
            for kind in KINDS:
                F = cache.get(key, f, g, kind)
                reps += [U.heisenberg_qwft_check(f, g, p, q, kind, "radial", F) for p, q in pq]
            return _tag(reps, key)
        jobs.append(job)
    base = GaussianSpec(0.5, 0.5, "signal")
    for lam in (0.5, 2.0):
        def dil(lam=lam):
            f = sample(base.dilated(lam, grid.d), grid)
            g = sample(GaussianSpec(0.5, 0.5, "window").dilated(lam, grid.d), grid)
            reps = [U.component_heisenberg_qft_check(f, 0), U.heisenberg_qwft_check(f, g, 1, 1)]
            for r in reps:
                r.parameters["lambda"] = lam
            return _tag(reps, ("dilation", lam))
        jobs.append(dil)
    for key, f, g in _randoms(grid, seed, 5):
        jobs.append(lambda key=key, f=f: _tag(
            [U.component_heisenberg_qft_check(f, ax) for ax in range(grid.ndim)]
            + [U.radial_heisenberg_qft_check(f)], key))
    return jobs


def _constant_report() -> InequalityReport:
    E = U.heisenberg_constant(1, 1, 1)
    exact = 2 / np.e
    return InequalityReport("heisenberg_constant_E11", E, float(exact), 1e-12 - abs(E - exact),
                            bool(abs(E - exact) <= 1e-12), {"E_pq": E}, {"p": 1, "q": 1, "d": 1}, "equality",
                            {"tolerance": 1e-12})


def _price(grid, seed, cache):
    def job(key, f, g):
        reps = []
        for kind in KINDS:
            F = cache.get(key, f, g, kind)
            for eps, p in ((0.5, 1), (1, 2), (1.5, 3)):
                for h in (1.0, 2.0, 3.0):
                    reps.append(U.local_price_check(f, g, U.ConcentrationSet.box(F, h, h), eps, p, kind, F))
            reps.append(U.local_price_check(f, g, U.ConcentrationSet.empty(F), 1, 2, kind, F))
        return _tag(reps, key)

    return [lambda key=key, f=f, g=g: job(key, f, g) for key, f, g in _family(grid)]


_BUILDERS = {
    "plancherel": _plancherel,
    "lieb": _lieb,
    "donoho-stark": _donoho_stark,
    "entropy": _entropy,
    "logarithmic": _logarithmic,
    "heisenberg": _heisenberg,
    "price": _price,
    "relations": _relations,
}


def suite_jobs(name: str, grid: GridSpec, seed: int, cache: Optional[_FieldCache] = None) -> list[Job]:
    if name not in _BUILDERS:
        raise ValueError(f"unknown suite {name!r}; expected one of {SUITES + ('all',)}")
    return _BUILDERS[name](grid, seed, cache or _FieldCache())


def run_suite(name: str, grid: Optional[GridSpec] = None, seed: int = 0,
              threads: Optional[int] = None) -> list[InequalityReport]:
    """Run one named suite; reports come back in a fixed order."""
    grid = GridSpec() if grid is None else grid
    jobs = suite_jobs(name, grid, seed)
    threads = thread_count() if threads is None else max(1, int(threads))
    if threads == 1:
        results = [job() for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda job: job(), jobs))
    out = []
    for reps in results:
        for r in reps:
            r.metadata["suite"] = name
            out.append(r)
    return out


def run_suites(name: str, grid: Optional[GridSpec] = None, seed: int = 0,
               threads: Optional[int] = None) -> list[InequalityReport]:
    names = SUITES if name == "all" else (name,)
    out = []
    for n in names:
        out += run_suite(n, grid, seed, threads)
    return out
