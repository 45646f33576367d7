"""Uncertainty constants and inequality checks for the QFT, QWFT, QAF and QWVT.

Every check returns an :class:`InequalityReport` oriented so that a
nonnegative margin means the inequality holds on the grid. Checks that take
``kind`` accept ``"qwft"``, ``"ambiguity"`` or ``"wigner"``; Wigner fields
are always cut to their valid subgrid first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import integrate, special as _sp

from .grid import SampledSignal, _UniformGrid, lp_norm, reflect
from .qft import qft_fast
from .qwft import PhaseSpaceField, qwft
from .reports import InequalityReport
from .special import digamma, lgamma
from .tfdist import ambiguity, wigner, wigner_valid

__all__ = [
    "TAU_SUPPORT",
    "ConcentrationSet",
    "phase_field",
    "lieb_constant",
    "lieb_check",
    "epsilon_of",
    "donoho_stark_check",
    "lieb_concentration_check",
    "lieb_support_check",
    "entropy",
    "entropy_bound_check",
    "log_constant",
    "cube_log_mean",
    "log_radius",
    "log_uncertainty_qft_check",
    "log_uncertainty_qwft_check",
    "component_heisenberg_qft_check",
    "radial_heisenberg_qft_check",
    "heisenberg_B",
    "heisenberg_constant",
    "heisenberg_qwft_check",
    "local_price_constant",
    "local_price_check",
]

TAU_SUPPORT = 1e-12
KINDS = ("qwft", "ambiguity", "wigner")


@dataclass(frozen=True, eq=False)
class ConcentrationSet:
    """A subset of the phase-space grid with its discrete ``mu_{4d}`` measure."""

    membership: np.ndarray
    cell_weight: float
    label: str = ""

    def __post_init__(self):
        mask = np.asarray(self.membership, dtype=bool)
        object.__setattr__(self, "membership", mask)
        if not self.cell_weight > 0:
            raise ValueError("cell weight must be positive")

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.membership))

    @property
    def measure(self) -> float:
        return self.count * self.cell_weight

    def complement(self) -> "ConcentrationSet":
        return ConcentrationSet(~self.membership, self.cell_weight, f"complement({self.label})")

    def _check(self, F: PhaseSpaceField):
        if self.membership.shape != F.values.shape[:-1]:
            raise ValueError(f"set shape {self.membership.shape} does not match field {F.values.shape[:-1]}")

    @classmethod
    def full(cls, F: PhaseSpaceField) -> "ConcentrationSet":
        return cls(np.ones(F.values.shape[:-1], bool), F.cell_weight, "full")

    @classmethod
    def empty(cls, F: PhaseSpaceField) -> "ConcentrationSet":
        return cls(np.zeros(F.values.shape[:-1], bool), F.cell_weight, "empty")

    @classmethod
    def super_level(cls, F: PhaseSpaceField, tau: float) -> "ConcentrationSet":
        """``{|F| >= tau * max|F|}``."""
        mod = F.modulus()
        return cls(mod >= tau * np.max(mod), F.cell_weight, f"level({tau:g})")

    @classmethod
    def support(cls, F: PhaseSpaceField, tau: float = TAU_SUPPORT) -> "ConcentrationSet":
        return cls.super_level(F, tau)

    @classmethod
    def box(cls, F: PhaseSpaceField, half_x: float, half_w: float) -> "ConcentrationSet":
        """Centered box ``|x_a| <= half_x`` and ``|w_a| <= half_w`` on every axis."""
        nx, nw = F.x_grid.ndim, F.w_grid.ndim
        in_x = np.abs(F.x_grid.axis_nodes()) <= half_x * (1 + 1e-12)
        in_w = np.abs(F.w_grid.axis_nodes()) <= half_w * (1 + 1e-12)
        mask = np.ones((), bool)
        for ax in range(nx + nw):
            vec = in_x if ax < nx else in_w
            shape = [1] * (nx + nw)
            shape[ax] = -1
            mask = mask & vec.reshape(shape)
        return cls(np.broadcast_to(mask, F.values.shape[:-1]).copy(), F.cell_weight, f"box({half_x:g},{half_w:g})")


def phase_field(f: SampledSignal, g: SampledSignal, kind: str = "qwft") -> PhaseSpaceField:
    """The field a ``kind`` check works on (Wigner cut to its valid subgrid)."""
    if kind == "qwft":
        return qwft(f, g)
    if kind == "ambiguity":
        return ambiguity(f, g)
    if kind == "wigner":
        return wigner_valid(wigner(f, g))
    raise ValueError(f"unknown transform kind {kind!r}; expected one of {KINDS}")


def _field(f, g, kind, F):
    if F is None:
        return phase_field(f, g, kind)
    if kind == "wigner" and F.kind == "wigner" and not F.metadata.get("restricted"):
        return wigner_valid(F)
    return F


def _params(f: SampledSignal, **extra) -> dict:
    out = {"d": f.d, "N": f.grid.n_per_axis, "L": f.grid.half_extent}
    src = f.source
    if src is not None and hasattr(src, "a"):
        out["a"] = src.a
        out["b"] = src.b
    out.update(extra)
    return out


def _norms(f, g) -> tuple[float, float]:
    nf, ng = lp_norm(f), lp_norm(g)
    if nf == 0 or ng == 0:
        raise ValueError("f and g must be non-zero")
    return nf, ng


# ---------------------------------------------------------------- Lieb

def lieb_constant(p: float, d: int) -> float:
    """``C_{p,q} = (4/p)^{d/p} (1/q)^{d/q}`` with ``1/p + 1/q = 1``."""
    p = float(p)
    if not p >= 2:
        raise ValueError(f"Lieb constant needs p >= 2, got {p}")
    if d < 1:
        raise ValueError("d must be >= 1")
    q = p / (p - 1)
    return (4 / p) ** (d / p) * (1 / q) ** (d / q)


def lieb_check(f: SampledSignal, g: SampledSignal, p: float, G: Optional[PhaseSpaceField] = None) -> InequalityReport:
    """``||G_g f||_p <= C_{p,q} ||f|| ||g||``."""
    C = lieb_constant(p, f.d)
    nf, ng = _norms(f, g)
    G = qwft(f, g) if G is None else G
    return InequalityReport.inequality(
        "lieb", C * nf * ng, G.norm(p), {"C_pq": C}, _params(f, p=p, q=p / (p - 1)),
    )


# ------------------------------------------------------- concentration

def epsilon_of(F: PhaseSpaceField, U: ConcentrationSet) -> float:
    """``||chi_{U^c} F|| / ||F||``."""
    U._check(F)
    m2 = F.modulus2()
    total = float(np.sum(m2))
    if total == 0:
        raise ValueError("field is identically zero")
    outside = float(np.sum(m2[~U.membership]))
    return min(1.0, math.sqrt(outside / total))


def donoho_stark_check(f, g, U: ConcentrationSet, G: Optional[PhaseSpaceField] = None) -> InequalityReport:
    """``1 - eps^2 <= mu(U)``."""
    _norms(f, g)
    G = qwft(f, g) if G is None else G
    eps = epsilon_of(G, U)
    return InequalityReport.inequality(
        "donoho_stark", U.measure, 1 - eps**2, {}, _params(f), epsilon=eps, set=U.label, cells=U.count,
    )


def _wigner_factor(kind: str, d: int) -> float:
    return 2.0 ** (-4 * d) if kind == "wigner" else 1.0


def lieb_concentration_check(f, g, U: ConcentrationSet, p: float = 4, kind: str = "qwft",
                             F: Optional[PhaseSpaceField] = None) -> InequalityReport:
    """``C^{2p/(2-p)} (1 - eps^2)^{p/(p-2)} <= mu(U)``, times ``2^{-4d}`` for the QWVT."""
    p = float(p)
    if not p > 2:
        raise ValueError(f"Lieb concentration needs p > 2, got {p}")
    _norms(f, g)
    F = _field(f, g, kind, F)
    eps = epsilon_of(F, U)
    C = lieb_constant(p, f.d)
    bound = _wigner_factor(kind, f.d) * C ** (2 * p / (2 - p)) * (1 - eps**2) ** (p / (p - 2))
    return InequalityReport.inequality(
        f"lieb_concentration_{kind}", U.measure, bound, {"C_pq": C}, _params(f, p=p),
        epsilon=eps, set=U.label, cells=U.count,
    )


def lieb_support_check(f, g, p: float = 4, kind: str = "qwft", F: Optional[PhaseSpaceField] = None,
                       tau: float = TAU_SUPPORT) -> InequalityReport:
    """``mu(supp F) >= C^{2p/(2-p)}`` (``2^{-4d}`` times that for the QWVT), support at ``tau``."""
    p = float(p)
    if not p > 2:
        raise ValueError(f"support bound needs p > 2, got {p}")
    _norms(f, g)
    F = _field(f, g, kind, F)
    S = ConcentrationSet.support(F, tau)
    C = lieb_constant(p, f.d)
    bound = _wigner_factor(kind, f.d) * C ** (2 * p / (2 - p))
    return InequalityReport.inequality(
        f"lieb_support_{kind}", S.measure, bound, {"C_pq": C}, _params(f, p=p),
        threshold=tau, cells=S.count, epsilon=epsilon_of(F, S),
    )


# ------------------------------------------------------------- entropy

def entropy(P, cell_weight: float = 1.0) -> float:
    """``-sum P ln P * weight`` with ``0 ln 0 = 0``; a field gives ``P = |F|^2``."""
    if isinstance(P, PhaseSpaceField):
        cell_weight = P.cell_weight
        P = P.modulus2()
    P = np.asarray(P, dtype=np.float64)
    if np.any(P < 0):
        raise ValueError("entropy needs a nonnegative density")
    pos = P[P > 0]
    return float(-np.sum(pos * np.log(pos)) * cell_weight)


# d/dp of C^p at p = 2+ is -d ln 2 with the Lieb form of C and +d ln 2 with
# the swapped form; the bound below needs the former.
_C_FORM_NOTE = {
    "lieb_constant_form": "(4/p)^(d/p) (1/q)^(d/q)",
    "swapped_form_in_entropy_proof": "(4/q)^(d/q) (1/p)^(d/p)",
    "forms_agree_at_p2": True,
}


def entropy_bound_check(f, g, kind: str = "qwft", F: Optional[PhaseSpaceField] = None) -> InequalityReport:
    """``E(|F|^2) >= ||f||^2 ||g||^2 (2d ln2 - ln(c ||f||^2 ||g||^2))``, ``c = 2^{4d}`` for the QWVT."""
    nf, ng = _norms(f, g)
    F = _field(f, g, kind, F)
    d = f.d
    n2 = (nf * ng) ** 2
    c = 2.0 ** (4 * d) if kind == "wigner" else 1.0
    rhs = n2 * (2 * d * math.log(2) - math.log(c * n2))
    meta = dict(_C_FORM_NOTE, discrete_mass=float(np.sum(F.modulus2()) * F.cell_weight),
                swapped_form_differs=True)
    return InequalityReport.inequality(f"entropy_{kind}", entropy(F), rhs, {}, _params(f), **meta)


# --------------------------------------------------------- logarithmic

def log_constant(d: int) -> float:
    """``D_{2d} = psi(d/2) + ln 2``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return digamma(d / 2) + math.log(2)


@lru_cache(maxsize=None)
def cube_log_mean(n: int) -> float:
    """Mean of ``ln|u|`` over the unit cube ``[-1/2, 1/2]^n``.

    Uses ``ln r = 1/2 int_0^inf (e^{-t} - e^{-r^2 t}) dt/t`` and the cube
    average of ``e^{-|u|^2 t}``, which factors into ``phi(t)^n`` with
    ``phi(t) = sqrt(pi/t) erf(sqrt(t)/2)``.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")

    def phi(t):
        if t < 1e-8:
            return 1 - t / 12
        return math.sqrt(math.pi / t) * _sp.erf(math.sqrt(t) / 2)

    def integrand(t):
        if t < 1e-8:
            return -1 + n / 12
        return (math.exp(-t) - phi(t) ** n) / t

    head, _ = integrate.quad(integrand, 0, 1, epsabs=1e-15, epsrel=1e-13, limit=200)
    tail, _ = integrate.quad(integrand, 1, np.inf, epsabs=1e-15, epsrel=1e-13, limit=200)
    return 0.5 * (head + tail)


def log_radius(grid: _UniformGrid) -> np.ndarray:
    """``ln|x|`` on the nodes; a node at 0 gets the average over its cell."""
    r2 = grid.radius2()
    out = np.empty_like(r2)
    zero = r2 == 0
    out[~zero] = 0.5 * np.log(r2[~zero])
    out[zero] = math.log(grid.spacing) + cube_log_mean(grid.ndim)
    return out


def log_uncertainty_qft_check(f: SampledSignal) -> InequalityReport:
    """``int ln|x| |f|^2 + int ln|w| |F_Q f|^2 >= D_{2d} ||f||^2``."""
    nf = lp_norm(f)
    if nf == 0:
        raise ValueError("f must be non-zero")
    F = qft_fast(f)
    lx = float(np.sum(log_radius(f.grid) * f.modulus() ** 2)) * f.grid.cell_weight
    lw = float(np.sum(log_radius(F.grid) * F.modulus() ** 2)) * F.grid.cell_weight
    D = log_constant(f.d)
    return InequalityReport.inequality(
        "log_uncertainty_qft", lx + lw, D * nf**2, {"D_2d": D}, _params(f), x_term=lx, w_term=lw,
    )


def log_uncertainty_qwft_check(f, g, kind: str = "qwft", F: Optional[PhaseSpaceField] = None) -> InequalityReport:
    """``iint ln|w| |F|^2 + ||g||^2 int ln|t| |f|^2 >= D ||f||^2 ||g||^2``.

    ``D = D_{2d}`` for the QWFT and QAF, ``D_{2d} - ln 2`` for the QWVT.
    """
    nf, ng = _norms(f, g)
    F = _field(f, g, kind, F)
    lw_nodes = log_radius(F.w_grid).reshape((1,) * F.x_grid.ndim + F.w_grid.shape)
    lw = float(np.sum(lw_nodes * F.modulus2())) * F.cell_weight
    lt = float(np.sum(log_radius(f.grid) * f.modulus() ** 2)) * f.grid.cell_weight
    D = log_constant(f.d)
    const = D - math.log(2) if kind == "wigner" else D
    return InequalityReport.inequality(
        f"log_uncertainty_{kind}", lw + ng**2 * lt, const * (nf * ng) ** 2,
        {"D_2d": D, "constant": const}, _params(f), w_term=lw, t_term=ng**2 * lt,
    )


# ------------------------------------------------------- Heisenberg, QFT

def component_heisenberg_qft_check(f: SampledSignal, axis: int) -> InequalityReport:
    """``(int x_p^2 |f|^2)(int w_p^2 |F_Q f|^2) >= (int |f|^2)^2 / 4``."""
    d = f.d
    if not 0 <= axis < 2 * d:
        raise IndexError(f"axis {axis} out of range for d={d}")
    F = qft_fast(f)
    x = f.grid.coords()[..., axis]
    w = F.grid.coords()[..., axis]
    mx = float(np.sum(x**2 * f.modulus() ** 2)) * f.grid.cell_weight
    mw = float(np.sum(w**2 * F.modulus() ** 2)) * F.grid.cell_weight
    n2 = lp_norm(f) ** 2
    return InequalityReport.inequality(
        f"heisenberg_qft_axis{axis}", mx * mw, n2**2 / 4, {}, _params(f, axis=axis), x_moment=mx, w_moment=mw,
    )


def radial_heisenberg_qft_check(f: SampledSignal) -> InequalityReport:
    """``(int |x|^2 |f|^2)(int |w|^2 |F_Q f|^2) >= (int |f|^2)^2 / 4``."""
    F = qft_fast(f)
    mx = float(np.sum(f.grid.radius2() * f.modulus() ** 2)) * f.grid.cell_weight
    mw = float(np.sum(F.grid.radius2() * F.modulus() ** 2)) * F.grid.cell_weight
    n2 = lp_norm(f) ** 2
    return InequalityReport.inequality(
        "heisenberg_qft_radial", mx * mw, n2**2 / 4, {}, _params(f), x_moment=mx, w_moment=mw,
    )


# ------------------------------------------------------ Heisenberg, QWFT

def _check_pq(p, q):
    if not (p > 0 and q > 0):
        raise ValueError(f"p and q must be positive, got p={p}, q={q}")


def heisenberg_B(p: float, q: float, d: int) -> float:
    """``B_{p,q} = 2^{2d} p q Gamma(d)^2 / (Gamma(d/p) Gamma(d/q))``."""
    _check_pq(p, q)
    return math.exp(2 * d * math.log(2) + math.log(p * q) + 2 * lgamma(d) - lgamma(d / p) - lgamma(d / q))


def heisenberg_constant(p: float, q: float, d: int) -> float:
    """``E_{p,q}``."""
    _check_pq(p, q)
    if d < 1:
        raise ValueError("d must be >= 1")
    pre = (p / q) ** (q / (p + q)) + (q / p) ** (p / (p + q))
    expo = p * q * (2 * d * math.log(2) + math.log(heisenberg_B(p, q, d))) / (d * (p + q)) - 1
    return math.exp(expo) / pre


def _weighted_moment(F: PhaseSpaceField, r2: np.ndarray, power: float) -> float:
    # iint r^{2 power} |F|^2 dmu with r2 = r^2
    return float(np.sum(r2**power * F.modulus2())) * F.cell_weight


def heisenberg_qwft_check(f, g, p: float = 1, q: float = 1, kind: str = "qwft", form: str = "moments",
                          F: Optional[PhaseSpaceField] = None) -> InequalityReport:
    """Weighted Heisenberg products.

    ``form="moments"`` (QWFT only):
    ``(iint |x|^{2p}|G|^2)^{q/(p+q)} (iint |w|^{2q}|G|^2)^{p/(p+q)} >= E ||f||^2 ||g||^2``.

    ``form="radial"``:
    ``|| |(x,w)|^p F ||^{q/(p+q)} || |(x,w)|^q F ||^{p/(p+q)} >= c sqrt(E) ||f|| ||g||``
    with ``c = 4^{-pq/(p+q)}`` for the QWVT and 1 otherwise.

    ``empirical_constant`` in the metadata is the largest constant in place of
    ``c sqrt(E)`` (or ``E``) for which the check would still pass.
    """
    _check_pq(p, q)
    if form not in ("moments", "radial"):
        raise ValueError(f"unknown form {form!r}")
    if form == "moments" and kind != "qwft":
        raise ValueError("the moment form is stated for the QWFT only")
    nf, ng = _norms(f, g)
    F = _field(f, g, kind, F)
    d = f.d
    E = heisenberg_constant(p, q, d)
    B = heisenberg_B(p, q, d)
    x2, w2 = F.x_radius2(), F.w_radius2()
    s = p + q
    if form == "moments":
        mx = _weighted_moment(F, x2, p)
        mw = _weighted_moment(F, w2, q)
        lhs = mx ** (q / s) * mw ** (p / s)
        factor = 1.0
        scale = (nf * ng) ** 2
        rhs = E * scale
        extra = {"x_moment": mx, "w_moment": mw}
    else:
        r2 = x2 + w2
        np_ = math.sqrt(_weighted_moment(F, r2, p))
        nq_ = math.sqrt(_weighted_moment(F, r2, q))
        lhs = np_ ** (q / s) * nq_ ** (p / s)
        factor = 4.0 ** (-p * q / s) if kind == "wigner" else 1.0
        scale = nf * ng
        rhs = factor * math.sqrt(E) * scale
        extra = {"weighted_norm_p": np_, "weighted_norm_q": nq_}
    return InequalityReport.inequality(
        f"heisenberg_{kind}_{form}", lhs, rhs, {"E_pq": E, "B_pq": B, "factor": factor},
        _params(f, p=p, q=q), empirical_constant=lhs / scale, **extra,
    )


# ------------------------------------------------------------ local Price

def _check_price(eps, p, d):
    if not 0 < eps < 2 * d:
        raise ValueError(f"eps must lie in (0, 2d) = (0, {2 * d}), got {eps}")
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")


def local_price_constant(eps: float, p: float, d: int, wigner_variant: bool = False) -> float:
    """``M_{eps,p}``, or ``N_{eps,p}`` with ``wigner_variant=True``.

    The exponent of 2 is read with ``(p + 1)`` where the source has ``(P + 1)``.
    """
    _check_price(eps, p, d)
    n = 2 * d
    k = n + eps
    log_den = (
        math.log(2) * eps * (n + 2 * p + 2) / (k * (p + 1))
        + math.log(eps) * 2 * eps / k
        + lgamma(n) * eps / (k * (p + 1))
        + math.log(n - eps) * ((n - eps) / k + eps / (k * (p + 1)))
    )
    log_m = p * (p + 1) * (math.log(k) - log_den)
    if wigner_variant:
        log_m += math.log(2) * (2 * d * (p - 2) * (p + 1) + 4 * d + 4 * p * d * eps / k)
    return math.exp(log_m)


_PRICE_NOTE = {"constant_source": "final boxed expression; '(P+1)' read as '(p+1)'", "typo_flag": True}


def local_price_check(f, g, sigma: ConcentrationSet, eps: float = 1.0, p: float = 2, kind: str = "qwft",
                      F: Optional[PhaseSpaceField] = None) -> InequalityReport:
    """``||chi_S F||_p^{p(p+1)} <= K mu(S) || |(x,w)|^eps F ||^{4pd/(2d+eps)} (||f|| ||g||)^{p(p-(2d-eps)/(2d+eps))}``.

    ``K = M_{eps,p}`` for the QWFT and QAF, ``N_{eps,p}`` for the QWVT.
    """
    d = f.d
    _check_price(eps, p, d)
    nf, ng = _norms(f, g)
    F = _field(f, g, kind, F)
    sigma._check(F)
    K = local_price_constant(eps, p, d, wigner_variant=(kind == "wigner"))
    mod = F.modulus()
    inside = float(np.sum(mod[sigma.membership] ** p)) * F.cell_weight
    rhs = inside ** (p + 1)  # (||.||_p^p)^{p+1}
    weighted = math.sqrt(_weighted_moment(F, F.x_radius2() + F.w_radius2(), eps))
    k = 2 * d + eps
    lhs = K * sigma.measure * weighted ** (4 * p * d / k) * (nf * ng) ** (p * (p - (2 * d - eps) / k))
    name = "M_eps_p" if kind != "wigner" else "N_eps_p"
    return InequalityReport.inequality(
        f"local_price_{kind}", lhs, rhs, {name: K}, _params(f, eps=eps, p=p),
        set=sigma.label, measure=sigma.measure, weighted_norm=weighted, **_PRICE_NOTE,
    )
