"""Check results shared by every verification routine."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

__all__ = ["InequalityReport", "report_tolerance"]


def report_tolerance(lhs: float, rhs: float) -> float:
    return 1e-9 * max(abs(lhs), abs(rhs), 1.0)


def _plain(value):
    # numpy scalars and tuples -> JSON-friendly python values
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, "item") and getattr(value, "ndim", 1) == 0:
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


@dataclass
class InequalityReport:
    """One verified instance of an inequality or identity.

    For inequalities ``margin = lhs - rhs`` and the check passes when
    ``margin >= -1e-9 * max(|lhs|, |rhs|, 1)``. Equality reports
    (``kind == "equality"``) use ``margin = tol * max(|lhs|, |rhs|) + atol - |lhs - rhs|``
    and pass when the margin is nonnegative.
    """

    name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    constant_values: dict[str, float] = field(default_factory=dict)
    parameters: dict[str, Any] = field(default_factory=dict)
    kind: str = "inequality"
    metadata: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def inequality(cls, name, lhs, rhs, constants=None, parameters=None, **metadata) -> "InequalityReport":
        lhs, rhs = float(lhs), float(rhs)
        margin = lhs - rhs
        ok = bool(margin >= -report_tolerance(lhs, rhs))
        if math.isnan(margin):
            ok = False
        return cls(name, lhs, rhs, margin, ok, dict(constants or {}), dict(parameters or {}), "inequality", metadata)

    @classmethod
    def equality(cls, name, lhs, rhs, tol, atol=0.0, constants=None, parameters=None, **metadata) -> "InequalityReport":
        lhs, rhs = float(lhs), float(rhs)
        margin = tol * max(abs(lhs), abs(rhs)) + atol - abs(lhs - rhs)
        ok = bool(margin >= 0)
        metadata.setdefault("tolerance", tol)
        return cls(name, lhs, rhs, margin, ok, dict(constants or {}), dict(parameters or {}), "equality", metadata)

    @classmethod
    def pointwise(cls, name, a, b, tol, constants=None, parameters=None, **metadata) -> "InequalityReport":
        """Compare two quaternion arrays: ``max|a - b| <= tol * max(max|a|, max|b|)``.

        ``lhs``/``rhs`` hold the two max moduli; the margin is ``tol`` minus
        the max-norm relative deviation.
        """
        a = np.asarray(a, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        mod = lambda q: np.sqrt(np.sum(q * q, axis=-1)) if q.ndim and q.shape[-1] == 4 else np.abs(q)
        lhs = float(np.max(mod(a))) if a.size else 0.0
        rhs = float(np.max(mod(b))) if b.size else 0.0
        dev = float(np.max(mod(a - b))) if a.size else 0.0
        scale = max(lhs, rhs)
        rel = dev / scale if scale else dev
        metadata.update(max_deviation=dev, relative_deviation=rel, tolerance=tol, points=int(mod(a).size))
        return cls(name, lhs, rhs, tol - rel, bool(rel <= tol), dict(constants or {}), dict(parameters or {}),
                   "equality", metadata)

    @property
    def relative_error(self) -> float:
        scale = max(abs(self.lhs), abs(self.rhs))
        return abs(self.lhs - self.rhs) / scale if scale else 0.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": _plain(self.lhs),
            "rhs": _plain(self.rhs),
            "constant_values": _plain(self.constant_values),
            "margin": _plain(self.margin),
            "parameters": _plain(self.parameters),
            "pass": self.passed,
            "kind": self.kind,
            "metadata": _plain(self.metadata),
        }

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.name}: lhs={self.lhs:.6g} rhs={self.rhs:.6g} margin={self.margin:.3g}"
