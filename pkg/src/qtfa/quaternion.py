"""Hamilton quaternion arithmetic on float64 arrays.

A quaternion array is any ``ndarray`` whose last axis has length 4 and holds
the components ``(q0, q1, q2, q3)`` of ``q0 + i q1 + j q2 + k q3``. Every
function broadcasts over the leading axes. :class:`Quaternion` wraps a single
value for interactive use.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "Quaternion",
    "as_quaternion_array",
    "qmul",
    "qconj",
    "qabs",
    "qabs2",
    "scalar_part",
    "qsplit",
    "exp_i",
    "exp_j",
    "ONE",
    "I",
    "J",
    "K",
]


def as_quaternion_array(q) -> np.ndarray:
    """Coerce ``q`` to a float64 array with trailing axis of length 4.

    Real scalars/arrays are promoted to real quaternions.
    """
    if isinstance(q, Quaternion):
        return q.components.copy()
    arr = np.asarray(q, dtype=np.float64)
    if arr.ndim == 0 or arr.shape[-1] != 4:
        out = np.zeros(arr.shape + (4,))
        out[..., 0] = arr
        return out
    return arr


def qmul(p, q) -> np.ndarray:
    """Hamilton product ``p q`` (broadcasting)."""
    p = as_quaternion_array(p)
    q = as_quaternion_array(q)
    p0, p1, p2, p3 = np.moveaxis(p, -1, 0)
    q0, q1, q2, q3 = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
            p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
            p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
            p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
        ],
        axis=-1,
    )


def qconj(q) -> np.ndarray:
    q = as_quaternion_array(q)
    out = -q
    out[..., 0] = q[..., 0]
    return out


def qabs2(q) -> np.ndarray:
    q = as_quaternion_array(q)
    return np.einsum("...i,...i->...", q, q)


def qabs(q) -> np.ndarray:
    return np.sqrt(qabs2(q))


def scalar_part(q) -> np.ndarray:
    return as_quaternion_array(q)[..., 0]


def qsplit(q) -> tuple[np.ndarray, np.ndarray]:
    """Split ``q`` into ``q_plus = (q + iqj)/2`` and ``q_minus = (q - iqj)/2``.

    Uses the closed component form, so ``q_plus + q_minus == q`` holds
    bitwise up to a single rounding per component.
    """
    q = as_quaternion_array(q)
    q0, q1, q2, q3 = np.moveaxis(q, -1, 0)
    a = 0.5 * (q0 + q3)
    b = 0.5 * (q1 - q2)
    c = 0.5 * (q0 - q3)
    e = 0.5 * (q1 + q2)
    plus = np.stack([a, b, -b, a], axis=-1)
    minus = np.stack([c, e, e, -c], axis=-1)
    return plus, minus


def exp_i(theta) -> np.ndarray:
    """``cos(theta) + i sin(theta)``."""
    theta = np.asarray(theta, dtype=np.float64)
    out = np.zeros(theta.shape + (4,))
    out[..., 0] = np.cos(theta)
    out[..., 1] = np.sin(theta)
    return out


def exp_j(theta) -> np.ndarray:
    """``cos(theta) + j sin(theta)``."""
    theta = np.asarray(theta, dtype=np.float64)
    out = np.zeros(theta.shape + (4,))
    out[..., 0] = np.cos(theta)
    out[..., 2] = np.sin(theta)
    return out


class Quaternion:
    """A single quaternion ``q0 + i q1 + j q2 + k q3``."""

    __slots__ = ("components",)

    def __init__(self, q0=0.0, q1=0.0, q2=0.0, q3=0.0):
        self.components = np.array([q0, q1, q2, q3], dtype=np.float64)

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        arr = np.asarray(arr, dtype=np.float64)
        if arr.shape != (4,):
            raise ValueError(f"expected shape (4,), got {arr.shape}")
        return cls(*arr)

    q0 = property(lambda self: float(self.components[0]))
    q1 = property(lambda self: float(self.components[1]))
    q2 = property(lambda self: float(self.components[2]))
    q3 = property(lambda self: float(self.components[3]))

    def __mul__(self, other):
        if np.isscalar(other):
            return Quaternion.from_array(self.components * other)
        return Quaternion.from_array(qmul(self.components, as_quaternion_array(other)))

    def __rmul__(self, other):
        if np.isscalar(other):
            return Quaternion.from_array(self.components * other)
        return Quaternion.from_array(qmul(as_quaternion_array(other), self.components))

    def __add__(self, other):
        return Quaternion.from_array(self.components + as_quaternion_array(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Quaternion.from_array(self.components - as_quaternion_array(other))

    def __neg__(self):
        return Quaternion.from_array(-self.components)

    def __abs__(self) -> float:
        return float(qabs(self.components))

    def __eq__(self, other):
        try:
            return bool(np.array_equal(self.components, as_quaternion_array(other)))
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(tuple(self.components))

    def __iter__(self):
        return iter(self.components.tolist())

    def __array__(self, dtype=None, copy=None):
        return self.components.astype(dtype) if dtype else self.components.copy()

    def conj(self) -> "Quaternion":
        return Quaternion.from_array(qconj(self.components))

    def split(self) -> tuple["Quaternion", "Quaternion"]:
        plus, minus = qsplit(self.components)
        return Quaternion.from_array(plus), Quaternion.from_array(minus)

    @property
    def scalar(self) -> float:
        return self.q0

    def isclose(self, other, atol=1e-12) -> bool:
        return bool(np.allclose(self.components, as_quaternion_array(other), rtol=0, atol=atol))

    def __repr__(self):
        q0, q1, q2, q3 = self.components
        return f"Quaternion({q0!r}, {q1!r}, {q2!r}, {q3!r})"


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
