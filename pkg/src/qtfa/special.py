"""Digamma and log-gamma for real arguments.

Both use upward recurrence into the asymptotic region followed by the
Bernoulli-number series. Accuracy is about 1e-14 relative on [0.5, 50].
"""
from __future__ import annotations

import math

__all__ = ["digamma", "lgamma", "gamma", "EULER_GAMMA"]

EULER_GAMMA = 0.57721566490153286060651209008240243

# B_{2k} / (2k), k = 1..8
_PSI_COEF = (
    1.0 / 12,
    -1.0 / 120,
    1.0 / 252,
    -1.0 / 240,
    1.0 / 132,
    -691.0 / 32760,
    1.0 / 12,
    -3617.0 / 8160,
)

# B_{2k} / (2k (2k - 1)), k = 1..8
_LGAMMA_COEF = (
    1.0 / 12,
    -1.0 / 360,
    1.0 / 1260,
    -1.0 / 1680,
    1.0 / 1188,
    -691.0 / 360360,
    1.0 / 156,
    -3617.0 / 122400,
)

_PSI_SHIFT = 10.0
_LGAMMA_SHIFT = 10.0


def _check_real(x) -> float:
    x = float(x)
    if math.isnan(x):
        raise ValueError("argument is NaN")
    return x


def digamma(x: float) -> float:
    """``psi(x) = Gamma'(x) / Gamma(x)``.

    Negative non-integers go through the reflection formula; poles raise.
    """
    x = _check_real(x)
    if x <= 0 and x == math.floor(x):
        raise ValueError(f"digamma has a pole at {x}")
    if x < 0:
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    acc = 0.0
    while x < _PSI_SHIFT:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    for c in reversed(_PSI_COEF):
        series = series * inv2 + c
    return acc + math.log(x) - 0.5 / x - series * inv2


def lgamma(x: float) -> float:
    """``ln |Gamma(x)|`` for ``x > 0``."""
    x = _check_real(x)
    if x <= 0:
        raise ValueError(f"lgamma is implemented for x > 0, got {x}")
    prod = 1.0
    while x < _LGAMMA_SHIFT:
        prod *= x
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    for c in reversed(_LGAMMA_COEF):
        series = series * inv2 + c
    stirling = (x - 0.5) * math.log(x) - x + 0.5 * math.log(2 * math.pi) + series * inv
    return stirling - math.log(prod)


def gamma(x: float) -> float:
    """``Gamma(x)`` for ``x > 0``."""
    return math.exp(lgamma(x))
