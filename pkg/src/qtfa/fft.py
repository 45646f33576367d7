"""Iterative radix-2 FFT over arbitrary axes of complex arrays.

Lengths must be powers of two. The butterfly order is fixed, so results are
bitwise reproducible for a given input layout.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["is_power_of_two", "dft", "fft", "ifft", "fftn", "ifftn"]


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@lru_cache(maxsize=32)
def _bit_reversal(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


@lru_cache(maxsize=64)
def _twiddles(m: int, sign: int) -> np.ndarray:
    return np.exp(sign * 2j * np.pi * np.arange(m) / (2 * m))


def _fft_last(x: np.ndarray, sign: int) -> np.ndarray:
    n = x.shape[-1]
    if not is_power_of_two(n):
        raise ValueError(f"radix-2 FFT needs a power-of-two length, got {n}")
    lead = x.shape[:-1]
    x = np.ascontiguousarray(x[..., _bit_reversal(n)], dtype=np.complex128)
    m = 1
    while m < n:
        blocks = x.reshape(lead + (n // (2 * m), 2, m))
        even = blocks[..., 0, :]
        odd = blocks[..., 1, :] * _twiddles(m, sign)
        x = np.stack([even + odd, even - odd], axis=-2).reshape(lead + (n,))
        m *= 2
    return x


def dft(x, axis: int = -1, sign: int = -1) -> np.ndarray:
    """Unnormalized ``X[k] = sum_n x[n] exp(sign * 2 pi i k n / N)``."""
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    x = np.moveaxis(np.asarray(x), axis, -1)
    return np.moveaxis(_fft_last(x, sign), -1, axis)


def fft(x, axis: int = -1) -> np.ndarray:
    """Unnormalized forward DFT ``X[k] = sum_n x[n] exp(-2 pi i k n / N)``."""
    x = np.moveaxis(np.asarray(x), axis, -1)
    return np.moveaxis(_fft_last(x, -1), -1, axis)


def ifft(x, axis: int = -1) -> np.ndarray:
    """Inverse DFT, normalized by ``1/N``."""
    x = np.moveaxis(np.asarray(x), axis, -1)
    n = x.shape[-1]
    return np.moveaxis(_fft_last(x, +1) / n, -1, axis)


def fftn(x, axes) -> np.ndarray:
    out = np.asarray(x, dtype=np.complex128)
    for ax in axes:
        out = fft(out, ax)
    return out


def ifftn(x, axes) -> np.ndarray:
    out = np.asarray(x, dtype=np.complex128)
    for ax in axes:
        out = ifft(out, ax)
    return out
