import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtfa.fft import dft, fft, fftn, ifft, ifftn, is_power_of_two

sizes = st.sampled_from([1, 2, 4, 8, 16, 64, 256])


def _complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@given(sizes, st.integers(0, 2**32 - 1))
def test_fft_matches_numpy(n, seed):
    x = _complex(np.random.default_rng(seed), (3, n))
    np.testing.assert_allclose(fft(x), np.fft.fft(x), rtol=1e-12, atol=1e-12 * n)
    np.testing.assert_allclose(ifft(x), np.fft.ifft(x), rtol=1e-12, atol=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_dft_sign_and_axis(seed):
    x = _complex(np.random.default_rng(seed), (8, 4, 16))
    np.testing.assert_allclose(dft(x, axis=0, sign=-1), np.fft.fft(x, axis=0), atol=1e-12)
    # positive sign is the unnormalized inverse
    np.testing.assert_allclose(dft(x, axis=1, sign=+1), 4 * np.fft.ifft(x, axis=1), atol=1e-12)


def test_multidimensional_roundtrip(rng):
    x = _complex(rng, (8, 16, 4))
    np.testing.assert_allclose(fftn(x, (0, 1, 2)), np.fft.fftn(x), atol=1e-11)
    np.testing.assert_allclose(ifftn(fftn(x, (0, 2)), (0, 2)), x, atol=1e-13)


def test_parseval(rng):
    x = _complex(rng, 128)
    assert np.sum(np.abs(fft(x)) ** 2) == pytest.approx(128 * np.sum(np.abs(x) ** 2), rel=1e-13)


def test_deterministic(rng):
    x = _complex(rng, (4, 32))
    assert fft(x).tobytes() == fft(x.copy()).tobytes()


def test_power_of_two():
    assert [n for n in range(1, 40) if is_power_of_two(n)] == [1, 2, 4, 8, 16, 32]
    assert not is_power_of_two(0)
    with pytest.raises(ValueError):
        fft(np.zeros(12))
