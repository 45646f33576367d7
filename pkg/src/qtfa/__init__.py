"""Quaternion time-frequency analysis on sampled grids.

The functional core lives in the submodules (``qft``, ``qwft``, ``tfdist``,
``uncertainty``); ``estimators`` wraps it in scikit-learn transformers and
``cli`` exposes it on the command line.
"""
__version__ = "0.1.0"

from .quaternion import Quaternion, qabs, qconj, qmul
from .grid import FrequencyGrid, GaussianSpec, GridSpec, SampledSignal, dilate, lp_norm, sample
from .reports import InequalityReport
from .qft import iqft, qft_direct, qft_fast
from .qwft import PhaseSpaceField, qwft, qwft_point, reconstruct
from .tfdist import ambiguity, wigner, wigner_valid
from .uncertainty import ConcentrationSet, entropy, heisenberg_constant, lieb_constant, local_price_constant
from .suites import SUITES, run_suite, run_suites
from .estimators import QFTTransformer, QWFTTransformer, UncertaintyVerifier

__all__ = [
    "Quaternion", "qabs", "qconj", "qmul",
    "FrequencyGrid", "GaussianSpec", "GridSpec", "SampledSignal", "dilate", "lp_norm", "sample",
    "InequalityReport",
    "iqft", "qft_direct", "qft_fast",
    "PhaseSpaceField", "qwft", "qwft_point", "reconstruct",
    "ambiguity", "wigner", "wigner_valid",
    "ConcentrationSet", "entropy", "heisenberg_constant", "lieb_constant", "local_price_constant",
    "SUITES", "run_suite", "run_suites",
    "QFTTransformer", "QWFTTransformer", "UncertaintyVerifier",
]
