"""Gabor shearlet frames on digital grids.

Modules are organised by layer: one-dimensional filter banks
(``filters1d``, ``subband``), Gabor windows (``gaborwin``), frequency-grid
operators (``grid2d``), the two shearlet systems (``groupshear``,
``coneshear``) and the approximation benchmark (``sparsebench``).
"""

from .coneshear import ConeParams, ConeSystem
from .config import RunConfig, load_config
from .filters1d import WaveletBank, build_mband_bank
from .gaborwin import build_window, default_window, periodize
from .groupshear import GroupParams, GroupSystem
from .lattice import Coefficients, frame_operator_bounds

__version__ = "0.1.0"

__all__ = [
    "Coefficients",
    "ConeParams",
    "ConeSystem",
    "GroupParams",
    "GroupSystem",
    "RunConfig",
    "WaveletBank",
    "build_mband_bank",
    "build_window",
    "default_window",
    "frame_operator_bounds",
    "load_config",
    "periodize",
    "__version__",
]
