"""Spectral collocation operators for fractional advection-diffusion."""

try:
    from ._fracspec import *  # noqa: F401,F403
    from ._fracspec import __doc__ as _mod_doc  # noqa: F401
except ImportError:  # extension built out-of-tree (plain CMake build)
    from _fracspec import *  # noqa: F401,F403

__version__ = "0.1.0"
