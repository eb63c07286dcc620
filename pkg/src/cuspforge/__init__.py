"""Angle structures and volume maximization on ideal triangulated cusped
3-manifolds."""

from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
