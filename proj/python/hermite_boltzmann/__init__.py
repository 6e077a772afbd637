"""Hermite spectral solver for the spatially homogeneous Boltzmann equation."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
