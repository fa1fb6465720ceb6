"""Steering-certified key rates, noise channels, and purification for
one-sided device-independent QKD."""

from ._qsdi import *  # noqa: F401,F403

__version__ = "0.1.0"
