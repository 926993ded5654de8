"""Exact verification kernels for symplectic resolutions of ADE Hilbert squares."""

__version__ = "0.1.0"
