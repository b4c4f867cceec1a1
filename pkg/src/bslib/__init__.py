"""Numerical library for extremal band-limited kernels, band-limited
interpolation, characteristic-function smoothing bounds in one and
several variables, and quantitative central-limit-theorem checks."""

__version__ = "0.1.0"
