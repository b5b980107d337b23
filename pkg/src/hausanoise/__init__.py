"""Noise profiling, synthesis, calibration, and evaluation for Hausa text."""

__version__ = "0.1.0"
