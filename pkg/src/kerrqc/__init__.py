"""Quantum correlations of Unruh-DeWitt detectors near a Kerr horizon."""

__version__ = "0.1.0"
