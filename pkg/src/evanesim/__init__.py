"""Evanescent-mode tunneling: scattering, phase times, pulses and diagnostics."""

__version__ = "0.1.0"
