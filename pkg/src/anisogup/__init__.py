"""Symbolic checks for deformed position operators in anisotropic momentum space."""

__version__ = "0.1.0"
