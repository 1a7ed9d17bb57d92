"""Weighted Koppelman operators for the dbar-equation."""

__version__ = "0.1.0"
