"""Exact tangent-obstruction diagnostics for Weil–Deligne representations."""

__version__ = "0.1.0"
