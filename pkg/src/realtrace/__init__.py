"""Trace-realness analysis for complex and quaternionic hyperbolic groups."""

__version__ = "0.1.0"
