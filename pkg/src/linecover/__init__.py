"""Exact-arithmetic toolkit for covering points by lines and related tour problems."""

__version__ = "0.1.0"
