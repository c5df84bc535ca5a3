"""Exact models of almost rigid affine domains and their isotropy groups."""

__version__ = "0.1.0"
