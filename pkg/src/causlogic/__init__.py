"""Causal proof-nets, graph types, and an exact affine semantic model."""

__version__ = "0.1.0"
