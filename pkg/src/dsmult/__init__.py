"""Exact discrete-series multiplicities for uniform lattices along strings of parameters."""

__version__ = "0.1.0"
