"""Exact toolkit for fractional path packing in networks with terminals."""

__version__ = "0.1.0"
