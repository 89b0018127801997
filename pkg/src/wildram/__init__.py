"""Exact computations for deformations of wildly ramified order-p automorphisms of k[[T]]."""

__version__ = "0.1.0"
