"""
settop: a finite-model lab for topological set theory.

Finite topologies and their exponential spaces, positive formulas and their
compilation to set operations, hereditarily finite universes, and well-orders
from choice functions, each checked against a brute-force oracle.
"""

__version__ = "0.1.0"
