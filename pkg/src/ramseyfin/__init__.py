"""Finite-window engines for arithmetic Ramsey statements.

Polynomial configurations, Schur and exponential triples, Hales-Jewett lines
and polynomial Hales-Jewett patterns, finite sums/products/towers, window
versions of IP_r*, thick, syndetic and piecewise syndetic sets, and exact
exponent-tower arithmetic under an explicit bit cap.
"""

__version__ = "0.1.0"
