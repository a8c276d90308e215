"""Syzygy bundles of linear systems on P^m x P^n: cohomology, stability certificates,
explicit monomial constructions and exhaustive searches, all in exact arithmetic."""

__version__ = "0.1.0"
