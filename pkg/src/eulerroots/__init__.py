"""Eulerian polynomials, descent-top counting and certified bounds on their extreme roots."""

__version__ = "0.1.0"
