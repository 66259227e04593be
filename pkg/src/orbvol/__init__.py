"""Exact Euler characteristics and hyperbolic volumes of the smallest
arithmetic quotients of SO(1,2r), with a minimal-volume search over totally
real number fields."""

__version__ = "0.1.0"
