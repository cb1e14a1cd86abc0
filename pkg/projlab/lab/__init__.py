"""Numerical kernels: index sets, lattices, closed forms, samplers, bounds."""
