"""Numerical kernels: exact evaluation, exhaustive search and the ordering algorithms."""
