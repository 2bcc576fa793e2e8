"""Numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10
    trace: float = 1e-10
    min_eigenvalue: float = -1e-9
    # eigenvalues below this (relative to the largest) are treated as exact zeros
    eig_clip: float = 1e-14
    bisection_residual: float = 1e-10
    bisection_max_iter: int = 200
    root_residual: float = 1e-9
    negative_clamp: float = 1e-9
    alpha_negative: float = 1e-10
    xstate: float = 1e-12


TOL = Tolerances()

# largest Hilbert-space dimension we are willing to store densely
DENSE_LIMIT = 4096
