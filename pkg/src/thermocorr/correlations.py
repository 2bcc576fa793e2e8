"""Mutual information and its temperature- and energy-limited upper bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingleFactor
from .linalg import partial_trace
from .thermal import DensityMatrix, ThermalSystem, entropy_vn, local_entropy, solve_beta_prime
from .tolerances import TOL


@dataclass(frozen=True)
class MutualInfoReport:
    value: float
    local_entropies: tuple
    total_entropy: float


def mutual_information(rho: DensityMatrix) -> MutualInfoReport:
    """Sum of single-factor entropies minus the global entropy (any number of factors)."""
    if len(rho.dims) < 2:
        raise SingleFactor("mutual information needs at least two tensor factors")
    local = tuple(entropy_vn(partial_trace(rho.mat, rho.dims, [k])) for k in range(len(rho.dims)))
    total = entropy_vn(rho)
    value = sum(local) - total
    if -TOL.negative_clamp < value < 0:
        value = 0.0
    return MutualInfoReport(value=value, local_entropies=local, total_entropy=total)


def mi_max_bound(sys: ThermalSystem) -> float:
    """``n (ln d - S(tau_beta))``: every marginal pushed to the maximally mixed state."""
    return sys.n * (math.log(sys.d) - local_entropy(sys.levels, sys.beta))


def mi_energy_bound(sys: ThermalSystem, deltaE: float) -> float:
    """Largest mutual information reachable with work at most ``deltaE``.

    Each marginal can be no more mixed than the thermal state carrying the
    same energy, so the bound is ``n (S(tau_{beta'}) - S(tau_beta))`` with
    ``beta'`` fixed by the budget.
    """
    beta_p = solve_beta_prime(sys, deltaE)
    gain = local_entropy(sys.levels, beta_p) - local_entropy(sys.levels, sys.beta)
    return sys.n * max(gain, 0.0)


def mi_energy_curve(sys: ThermalSystem, budgets) -> np.ndarray:
    return np.array([mi_energy_bound(sys, float(b)) for b in budgets])
