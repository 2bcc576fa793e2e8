"""Randomized invariant checks over the protocols, run by ``thermocorr --selftest``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from .correlations import mi_energy_bound, mi_max_bound, mutual_information
from .protocols import (apply_protocol, bell_protocol, circulant_heating_protocol, dicke_protocol,
                        ghz_subspace_protocol, spectrum_deviation, verstraete_protocol)
from .thermal import DensityMatrix, ThermalSystem, entropy_vn, max_energy_budget, thermal_state

SPECTRUM_TOL = 1e-9
WORK_TOL = 1e-9
MI_TOL = 1e-8
ENTROPY_TOL = 1e-9


@dataclass
class SelftestReport:
    trials: int
    checks: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _random_system(rng: np.random.Generator, n_choices, d_choices) -> ThermalSystem:
    n = int(rng.choice(n_choices))
    d = int(rng.choice(d_choices))
    levels = np.concatenate([[0.0], np.sort(rng.uniform(0.1, 2.0, d - 1))])
    beta = float(rng.choice([rng.uniform(0.0, 5.0), math.inf], p=[0.9, 0.1]))
    return ThermalSystem(n=n, beta=beta, levels=tuple(levels))


def _trial(rng: np.random.Generator):
    """One random protocol run; returns ``(label, sys, outcome)``."""
    kind = rng.integers(7)
    if kind == 0:
        sys = _random_system(rng, (2, 3), (2, 3))
        u = unitary_group.rvs(sys.dim, random_state=rng)
        return "random-unitary", sys, apply_protocol(u, sys)
    if kind == 1:
        sys = _random_system(rng, (2, 3), (2, 3))
        return "bell", sys, bell_protocol(sys)
    if kind == 2:
        sys = ThermalSystem.from_temperature(2, float(rng.uniform(0.01, 3.0)))
        return "verstraete", sys, verstraete_protocol(sys)
    if kind == 3:
        n = int(rng.integers(2, 9))
        sys = ThermalSystem.from_temperature(n, float(rng.uniform(0.05, 5.0)))
        j = int(rng.integers(1, n))
        variant = "all-bip" if rng.random() < 0.5 else "single-bip"
        return f"ghz-{variant}", sys, ghz_subspace_protocol(sys, variant, j)
    if kind == 4:
        n = int(rng.integers(3, 9))
        sys = ThermalSystem.from_temperature(n, float(rng.uniform(0.05, 5.0)))
        k = int(rng.integers(1, n))
        return "dicke", sys, dicke_protocol(sys, k)
    if kind == 5:
        d = int(rng.integers(2, 5))
        sys = ThermalSystem(2, float(rng.uniform(0.05, 5.0)), tuple(np.arange(d) * rng.uniform(0.2, 2.0)))
        beta_p = float(rng.uniform(0.0, sys.beta))
        return "circulant", sys, circulant_heating_protocol(sys, beta_p)
    sys = _random_system(rng, (2,), (2, 3, 4))
    u = unitary_group.rvs(sys.dim, random_state=rng)
    return "random-unitary", sys, apply_protocol(u, sys)


def run_selftest(trials: int = 1000, seed: int = 2024) -> SelftestReport:
    """Check spectrum preservation, work non-negativity, mutual-information bounds
    and entropy invariance on ``trials`` random protocol runs."""
    rng = np.random.default_rng(seed)
    report = SelftestReport(trials=trials)
    counts = {"spectrum": 0, "work": 0, "mi_bound": 0, "entropy": 0}

    def fail(check, label, t, value):
        report.violations.append({"trial": t, "protocol": label, "check": check, "value": value})

    for t in range(trials):
        label, sys, out = _trial(rng)
        dev = spectrum_deviation(out, sys)
        counts["spectrum"] += 1
        if dev > SPECTRUM_TOL:
            fail("spectrum", label, t, dev)
        counts["work"] += 1
        if out.work < -WORK_TOL:
            fail("work", label, t, out.work)

        state = out.final_state
        if isinstance(state, DensityMatrix):
            counts["entropy"] += 1
            rho_i, _, _ = thermal_state(sys)
            ds = abs(entropy_vn(state) - entropy_vn(rho_i))
            if ds > ENTROPY_TOL:
                fail("entropy", label, t, ds)
            counts["mi_bound"] += 1
            mi = mutual_information(state).value
            budget = min(max(out.work, 0.0), max_energy_budget(sys))
            excess = max(mi - mi_max_bound(sys), mi - mi_energy_bound(sys, budget))
            if excess > MI_TOL:
                fail("mi_bound", label, t, excess)
    report.checks = counts
    return report
