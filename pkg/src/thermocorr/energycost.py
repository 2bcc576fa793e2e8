"""Work cost of the protocols and energy-constrained entanglement for two qubits."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .correlations import mi_energy_bound
from .entanglement import YY, cmax_thermal_2q
from .errors import AboveThreshold, BadProtocol
from .thermal import DensityMatrix, ThermalSystem, max_energy_budget, mean_energy, thermal_state

LN_1P_SQRT2 = math.log(1.0 + math.sqrt(2.0))


def work_cost(rho_f: DensityMatrix, sys: ThermalSystem) -> float:
    """``Tr(H_tot (rho_f - tau_beta^{(x) n}))``."""
    rho_i, _, _ = thermal_state(sys)
    return mean_energy(rho_f, sys) - mean_energy(rho_i, sys)


def protocol_work_closed_form(protocol: str, sys: ThermalSystem) -> float:
    """Analytic work of a named protocol on ``sys`` (units of the level spacing).

    ``ghz``
        GHZ-subspace rotation, ``n E (1 - v^n) / (2 (1 + v)^n)``.
    ``leave-separable``
        The same evaluated at its entangling threshold,
        ``n E (1 + sqrt 2) / ((1 + sqrt 2)^{2/n} + 1)^n``; independent of ``beta``.
    ``wstate``
        The literal closed-form sum over the W-protocol permutations. It disagrees
        with the directly computed work except at ``T = 0``; use the
        protocol's own ``work`` as the reference value.
    ``full-mi``
        Heating every marginal to infinite temperature,
        ``n (Tr H / d - Tr H e^{-beta H} / Z)``.
    """
    n = sys.n
    if protocol == "full-mi":
        return max_energy_budget(sys)
    if sys.d != 2:
        raise BadProtocol(f"{protocol!r} is defined for qubits")
    e = sys.levels[1]
    v = sys.v
    if protocol == "ghz":
        return n * e * (1.0 - v ** n) / (2.0 * (1.0 + v) ** n)
    if protocol == "leave-separable":
        r = 1.0 + math.sqrt(2.0)
        return n * e * r / (r ** (2.0 / n) + 1.0) ** n
    if protocol == "wstate":
        terms = ((n - 1) * (v - v ** (n - 1)) + (1.0 - v) + n * v ** (n - 3) - n * v ** n
                 + (n * n - n) * (v ** 2 - v ** (n - 2)) + 3.0 * (v ** n - v ** (n - 3)))
        return e * terms / (1.0 - v) ** n
    raise BadProtocol(f"unknown protocol {protocol!r}")


# --------------------------------------------------------------------------
# two-qubit unitary parameterization
# --------------------------------------------------------------------------

# applied right to left: the two-angle ansatz (23 first, then 03) is the
# rightmost pair, so it embeds by zeroing the other angles
PAIRS = ((1, 3), (1, 2), (0, 2), (0, 1), (0, 3), (2, 3))
N_PARAMS = 2 * len(PAIRS) + 4


def _rotation(i: int, j: int, theta: float, phi: float) -> np.ndarray:
    r = np.eye(4, dtype=np.complex128)
    c, s, e = math.cos(theta), math.sin(theta), complex(math.cos(phi), math.sin(phi))
    r[i, i] = r[j, j] = c
    r[i, j] = -e * s
    r[j, i] = e.conjugate() * s
    return r


def unitary_from_params(x: Sequence[float]) -> np.ndarray:
    """``D R_13 R_12 R_02 R_01 R_03 R_23`` from 6 (angle, phase) pairs and 4 diagonal phases."""
    x = np.asarray(x, dtype=float)
    u = np.diag(np.exp(1j * x[12:16]))
    for k, (i, j) in enumerate(PAIRS):
        u = u @ _rotation(i, j, x[2 * k], x[2 * k + 1])
    return u


def ansatz_params(theta1: float, theta2: float) -> np.ndarray:
    x = np.zeros(N_PARAMS)
    x[2 * PAIRS.index((2, 3))] = theta1
    x[2 * PAIRS.index((0, 3))] = theta2
    return x


class _TwoQubitOrbit:
    """Work and concurrence on the unitary orbit of a diagonal two-qubit state."""

    def __init__(self, sys: ThermalSystem):
        if sys.n != 2 or sys.d != 2:
            raise ValueError("energy-constrained optimization is implemented for two qubits")
        self.sys = sys
        self.lam = np.kron(sys.populations, sys.populations)
        self.h = sys.energies()
        self.e0 = float(self.h @ self.lam)
        keep = self.lam > 1e-14 * self.lam.max()
        self.keep = keep
        self.root = np.sqrt(self.lam[keep])

    def work(self, u: np.ndarray) -> float:
        return float(self.h @ (np.abs(u) ** 2 @ self.lam)) - self.e0

    def signed_concurrence(self, u: np.ndarray) -> float:
        # eigenvectors of U diag(lam) U^dagger are the columns of U
        s = u[:, self.keep] * self.root
        mu = np.linalg.svd(s.T @ YY @ s, compute_uv=False)
        mu = np.concatenate([np.sort(mu)[::-1], np.zeros(4 - mu.size)])
        return float(mu[0] - mu[1] - mu[2] - mu[3])

    def concurrence(self, u: np.ndarray) -> float:
        return max(0.0, self.signed_concurrence(u))


# --------------------------------------------------------------------------
# full optimization
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class OptimizerConfig:
    """Settings of the penalized Nelder-Mead search over two-qubit unitaries."""

    restarts: int = 32
    max_iters: int = 2000
    simplex_tol: float = 1e-10
    penalty_weight_schedule: tuple = (1e2, 1e4, 1e6)
    seed: int = 42
    n_jobs: int | None = None

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be >= 1")
        if not self.simplex_tol > 0 or any(w <= 0 for w in self.penalty_weight_schedule):
            raise ValueError("tolerances and penalty weights must be positive")


def _project(orbit: _TwoQubitOrbit, x: np.ndarray, budget: float) -> np.ndarray:
    """Shrink every rotation angle by a common factor until the work fits the budget."""
    if orbit.work(unitary_from_params(x)) <= budget:
        return x
    angles = np.zeros(N_PARAMS, dtype=bool)
    angles[0:12:2] = True

    def scaled(t):
        y = x.copy()
        y[angles] *= t
        return y

    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if orbit.work(unitary_from_params(scaled(mid))) <= budget:
            lo = mid
        else:
            hi = mid
    return scaled(lo)


def _one_restart(orbit: _TwoQubitOrbit, budget: float, x0: np.ndarray, cfg: OptimizerConfig):
    def objective(x, weight):
        u = unitary_from_params(x)
        excess = max(0.0, orbit.work(u) - budget)
        return -orbit.signed_concurrence(u) + weight * excess * excess

    x = np.asarray(x0, dtype=float)
    opts = {"maxiter": cfg.max_iters, "xatol": cfg.simplex_tol, "fatol": cfg.simplex_tol}
    for weight in cfg.penalty_weight_schedule:
        x = minimize(objective, x, args=(weight,), method="Nelder-Mead", options=opts).x
    x = _project(orbit, x, budget)
    u = unitary_from_params(x)
    return orbit.concurrence(u), x


def _n_jobs(cfg: OptimizerConfig) -> int:
    if cfg.n_jobs is not None:
        return max(1, cfg.n_jobs)
    env = os.environ.get("THERMOCORR_THREADS")
    return max(1, int(env)) if env else 1


def optimize_concurrence_constrained(sys: ThermalSystem, deltaE: float,
                                     cfg: OptimizerConfig | None = None) -> tuple[float, np.ndarray]:
    """Largest concurrence found over two-qubit unitaries whose work is at most ``deltaE``.

    Restart 0 starts from the best two-angle ansatz point, the others from
    seeded random parameters; the ansatz result itself also competes, so the
    answer is never below :func:`ansatz_two_angle`. Returns the concurrence
    and the unitary reaching it.
    """
    cfg = cfg or OptimizerConfig()
    if deltaE < 0:
        raise ValueError("deltaE must be >= 0")
    orbit = _TwoQubitOrbit(sys)
    budget = min(float(deltaE), max_energy_budget(sys)) + 1e-12
    c_ans, (t1, t2) = ansatz_two_angle(sys, deltaE)
    x_ans = ansatz_params(t1, t2)

    starts = [x_ans]
    for r in range(1, cfg.restarts):
        rng = np.random.default_rng([cfg.seed, r])
        starts.append(rng.uniform(-math.pi, math.pi, N_PARAMS))

    jobs = _n_jobs(cfg)
    if jobs > 1:
        from joblib import Parallel, delayed
        found = Parallel(n_jobs=jobs)(delayed(_one_restart)(orbit, budget, x0, cfg) for x0 in starts)
    else:
        found = [_one_restart(orbit, budget, x0, cfg) for x0 in starts]

    best_c, best_x = c_ans, x_ans
    for c, x in found:
        if c > best_c:
            best_c, best_x = c, x
    return best_c, unitary_from_params(best_x)


# --------------------------------------------------------------------------
# two-angle ansatz
# --------------------------------------------------------------------------

def _ansatz_inner(orbit: _TwoQubitOrbit, theta1: float, budget: float) -> tuple[float, float]:
    """Best ``theta2`` for fixed ``theta1``; the work grows monotonically with ``theta2`` on ``[0, pi/2]``."""
    w1 = orbit.work(unitary_from_params(ansatz_params(theta1, 0.0)))
    if w1 > budget:
        return -math.inf, 0.0
    wmax = orbit.work(unitary_from_params(ansatz_params(theta1, math.pi / 2)))
    if wmax <= budget:
        t2max = math.pi / 2
    else:
        frac = (budget - w1) / (wmax - w1)
        t2max = math.asin(math.sqrt(min(max(frac, 0.0), 1.0)))

    conc = lambda t2: orbit.signed_concurrence(unitary_from_params(ansatz_params(theta1, t2)))
    if t2max <= 0.0:
        return conc(0.0), 0.0
    grid = np.linspace(0.0, t2max, 17)
    vals = [conc(t) for t in grid]
    k = int(np.argmax(vals))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    res = minimize_scalar(lambda t: -conc(t), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    if -res.fun > vals[k]:
        return -res.fun, float(res.x)
    return vals[k], float(grid[k])


def ansatz_two_angle(sys: ThermalSystem, deltaE: float) -> tuple[float, tuple[float, float]]:
    """Best concurrence of ``R_03(theta2) R_23(theta1)`` with work at most ``deltaE``.

    ``R_23`` rotates in ``{|10>, |11>}`` and ``R_03`` in ``{|00>, |11>}``;
    ``theta1 = pi/2, theta2 = pi/4`` is the unconstrained optimum.
    """
    if deltaE < 0:
        raise ValueError("deltaE must be >= 0")
    orbit = _TwoQubitOrbit(sys)
    budget = min(float(deltaE), max_energy_budget(sys)) + 1e-12
    outer = lambda t1: _ansatz_inner(orbit, t1, budget)[0]
    grid = np.linspace(0.0, math.pi / 2, 33)
    vals = [outer(t) for t in grid]
    k = int(np.argmax(vals))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    res = minimize_scalar(lambda t: -outer(t), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    t1 = float(res.x) if -res.fun > vals[k] else float(grid[k])
    c, t2 = _ansatz_inner(orbit, t1, budget)
    return max(0.0, c), (t1, t2)


# --------------------------------------------------------------------------
# derived quantities
# --------------------------------------------------------------------------

def min_energy_to_entangle(sys: ThermalSystem, cfg: OptimizerConfig | None = None,
                           threshold: float = 1e-4, xtol: float = 1e-6) -> float:
    """Smallest budget for which the optimizer finds concurrence above ``threshold``."""
    if cmax_thermal_2q(sys.p) <= threshold:
        raise AboveThreshold(f"kT/E = {sys.kT:.4g} admits no entanglement above {threshold}")
    lo, hi = 0.0, max_energy_budget(sys)
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if optimize_concurrence_constrained(sys, mid, cfg)[0] > threshold:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass
class SweepCurve:
    """Measure as a function of available energy ``x = deltaE / E``.

    ``series`` holds additional curves on the same ``x`` grid.
    """

    x: np.ndarray
    y: np.ndarray
    meta: dict
    series: dict = field(default_factory=dict)


def sweep_curve(kind: str, kT_over_E: float, points: int,
                cfg: OptimizerConfig | None = None) -> SweepCurve:
    """Mutual information or concurrence of two thermal qubits versus budget.

    The budget runs from 0 to the full heating energy ``2p - 1``, which is
    also the work of the unconstrained entangling protocol.
    """
    if points < 2:
        raise ValueError("need points >= 2")
    if not kT_over_E > 0:
        raise ValueError("kT_over_E must be > 0")
    sys = ThermalSystem.from_temperature(2, kT_over_E)
    x = np.linspace(0.0, max_energy_budget(sys), points)
    meta = {"kT_over_E": kT_over_E, "kind": kind}
    if kind == "mi-vs-energy":
        y = np.array([mi_energy_bound(sys, float(b)) for b in x])
        meta.update(measure="mutual_info", method="energy-bound")
        return SweepCurve(x=x, y=y, meta=meta)
    if kind == "concurrence-vs-energy":
        opt = np.array([optimize_concurrence_constrained(sys, float(b), cfg)[0] for b in x])
        ans = np.array([ansatz_two_angle(sys, float(b))[0] for b in x])
        meta.update(measure="concurrence", method="optimizer")
        return SweepCurve(x=x, y=opt, meta=meta, series={"ansatz": ans})
    raise ValueError(f"unknown sweep kind {kind!r}")
