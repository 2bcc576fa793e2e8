"""Thermal product states and their thermodynamic scalars.

Units: energies in units of the qubit gap ``E`` (or of whatever scale the
``levels`` are given in), ``k_B = 1``, entropies in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BudgetExceedsMax, DimensionMismatch, InvalidState
from .linalg import as_matrix, eigvalsh
from .tolerances import TOL


@dataclass(frozen=True)
class ThermalSystem:
    """``n`` identical subsystems with local energies ``levels`` at inverse temperature ``beta``.

    ``beta = math.inf`` is allowed and means every subsystem is in its ground
    state.
    """

    n: int
    beta: float
    levels: tuple = (0.0, 1.0)

    def __post_init__(self):
        levels = tuple(float(e) for e in self.levels)
        object.__setattr__(self, "levels", levels)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if len(levels) < 2:
            raise ValueError("need at least two levels")
        if levels[0] != 0.0 or any(b < a for a, b in zip(levels, levels[1:])):
            raise ValueError("levels must be ascending with levels[0] == 0")
        if math.isnan(self.beta) or self.beta < 0:
            raise ValueError("beta must be >= 0")

    @classmethod
    def from_temperature(cls, n: int, kT: float, levels: Sequence[float] = (0.0, 1.0)) -> "ThermalSystem":
        if kT < 0:
            raise ValueError("temperature must be >= 0")
        return cls(n=n, beta=math.inf if kT == 0 else 1.0 / kT, levels=tuple(levels))

    @classmethod
    def from_ground_population(cls, n: int, p: float, gap: float = 1.0) -> "ThermalSystem":
        """Qubits whose ground-state population is ``p`` (``1/2 <= p <= 1``)."""
        if not 0.5 <= p <= 1.0:
            raise ValueError("p must lie in [1/2, 1]")
        beta = math.inf if p == 1.0 else math.log(p / (1.0 - p)) / gap
        return cls(n=n, beta=beta, levels=(0.0, gap))

    @property
    def d(self) -> int:
        return len(self.levels)

    @property
    def dim(self) -> int:
        return self.d ** self.n

    @property
    def kT(self) -> float:
        return 0.0 if math.isinf(self.beta) else (math.inf if self.beta == 0 else 1.0 / self.beta)

    @property
    def populations(self) -> np.ndarray:
        return local_populations(self.levels, self.beta)

    @property
    def p(self) -> float:
        """Ground-state population of one subsystem."""
        return float(self.populations[0])

    @property
    def v(self) -> float:
        """Boltzmann weight ``e^{-beta E}`` of the first excited level."""
        if math.isinf(self.beta):
            return 0.0
        return math.exp(-self.beta * self.levels[1])

    def with_beta(self, beta: float) -> "ThermalSystem":
        return ThermalSystem(n=self.n, beta=beta, levels=self.levels)

    def energies(self) -> np.ndarray:
        """Diagonal of the total Hamiltonian in the computational basis."""
        h = np.asarray(self.levels)
        tot = np.zeros(1)
        for _ in range(self.n):
            tot = np.add.outer(tot, h).ravel()
        return tot


def boltzmann_weights(levels: Sequence[float], beta: float) -> np.ndarray:
    levels = np.asarray(levels, dtype=float)
    if math.isinf(beta):
        w = np.zeros_like(levels)
        w[levels == levels[0]] = 1.0
        return w
    return np.exp(-beta * (levels - levels[0]))


def local_populations(levels: Sequence[float], beta: float) -> np.ndarray:
    w = boltzmann_weights(levels, beta)
    return w / w.sum()


def partition_function(levels: Sequence[float], beta: float) -> float:
    return float(boltzmann_weights(levels, beta).sum())


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Unit-trace positive semidefinite matrix on a tensor product of factors."""

    mat: np.ndarray
    dims: tuple = field(default=())
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = as_matrix(self.mat)
        dims = tuple(int(d) for d in self.dims) or (m.shape[0],)
        if int(np.prod(dims)) != m.shape[0] or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"dims {dims} do not match matrix shape {m.shape}")
        m = 0.5 * (m + m.conj().T) if self.validate else m
        object.__setattr__(self, "mat", m)
        object.__setattr__(self, "dims", dims)
        if self.validate:
            tr = np.trace(m).real
            if abs(tr - 1.0) > TOL.trace:
                raise InvalidState(f"trace {tr!r} differs from 1")
            if m.shape[0] <= 1024:
                lo = np.linalg.eigvalsh(m)[0]
                if lo < TOL.min_eigenvalue:
                    raise InvalidState(f"minimum eigenvalue {lo:.3g} is negative")

    @classmethod
    def from_pure(cls, psi, dims: Sequence[int] = ()) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=np.complex128).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), tuple(dims))

    @classmethod
    def diagonal(cls, pops, dims: Sequence[int] = ()) -> "DensityMatrix":
        return cls(np.diag(np.asarray(pops, dtype=np.complex128)), tuple(dims))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def spectrum(self) -> np.ndarray:
        """Eigenvalues in non-increasing order."""
        return np.sort(np.linalg.eigvalsh(self.mat))[::-1]

    def evolve(self, u) -> "DensityMatrix":
        u = np.asarray(u, dtype=np.complex128)
        return DensityMatrix(u @ self.mat @ u.conj().T, self.dims)

    def populations(self) -> np.ndarray:
        return np.diag(self.mat).real.copy()


def thermal_populations(sys: ThermalSystem) -> np.ndarray:
    """Diagonal of ``tau_beta^{(x) n}`` in the computational basis."""
    loc = sys.populations
    tot = np.ones(1)
    for _ in range(sys.n):
        tot = np.multiply.outer(tot, loc).ravel()
    return tot


def thermal_spectrum(sys: ThermalSystem) -> np.ndarray:
    return np.sort(thermal_populations(sys))[::-1]


def thermal_state(sys: ThermalSystem) -> tuple[DensityMatrix, float, float]:
    """``(tau_beta^{(x) n}, Z, p)`` with ``Z`` the local partition function and
    ``p`` the local ground-state population."""
    rho = DensityMatrix(np.diag(thermal_populations(sys)).astype(np.complex128), (sys.d,) * sys.n,
                        validate=False)
    return rho, partition_function(sys.levels, sys.beta), sys.p


def entropy_from_spectrum(values) -> float:
    lam = np.asarray(values, dtype=float)
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log(lam)))


def entropy_vn(rho) -> float:
    """Von Neumann entropy in nats; accepts a ``DensityMatrix`` or an array."""
    mat = rho.mat if isinstance(rho, DensityMatrix) else as_matrix(rho)
    lam = eigvalsh(mat)
    lam = lam[lam > TOL.eig_clip * max(lam[-1], 1.0)]
    return max(entropy_from_spectrum(lam), 0.0)


def local_entropy(levels: Sequence[float], beta: float) -> float:
    return entropy_from_spectrum(local_populations(levels, beta))


def mean_energy(rho, sys: ThermalSystem) -> float:
    """``Tr(H_tot rho)`` where ``H_tot`` sums identical local Hamiltonians."""
    mat = rho.mat if isinstance(rho, DensityMatrix) else as_matrix(rho)
    h = sys.energies()
    if mat.shape[0] != h.size:
        raise DimensionMismatch(f"state dimension {mat.shape[0]} != d^n = {h.size}")
    return float(np.dot(np.diag(mat).real, h))


def local_mean_energy(levels: Sequence[float], beta: float) -> float:
    return float(np.dot(local_populations(levels, beta), levels))


def max_energy_budget(sys: ThermalSystem) -> float:
    """Energy needed to heat every subsystem to infinite temperature."""
    return sys.n * (local_mean_energy(sys.levels, 0.0) - local_mean_energy(sys.levels, sys.beta))


def solve_beta_prime(sys: ThermalSystem, deltaE: float) -> float:
    """Inverse temperature ``beta'`` with ``n (<H>_{beta'} - <H>_beta) = deltaE``.

    Bisects on ``s = exp(-beta')`` in ``[exp(-beta), 1]``, where the mean
    energy is strictly increasing; this keeps ``beta = inf`` inside the
    bracket.
    """
    emax = max_energy_budget(sys)
    if deltaE < 0:
        raise ValueError("deltaE must be >= 0")
    if deltaE > emax + 1e-12:
        raise BudgetExceedsMax(f"deltaE={deltaE!r} exceeds the maximum {emax!r}")
    if deltaE == 0:
        return sys.beta
    if deltaE >= emax:
        return 0.0
    levels = np.asarray(sys.levels)
    target = local_mean_energy(levels, sys.beta) + deltaE / sys.n

    def energy(s: float) -> float:
        if s == 0.0:
            return 0.0
        w = s ** levels
        return float(np.dot(w, levels) / w.sum())

    lo = 0.0 if math.isinf(sys.beta) else math.exp(-sys.beta)
    hi = 1.0
    for _ in range(TOL.bisection_max_iter):
        mid = 0.5 * (lo + hi)
        if energy(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-17:
            break
    s = 0.5 * (lo + hi)
    resid = abs(sys.n * (energy(s) - target))
    if resid > TOL.bisection_residual:
        raise ArithmeticError(f"beta' bisection stalled with residual {resid:.3g}")
    return -math.log(s)
