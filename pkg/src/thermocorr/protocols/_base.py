from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ..correlations import mutual_information
from ..entanglement import concurrence_2q
from ..errors import DimensionMismatch
from ..register import RegisterState
from ..thermal import DensityMatrix, ThermalSystem, mean_energy, thermal_state
from ..tolerances import TOL


@dataclass
class ProtocolOutcome:
    """Final state of a protocol, the work it cost and the measures it reached.

    ``final_state`` is a :class:`DensityMatrix` for dense protocols and a
    :class:`RegisterState` for the many-qubit subspace protocols.
    """

    final_state: DensityMatrix | RegisterState
    work: float
    measures: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def dense(self) -> DensityMatrix:
        if isinstance(self.final_state, RegisterState):
            return self.final_state.to_density_matrix()
        return self.final_state


def clamp_work(work: float) -> float:
    """Snap round-off negatives (above ``-1e-9``) to zero."""
    return 0.0 if -TOL.negative_clamp < work < 0 else float(work)


def work_of(rho: DensityMatrix, sys: ThermalSystem) -> float:
    rho_i, _, _ = thermal_state(sys)
    return mean_energy(rho, sys) - mean_energy(rho_i, sys)


def default_measures(rho: DensityMatrix) -> tuple:
    names = ["mutual_info"]
    if rho.dims == (2, 2):
        names.append("concurrence")
    return tuple(names)


def evaluate_measures(rho: DensityMatrix, names: Iterable[str]) -> dict:
    out = {}
    for name in names:
        if name == "mutual_info":
            out[name] = mutual_information(rho).value
        elif name == "concurrence":
            out[name] = concurrence_2q(rho)
        else:
            raise ValueError(f"measure {name!r} is not available for dense outcomes")
    return out


def apply_protocol(u, sys: ThermalSystem, measures: Iterable[str] | None = None) -> ProtocolOutcome:
    """Evolve ``tau_beta^{(x) n}`` with ``u`` and book-keep work and measures."""
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (sys.dim, sys.dim):
        raise DimensionMismatch(f"unitary of shape {u.shape} does not act on d^n = {sys.dim}")
    rho_i, _, _ = thermal_state(sys)
    rho_f = DensityMatrix(u @ rho_i.mat @ u.conj().T, rho_i.dims, validate=False)
    work = clamp_work(mean_energy(rho_f, sys) - mean_energy(rho_i, sys))
    names = default_measures(rho_f) if measures is None else tuple(measures)
    return ProtocolOutcome(final_state=rho_f, work=work, measures=evaluate_measures(rho_f, names))


def spectrum_deviation(outcome: ProtocolOutcome, sys: ThermalSystem) -> float:
    """Largest change of any eigenvalue between the thermal and final state."""
    state = outcome.final_state
    if isinstance(state, RegisterState):
        before, after = state.touched_spectra()
        return float(np.max(np.abs(before - after))) if before.size else 0.0
    from ..thermal import thermal_spectrum
    return float(np.max(np.abs(thermal_spectrum(sys) - state.spectrum())))
