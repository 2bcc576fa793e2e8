"""Correlations and entanglement reachable by global unitaries on thermal states."""

__version__ = "0.1.0"

from .correlations import mi_energy_bound, mi_max_bound, mutual_information
from .entanglement import (bipartition_concurrence, cmax_from_spectrum, cmax_thermal_2q,
                           concurrence_2q, dicke_witness, w_witness, xstate_gme_concurrence,
                           xstate_params)
from .errors import ThermocorrError
from .thermal import DensityMatrix, ThermalSystem, thermal_state

__all__ = [
    "__version__", "ThermocorrError",
    "DensityMatrix", "ThermalSystem", "thermal_state",
    "mutual_information", "mi_max_bound", "mi_energy_bound",
    "concurrence_2q", "cmax_from_spectrum", "cmax_thermal_2q", "bipartition_concurrence",
    "xstate_params", "xstate_gme_concurrence", "w_witness", "dicke_witness",
]
