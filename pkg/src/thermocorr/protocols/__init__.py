from ._base import ProtocolOutcome, apply_protocol, spectrum_deviation
from .bell import bell_basis_unitary, bell_protocol, verstraete_protocol, verstraete_unitary
from .circulant import (CirculantPlan, circulant_alphas, circulant_heating_protocol,
                        circulant_plan, schur_horn_unitary, solve_circulant_alphas)
from .dicke import DickePlan, dicke_plan, dicke_protocol
from .ghz import ghz_rotation_unitary, ghz_subspace_protocol, single_bip_assignment, xstate_protocol

__all__ = [
    "ProtocolOutcome", "apply_protocol", "spectrum_deviation",
    "bell_basis_unitary", "bell_protocol", "verstraete_protocol", "verstraete_unitary",
    "CirculantPlan", "circulant_alphas", "circulant_heating_protocol", "circulant_plan",
    "schur_horn_unitary", "solve_circulant_alphas",
    "DickePlan", "dicke_plan", "dicke_protocol",
    "ghz_rotation_unitary", "ghz_subspace_protocol", "single_bip_assignment", "xstate_protocol",
]
