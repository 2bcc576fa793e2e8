"""Generalized Bell/GHZ basis rotations and the two-qubit entangling protocol."""

from __future__ import annotations

import math

import numpy as np

from ..linalg import permutation_matrix, two_level_rotation
from ..thermal import ThermalSystem
from ._base import ProtocolOutcome, apply_protocol


def shift_clock(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Generalized Pauli pair: ``X|k> = |k+1>`` and ``Z|k> = w^k |k>`` with ``w = e^{2 pi i/d}``."""
    x = np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return x, z


def bell_basis_unitary(d: int, n: int = 2) -> np.ndarray:
    """Unitary whose column ``i_1...i_n`` is ``Z^{i_1} (x) X^{i_2} (x) ... (x) X^{i_n} |phi^n>``.

    ``|phi^n> = d^{-1/2} sum_k |k...k>``. For ``n = 2`` the columns form the
    generalized Bell basis, for ``n > 2`` the GHZ basis.
    """
    if d < 2 or n < 2:
        raise ValueError("need d >= 2 and n >= 2")
    x, z = shift_clock(d)
    dim = d ** n
    phi = np.zeros(dim, dtype=np.complex128)
    step = sum(d ** k for k in range(n))
    phi[np.arange(d) * step] = 1.0 / math.sqrt(d)
    xpow = [np.linalg.matrix_power(x, i) for i in range(d)]
    zpow = [np.linalg.matrix_power(z, i) for i in range(d)]
    u = np.empty((dim, dim), dtype=np.complex128)
    for col in range(dim):
        digits = np.unravel_index(col, (d,) * n)
        op = zpow[digits[0]]
        for i in digits[1:]:
            op = np.kron(op, xpow[i])
        u[:, col] = op @ phi
    return u


def bell_protocol(sys: ThermalSystem) -> ProtocolOutcome:
    return apply_protocol(bell_basis_unitary(sys.d, sys.n), sys)


# slots for the sorted spectrum: largest and third largest share the
# rotated {|00>, |11>} subspace, the other two stay diagonal
_VERSTRAETE_SLOTS = (0, 1, 3, 2)


def verstraete_unitary(populations) -> np.ndarray:
    """Two-qubit unitary taking ``diag(populations)`` to its most entangled unitary orbit point.

    The sorted eigenvalues ``l1 >= l2 >= l3 >= l4`` are moved to
    ``|00>, |01>, |11>, |10>`` and ``{|00>, |11>}`` is rotated to
    ``(|00> +- |11>)/sqrt 2``. For thermal input the permutation is a CNOT.
    """
    pops = np.asarray(populations, dtype=float)
    if pops.shape != (4,):
        raise ValueError("need four populations")
    order = np.argsort(-pops, kind="stable")
    perm = np.empty(4, dtype=int)
    perm[order] = _VERSTRAETE_SLOTS
    v2 = two_level_rotation(4, 0, 3, math.pi / 4)
    return v2 @ permutation_matrix(perm)


def verstraete_protocol(sys: ThermalSystem) -> ProtocolOutcome:
    if sys.n != 2 or sys.d != 2:
        raise ValueError("the protocol acts on two qubits")
    pops = np.kron(sys.populations, sys.populations)
    return apply_protocol(verstraete_unitary(pops), sys, ("mutual_info", "concurrence"))
