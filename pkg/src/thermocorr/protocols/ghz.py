"""GHZ-subspace protocols for n qubits.

The rotation only mixes ``|0...0>`` and ``|1...1>``, so the outcome is
stored as a :class:`RegisterState` and works for registers far beyond dense
matrices.
"""

from __future__ import annotations

import math

import numpy as np

from .. import bits
from ..entanglement import ghz_pair_bound, xstate_gme_concurrence, xstate_params
from ..register import RegisterState, popcount_array, thermal_weight_population
from ..thermal import ThermalSystem
from ._base import ProtocolOutcome, clamp_work
from ._perm import complete_permutation, permuted_overrides


def ghz_rotation_unitary(n: int) -> np.ndarray:
    """Dense unitary sending ``|0..0>`` to ``(|0..0> + |1..1>)/sqrt 2`` and
    ``|1..1>`` to ``(|0..0> - |1..1>)/sqrt 2``, identity elsewhere."""
    dim = 1 << n
    u = np.eye(dim, dtype=np.complex128)
    r = 1.0 / math.sqrt(2.0)
    full = dim - 1
    u[0, 0], u[full, 0] = r, r
    u[0, full], u[full, full] = r, -r
    return u


def single_bip_assignment(n: int, j: int) -> list[tuple[int, int]]:
    """``target <- source`` moves favouring the cut ``(n - j) | j``.

    With ``y = 0^{n-j} 1^j``: a weight ``n - 1`` population goes to
    ``1...1`` and another one to ``y``, and ``(1-p)^n`` goes to the
    complement of ``y``. For ``n = 2`` this is a CNOT.
    """
    if not 1 <= j <= n - 1:
        raise ValueError(f"need 1 <= j <= n-1, got j={j}")
    full = (1 << n) - 1
    y = (1 << j) - 1
    ybar = full - y
    heavy = [s for s in bits.weight_class(n, n - 1).tolist() if s != y]
    moves = [(full, heavy[0]), (ybar, full)]
    if bits.popcount(y) != n - 1:
        moves.append((y, heavy[1]))
    return moves


def _ghz_register(sys: ThermalSystem, moves) -> RegisterState:
    if sys.d != 2:
        raise ValueError("GHZ-subspace protocols act on qubits")
    n = sys.n
    full = (1 << n) - 1
    mapping = complete_permutation(moves)
    pop = lambda idx: thermal_weight_population(sys.p, n, popcount_array(idx))
    over = permuted_overrides(mapping, pop)
    lam0 = over.get(0, float(pop(np.array([0]))[0]))
    lamn = over.get(full, float(pop(np.array([full]))[0]))
    block = 0.5 * np.array([[lam0 + lamn, lam0 - lamn], [lam0 - lamn, lam0 + lamn]])
    return RegisterState(sys, over, blocks=[([0, full], block)])


def ghz_subspace_protocol(sys: ThermalSystem, variant: str = "all-bip", j: int | None = None) -> ProtocolOutcome:
    """Entangle ``n`` thermal qubits by rotating ``{|0..0>, |1..1>}`` to GHZ states.

    Parameters
    ----------
    variant : {"all-bip", "single-bip"}
        ``"single-bip"`` first permutes populations so that the cut
        ``(n - j) | j`` becomes entangled at the highest temperature.
    j : int, optional
        Size of the second part for ``"single-bip"``; defaults to 1.

    The reported ``concurrence`` is the GHZ-coherence lower bound, minimized
    over the cuts ``first i qubits | rest`` for ``"all-bip"`` and taken on the
    target cut for ``"single-bip"``.
    """
    n = sys.n
    if n < 2:
        raise ValueError("need n >= 2")
    if variant == "all-bip":
        state = _ghz_register(sys, [])
        conc = min(ghz_pair_bound(state, range(i)) for i in range(1, n))
        diag = {"variant": variant}
    elif variant == "single-bip":
        j = 1 if j is None else int(j)
        state = _ghz_register(sys, single_bip_assignment(n, j))
        conc = ghz_pair_bound(state, range(n - j))
        diag = {"variant": variant, "j": j}
    else:
        raise ValueError(f"unknown variant {variant!r}")
    measures = {"concurrence": conc}
    return ProtocolOutcome(final_state=state, work=clamp_work(state.mean_energy_shift()),
                           measures=measures, diagnostics=diag)


def xstate_protocol(sys: ThermalSystem) -> ProtocolOutcome:
    """GHZ-diagonal X state with the largest genuine multipartite concurrence.

    The pair with the largest population gap, ``|0..0>`` and ``|1..1>``, is
    rotated to GHZ states. The remaining pairs ``(x, complement of x)``
    already match large with small populations, which minimizes the
    subtracted ``sum sqrt(a_j b_j)``, so no further permutation is needed.
    """
    if sys.n < 2:
        raise ValueError("need n >= 2")
    state = _ghz_register(sys, [])
    params = xstate_params(state)
    measures = {"gme_concurrence": xstate_gme_concurrence(params)}
    diag = {"z1": float(abs(params.z[0]))}
    return ProtocolOutcome(final_state=state, work=clamp_work(state.mean_energy_shift()),
                           measures=measures, diagnostics=diag)
