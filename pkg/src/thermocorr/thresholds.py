"""Critical temperatures of the entangling protocols and spectral separability bounds.

Every root is found in the ground-state population ``p`` on
``[1/2, 1 - 1e-12]`` and converted with ``kT/E = 1/ln(p/(1-p))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import bisect

from .entanglement import bipartition_concurrence, cmax_thermal_signed
from .errors import BadExcitation
from .thermal import ThermalSystem
from .tolerances import TOL

P_LOW, P_HIGH = 0.5, 1.0 - 1e-12
LN_1P_SQRT2 = math.log(1.0 + math.sqrt(2.0))


@dataclass(frozen=True)
class ThresholdResult:
    """Critical temperature of one protocol family.

    ``closed_form`` is the analytic (often asymptotic) estimate for the same
    quantity, when there is one.
    """

    family: str
    n: int
    kT_over_E: float
    p: float
    residual: float
    iterations: int
    k: int | None = None
    closed_form: float | None = None

    def __post_init__(self):
        if not self.residual < TOL.root_residual:
            raise ArithmeticError(f"{self.family}: residual {self.residual:.2e} above tolerance")
        if not self.kT_over_E > 0:
            raise ArithmeticError(f"{self.family}: non-positive threshold")


def kT_from_p(p: float) -> float:
    return 1.0 / math.log(p / (1.0 - p))


def p_from_kT(kT: float) -> float:
    return 1.0 / (1.0 + math.exp(-1.0 / kT))


def root_in_p(f: Callable[[float], float], lo: float = P_LOW, hi: float = P_HIGH) -> tuple[float, float, int]:
    """Bisect ``f`` (negative hot, positive cold) for its sign change in ``p``.

    Returns ``(p, |f(p)|, iterations)``.
    """
    flo, fhi = f(lo), f(hi)
    if flo > 0 or fhi < 0:
        raise ValueError(f"no sign change on [{lo}, {hi}]: f = {flo:.3e}, {fhi:.3e}")
    p, info = bisect(f, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps,
                     maxiter=TOL.bisection_max_iter, full_output=True)
    return p, abs(f(p)), info.iterations


def _result(family: str, n: int, f, closed=None, k=None, lo=P_LOW) -> ThresholdResult:
    p, res, it = root_in_p(f, lo=lo)
    return ThresholdResult(family=family, n=n, k=k, kT_over_E=kT_from_p(p), p=p,
                           residual=res, iterations=it, closed_form=closed)


def threshold_two_qubit() -> ThresholdResult:
    """Highest temperature at which two qubits can be entangled (``p ~ 0.698``)."""
    return _result("two-qubit", 2, cmax_thermal_signed)


def threshold_all_bip(n: int) -> ThresholdResult:
    """GHZ-subspace rotation entangling every bipartition; closed form ``n / (2 ln(1 + sqrt 2))``."""
    _check_n(n)
    return _result("all-bip", n, lambda p: bipartition_concurrence(p, n, "all-bip"),
                   closed=n / (2.0 * LN_1P_SQRT2))


def threshold_single_bip(n: int) -> ThresholdResult:
    """Permuted variant entangling one qubit with the rest; closed form ``(n - 1/2)/ln 3``."""
    _check_n(n)
    return _result("single-bip", n, lambda p: bipartition_concurrence(p, n, "single-bip"),
                   closed=(n - 0.5) / math.log(3.0))


def ghz_gme_condition(p: float, n: int) -> float:
    """``p^n - q^n - 2 (2^{n-1} - 1) (p q)^{n/2}``; positive where the X state is GME."""
    q = 1.0 - p
    return p ** n - q ** n - 2.0 * (2.0 ** (n - 1) - 1.0) * (p * q) ** (n / 2)


def threshold_gme_ghz(n: int) -> ThresholdResult:
    """Genuine multipartite threshold of the GHZ X-state; tends to ``1/(2 ln 2)``."""
    _check_n(n)
    return _result("gme-ghz", n, lambda p: ghz_gme_condition(p, n),
                   closed=1.0 / (2.0 * math.log(2.0)))


def threshold_gme_dicke(n: int, k: int = 1, k_fill: int | None = None,
                        m_fill: int | None = None) -> ThresholdResult:
    """Temperature where the Dicke witness of the Dicke protocol output changes sign.

    The closed form is the leading term ``n / ((k + 1) ln n)``.
    """
    from .protocols.dicke import dicke_protocol

    if n < 3:
        raise ValueError("need n >= 3")
    if not 1 <= k <= n - 1:
        raise BadExcitation(f"need 1 <= k <= n-1, got k={k}, n={n}")

    def witness(p: float) -> float:
        sys = ThermalSystem.from_ground_population(n, p)
        return dicke_protocol(sys, k, k_fill, m_fill).measures["witness"]

    return _result("gme-dicke", n, witness, closed=n / ((k + 1) * math.log(n)), k=k)


# --------------------------------------------------------------------------
# spectral upper bounds
# --------------------------------------------------------------------------

def separability_margin(spectrum: Sequence[float]) -> float:
    """``l_1 - l_{2d-1} - 2 sqrt(l_{2d-2} l_{2d})`` for a non-increasing ``2 x d`` spectrum.

    Non-positive exactly when every state with this spectrum is separable
    across the qubit/qudit cut.
    """
    lam = np.sort(np.asarray(spectrum, dtype=float))[::-1]
    if lam.size < 4 or lam.size % 2:
        raise ValueError("need an even spectrum length >= 4")
    return float(lam[0] - lam[-2] - 2.0 * math.sqrt(max(lam[-3], 0.0) * max(lam[-1], 0.0)))


def separability_upper_bound(spectrum: Sequence[float]) -> bool:
    """True iff no unitary can entangle a qubit with the qudit for this spectrum."""
    return separability_margin(spectrum) <= 0.0


def thermal_extreme_spectrum(p: float, n: int) -> np.ndarray:
    """The four entries of the sorted n-qubit thermal spectrum used by the margin.

    Largest ``p^n``, then the two smallest after ``(1-p)^n``: both
    ``p (1-p)^{n-1}``. Returned as a valid length-4 spectrum.
    """
    q = 1.0 - p
    return np.array([p ** n, p * q ** (n - 1), p * q ** (n - 1), q ** n])


def boundary_temperature(n: int) -> ThresholdResult:
    """Temperature below which some unitary entangles one qubit of ``n`` thermal qubits with the rest."""
    _check_n(n)
    return _result("upper-qubit-qudit", n,
                   lambda p: separability_margin(thermal_extreme_spectrum(p, n)),
                   closed=(n - 1) / math.log(3.0))


def upper_bound_temperatures(n: int) -> tuple[float, float]:
    """Leading-order upper bounds ``(n - 1)/ln 3`` for all-bipartition and GME thresholds."""
    _check_n(n)
    t = (n - 1) / math.log(3.0)
    return t, t


def _check_n(n: int) -> None:
    if n < 2:
        raise ValueError("need n >= 2")
