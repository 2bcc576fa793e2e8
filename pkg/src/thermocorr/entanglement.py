"""Entanglement quantifiers and genuine-multipartite-entanglement witnesses."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import bits
from .errors import BadExcitation, DimensionMismatch, InvalidXState
from .register import RegisterState
from .thermal import DensityMatrix
from .tolerances import TOL

YY = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=np.complex128)


def _mat(rho) -> np.ndarray:
    return rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=np.complex128)


# --------------------------------------------------------------------------
# two qubits
# --------------------------------------------------------------------------

def concurrence_2q(rho) -> float:
    """Wootters concurrence of a two-qubit state.

    The values ``mu_i`` are the singular values of ``S^T (Y (x) Y) S`` where
    ``S`` holds the subnormalized eigenvectors of ``rho``. Working with
    singular values avoids square-rooting eigenvalues of a non-Hermitian
    product, which loses half the digits near pure states.
    """
    m = _mat(rho)
    if m.shape != (4, 4):
        raise DimensionMismatch(f"two-qubit state expected, got shape {m.shape}")
    lam, vec = np.linalg.eigh(0.5 * (m + m.conj().T))
    keep = lam > TOL.eig_clip * max(lam[-1], 1.0)
    s = vec[:, keep] * np.sqrt(lam[keep])
    mu = np.sort(np.linalg.svd(s.T @ YY @ s, compute_uv=False))[::-1]
    mu = np.concatenate([mu, np.zeros(4 - mu.size)])
    return max(0.0, float(mu[0] - mu[1] - mu[2] - mu[3]))


def pure_concurrence(psi) -> float:
    """``sqrt(2 (1 - Tr rho_A^2))`` for a two-qubit pure state."""
    psi = np.asarray(psi, dtype=np.complex128).reshape(2, 2)
    psi = psi / np.linalg.norm(psi)
    rho_a = psi @ psi.conj().T
    purity = float(np.real(np.trace(rho_a @ rho_a)))
    return math.sqrt(max(0.0, 2.0 * (1.0 - purity)))


def entanglement_of_formation(c: float) -> float:
    """Entanglement of formation (nats) as a function of two-qubit concurrence."""
    x = 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - c * c)))
    return -sum(t * math.log(t) for t in (x, 1.0 - x) if t > 0)


def as_spectrum(values: Sequence[float]) -> np.ndarray:
    """Validate a probability spectrum and sort it non-increasingly."""
    lam = np.asarray(values, dtype=float)
    if np.any(lam < -TOL.trace) or abs(lam.sum() - 1.0) > TOL.trace:
        raise ValueError("spectrum must be nonnegative and sum to 1")
    return np.sort(np.clip(lam, 0.0, None))[::-1]


def cmax_signed(spectrum: Sequence[float]) -> float:
    lam = as_spectrum(spectrum)
    if lam.size != 4:
        raise DimensionMismatch("two-qubit spectrum must have four entries")
    return float(lam[0] - lam[2] - 2.0 * math.sqrt(lam[1] * lam[3]))


def cmax_from_spectrum(spectrum: Sequence[float]) -> float:
    """Largest concurrence in the unitary orbit of a two-qubit spectrum."""
    return max(0.0, cmax_signed(spectrum))


def cmax_thermal_signed(p: float) -> float:
    q = 1.0 - p
    return 2.0 * p * p - p - 2.0 * q * math.sqrt(p * q)


def cmax_thermal_2q(p: float) -> float:
    """Largest concurrence reachable from two thermal qubits with ground population ``p``."""
    return max(0.0, cmax_thermal_signed(p))


# --------------------------------------------------------------------------
# n-qubit bipartitions
# --------------------------------------------------------------------------

def bipartition_concurrence(p: float, n: int, variant: str = "all-bip") -> float:
    """Concurrence across a bipartition after the GHZ-subspace rotation.

    ``variant="all-bip"`` is the plain rotation, identical for every cut.
    ``variant="single-bip"`` first permutes populations in favour of one cut.
    The value is signed: it is negative where the protocol does not entangle,
    which is what the threshold root-finders need.
    """
    q = 1.0 - p
    if n < 2:
        raise ValueError("need n >= 2")
    if variant == "all-bip":
        return p ** n - q ** n - 2.0 * (p * q) ** (n / 2)
    if variant == "single-bip":
        lam_n = p * q ** (n - 1)
        return p ** n - lam_n - 2.0 * math.sqrt(lam_n * q ** n)
    raise ValueError(f"unknown variant {variant!r}")


def _elements(state, rows, cols) -> np.ndarray:
    if isinstance(state, RegisterState):
        return state.elements(rows, cols)
    m = _mat(state)
    return m[np.asarray(rows), np.asarray(cols)]


def _diagonal(state, idx) -> np.ndarray:
    if isinstance(state, RegisterState):
        return state.diagonal(idx)
    m = _mat(state)
    return np.diag(m).real[np.asarray(idx)]


def _num_qubits(state) -> int:
    if isinstance(state, RegisterState):
        return state.n
    dim = _mat(state).shape[0]
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two")
    return n


def ghz_pair_bound(state, part: Sequence[int]) -> float:
    """Concurrence lower bound across ``part | rest`` from the GHZ coherence.

    ``2 (|<0..0|rho|1..1>| - sqrt(<x|rho|x><x'|rho|x'>))`` with ``x`` the
    string that is 0 on ``part`` and 1 elsewhere and ``x'`` its complement.
    Signed, like :func:`bipartition_concurrence`.
    """
    n = _num_qubits(state)
    part = sorted(set(int(q) for q in part))
    if not part or len(part) >= n or part[0] < 0 or part[-1] >= n:
        raise ValueError(f"{part} is not a proper bipartition of {n} qubits")
    full = (1 << n) - 1
    x = full - bits.index_of(part, n)
    z = abs(_elements(state, [0], [full])[0])
    a, b = _diagonal(state, [x, full - x])
    return float(2.0 * (z - math.sqrt(max(a, 0.0) * max(b, 0.0))))


# --------------------------------------------------------------------------
# X states
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class XStateParams:
    """Diagonal pairs ``(a_i, b_i)`` and anti-diagonal coherences ``z_i``."""

    a: np.ndarray
    b: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        z = np.asarray(self.z, dtype=np.complex128)
        if not (a.shape == b.shape == z.shape) or a.ndim != 1:
            raise InvalidXState("a, b, z must be 1-d arrays of equal length")
        if np.any(a < -TOL.xstate) or np.any(b < -TOL.xstate):
            raise InvalidXState("populations must be nonnegative")
        if abs(a.sum() + b.sum() - 1.0) > TOL.trace:
            raise InvalidXState("populations must sum to 1")
        if np.any(np.abs(z) > np.sqrt(np.clip(a * b, 0, None)) + TOL.xstate):
            raise InvalidXState("|z_i| exceeds sqrt(a_i b_i)")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "z", z)


def xstate_params(state) -> XStateParams:
    """Read the X-shaped part of an n-qubit state (row ``i`` paired with its complement)."""
    n = _num_qubits(state)
    half = 1 << (n - 1)
    rows = np.arange(half, dtype=np.int64)
    comp = (1 << n) - 1 - rows
    return XStateParams(a=_diagonal(state, rows), b=_diagonal(state, comp),
                        z=_elements(state, rows, comp))


def xstate_gme_concurrence(x: XStateParams) -> float:
    """Genuine multipartite concurrence of an X state: ``2 max_i max(0, |z_i| - w_i)``."""
    root = np.sqrt(np.clip(x.a * x.b, 0.0, None))
    w = root.sum() - root
    return float(2.0 * max(0.0, np.max(np.abs(x.z) - w)))


# --------------------------------------------------------------------------
# W / Dicke witnesses (positive value certifies GME)
# --------------------------------------------------------------------------

def w_witness(omega, n: int) -> float:
    """W-type GME witness built from the one- and two-excitation subspaces.

    ``sum_{i != j} |W_ij| - 2 sqrt(W_00) sum_a sqrt(W_aa) - (n - 2) sum_i W_ii``
    with ``i, j`` running over one-excitation and ``a`` over two-excitation
    basis states.
    """
    if _num_qubits(omega) != n:
        raise DimensionMismatch(f"state is not an {n}-qubit state")
    w1 = bits.weight_class(n, 1)
    w2 = bits.weight_class(n, 2)
    block = _submatrix(omega, w1)
    off = np.abs(block).sum() - np.abs(np.diag(block)).sum()
    ground = max(_diagonal(omega, [0])[0], 0.0)
    second = np.sqrt(np.clip(_diagonal(omega, w2), 0.0, None)).sum()
    return float(off - 2.0 * math.sqrt(ground) * second - (n - 2) * np.trace(block).real)


def _submatrix(state, idx) -> np.ndarray:
    if isinstance(state, RegisterState):
        return state.submatrix(idx)
    return _mat(state)[np.ix_(idx, idx)]


@lru_cache(maxsize=64)
def _dicke_pairs(n: int, m: int):
    """Index tables for the ``m``-excitation witness.

    Returns positions ``(ia, ib)`` into the weight-``m`` class for every
    ordered pair sharing ``m - 1`` excitations, and the basis indices reached
    by swapping the bits of ``alpha`` between the two strings.
    """
    dm = bits.weight_class(n, m)
    pos = {int(s): k for k, s in enumerate(dm)}
    ia, ib, low, high = [], [], [], []
    for a in dm.tolist():
        alpha = bits.qubits_of(a, n)
        for b in dm.tolist():
            if bits.popcount(a & b) != m - 1:
                continue
            lo, hi = bits.swap_positions(a, b, alpha, n)
            ia.append(pos[a])
            ib.append(pos[b])
            low.append(lo)
            high.append(hi)
    as_arr = lambda v: np.array(v, dtype=np.int64)
    return dm, as_arr(ia), as_arr(ib), as_arr(low), as_arr(high)


def dicke_witness(omega, n: int, m: int) -> float:
    """GME witness for ``m``-excitation Dicke-type states.

    Sums ``|<alpha|W|beta>| - sqrt(<alpha,beta| P W(x)W P |alpha,beta>)`` over
    ordered pairs of ``m``-excitation strings that share ``m - 1``
    excitations, where ``P`` swaps the bits of ``alpha`` between the two
    copies, and subtracts ``m (n - m - 1)`` times the ``m``-excitation
    population. Summation order is lexicographic in the pair.
    """
    if not 1 <= m <= n - 1:
        raise BadExcitation(f"need 1 <= m <= n-1, got m={m}, n={n}")
    if _num_qubits(omega) != n:
        raise DimensionMismatch(f"state is not an {n}-qubit state")
    dm, ia, ib, low, high = _dicke_pairs(n, m)
    block = _submatrix(omega, dm)
    coh = np.abs(block[ia, ib])
    # after the swap both copies are basis product states, so the matrix
    # element factorizes into two populations
    cross = np.sqrt(np.clip(_diagonal(omega, low) * _diagonal(omega, high), 0.0, None))
    return float(np.sum(coh - cross) - m * (n - m - 1) * np.trace(block).real)


# --------------------------------------------------------------------------
# optimal one-excitation block
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WSubspaceState:
    """Trace ``alpha``, normalized purity ``lam`` and the block itself."""

    alpha: float
    lam: float
    offdiag: np.ndarray

    def __post_init__(self):
        size = np.asarray(self.offdiag).shape[0]
        if not -1e-12 <= self.alpha <= 1 + 1e-12:
            raise ValueError("alpha must lie in [0, 1]")
        if size and not 1.0 / size - 1e-12 <= self.lam <= 1 + 1e-12:
            raise ValueError("lam must lie in [1/N, 1]")


def subspace_summary(block) -> WSubspaceState:
    block = np.asarray(block, dtype=np.complex128)
    alpha = float(np.trace(block).real)
    lam = float(np.sum(np.abs(block) ** 2) / alpha ** 2) if alpha > 0 else 1.0 / block.shape[0]
    return WSubspaceState(alpha=alpha, lam=lam, offdiag=block)


def optimal_form_matrix(alpha: float, lam: float, size: int, phases=None) -> np.ndarray:
    """Block maximizing the summed off-diagonal modulus at fixed trace and purity.

    Diagonal ``alpha / N``, every off-diagonal of modulus
    ``alpha sqrt((lam - 1/N) / (N (N - 1)))``; ``phases`` (antisymmetric,
    default zero) sets their arguments.
    """
    c = alpha * math.sqrt(max(lam - 1.0 / size, 0.0) / (size * (size - 1)))
    ph = np.zeros((size, size)) if phases is None else np.asarray(phases, dtype=float)
    out = c * np.exp(1j * ph)
    np.fill_diagonal(out, alpha / size)
    return out


def max_offdiag_sum(alpha: float, lam: float, size: int) -> float:
    return alpha * math.sqrt(size * (size - 1) * max(lam - 1.0 / size, 0.0))
