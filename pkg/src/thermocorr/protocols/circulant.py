"""Heating both marginals of two thermal qudits to ``tau_{beta'}`` at minimal work.

The marginal map is a doubly stochastic circulant ``T = sum_s alpha_s Pi^s``
with ``(Pi x)_j = x_{j-1}``. It is realized by a unitary that acts inside
each "Bell subspace" ``S_i = span{|j, j+i>}``: the populations there are
``p_j p_{j+i}`` and the target ``T`` applied to them is majorized by them,
so a product of two-level rotations reaches it exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import NegativeAlpha, NotEqualSpacing
from ..linalg import permutation_matrix, rotate_levels
from ..thermal import ThermalSystem, local_populations
from ..tolerances import TOL
from ._base import ProtocolOutcome, apply_protocol


@dataclass(frozen=True)
class CirculantPlan:
    """Convex weights ``alphas[s]`` of the cyclic shifts ``Pi^s``."""

    alphas: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float)
        if a.ndim != 1 or a.size < 2:
            raise ValueError("alphas must be a 1-d array with at least two entries")
        if np.any(a < -1e-12):
            raise NegativeAlpha(f"negative weight {a.min():.3e}")
        if abs(a.sum() - 1.0) > 1e-10:
            raise ValueError(f"weights sum to {a.sum()!r}, not 1")
        object.__setattr__(self, "alphas", a)

    @property
    def d(self) -> int:
        return self.alphas.size

    def matrix(self) -> np.ndarray:
        d = self.d
        shift = np.roll(np.eye(d), 1, axis=0)  # (shift @ x)_j = x_{j-1}
        return sum(a * np.linalg.matrix_power(shift, s) for s, a in enumerate(self.alphas))

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return sum(a * np.roll(x, s) for s, a in enumerate(self.alphas))


def is_equally_spaced(levels, tol: float = 1e-12) -> bool:
    levels = np.asarray(levels, dtype=float)
    return bool(np.all(np.abs(levels - levels[1] * np.arange(levels.size)) <= tol * max(1.0, levels[-1])))


def circulant_alphas(levels, beta: float, beta_prime: float) -> np.ndarray:
    """Closed-form weights for equally spaced levels.

    With ``v = e^{-beta E}``, ``v' = e^{-beta' E}`` and ``c = (v' - v)/(1 - v)``:
    ``alpha_0 = (1 - v')/(1 - v) + c p'_{d-1}`` and ``alpha_k = c p'_{k-1}``.
    All of them are nonnegative whenever ``beta' <= beta``.
    """
    if not is_equally_spaced(levels):
        raise NotEqualSpacing(f"levels {tuple(levels)} are not equally spaced")
    if beta_prime > beta:
        raise ValueError("beta_prime must not exceed beta")
    gap = float(levels[1])
    v = 0.0 if math.isinf(beta) else math.exp(-beta * gap)
    vp = 0.0 if math.isinf(beta_prime) else math.exp(-beta_prime * gap)
    d = len(levels)
    if v == 1.0:
        alphas = np.zeros(d)
        alphas[0] = 1.0
        return alphas
    pp = local_populations(levels, beta_prime)
    c = (vp - v) / (1.0 - v)
    alphas = c * np.roll(pp, 1)
    alphas[0] += (1.0 - vp) / (1.0 - v)
    return alphas


def solve_circulant_alphas(levels, beta: float, beta_prime: float) -> np.ndarray:
    """Weights from the linear system ``T p = p'`` plus normalization, any spectrum.

    This is a feasibility check rather than a construction: it raises
    :class:`NegativeAlpha` when the least-squares solution leaves the simplex.
    A ``d``-level circulant has ``d`` unknowns and ``d`` equations of which
    one is implied by normalization, so the solution may not be unique; the
    minimum-norm one is returned.
    """
    p = local_populations(levels, beta)
    pp = local_populations(levels, beta_prime)
    d = p.size
    cols = np.stack([np.roll(p, s) for s in range(d)], axis=1)
    a_mat = np.vstack([cols, np.ones(d)])
    rhs = np.concatenate([pp, [1.0]])
    alphas, *_ = np.linalg.lstsq(a_mat, rhs, rcond=None)
    if np.max(np.abs(a_mat @ alphas - rhs)) > 1e-10:
        raise NegativeAlpha("no circulant reaches the target marginal")
    if np.any(alphas < -TOL.alpha_negative):
        raise NegativeAlpha(f"negative weight {alphas.min():.3e}")
    return np.clip(alphas, 0.0, None) / np.clip(alphas, 0.0, None).sum()


def circulant_plan(sys: ThermalSystem, beta_prime: float) -> CirculantPlan:
    alphas = circulant_alphas(sys.levels, sys.beta, beta_prime)
    if np.any(alphas < -TOL.alpha_negative):
        raise NegativeAlpha(f"closed form produced {alphas.min():.3e}")
    return CirculantPlan(np.clip(alphas, 0.0, None))


def schur_horn_unitary(pops, target) -> np.ndarray:
    """Unitary ``U`` with ``diag(U diag(pops) U^dagger) = target``.

    ``target`` must be majorized by ``pops``. In sorted order a finite
    sequence of T-transforms (Marshall-Olkin) carries one vector into the
    other; each is one two-level rotation, and a permutation then puts the
    entries at the requested positions.
    """
    x = np.asarray(pops, dtype=float)
    y = np.asarray(target, dtype=float)
    d = x.size
    sig = np.argsort(-x, kind="stable")
    tau = np.argsort(-y, kind="stable")
    xs, ys = x[sig].copy(), y[tau]
    if abs(xs.sum() - ys.sum()) > 1e-12 or np.any(np.cumsum(ys) > np.cumsum(xs) + 1e-12):
        raise ValueError("target is not majorized by pops")

    to_sorted = np.empty(d, dtype=int)
    to_sorted[sig] = np.arange(d)
    u = permutation_matrix(to_sorted)
    m = np.diag(xs).astype(np.complex128)
    tol = 1e-14 * max(1.0, xs[0])
    for _ in range(d):
        diag = m.diagonal().real
        above = np.nonzero(diag - ys > tol)[0]
        if above.size == 0:
            break
        j = above[-1]
        below = np.nonzero((diag - ys < -tol) & (np.arange(d) > j))[0]
        if below.size == 0:
            break
        k = below[0]
        a, b = diag[j], diag[k]
        delta = min(a - ys[j], ys[k] - b)
        theta = math.asin(math.sqrt(min(1.0, delta / (a - b))))
        mjk = m[j, k]
        # choose the phase so the coherence between j and k drops out of the new diagonal
        phi = math.pi / 2 + float(np.angle(mjk)) if abs(mjk) > 0 else 0.0
        m = rotate_levels(m, j, k, theta, phi)
        c, s, e = math.cos(theta), math.sin(theta), np.exp(1j * phi)
        rot = np.eye(d, dtype=np.complex128)
        rot[j, j], rot[j, k], rot[k, j], rot[k, k] = c, -e * s, np.conj(e) * s, c
        u = rot @ u
    return permutation_matrix(tau) @ u


def circulant_unitary(sys: ThermalSystem, plan: CirculantPlan) -> np.ndarray:
    """Block-diagonal unitary over the subspaces ``S_i = span{|j, j+i>}``."""
    d = sys.d
    p = sys.populations
    u = np.zeros((d * d, d * d), dtype=np.complex128)
    j = np.arange(d)
    for i in range(d):
        idx = j * d + (j + i) % d
        p_i = p * np.roll(p, -i)
        u[np.ix_(idx, idx)] = schur_horn_unitary(p_i, plan.apply(p_i))
    return u


def circulant_heating_protocol(sys: ThermalSystem, beta_prime: float) -> ProtocolOutcome:
    """Two qudits whose marginals both end up in ``tau_{beta'}`` at minimal work."""
    if sys.n != 2:
        raise ValueError("the circulant protocol acts on two subsystems")
    plan = circulant_plan(sys, beta_prime)
    out = apply_protocol(circulant_unitary(sys, plan), sys, ("mutual_info",))
    out.diagnostics.update(alphas=plan.alphas.tolist(), beta_prime=beta_prime)
    return out
