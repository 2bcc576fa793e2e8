"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The Hermitian
eigensolver is LAPACK's (through ``numpy.linalg.eigh``) wrapped with the
validation this package relies on.
"""

from __future__ import annotations

from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BadIndex, EmptyList, NotHermitian, NotSquare
from .tolerances import TOL


class HermitianEig(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise NotSquare(f"expected a 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def check_hermitian(a: np.ndarray, tol: float = TOL.hermitian) -> None:
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"matrix is {a.shape[0]}x{a.shape[1]}")
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > tol:
        raise NotHermitian(f"max |A - A^dagger| = {dev:.3g} exceeds {tol:g}")


def eigh(a) -> HermitianEig:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.

    Raises
    ------
    NotSquare, NotHermitian
    """
    m = as_matrix(a)
    check_hermitian(m)
    # symmetrize so round-off in the lower triangle cannot leak in
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return HermitianEig(w, v)


def eigvalsh(a) -> np.ndarray:
    m = as_matrix(a)
    check_hermitian(m)
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def kron_n(factors: Sequence) -> np.ndarray:
    """Kronecker product of a list of matrices, first factor most significant."""
    if len(factors) == 0:
        raise EmptyList("kron_n needs at least one factor")
    mats = [as_matrix(f) for f in factors]
    for f in mats:
        if f.shape[0] != f.shape[1]:
            raise NotSquare(f"factor has shape {f.shape}")
    return reduce(np.kron, mats)


def partial_trace(mat: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduce ``mat`` on the tensor factors ``dims`` to the factors in ``keep``.

    ``keep`` holds 0-based factor indices; the result orders the kept factors
    as they appear in ``dims``.
    """
    dims = [int(d) for d in dims]
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise BadIndex(f"keep={keep} is not a nonempty subset of range({n})")
    total = int(np.prod(dims))
    if mat.shape != (total, total):
        raise BadIndex(f"matrix shape {mat.shape} does not match dims {dims}")
    traced = [i for i in range(n) if i not in keep]
    t = mat.reshape(dims + dims)
    # einsum labels: row index i, column index n+i; traced factors share a label
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if 2 * n > len(letters):
        raise BadIndex("too many tensor factors for partial_trace")
    rows = list(letters[:n])
    cols = list(letters[n:2 * n])
    for i in traced:
        cols[i] = rows[i]
    out = [rows[i] for i in keep] + [cols[i] for i in keep]
    red = np.einsum("".join(rows) + "".join(cols) + "->" + "".join(out), t)
    kd = int(np.prod([dims[i] for i in keep]))
    return red.reshape(kd, kd)


def two_level_rotation(dim: int, i: int, j: int, theta: float, phi: float = 0.0) -> np.ndarray:
    """Identity on ``dim`` levels except a unitary block on levels ``(i, j)``.

    The block is ``[[cos t, -e^{i phi} sin t], [e^{-i phi} sin t, cos t]]``.
    """
    if i == j or not (0 <= i < dim and 0 <= j < dim):
        raise BadIndex(f"invalid level pair ({i}, {j}) for dim={dim}")
    u = np.eye(dim, dtype=np.complex128)
    c, s = np.cos(theta), np.sin(theta)
    u[i, i] = c
    u[j, j] = c
    u[i, j] = -np.exp(1j * phi) * s
    u[j, i] = np.exp(-1j * phi) * s
    return u


def rotate_levels(mat: np.ndarray, i: int, j: int, theta: float, phi: float = 0.0) -> np.ndarray:
    """Return ``R mat R^dagger`` for the two-level rotation ``R`` without forming ``R``."""
    c, s = np.cos(theta), np.sin(theta)
    e = np.exp(1j * phi)
    out = mat.copy()
    ri, rj = mat[i, :].copy(), mat[j, :].copy()
    out[i, :] = c * ri - e * s * rj
    out[j, :] = np.conj(e) * s * ri + c * rj
    ci, cj = out[:, i].copy(), out[:, j].copy()
    out[:, i] = c * ci - np.conj(e) * s * cj
    out[:, j] = e * s * ci + c * cj
    return out


def permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    """Unitary sending basis state ``k`` to basis state ``perm[k]``."""
    perm = np.asarray(perm, dtype=int)
    dim = perm.size
    if sorted(perm.tolist()) != list(range(dim)):
        raise BadIndex("not a permutation")
    p = np.zeros((dim, dim), dtype=np.complex128)
    p[perm, np.arange(dim)] = 1.0
    return p


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    u = np.asarray(u)
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)
