"""Compact storage for n-qubit states produced by the subspace protocols.

The protocols for many qubits only permute thermal populations and rotate
inside a few small subspaces, so the final state is "thermal diagonal, except
for a handful of overridden populations and dense blocks". Storing exactly
that keeps 20+ qubit registers cheap.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping

import numpy as np

from .errors import DimensionMismatch
from .thermal import DensityMatrix, ThermalSystem
from .tolerances import DENSE_LIMIT


def popcount_array(idx) -> np.ndarray:
    x = np.asarray(idx, dtype=np.uint64).copy()
    count = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        count += (x & np.uint64(1)).astype(np.int64)
        x >>= np.uint64(1)
    return count


class RegisterState:
    """n-qubit state: thermal populations by excitation number, plus overrides.

    Parameters
    ----------
    sys : ThermalSystem
        Qubit system whose product populations form the untouched diagonal.
    overrides : mapping index -> population
        Diagonal entries that differ from the thermal value.
    blocks : iterable of (indices, matrix)
        Dense Hermitian blocks on disjoint index sets; their diagonals take
        precedence over ``overrides``.
    """

    def __init__(self, sys: ThermalSystem, overrides: Mapping[int, float] | None = None,
                 blocks: Iterable[tuple] = ()):
        if sys.d != 2:
            raise DimensionMismatch("RegisterState only describes qubit registers")
        self.sys = sys
        self.n = sys.n
        self.dims = (2,) * sys.n
        self._p = sys.p
        self._q = 1.0 - sys.p
        self.blocks = []
        seen: set = set()
        for idx, mat in blocks:
            idx = np.asarray(idx, dtype=np.int64)
            mat = np.asarray(mat, dtype=np.complex128)
            order = np.argsort(idx)
            idx, mat = idx[order], mat[np.ix_(order, order)]
            if seen.intersection(idx.tolist()):
                raise ValueError("blocks must act on disjoint index sets")
            seen.update(idx.tolist())
            self.blocks.append((idx, mat))
        over = dict(overrides or {})
        for idx, mat in self.blocks:
            for k, i in enumerate(idx.tolist()):
                over[i] = float(mat[k, k].real)
        keys = np.array(sorted(over), dtype=np.int64)
        self._over_idx = keys
        self._over_val = np.array([over[k] for k in keys.tolist()], dtype=float)

    @property
    def dim(self) -> int:
        return 1 << self.n

    def base_population(self, idx) -> np.ndarray:
        w = popcount_array(idx)
        return thermal_weight_population(self._p, self.n, w)

    def diagonal(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        out = self.base_population(idx)
        if self._over_idx.size:
            pos = np.searchsorted(self._over_idx, idx)
            pos = np.minimum(pos, self._over_idx.size - 1)
            hit = self._over_idx[pos] == idx
            out[hit] = self._over_val[pos[hit]]
        return out

    def elements(self, rows, cols) -> np.ndarray:
        """Matrix elements ``<rows[k]| rho |cols[k]>`` for paired index arrays."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        out = np.zeros(rows.shape, dtype=np.complex128)
        same = rows == cols
        out[same] = self.diagonal(rows[same])
        for idx, mat in self.blocks:
            pr = np.minimum(np.searchsorted(idx, rows), idx.size - 1)
            pc = np.minimum(np.searchsorted(idx, cols), idx.size - 1)
            hit = (idx[pr] == rows) & (idx[pc] == cols) & ~same
            out[hit] = mat[pr[hit], pc[hit]]
        return out

    def submatrix(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        r, c = np.meshgrid(idx, idx, indexing="ij")
        return self.elements(r.ravel(), c.ravel()).reshape(idx.size, idx.size)

    def touched(self) -> np.ndarray:
        return self._over_idx

    def mean_energy_shift(self) -> float:
        """``Tr(H_tot (rho - tau^{(x) n}))``, summed over touched entries only."""
        idx = self._over_idx
        if idx.size == 0:
            return 0.0
        gap = self.sys.levels[1]
        w = popcount_array(idx)
        return float(np.sum((self._over_val - self.base_population(idx)) * w) * gap)

    def touched_spectra(self) -> tuple[np.ndarray, np.ndarray]:
        """Sorted eigenvalues on the touched subspace, before and after."""
        idx = self._over_idx
        before = np.sort(self.base_population(idx))
        in_block = np.zeros(idx.size, dtype=bool)
        after = []
        for bidx, mat in self.blocks:
            after.append(np.linalg.eigvalsh(mat))
            in_block |= np.isin(idx, bidx)
        after.append(self._over_val[~in_block])
        return before, np.sort(np.concatenate(after))

    def to_density_matrix(self) -> DensityMatrix:
        if self.dim > DENSE_LIMIT:
            raise DimensionMismatch(f"2^{self.n} exceeds the dense limit {DENSE_LIMIT}")
        all_idx = np.arange(self.dim)
        mat = np.diag(self.diagonal(all_idx)).astype(np.complex128)
        for idx, blk in self.blocks:
            mat[np.ix_(idx, idx)] = blk
        return DensityMatrix(mat, self.dims)


def thermal_weight_population(p: float, n: int, w) -> np.ndarray:
    """``p^{n-w} (1-p)^w`` evaluated without ``0 ** 0`` surprises."""
    w = np.asarray(w, dtype=float)
    q = 1.0 - p
    if q == 0.0:
        return np.where(w == 0, 1.0, 0.0)
    return np.exp((n - w) * math.log(p) + w * math.log(q))
