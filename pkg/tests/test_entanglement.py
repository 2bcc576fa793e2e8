import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import (convex_roof_concurrence, pure_state_concurrence, random_density,
                     random_unitary, thermal_qubits, wootters_reference)
from thermocorr.entanglement import (XStateParams, bipartition_concurrence, cmax_from_spectrum,
                                     cmax_thermal_2q, concurrence_2q, dicke_witness, ghz_pair_bound,
                                     optimal_form_matrix, pure_concurrence, w_witness,
                                     xstate_gme_concurrence, xstate_params)
from thermocorr.errors import BadExcitation, DimensionMismatch, InvalidXState
from thermocorr.protocols import ghz_subspace_protocol, xstate_protocol
from thermocorr.thermal import DensityMatrix, ThermalSystem
from thermocorr.thresholds import ghz_gme_condition
from oracles import bisect_root


def dicke_vector(n, k):
    psi = np.zeros(1 << n)
    for c in combinations(range(n), k):
        psi[sum(1 << (n - 1 - q) for q in c)] = 1
    return psi / np.linalg.norm(psi)


BELL = np.array([1, 0, 0, 1]) / math.sqrt(2)


def test_concurrence_examples():
    assert concurrence_2q(np.outer(BELL, BELL)) == pytest.approx(1, abs=1e-12)
    prod = np.kron(np.diag([0.3, 0.7]), np.diag([0.6, 0.4]))
    assert concurrence_2q(prod) == 0
    werner = 0.8 * np.outer(BELL, BELL) + 0.2 * np.eye(4) / 4
    assert concurrence_2q(werner) == pytest.approx(0.7, abs=1e-12)
    with pytest.raises(DimensionMismatch):
        concurrence_2q(np.eye(8) / 8)


@pytest.mark.parametrize("w", np.linspace(0, 1, 11))
def test_werner_closed_form(w):
    rho = w * np.outer(BELL, BELL) + (1 - w) * np.eye(4) / 4
    assert concurrence_2q(rho) == pytest.approx(max(0, (3 * w - 1) / 2), abs=1e-10)


def test_wootters_against_convex_roof():
    rng = np.random.default_rng(11)
    for k in range(20):
        # rank 2: four members always suffice for the optimal decomposition
        rho = random_density(4, rng, rank=2)
        roof = convex_roof_concurrence(rho, members=4, starts=3, seed=k)
        c = concurrence_2q(rho)
        # brute force can only overshoot the true minimum
        assert roof >= c - 1e-6
        assert roof <= c + 2e-3


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_concurrence_against_references(seed):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    c = concurrence_2q(np.outer(psi, psi.conj()))
    assert c == pytest.approx(pure_state_concurrence(psi), abs=1e-7)
    assert pure_concurrence(psi) == pytest.approx(pure_state_concurrence(psi), abs=1e-10)
    rho = random_density(4, rng)
    assert concurrence_2q(rho) == pytest.approx(wootters_reference(rho), abs=1e-8)


def test_cmax_examples():
    assert cmax_from_spectrum([1, 0, 0, 0]) == 1
    assert cmax_from_spectrum([0.25] * 4) == 0
    val = 0.5625 - 0.1875 - 2 * math.sqrt(0.1875 * 0.0625)
    assert cmax_from_spectrum([0.5625, 0.1875, 0.1875, 0.0625]) == pytest.approx(val, abs=1e-15)
    assert val == pytest.approx(0.158494, abs=1e-6)
    assert cmax_thermal_2q(1.0) == 1
    assert abs(cmax_thermal_2q(0.698)) < 1e-3
    assert cmax_thermal_2q(0.75) == pytest.approx(val, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=4, max_size=4).filter(lambda v: sum(v) > 1e-3),
       st.permutations(range(4)))
def test_cmax_permutation_invariant(vals, perm):
    v = np.array(vals) / sum(vals)
    assert cmax_from_spectrum(v) == cmax_from_spectrum(v[list(perm)])


def test_cmax_is_spectrum_optimum():
    rng = np.random.default_rng(3)
    for _ in range(20):
        lam = rng.dirichlet(np.ones(4))
        best = cmax_from_spectrum(lam)
        for _ in range(100):
            u = random_unitary(4, rng)
            assert concurrence_2q(u @ np.diag(lam) @ u.conj().T) <= best + 1e-6


def test_bipartition_examples():
    for n in (2, 3, 7):
        assert bipartition_concurrence(1.0, n) == 1
        assert bipartition_concurrence(1.0, n, "single-bip") == 1
    assert bipartition_concurrence(0.75, 2) == pytest.approx(0.125, abs=1e-15)
    # the permuted variant entangles down to a smaller ground population (hotter)
    p_all = bisect_root(lambda p: bipartition_concurrence(p, 2), 0.5, 1.0)
    p_single = bisect_root(lambda p: bipartition_concurrence(p, 2, "single-bip"), 0.5, 1.0)
    assert p_single < p_all


def test_pair_bound_tight_for_two_qubits():
    for p in (0.6, 0.75, 0.9, 0.99):
        out = ghz_subspace_protocol(ThermalSystem.from_ground_population(2, p))
        rho = out.dense()
        assert ghz_pair_bound(rho, [0]) == pytest.approx(bipartition_concurrence(p, 2), abs=1e-12)
        assert concurrence_2q(rho) == pytest.approx(max(0, bipartition_concurrence(p, 2)), abs=1e-9)


def test_xstate_examples():
    ghz = np.zeros(8)
    ghz[[0, 7]] = 1 / math.sqrt(2)
    x = xstate_params(DensityMatrix.from_pure(ghz, (2,) * 3))
    assert xstate_gme_concurrence(x) == pytest.approx(1, abs=1e-12)
    diag = XStateParams(a=[0.4, 0.1], b=[0.3, 0.2], z=[0, 0])
    assert xstate_gme_concurrence(diag) == 0
    with pytest.raises(InvalidXState):
        XStateParams(a=[0.5], b=[0.5], z=[0.6])
    with pytest.raises(InvalidXState):
        XStateParams(a=[0.5], b=[0.4], z=[0.1])


@pytest.mark.parametrize("n", [3, 4, 6])
def test_xstate_sign_change_matches_gme_condition(n):
    p_formula = bisect_root(lambda p: ghz_gme_condition(p, n), 0.5, 1.0)
    gme = lambda p: xstate_protocol(ThermalSystem.from_ground_population(n, p)).measures["gme_concurrence"]
    lo, hi = 0.5, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if gme(mid) <= 0 else (lo, mid)
    assert abs(hi - p_formula) < 1e-9


def test_witness_examples():
    w3 = DensityMatrix.from_pure(dicke_vector(3, 1), (2,) * 3)
    assert w_witness(w3, 3) == pytest.approx(1, abs=1e-12)
    assert dicke_witness(w3, 3, 1) == pytest.approx(1, abs=1e-12)
    ground = np.zeros((8, 8))
    ground[0, 0] = 1
    assert w_witness(ground, 3) == 0
    d42 = DensityMatrix.from_pure(dicke_vector(4, 2), (2,) * 4)
    assert dicke_witness(d42, 4, 2) == pytest.approx(2, abs=1e-12)
    for n, m in [(4, 1), (4, 2), (5, 2)]:
        assert dicke_witness(DensityMatrix.from_pure(dicke_vector(n, m)), n, m) > 0
    with pytest.raises(BadExcitation):
        dicke_witness(d42, 4, 4)
    with pytest.raises(DimensionMismatch):
        w_witness(w3, 4)


def test_witness_negative_on_diagonal_states():
    rng = np.random.default_rng(2)
    for n, m in [(3, 1), (4, 1), (4, 2), (5, 2)]:
        rho = np.diag(rng.dirichlet(np.ones(1 << n)))
        assert dicke_witness(rho, n, m) <= 0
        assert dicke_witness(thermal_qubits(0.8, n), n, m) <= 0


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 5), st.integers(0, 2**31 - 1))
def test_w_witness_equals_dicke_m1(n, seed):
    rho = random_density(1 << n, np.random.default_rng(seed))
    assert w_witness(rho, n) == pytest.approx(dicke_witness(rho, n, 1), abs=1e-10)


def test_optimal_form_is_psd():
    for size in (2, 5, 24):
        for lam in np.linspace(1 / size, 1, 7):
            m = optimal_form_matrix(0.7, lam, size)
            assert np.linalg.eigvalsh(m).min() >= -1e-12
            assert np.trace(m).real == pytest.approx(0.7)
            assert np.sum(np.abs(m) ** 2) / 0.49 == pytest.approx(lam)
