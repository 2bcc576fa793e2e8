import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import entropy, qubit_energies, reduce_first, reduce_second, thermal_qubits
from thermocorr.correlations import mi_energy_bound, mi_max_bound
from thermocorr.entanglement import (bipartition_concurrence, cmax_from_spectrum, cmax_thermal_2q,
                                     concurrence_2q, ghz_pair_bound)
from thermocorr.errors import BadExcitation, DimensionMismatch, FillTooLarge, NotEqualSpacing
from thermocorr.linalg import partial_trace
from thermocorr.protocols import (CirculantPlan, apply_protocol, bell_basis_unitary, bell_protocol,
                                  circulant_alphas, circulant_heating_protocol, dicke_plan,
                                  dicke_protocol, ghz_rotation_unitary, ghz_subspace_protocol,
                                  schur_horn_unitary, solve_circulant_alphas, spectrum_deviation,
                                  verstraete_protocol, verstraete_unitary, xstate_protocol)
from thermocorr.protocols.ghz import single_bip_assignment
from thermocorr.thermal import ThermalSystem, local_populations, thermal_state


# ---------------------------------------------------------------- Bell / GHZ basis

def test_bell_basis_columns():
    u = bell_basis_unitary(2, 2)
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12)
    for col in u.T:
        rho = np.outer(col, col.conj())
        assert np.allclose(reduce_first(rho, 2, 2), np.eye(2) / 2, atol=1e-12)
        assert np.allclose(reduce_second(rho, 2, 2), np.eye(2) / 2, atol=1e-12)
    assert np.allclose(np.abs(u[:, 0]), np.array([1, 0, 0, 1]) / math.sqrt(2))


@pytest.mark.parametrize("d,n", [(2, 3), (3, 2), (3, 3), (2, 4)])
def test_ghz_basis_orthonormal(d, n):
    u = bell_basis_unitary(d, n)
    assert np.max(np.abs(u.conj().T @ u - np.eye(d ** n))) <= 1e-12


@pytest.mark.parametrize("beta", [0.1, 1.0, 4.0])
def test_bell_protocol_saturates_bound(beta):
    sys = ThermalSystem(2, beta)
    out = bell_protocol(sys)
    assert out.measures["mutual_info"] == pytest.approx(mi_max_bound(sys), abs=1e-9)


def test_apply_protocol_identity_and_errors():
    sys = ThermalSystem(2, 0.8)
    out = apply_protocol(np.eye(4), sys)
    assert out.work == 0 and out.measures["mutual_info"] == pytest.approx(0, abs=1e-12)
    out = apply_protocol(bell_basis_unitary(2, 2), ThermalSystem(2, 0.0))
    assert out.work == pytest.approx(0, abs=1e-12)
    with pytest.raises(DimensionMismatch):
        apply_protocol(np.eye(8), sys)


# ---------------------------------------------------------------- Verstraete

def test_verstraete_examples():
    out = verstraete_protocol(ThermalSystem(2, math.inf))
    assert out.measures["concurrence"] == pytest.approx(1, abs=1e-12)
    assert out.work == pytest.approx(1, abs=1e-12)
    out = verstraete_protocol(ThermalSystem.from_ground_population(2, 0.698))
    assert out.measures["concurrence"] == pytest.approx(0, abs=1e-3)
    out = verstraete_protocol(ThermalSystem.from_ground_population(2, 0.75))
    assert out.measures["concurrence"] == pytest.approx(0.158494, abs=1e-6)


def test_verstraete_work_by_hand():
    p = 0.75
    q = 1 - p
    out = verstraete_protocol(ThermalSystem.from_ground_population(2, p))
    # CNOT swaps pq and q^2 between |10> and |11>, then {|00>,|11>} is averaged
    after = np.array([(p * p + p * q) / 2, p * q, q * q, (p * p + p * q) / 2])
    before = np.array([p * p, p * q, p * q, q * q])
    assert out.work == pytest.approx(float((after - before) @ qubit_energies(2)), abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=4, max_size=4).filter(lambda v: sum(v) > 1e-2))
def test_verstraete_unitary_reaches_optimum(vals):
    lam = np.array(vals) / sum(vals)
    u = verstraete_unitary(lam)
    rho = u @ np.diag(lam) @ u.conj().T
    assert concurrence_2q(rho) == pytest.approx(max(0.0, cmax_from_spectrum(lam)), abs=1e-9)


# ---------------------------------------------------------------- GHZ subspace

@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("beta", [0.2, 1.0, 3.0, math.inf])
def test_ghz_register_matches_dense(n, beta):
    sys = ThermalSystem(n, beta)
    dense = apply_protocol(ghz_rotation_unitary(n), sys, ())
    out = ghz_subspace_protocol(sys)
    assert np.max(np.abs(dense.final_state.mat - out.dense().mat)) <= 1e-14
    assert out.work == pytest.approx(dense.work, abs=1e-12)


def test_ghz_two_qubit_example():
    out = ghz_subspace_protocol(ThermalSystem.from_ground_population(2, 0.75))
    assert out.measures["concurrence"] == pytest.approx(0.125, abs=1e-12)


def test_ghz_ground_state_work():
    for n in (2, 5, 12):
        assert ghz_subspace_protocol(ThermalSystem(n, math.inf)).work == pytest.approx(n / 2, abs=1e-12)


@pytest.mark.parametrize("p", [0.6, 0.8, 0.95])
@pytest.mark.parametrize("n", [3, 4, 6])
def test_all_bip_identical_across_cuts(p, n):
    from itertools import combinations
    out = ghz_subspace_protocol(ThermalSystem.from_ground_population(n, p))
    ref = bipartition_concurrence(p, n)
    for size in range(1, n // 2 + 1):
        for part in combinations(range(n), size):
            assert ghz_pair_bound(out.final_state, part) == pytest.approx(ref, abs=1e-10)


def test_all_bip_zero_at_threshold():
    from thermocorr.thresholds import threshold_all_bip
    from itertools import combinations
    r = threshold_all_bip(4)
    out = ghz_subspace_protocol(ThermalSystem.from_ground_population(4, r.p))
    for size in (1, 2):
        for part in combinations(range(4), size):
            assert abs(ghz_pair_bound(out.final_state, part)) < 1e-9


def test_single_bip_two_qubits_is_cnot_then_rotation():
    assert single_bip_assignment(2, 1) == [(3, 2), (2, 3)]
    for p in (0.7, 0.75, 0.9):
        out = ghz_subspace_protocol(ThermalSystem.from_ground_population(2, p), "single-bip", 1)
        assert out.measures["concurrence"] == pytest.approx(cmax_thermal_2q(p), abs=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_single_bip_matches_closed_form(n):
    for j in range(1, n):
        for p in (0.6, 0.85):
            sys = ThermalSystem.from_ground_population(n, p)
            out = ghz_subspace_protocol(sys, "single-bip", j)
            assert out.measures["concurrence"] == pytest.approx(
                bipartition_concurrence(p, n, "single-bip"), abs=1e-9)
            assert spectrum_deviation(out, sys) <= 1e-12


# ---------------------------------------------------------------- X state

def test_xstate_examples():
    assert xstate_protocol(ThermalSystem(5, math.inf)).measures["gme_concurrence"] == pytest.approx(1)
    t_gme = 1 / (2 * math.log(2))
    assert xstate_protocol(ThermalSystem.from_temperature(20, 0.98 * t_gme)).measures["gme_concurrence"] > 0
    assert xstate_protocol(ThermalSystem.from_temperature(20, 1.02 * t_gme)).measures["gme_concurrence"] == 0


def test_xstate_coherence():
    p, n = 0.8, 4
    out = xstate_protocol(ThermalSystem.from_ground_population(n, p))
    assert out.diagnostics["z1"] == pytest.approx((p ** n - (1 - p) ** n) / 2, abs=1e-15)


# ---------------------------------------------------------------- Dicke

def test_dicke_ground_state_gives_w():
    out = dicke_protocol(ThermalSystem(3, math.inf), 1)
    rho = out.dense().mat
    w = np.zeros(8)
    w[[1, 2, 4]] = 1 / math.sqrt(3)
    assert np.allclose(rho, np.outer(w, w), atol=1e-14)
    assert out.measures["witness"] == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("n,k", [(3, 1), (4, 1), (4, 2), (5, 2), (6, 3), (6, 5)])
@pytest.mark.parametrize("p", [0.6, 0.9, 0.99])
def test_dicke_state_is_a_unitary_image(n, k, p):
    sys = ThermalSystem.from_ground_population(n, p)
    out = dicke_protocol(sys, k)
    rho = out.dense().mat
    assert np.allclose(np.sort(np.linalg.eigvalsh(rho)), np.sort(np.diag(thermal_qubits(p, n)).real), atol=1e-12)
    ref_work = float(np.diag(rho).real @ qubit_energies(n) - (1 - p) * n)
    assert out.work == pytest.approx(ref_work, abs=1e-12)
    assert out.diagnostics["form_min_eig"] >= -1e-12


def test_dicke_plan_structure():
    plan = dicke_plan(5, 1, 3, 2)
    # p^n sits on the first W slot, |1..1> population on the ground state
    assert plan.mapping[plan.slots[0]] == 0
    assert plan.mapping[0] == 31
    # all W fillers come from weight-4 strings
    assert all(bin(s).count("1") == 4 for s in plan.slot_sources[1:])


def test_dicke_equal_fillers_give_optimal_form():
    out = dicke_protocol(ThermalSystem.from_ground_population(6, 0.9), 1)
    assert out.diagnostics["form_deviation"] <= 1e-14


def test_dicke_witness_sign_around_scaling_temperature():
    n = 16
    assert dicke_protocol(ThermalSystem.from_temperature(n, 0.8 * n / (2 * math.log(n))), 1).measures["witness"] > 0
    assert dicke_protocol(ThermalSystem.from_temperature(n, 1.5 * n / (2 * math.log(n))), 1).measures["witness"] <= 0


def test_dicke_errors():
    sys = ThermalSystem(4, 1.0)
    with pytest.raises(BadExcitation):
        dicke_protocol(sys, 0)
    with pytest.raises(BadExcitation):
        dicke_protocol(sys, 4)
    with pytest.raises(FillTooLarge):
        dicke_protocol(ThermalSystem(8, 1.0), 2, k_fill=0)
    with pytest.raises(FillTooLarge):
        dicke_protocol(sys, 1, k_fill=9)


# ---------------------------------------------------------------- circulant

def test_circulant_identity_and_uniform():
    sys = ThermalSystem(2, 1.1, (0.0, 1.0, 2.0))
    out = circulant_heating_protocol(sys, 1.1)
    assert np.allclose(out.diagnostics["alphas"], [1, 0, 0])
    assert out.work == pytest.approx(0, abs=1e-12)
    out = circulant_heating_protocol(sys, 0.0)
    assert np.allclose(out.diagnostics["alphas"], [1 / 3] * 3)
    assert out.measures["mutual_info"] == pytest.approx(mi_max_bound(sys), abs=1e-10)


def test_circulant_qubit_example():
    sys = ThermalSystem(2, math.inf)
    out = circulant_heating_protocol(sys, math.log(2))
    rho = out.final_state.mat
    assert np.allclose(reduce_first(rho, 2, 2), np.diag([2 / 3, 1 / 3]), atol=1e-12)
    assert out.measures["mutual_info"] == pytest.approx(1.273028, abs=1e-6)
    assert out.work == pytest.approx(2 / 3, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.floats(0.05, 6.0), st.floats(0.0, 1.0), st.floats(0.2, 2.0))
def test_circulant_marginals_and_optimality(d, beta, frac, gap):
    levels = tuple(gap * np.arange(d))
    sys = ThermalSystem(2, beta, levels)
    bp = frac * beta
    out = circulant_heating_protocol(sys, bp)
    rho = out.final_state.mat
    target = np.diag(local_populations(levels, bp))
    ra, rb = reduce_first(rho, d, d), reduce_second(rho, d, d)
    assert np.max(np.abs(ra - target)) <= 1e-9
    assert np.max(np.abs(ra - rb)) <= 1e-10
    assert out.measures["mutual_info"] == pytest.approx(mi_energy_bound(sys, min(out.work, 2 * 1e9)), abs=1e-8)
    assert min(out.diagnostics["alphas"]) >= 0
    assert spectrum_deviation(out, sys) <= 1e-9


@pytest.mark.parametrize("levels", [(0, 1), (0, 1, 2), (0, 0.5, 1.0, 1.5)])
def test_closed_form_alphas_solve_the_linear_system(levels):
    for beta, bp in [(2.0, 0.5), (0.7, 0.1), (5.0, 4.0)]:
        a = circulant_alphas(levels, beta, bp)
        plan = CirculantPlan(a)
        p = local_populations(levels, beta)
        assert np.allclose(plan.apply(p), local_populations(levels, bp), atol=1e-14)
        assert np.allclose(plan.matrix() @ p, plan.apply(p), atol=1e-15)
        assert np.allclose(solve_circulant_alphas(levels, beta, bp), a, atol=1e-10)


def test_circulant_errors():
    with pytest.raises(NotEqualSpacing):
        circulant_heating_protocol(ThermalSystem(2, 1.0, (0.0, 1.0, 3.0)), 0.5)
    with pytest.raises(ValueError):
        circulant_alphas((0, 1), 1.0, 2.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**31 - 1))
def test_schur_horn(dim, seed):
    rng = np.random.default_rng(seed)
    x = rng.dirichlet(np.ones(dim))
    m = rng.dirichlet(np.ones(dim), size=dim)
    # a bistochastic image is majorized by x
    b = m / m.sum(axis=0)
    for _ in range(50):
        b = b / b.sum(axis=1, keepdims=True)
        b = b / b.sum(axis=0, keepdims=True)
    y = b @ x
    u = schur_horn_unitary(x, y)
    assert np.allclose(u.conj().T @ u, np.eye(dim), atol=1e-12)
    assert np.allclose(np.diag(u @ np.diag(x) @ u.conj().T).real, y, atol=1e-12)


# ---------------------------------------------------------------- shared invariants

@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.floats(0.05, 5.0), st.integers(1, 6))
def test_protocol_invariants(n, kT, k):
    sys = ThermalSystem.from_temperature(n, kT)
    outs = [ghz_subspace_protocol(sys), ghz_subspace_protocol(sys, "single-bip", min(k, n - 1)),
            xstate_protocol(sys)]
    if n >= 3:
        outs.append(dicke_protocol(sys, min(k, n - 1)))
    for out in outs:
        assert out.work >= -1e-9
        assert spectrum_deviation(out, sys) <= 1e-9
