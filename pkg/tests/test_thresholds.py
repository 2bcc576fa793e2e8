import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import bisect_root
from thermocorr.entanglement import cmax_thermal_2q
from thermocorr.thermal import ThermalSystem, thermal_spectrum
from thermocorr.thresholds import (boundary_temperature, ghz_gme_condition, kT_from_p, p_from_kT,
                                   separability_margin, separability_upper_bound,
                                   threshold_all_bip, threshold_gme_dicke, threshold_gme_ghz,
                                   threshold_single_bip, threshold_two_qubit,
                                   upper_bound_temperatures)


def test_two_qubit_threshold():
    r = threshold_two_qubit()
    assert r.p == pytest.approx(0.698, abs=1e-3)
    assert r.kT_over_E == pytest.approx(1.19, abs=1e-2)
    assert abs(cmax_thermal_2q(r.p)) <= 1e-9
    assert r.residual < 1e-9


def test_kT_p_roundtrip():
    for kT in (0.1, 1.0, 7.5):
        assert kT_from_p(p_from_kT(kT)) == pytest.approx(kT, rel=1e-12)


def test_all_bip_closed_form():
    assert threshold_all_bip(2).closed_form == pytest.approx(1.134593, abs=1e-6)
    assert threshold_all_bip(10).closed_form == pytest.approx(5.672963, abs=1e-6)
    for n in (2, 5, 20):
        r = threshold_all_bip(n)
        # v^{n/2} = sqrt 2 - 1 solves the condition exactly
        assert r.kT_over_E == pytest.approx(r.closed_form, rel=1e-9)


def test_single_bip_closed_form_and_ordering():
    assert threshold_single_bip(2).closed_form == pytest.approx(1.365359, abs=1e-6)
    assert threshold_single_bip(10).closed_form == pytest.approx(8.647273, abs=1e-6)
    for n in range(2, 16):
        assert threshold_single_bip(n).kT_over_E > threshold_all_bip(n).kT_over_E


def test_single_bip_two_qubits_is_verstraete():
    assert threshold_single_bip(2).kT_over_E == pytest.approx(threshold_two_qubit().kT_over_E, rel=1e-12)


def test_gme_ghz():
    limit = 1 / (2 * math.log(2))
    assert threshold_gme_ghz(40).kT_over_E == pytest.approx(limit, rel=1e-2)
    assert threshold_gme_ghz(2).kT_over_E <= threshold_two_qubit().kT_over_E
    for n in (3, 6, 12):
        x = math.exp(-0.5 * n / threshold_gme_ghz(n).kT_over_E)
        # x = v^{n/2} solves x^2 + 2 (2^{n-1} - 1) x - 1 = 0
        assert x * x + 2 * (2 ** (n - 1) - 1) * x - 1 == pytest.approx(0, abs=1e-9)


def test_gme_dicke():
    r8 = threshold_gme_dicke(8, 1)
    assert r8.closed_form == pytest.approx(1.923593, abs=1e-6)
    assert 0.5 <= r8.kT_over_E / r8.closed_form <= 2
    for n in (4, 6, 8):
        assert threshold_gme_dicke(n, 1).kT_over_E >= threshold_gme_dicke(n, 2).kT_over_E


def test_separability_examples():
    assert separability_upper_bound(np.full(8, 1 / 8))
    assert not separability_upper_bound([1, 0, 0, 0, 0, 0])
    with pytest.raises(ValueError):
        separability_margin([0.5, 0.3, 0.2])


@pytest.mark.parametrize("n", range(3, 8))
def test_boundary_from_full_spectrum(n):
    f = lambda p: separability_margin(thermal_spectrum(ThermalSystem.from_ground_population(n, p)))
    p_full = bisect_root(f, 0.5, 1.0)
    assert boundary_temperature(n).p == pytest.approx(p_full, abs=1e-12)
    assert boundary_temperature(n).p == pytest.approx(threshold_single_bip(n).p, abs=1e-12)


def test_upper_bound_examples():
    assert upper_bound_temperatures(2) == pytest.approx((0.910239, 0.910239), abs=1e-6)
    # the leading-order bound lies below the exact lower bound at n = 2
    assert threshold_all_bip(2).closed_form > upper_bound_temperatures(2)[0]
    for n in range(3, 40):
        assert threshold_all_bip(n).closed_form <= upper_bound_temperatures(n)[0]
    assert threshold_gme_dicke(12, 1).kT_over_E <= upper_bound_temperatures(12)[1]


@pytest.mark.parametrize("n", [3, 5, 8, 12])
def test_ordering_chain(n):
    bound = boundary_temperature(n).kT_over_E
    ghz = threshold_gme_ghz(n).kT_over_E
    dicke = threshold_gme_dicke(n, 1).kT_over_E
    assert ghz <= dicke <= bound
    assert threshold_all_bip(n).kT_over_E <= threshold_single_bip(n).kT_over_E <= bound * (1 + 1e-9)


def test_monotone_in_n():
    a = [threshold_all_bip(n).kT_over_E for n in range(2, 25)]
    s = [threshold_single_bip(n).kT_over_E for n in range(2, 25)]
    assert np.all(np.diff(a) > 0) and np.all(np.diff(s) > 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 60))
def test_residuals(n):
    for r in (threshold_all_bip(n), threshold_single_bip(n), threshold_gme_ghz(n), boundary_temperature(n)):
        assert r.residual < 1e-9 and r.kT_over_E > 0
    assert ghz_gme_condition(0.5, n) < 0 < ghz_gme_condition(1.0, n)


def test_invalid_n():
    with pytest.raises(ValueError):
        threshold_all_bip(1)
    with pytest.raises(ValueError):
        threshold_gme_dicke(2)
