import math

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import trapezoid

from casimir_bench.quantities import POWER, TIME
from casimir_bench.superradiance import (
    CHUNK,
    EnsembleState,
    delay_time,
    peak_power,
    pulse_shape,
    sample_delays,
    unit_exponentials,
)

NA_OMEGA = 2 * math.pi * 1.77e9
RB_OMEGA = 2 * math.pi * 6.83e9
T_SR = 5e-4


def na(n_seed=0.0, n_atoms=8.2e7, t_sr=T_SR):
    return EnsembleState(n_atoms=n_atoms, n_seed=n_seed, t_sr=t_sr, omega=NA_OMEGA)


def closed_form(ens, t):
    # logistic solution with x(0) = N_at, written out in extended precision
    c = mp.mpf(ens.n_atoms) + 1 + mp.mpf(ens.n_seed)
    r = (1 + mp.mpf(ens.n_seed)) / mp.mpf(ens.n_atoms)
    t1 = mp.mpf(ens.t_sr) * mp.mpf(ens.n_atoms)
    return np.array([float(c / (1 + r * mp.exp(c * mp.mpf(float(ti)) / t1))) for ti in t])


def test_ensemble_validation():
    with pytest.raises(ValueError):
        na(n_atoms=0.5)
    with pytest.raises(ValueError):
        na(n_seed=-1)
    with pytest.raises(ValueError):
        na(t_sr=0.0)


def test_peak_power_examples():
    p = peak_power(na())
    assert p.dim == POWER
    assert p.value == pytest.approx(1.9e-13, rel=0.05)
    rb = EnsembleState(2.2e7, 0.0, T_SR, RB_OMEGA)
    assert peak_power(rb).value == pytest.approx(2.0e-13, rel=0.05)
    small = na(n_atoms=6e5, t_sr=6.8e-2)
    assert peak_power(small).value == pytest.approx(1.0e-17, rel=0.05)


def test_peak_power_quadratic_in_atoms_at_fixed_cavity_lifetime():
    t1_cav = 4.1e4
    a = peak_power(na(n_atoms=1e6, t_sr=t1_cav / 1e6)).value
    b = peak_power(na(n_atoms=2e6, t_sr=t1_cav / 2e6)).value
    assert b / a == pytest.approx(4.0, rel=1e-14)


def test_delay_examples():
    t0 = delay_time(na())
    assert t0.dim == TIME
    assert t0.value == pytest.approx(T_SR * math.log(8.2e7), rel=1e-15)
    assert t0.value == pytest.approx(9.1e-3, rel=0.01)
    assert delay_time(na(13.0)).value == pytest.approx(7.8e-3, rel=0.01)
    assert delay_time(na(8.2e7 - 1)).value == 0.0
    assert delay_time(na(1e9)).value == 0.0


def test_delay_monotone():
    seeds = np.linspace(0, 1000, 50)
    d = [delay_time(na(s)).value for s in seeds]
    assert np.all(np.diff(d) < 0)
    atoms = np.logspace(3, 9, 50)
    d = [delay_time(na(5.0, n_atoms=n)).value for n in atoms]
    assert np.all(np.diff(d) > 0)


@pytest.mark.parametrize("n_seed", [0.0, 13.154, 744.7])
def test_pulse_matches_closed_form(n_seed):
    ens = na(n_seed)
    span = 3 * delay_time(na()).value
    t = np.linspace(0.0, span, 1000)
    trace = pulse_shape(ens, t)
    exact = closed_form(ens, t)
    assert np.max(np.abs(trace.excited - exact) / exact) <= 1e-6


def test_pulse_conserves_photons():
    ens = na(13.154)
    t = np.linspace(0.0, 3 * delay_time(na()).value, 1000)
    trace = pulse_shape(ens, t)
    integral = trapezoid(trace.emission_rate, trace.times)
    assert abs(integral - trace.total_photons) / trace.total_photons <= 1e-4
    assert trace.total_photons <= ens.n_atoms + ens.n_seed
    assert trace.total_photons == pytest.approx(ens.n_atoms, rel=1e-6)


def test_peak_time_and_rate():
    ens = na(13.0)
    t_d = delay_time(ens).value
    t = np.linspace(0.0, 2 * t_d, 200001)
    trace = pulse_shape(ens, t)
    c = ens.n_atoms + 1 + ens.n_seed
    t_peak_exact = ens.t1_cav / c * math.log(ens.n_atoms / (1 + ens.n_seed))
    assert trace.t_peak == pytest.approx(t_peak_exact, abs=t[1])
    assert abs(trace.t_peak - t_d) / t_d <= (1 + ens.n_seed) / ens.n_atoms + t[1] / t_d
    assert trace.emission_rate.max() == pytest.approx(c**2 / (4 * ens.t1_cav), rel=1e-6)
    # the model peak is a quarter of the order-of-magnitude estimate
    assert trace.peak_power == pytest.approx(peak_power(ens).value / 4, rel=1e-6)


def test_truncated_grid_is_flagged():
    ens = na()
    t = np.linspace(0.0, 0.5 * delay_time(ens).value, 100)
    with pytest.warns(RuntimeWarning, match="truncated"):
        trace = pulse_shape(ens, t)
    assert trace.truncated
    assert not pulse_shape(ens, np.linspace(0.0, 0.03, 100)).truncated


def test_pulse_grid_validation():
    with pytest.raises(ValueError):
        pulse_shape(na(), np.array([1e-3, 2e-3]))
    with pytest.raises(ValueError):
        pulse_shape(na(), np.array([0.0, 2e-3, 1e-3]))


def test_unit_exponentials_are_chunking_invariant():
    whole = unit_exponentials(7, 0, 1000)
    parts = np.concatenate([unit_exponentials(7, s, n) for s, n in [(0, 3), (3, 250), (253, 1), (254, 746)]])
    np.testing.assert_array_equal(whole, parts)
    assert not np.array_equal(whole, unit_exponentials(7, 0, 1000, stream=1))
    assert not np.array_equal(whole, unit_exponentials(8, 0, 1000))


def test_sample_delays_bit_identical_across_workers():
    n = 2 * CHUNK + 123
    a = sample_delays(na(), n, 42, workers=1)
    b = sample_delays(na(), n, 42, workers=4)
    np.testing.assert_array_equal(a.samples, b.samples)
    prefix = sample_delays(na(), CHUNK + 5, 42)
    np.testing.assert_array_equal(a.samples[: CHUNK + 5], prefix.samples)


def test_summary_recomputable_from_samples():
    d = sample_delays(na(), 5000, 3)
    assert d.mean == float(np.mean(d.samples))
    assert d.std == float(np.std(d.samples, ddof=1))
    assert d.q50 == float(np.quantile(d.samples, 0.5))
    assert np.all(d.samples >= 0)
    assert d.summary()["n_trials"] == 5000


def test_calibrated_offset():
    ens = na()
    raw = sample_delays(ens, 1000, 1)
    cal = sample_delays(ens, 1000, 1, calibrated=True)
    shifted = np.maximum(raw.samples - 0.5772156649015329 * T_SR, 0.0)
    np.testing.assert_allclose(cal.samples, shifted, rtol=1e-12, atol=1e-18)


def test_seeded_spread_close_to_delta_method():
    d = sample_delays(na(13.0), 100_000, 11)
    # std of ln(13 + E) for E ~ Exp(1), by quadrature
    mean = mp.quad(lambda e: mp.log(13 + e) * mp.exp(-e), [0, mp.inf])
    var = mp.quad(lambda e: (mp.log(13 + e) - mean) ** 2 * mp.exp(-e), [0, mp.inf])
    assert d.std == pytest.approx(T_SR * float(mp.sqrt(var)), rel=0.02)
    assert d.std < 0.1 * T_SR
