import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from renyitherm.clausius import coherent_qubit_state, qubit_clausius_setup
from renyitherm.free_energy import (
    free_energy_report,
    minimality_certificate,
    sandwiched_free_energy,
    traditional_free_energy,
)
from renyitherm.measures import von_neumann_relative_entropy
from renyitherm.operators import random_density, random_hermitian
from renyitherm.selftest import random_case
from renyitherm.thermal import solve_thermal_state

seeds = st.integers(0, 2**32 - 1)
ALPHAS = (0.3, 0.5, 0.9, 1.1, 2.0, 3.0)


@pytest.mark.parametrize("alpha", [0.5, 2.0])
def test_thermal_state_has_zero_gap(alpha):
    th = solve_thermal_state(np.diag([0.0, 0.4, 1.0]), 0.7, alpha)
    rep = free_energy_report(th.state, th)
    for f in (rep.f_tilde, rep.f_sand, rep.f_form):
        assert f == pytest.approx(th.F, abs=1e-12)
    assert rep.gap == pytest.approx(0.0, abs=1e-12)


def test_qubit_qubit_positive_gap():
    th, _ = qubit_clausius_setup(0.7, 1.0, 2.0)
    assert free_energy_report(coherent_qubit_state(0.7, 0.01), th).gap > 0


def test_random_four_level_form_invariance(rng):
    th = solve_thermal_state(random_hermitian(4, rng), 0.3, 0.6)
    rep = free_energy_report(random_density(4, rng), th)
    assert abs(rep.f_tilde - rep.f_form) <= 1e-9


def test_single_route_helpers_match_report(rng):
    th = solve_thermal_state(np.diag([0.0, 1.0, 2.0]), 0.4, 2.0)
    rho = random_density(3, rng)
    rep = free_energy_report(rho, th)
    assert traditional_free_energy(rho, th) == rep.f_tilde
    assert sandwiched_free_energy(rho, th) == rep.f_sand


def test_infinite_temperature_refused():
    th = solve_thermal_state(np.diag([0.0, 1.0]), 0.0, 2.0)
    with pytest.raises(ValueError):
        free_energy_report(np.eye(2) / 2, th)


@given(seeds, st.sampled_from([2, 3, 4, 8]), st.sampled_from(ALPHAS))
def test_form_invariance(seed, d, alpha):
    th, rho = random_case(d, alpha, np.random.default_rng(seed))
    rep = free_energy_report(rho, th)
    assert abs(rep.f_tilde - rep.f_sand) <= 1e-9
    assert abs(rep.f_tilde - rep.f_form) <= 1e-9
    assert rep.gap >= -1e-9


@given(seeds, st.sampled_from(ALPHAS))
def test_gap_decomposition(seed, alpha):
    th, rho = random_case(3, alpha, np.random.default_rng(seed))
    rep = free_energy_report(rho, th)
    assert th.beta * (rep.f_tilde - rep.f_equilibrium) == pytest.approx(rep.d_trad - rep.delta_prime_trad, abs=1e-10)
    assert th.beta * (rep.f_sand - rep.f_equilibrium) == pytest.approx(rep.d_sand - rep.delta_prime_sand, abs=1e-10)
    assert rep.d_trad >= -1e-10 and rep.d_sand >= -1e-10
    if alpha > 1:
        assert rep.delta_prime_trad <= 1e-12 and rep.delta_prime_sand <= 1e-12
    else:
        # ln(1 + x) <= x flips sign when divided by alpha - 1 < 0
        assert rep.delta_prime_trad >= -1e-12


@pytest.mark.parametrize("alpha", [1 - 1e-4, 1 + 1e-4])
def test_gap_tends_to_von_neumann_divergence(alpha, rng):
    H = random_hermitian(3, rng)
    th = solve_thermal_state(H, 0.8, alpha)
    gibbs = solve_thermal_state(H, 0.8, 1.0)
    rho = random_density(3, rng)
    expected = von_neumann_relative_entropy(rho, gibbs) / 0.8
    assert free_energy_report(rho, th).gap == pytest.approx(expected, abs=1e-3)


class TestMinimalityCertificate:
    def test_sampler_reproducing_thermal_state(self):
        th = solve_thermal_state(np.diag([0.0, 1.0]), 1.1, 2.0)
        cert = minimality_certificate(th, 1, 0, sampler=lambda r: th.state)
        assert cert.min_gap == pytest.approx(0.0, abs=1e-12)

    def test_qubit(self):
        th, _ = qubit_clausius_setup(0.7, 1.0, 2.0)
        assert minimality_certificate(th, 10_000, 42).min_gap >= 0

    def test_four_level(self):
        th = solve_thermal_state(np.diag([0.0, 0.3, 0.6, 1.0]), 1.0, 0.5)
        assert minimality_certificate(th, 1000, 7).min_gap >= 0

    def test_deterministic(self):
        th = solve_thermal_state(np.diag([0.0, 1.0]), 0.5, 3.0)
        a, b = minimality_certificate(th, 50, 3), minimality_certificate(th, 50, 3)
        assert a.min_gap == b.min_gap
        np.testing.assert_array_equal(a.argmin, b.argmin)

    def test_needs_samples(self):
        th = solve_thermal_state(np.diag([0.0, 1.0]), 0.5, 3.0)
        with pytest.raises(ValueError):
            minimality_certificate(th, 0, 0)
