import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given
from hypothesis import strategies as st

from renyitherm.clausius import coherent_qubit_state, qubit_clausius_setup
from renyitherm.errors import CutoffViolation, DimensionMismatch, SupportViolation
from renyitherm.measures import (
    check_alpha,
    delta_terms,
    renyi_entropy,
    renyi_internal_energy,
    sandwiched_relative_entropy,
    trad_relative_entropy,
    von_neumann_entropy,
    von_neumann_relative_entropy,
)
from renyitherm.operators import PowerPolicy, pure_state, random_density, random_hermitian, random_unitary
from renyitherm.thermal import solve_thermal_state

QUBIT = np.diag([0.7, 0.3])
H01 = np.diag([0.0, 1.0])
seeds = st.integers(0, 2**32 - 1)
GRID = (0.3, 0.5, 0.9, 1.0, 1.5, 2.0, 3.0, 5.0)


def mpow(M, p):
    return sla.fractional_matrix_power(M, p)


def oracle_trad(rho, sigma, a):
    return np.log(np.trace(mpow(rho, a) @ mpow(sigma, 1 - a)).real) / (a - 1)


def oracle_sand(rho, sigma, a):
    s = mpow(sigma, (1 - a) / (2 * a))
    return np.log(np.trace(mpow(s @ rho @ s, a)).real) / (a - 1)


class TestEntropy:
    @pytest.mark.parametrize("alpha", [0.3, 1.0, 2.0, 7.0])
    def test_maximally_mixed(self, alpha):
        assert renyi_entropy(np.eye(2) / 2, alpha) == pytest.approx(np.log(2), abs=1e-14)

    def test_thermal_qubit_collision_entropy(self):
        assert renyi_entropy(QUBIT, 2) == pytest.approx(-np.log(0.58), abs=1e-14)
        assert renyi_entropy(QUBIT, 2) == pytest.approx(0.544727, abs=1e-6)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 3.0])
    def test_pure_state(self, alpha):
        assert renyi_entropy(pure_state([1, 0]), alpha) == pytest.approx(0.0, abs=1e-14)

    def test_von_neumann(self):
        assert von_neumann_entropy(QUBIT) == pytest.approx(-(0.7 * np.log(0.7) + 0.3 * np.log(0.3)))

    @pytest.mark.parametrize("alpha", [0.0, -1.0, np.inf, np.nan])
    def test_bad_order(self, alpha):
        with pytest.raises(ValueError):
            check_alpha(alpha)

    @given(seeds, st.sampled_from([2, 3, 8]), st.sampled_from([1 - 1e-4, 1 + 1e-4]))
    def test_continuity_at_one(self, seed, d, a):
        rho = random_density(d, np.random.default_rng(seed))
        assert abs(renyi_entropy(rho, a) - von_neumann_entropy(rho)) <= 1e-3


class TestInternalEnergy:
    @pytest.mark.parametrize(
        "rho, alpha, expected",
        [
            (np.eye(2) / 2, 3.0, 0.5),
            (QUBIT, 2.0, 0.09 / 0.58),
            (QUBIT, 1.0, 0.3),
        ],
    )
    def test_values(self, rho, alpha, expected):
        assert renyi_internal_energy(rho, H01, alpha) == pytest.approx(expected, abs=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            renyi_internal_energy(QUBIT, np.eye(3), 2.0)

    @given(seeds, st.floats(0.2, 4.0))
    def test_matches_matrix_function_oracle(self, seed, a):
        rng = np.random.default_rng(seed)
        rho, H = random_density(3, rng), random_hermitian(3, rng)
        ra = mpow(rho, a)
        expected = np.trace(ra @ H).real / np.trace(ra).real
        assert renyi_internal_energy(rho, H, a) == pytest.approx(expected, abs=1e-9)


class TestRelativeEntropies:
    @pytest.mark.parametrize("div, alpha", [(trad_relative_entropy, 0.7), (sandwiched_relative_entropy, 3.0)])
    def test_identical_states(self, div, alpha, rng):
        rho = random_density(3, rng)
        assert div(rho, rho, alpha) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("div", [trad_relative_entropy, sandwiched_relative_entropy])
    def test_commuting_scalar_value(self, div):
        expected = np.log(0.25 / 0.7 + 0.25 / 0.3)
        assert div(np.eye(2) / 2, QUBIT, 2.0) == pytest.approx(expected, abs=1e-14)
        assert expected == pytest.approx(0.174353, abs=1e-6)

    @pytest.mark.parametrize("div", [trad_relative_entropy, sandwiched_relative_entropy])
    def test_disjoint_support(self, div):
        with pytest.raises(SupportViolation):
            div(pure_state([1, 0]), pure_state([0, 1]), 2.0)

    def test_disjoint_support_below_one(self):
        # finite unless the overlap trace vanishes, which it does here
        with pytest.raises(SupportViolation):
            trad_relative_entropy(pure_state([1, 0]), pure_state([0, 1]), 0.5)

    def test_von_neumann_support(self):
        with pytest.raises(SupportViolation):
            von_neumann_relative_entropy(QUBIT, pure_state([1, 0]))
        floored = von_neumann_relative_entropy(QUBIT, pure_state([1, 0]), PowerPolicy.floor(1e-6))
        assert np.isfinite(floored)

    def test_sandwiched_below_traditional_noncommuting(self, rng):
        U = random_unitary(2, rng)
        rho = U @ QUBIT @ U.conj().T
        sigma = np.diag([0.6, 0.4])
        assert sandwiched_relative_entropy(rho, sigma, 2.0) <= trad_relative_entropy(rho, sigma, 2.0) + 1e-12

    @given(seeds, st.sampled_from([0.4, 0.8, 1.5, 2.0, 3.0]))
    def test_match_matrix_function_oracle(self, seed, a):
        rng = np.random.default_rng(seed)
        rho, sigma = random_density(3, rng), random_density(3, rng)
        assert trad_relative_entropy(rho, sigma, a) == pytest.approx(oracle_trad(rho, sigma, a), abs=1e-8)
        assert sandwiched_relative_entropy(rho, sigma, a) == pytest.approx(oracle_sand(rho, sigma, a), abs=1e-8)

    @given(seeds)
    def test_von_neumann_matches_logm(self, seed):
        rng = np.random.default_rng(seed)
        rho, sigma = random_density(3, rng), random_density(3, rng)
        expected = np.trace(rho @ (sla.logm(rho) - sla.logm(sigma))).real
        assert von_neumann_relative_entropy(rho, sigma) == pytest.approx(expected, abs=1e-8)

    @given(seeds, st.sampled_from(GRID), st.sampled_from([2, 3, 4]))
    def test_nonnegative(self, seed, a, d):
        rng = np.random.default_rng(seed)
        rho, sigma = random_density(d, rng), random_density(d, rng)
        assert trad_relative_entropy(rho, sigma, a) >= -1e-10
        assert sandwiched_relative_entropy(rho, sigma, a) >= -1e-10

    @given(seeds, st.sampled_from(GRID))
    def test_commuting_reduction(self, seed, a):
        rng = np.random.default_rng(seed)
        p, q = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
        rho, sigma = np.diag(p), np.diag(q)
        assert abs(trad_relative_entropy(rho, sigma, a) - sandwiched_relative_entropy(rho, sigma, a)) <= 1e-10

    @given(seeds, st.sampled_from([1 - 1e-4, 1 + 1e-4]))
    def test_continuity_at_one(self, seed, a):
        rng = np.random.default_rng(seed)
        rho, sigma = random_density(4, rng), random_density(4, rng)
        vn = von_neumann_relative_entropy(rho, sigma)
        assert abs(trad_relative_entropy(rho, sigma, a) - vn) <= 1e-3
        assert abs(sandwiched_relative_entropy(rho, sigma, a) - vn) <= 1e-3


class TestDeltaTerms:
    @pytest.mark.parametrize("variant", ["traditional", "sandwiched"])
    @pytest.mark.parametrize("alpha", [0.5, 2.0])
    def test_vanish_at_thermal_state(self, variant, alpha):
        th = solve_thermal_state(np.diag([0.0, 0.3, 1.0]), 0.9, alpha)
        dt = delta_terms(th.state, th, variant)
        assert dt.delta == pytest.approx(0.0, abs=1e-12)
        assert dt.delta_prime == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("variant", ["traditional", "sandwiched"])
    def test_qubit_qubit_nonpositive_above_one(self, variant):
        th, _ = qubit_clausius_setup(0.7, 1.0, 2.0)
        assert delta_terms(coherent_qubit_state(0.7, 0.01), th, variant).delta_prime <= 0

    @pytest.mark.parametrize("variant", ["traditional", "sandwiched"])
    @pytest.mark.parametrize("alpha", [1 - 1e-4, 1.0, 1 + 1e-4])
    def test_limit_near_one(self, variant, alpha, rng):
        th = solve_thermal_state(random_hermitian(3, rng), 0.5, alpha)
        rho = random_density(3, rng)
        dt = delta_terms(rho, th, variant)
        # only delta_prime vanishes; delta tends to beta (U_N - U_T)
        assert abs(dt.delta_prime) <= 1e-3
        assert dt.delta == pytest.approx(th.beta * (renyi_internal_energy(rho, th.H, alpha) - th.U), abs=1e-3)

    @given(seeds, st.sampled_from(["traditional", "sandwiched"]), st.sampled_from([0.5, 2.0, 3.0]))
    def test_defining_relation(self, seed, variant, a):
        rng = np.random.default_rng(seed)
        th = solve_thermal_state(np.diag([0.0, 0.5, 1.0]), 0.3, a)
        rho = random_density(3, rng)
        dt = delta_terms(rho, th, variant)
        U_N = renyi_internal_energy(rho, th.H, a)
        assert abs(dt.delta_prime - th.beta * (th.U - U_N) - dt.delta) <= 1e-12

    def test_traditional_cutoff(self):
        # a state sitting on a cut-off level has 1 + (a-1) beta (U_N - U_T) <= 0
        th = solve_thermal_state(np.diag([0.0, 1.0, 5.0]), 3.0, 0.5)
        with pytest.raises(CutoffViolation):
            delta_terms(pure_state([0, 0, 1]), th, "traditional")

    def test_sandwiched_needs_psd_a(self):
        th = solve_thermal_state(np.diag([0.0, 1.0, 5.0]), 3.0, 0.5)
        assert th.cutoff_applied
        with pytest.raises(CutoffViolation):
            delta_terms(np.eye(3) / 3, th, "sandwiched")

    def test_unknown_variant(self):
        th = solve_thermal_state(H01, 1.0, 2.0)
        with pytest.raises(ValueError):
            delta_terms(QUBIT, th, "petz")


NEAR_ONE_ALPHAS = (1 - 1.1e-16, 1 + 2.2e-16, 1 - 1e-12, 1 + 1e-9, 1 - 1e-6, 1 + 5e-4)


class TestNearOrderOne:
    """Orders within rounding of 1 must not divide trace roundoff by alpha - 1."""

    @pytest.mark.parametrize("alpha", NEAR_ONE_ALPHAS)
    def test_divergences_close_to_von_neumann(self, alpha, rng):
        rho, sigma = random_density(3, rng), random_density(3, rng)
        ref = von_neumann_relative_entropy(rho, sigma)
        tol = 1e-12 + 10 * abs(alpha - 1)
        assert abs(trad_relative_entropy(rho, sigma, alpha) - ref) <= tol
        assert abs(sandwiched_relative_entropy(rho, sigma, alpha) - ref) <= tol
        assert abs(renyi_entropy(rho, alpha) - von_neumann_entropy(rho)) <= tol

    @pytest.mark.parametrize("alpha", NEAR_ONE_ALPHAS)
    def test_delta_terms_close_to_limit(self, alpha, rng):
        H = random_hermitian(3, rng)
        rho = random_density(3, rng)
        th, th1 = solve_thermal_state(H, 0.4, alpha), solve_thermal_state(H, 0.4, 1.0)
        for variant in ("traditional", "sandwiched"):
            d, d1 = delta_terms(rho, th, variant), delta_terms(rho, th1, variant)
            assert d.delta == pytest.approx(d1.delta, abs=1e-12 + 10 * abs(alpha - 1))

    @pytest.mark.parametrize("edge", (1 - 1e-3, 1 + 1e-3))
    def test_continuous_across_switch(self, edge, rng):
        rho, sigma = random_density(3, rng), random_density(3, rng)
        H = random_hermitian(3, rng)
        lo, hi = edge * (1 - 1e-15), edge * (1 + 1e-15)
        for f in (
            lambda a: trad_relative_entropy(rho, sigma, a),
            lambda a: sandwiched_relative_entropy(rho, sigma, a),
            lambda a: renyi_entropy(rho, a),
            lambda a: delta_terms(rho, solve_thermal_state(H, 0.4, a), "sandwiched").delta,
        ):
            assert abs(f(hi) - f(lo)) <= 1e-11
