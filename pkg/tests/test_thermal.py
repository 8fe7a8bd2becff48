import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given
from hypothesis import strategies as st

from renyitherm.errors import MultipleRoots
from renyitherm.measures import renyi_entropy, renyi_internal_energy
from renyitherm.operators import random_density, random_hermitian, trace_distance
from renyitherm.selftest import admissible_beta
from renyitherm.thermal import (
    beta_consistency_check,
    gibbs_state,
    qubit_beta_closed_form,
    solve_thermal_state,
)

H01 = np.diag([0.0, 1.0])
seeds = st.integers(0, 2**32 - 1)
ALPHAS = (0.3, 0.5, 0.9, 1.1, 2.0, 3.0)


def escort_energy(rho, H, a):
    ra = sla.fractional_matrix_power(rho, a)
    return np.trace(ra @ H).real / np.trace(ra).real


class TestSolve:
    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_infinite_temperature(self, d, rng):
        H = random_hermitian(d, rng)
        th = solve_thermal_state(H, 0.0, 2.0)
        np.testing.assert_allclose(th.state, np.eye(d) / d, atol=1e-15)
        assert th.Z == pytest.approx(d)
        assert th.U == pytest.approx(np.trace(H).real / d)
        assert th.F == -np.inf

    def test_qubit_closed_form_inverse(self):
        th = solve_thermal_state(H01, 1.104762, 2.0)
        np.testing.assert_allclose(th.state.real, np.diag([0.7, 0.3]), atol=1e-6)

    def test_near_gibbs(self):
        th = solve_thermal_state(H01, 0.847298, 0.999)
        assert trace_distance(th.state, np.diag([0.7, 0.3])) <= 1e-3

    def test_gibbs_dispatch(self, rng):
        H = random_hermitian(4, rng)
        th = solve_thermal_state(H, 0.8, 1.0)
        np.testing.assert_allclose(th.state, sla.expm(-0.8 * H) / np.trace(sla.expm(-0.8 * H)), atol=1e-12)
        assert th.S == pytest.approx(np.log(th.Z), abs=1e-12)

    @pytest.mark.parametrize("alpha", [0.5, 2.0])
    def test_degenerate_hamiltonian(self, alpha):
        th = solve_thermal_state(2.5 * np.eye(3), 4.0, alpha)
        np.testing.assert_allclose(th.state, np.eye(3) / 3, atol=1e-15)

    @pytest.mark.parametrize("beta", [-1.0, np.inf, np.nan])
    def test_bad_beta(self, beta):
        with pytest.raises(ValueError):
            solve_thermal_state(H01, beta, 2.0)

    def test_multiple_roots_in_cutoff_regime(self):
        # U = 0 (ground state, excited levels cut off) and U = 0.6 are both self-consistent
        with pytest.raises(MultipleRoots) as info:
            solve_thermal_state(np.diag([0.0, 1, 1, 1, 1]), 2.0, 0.5)
        np.testing.assert_allclose(sorted(info.value.roots), [0.0, 0.6], atol=1e-10)

    def test_cutoff_flag(self):
        th = solve_thermal_state(np.diag([0.0, 0.1, 5.0]), 3.0, 0.5)
        assert th.cutoff_applied
        assert th.populations[-1] == 0.0

    @pytest.mark.parametrize("H, beta", [(np.diag([0.0, 0.1, 5.0]), 3.0), (np.diag([0.0, 0.5, 1.5]), 2.5)])
    def test_cutoff_entropy_finite(self, H, beta):
        th = solve_thermal_state(H, beta, 0.5)
        assert th.cutoff_applied
        assert th.S == pytest.approx(renyi_entropy(th.state, 0.5), abs=1e-12)
        assert th.S == pytest.approx(np.log(th.Z), abs=1e-12)


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("d", [2, 3, 4])
def test_invariants(alpha, d, rng):
    H = random_hermitian(d, rng)
    th = solve_thermal_state(H, admissible_beta(H, alpha, rng), alpha)
    spread = np.ptp(np.linalg.eigvalsh(H))
    # reconstruct from A with an independent matrix power
    recon = sla.fractional_matrix_power(th.A, 1 / (1 - alpha)) / th.Z
    np.testing.assert_allclose(recon, th.state, atol=1e-10)
    assert abs(th.U - escort_energy(th.state, H, alpha)) <= 1e-10 * spread
    assert th.S == pytest.approx(np.log(th.Z), abs=1e-9)
    assert th.S == pytest.approx(renyi_entropy(th.state, alpha), abs=1e-10)
    assert th.F == pytest.approx(th.U - th.S / th.beta, abs=1e-12)
    ra = sla.fractional_matrix_power(th.state, alpha)
    assert abs(np.trace(ra @ (H - th.U * np.eye(d))).real) <= 1e-10
    if not th.cutoff_applied:
        assert np.linalg.eigvalsh(th.A).min() > 0


@given(seeds, st.sampled_from(ALPHAS))
def test_minimality_against_random_states(seed, alpha):
    rng = np.random.default_rng(seed)
    H = random_hermitian(3, rng)
    th = solve_thermal_state(H, admissible_beta(H, alpha, rng), alpha)
    for _ in range(20):
        rho = random_density(3, rng)
        f = renyi_internal_energy(rho, H, alpha) - renyi_entropy(rho, alpha) / th.beta
        assert f >= th.F - 1e-10


@pytest.mark.parametrize("alpha", [1 - 1e-4, 1 + 1e-4])
def test_gibbs_limit(alpha, rng):
    H = random_hermitian(4, rng)
    assert trace_distance(solve_thermal_state(H, 1.3, alpha).state, gibbs_state(H, 1.3)) <= 1e-3


class TestClosedForm:
    def test_value(self):
        assert qubit_beta_closed_form(0.7, 1.0, 2.0) == pytest.approx(1.104762, abs=1e-6)

    @pytest.mark.parametrize("alpha", [0.3, 1.0, 2.0, 4.5])
    def test_infinite_temperature(self, alpha):
        assert qubit_beta_closed_form(0.5, 3.0, alpha) == pytest.approx(0.0, abs=1e-15)

    def test_gibbs(self):
        assert qubit_beta_closed_form(0.7, 1.0, 1.0) == pytest.approx(np.log(7 / 3))

    @pytest.mark.parametrize("alpha", [0.2, 0.5, 0.9, 1.0, 1.5, 2.0, 3.0, 5.0])
    @pytest.mark.parametrize("p0", [0.55, 0.7, 0.9])
    def test_solver_recovers_populations(self, alpha, p0):
        beta = qubit_beta_closed_form(p0, 2.0, alpha)
        if (1 - alpha) * beta * 2.0 >= 1:
            # the cut-off ground state is then self-consistent as well
            with pytest.raises(MultipleRoots) as info:
                solve_thermal_state(2.0 * H01, beta, alpha)
            assert any(abs(u - 2.0 * (1 - p0) ** alpha / (p0**alpha + (1 - p0) ** alpha)) < 1e-9
                       for u in info.value.roots)
            return
        th = solve_thermal_state(2.0 * H01, beta, alpha)
        np.testing.assert_allclose(th.populations, [p0, 1 - p0], atol=1e-10)


class TestBetaConsistency:
    def test_qubit(self):
        th = solve_thermal_state(H01, 1.104762, 2.0)
        assert beta_consistency_check(th) == pytest.approx(th.beta, rel=1e-4)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_near_infinite_temperature(self, alpha, rng):
        th = solve_thermal_state(random_hermitian(4, rng), 1e-6, alpha)
        assert beta_consistency_check(th) == pytest.approx(1e-6, rel=1e-4)

    def test_gibbs(self, rng):
        th = solve_thermal_state(random_hermitian(4, rng), 0.9, 1.0)
        assert beta_consistency_check(th) == pytest.approx(0.9, rel=1e-4)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_grid(self, alpha, rng):
        H = random_hermitian(3, rng)
        th = solve_thermal_state(H, admissible_beta(H, alpha, rng), alpha)
        assert beta_consistency_check(th) == pytest.approx(th.beta, rel=1e-4)


@pytest.mark.parametrize("alpha", (1 - 1.1e-16, 1 + 2.2e-16, 1 - 1e-10, 1 + 1e-7))
def test_orders_within_rounding_of_one_match_gibbs(alpha, rng):
    H = random_hermitian(4, rng)
    th, g = solve_thermal_state(H, 0.7, alpha), solve_thermal_state(H, 0.7, 1.0)
    tol = 1e-12 + 100 * abs(alpha - 1)
    assert abs(th.U - g.U) <= tol
    assert abs(th.S - g.S) <= tol
    assert abs(th.S - np.log(th.Z)) <= 1e-12
