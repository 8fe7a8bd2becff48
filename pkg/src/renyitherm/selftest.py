"""Reduced-size run of the library's invariants, used by ``renyitherm selftest``."""

from dataclasses import dataclass

import numpy as np

from .channels import dpi_check, random_thermal_fixing_channel
from .clausius import rotated_pair_first_order, rotated_pair_closed_form, clausius_csv, clausius_sweep
from .free_energy import free_energy_report, minimality_certificate
from .measures import delta_terms, renyi_entropy, sandwiched_relative_entropy, trad_relative_entropy
from .operators import random_density, random_hermitian, trace_distance
from .processes import (
    StateFamily,
    coherent_mixing_factory,
    path_first_law,
    qubit_gap_family,
    qubit_rotation,
    run_carnot_cycle,
)
from .thermal import gibbs_state, solve_thermal_state

ALPHAS = (0.3, 0.5, 0.9, 1.1, 2.0, 3.0)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def admissible_beta(H, alpha, rng):
    """Inverse temperature below the cutoff scale ``1 / (|1 - alpha| spread)``."""
    e = np.linalg.eigvalsh(H)
    spread = e[-1] - e[0]
    return rng.uniform(0.05, 0.9) / (max(abs(1 - alpha), 0.1) * spread)


def random_case(d, alpha, rng):
    H = random_hermitian(d, rng)
    th = solve_thermal_state(H, admissible_beta(H, alpha, rng), alpha)
    return th, random_density(d, rng)


def identity_errors(th, rho):
    """Worst deviation in the entropy identities and the form-invariant free energies."""
    S_N = renyi_entropy(rho, th.alpha)
    errs = []
    for variant, div in (("traditional", trad_relative_entropy), ("sandwiched", sandwiched_relative_entropy)):
        D = div(rho, th, th.alpha)
        errs.append(abs(S_N - (th.S - D + delta_terms(rho, th, variant).delta)))
    rep = free_energy_report(rho, th)
    errs += [abs(rep.f_tilde - rep.f_sand), abs(rep.f_tilde - rep.f_form), abs(th.S - np.log(th.Z))]
    return max(errs)


def _identities(rng):
    worst = max(identity_errors(*random_case(d, a, rng)) for d in (2, 3, 4) for a in ALPHAS for _ in range(3))
    return Check("identities", worst <= 1e-9, f"max error {worst:.2e}")


def _minimality(rng):
    th = solve_thermal_state(np.diag([0.0, 0.4, 1.0]), 0.8, 2.0)
    cert = minimality_certificate(th, 500, int(rng.integers(2**31)))
    at_T = free_energy_report(th.state, th).gap
    return Check("minimality", cert.min_gap >= -1e-9 and abs(at_T) <= 1e-9, f"min gap {cert.min_gap:.3e}")


def _gibbs_limit(rng):
    H = random_hermitian(3, rng)
    worst = 0.0
    for a in (1 - 1e-4, 1 + 1e-4):
        th = solve_thermal_state(H, 0.7, a)
        rho = random_density(3, rng)
        worst = max(
            worst,
            trace_distance(th.state, gibbs_state(H, 0.7)),
            abs(renyi_entropy(rho, a) - renyi_entropy(rho, 1.0)),
            abs(trad_relative_entropy(rho, th, a) - trad_relative_entropy(rho, th, 1.0)),
            abs(sandwiched_relative_entropy(rho, th, a) - sandwiched_relative_entropy(rho, th, 1.0)),
        )
    return Check("alpha->1 reduction", worst <= 1e-3, f"max deviation {worst:.2e}")


def _carnot(rng):
    worst = 0.0
    mix = coherent_mixing_factory(qubit_rotation(np.pi / 5), 0.2)
    for a in (0.5, 2.0):
        for fac in (None, mix):
            rep = run_carnot_cycle(StateFamily(qubit_gap_family(), a, fac), 2.0, 1.0, 2.0, 1.0, 50)
            worst = max(worst, abs(rep.efficiency - 0.5))
    return Check("carnot efficiency", worst <= 1e-6, f"max |eta - 1/2| {worst:.2e}")


def _first_law(rng):
    fam = StateFamily(qubit_gap_family(), 2.0)
    res = [abs(path_first_law(fam, np.linspace(1.0, 2.0, n + 1), 1.0)[3]) for n in (50, 100)]
    ratio = res[0] / res[1]
    return Check("first-law convergence", 1.7 <= ratio <= 2.3, f"halving ratio {ratio:.3f}")


def _dpi(rng):
    th = solve_thermal_state(np.diag([0.0, 1.0]), 0.8, 2.0)
    bad = 0
    for seed in range(20):
        ch = random_thermal_fixing_channel(th.state, seed)
        rho = random_density(2, rng)
        bad += sum(not dpi_check(ch, rho, th.state, a, "traditional").monotone for a in (0.5, 1.5, 2.0))
        bad += sum(not dpi_check(ch, rho, th.state, a, "sandwiched").monotone for a in (0.5, 3.0, 10.0))
    return Check("data processing", bad == 0, f"{bad} violations")


def _clausius(rng):
    dq = 0.001
    recs = clausius_sweep(0.7, 1.0, dq)
    worst = min(min(r.clausius_gaps()) for r in recs)
    same = clausius_csv(recs) == clausius_csv(clausius_sweep(0.7, 1.0, dq))
    return Check("clausius", worst >= -10 * dq**2 and same, f"min gap {worst:.2e}")


def _rotated_pair(rng):
    worst = 0.0
    for a in (0.5, 2.0, 3.0):
        ref = rotated_pair_closed_form(0.7, 1.0, 1e-4, a)
        num = rotated_pair_first_order(0.7, 1.0, 1e-4, a)
        worst = max(worst, *(abs(x - y) / abs(x) for x, y in zip(ref, num)))
    return Check("closed-form variation", worst <= 1e-6, f"max relative error {worst:.2e}")


CHECKS = (_identities, _minimality, _gibbs_limit, _carnot, _first_law, _dpi, _clausius, _rotated_pair)


def run_selftest(seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for check in CHECKS:
        try:
            out.append(check(rng))
        except Exception as exc:  # a raised error counts as a failed check
            out.append(Check(check.__name__.strip("_"), False, f"{type(exc).__name__}: {exc}"))
    return out
