"""Free energies of nonequilibrium states.

Two routes define the free energy of an arbitrary state ``rho_N`` relative to
the thermal state at the bath temperature:

* traditional: ``F_T + T (D_alpha(rho_N || rho_T) - Delta'_alpha)``
* sandwiched:  ``F_T + T (D~_alpha(rho_N || rho_T) - Delta~'_alpha)``

Both are evaluated here from their relative-entropy definitions and compared
with the bare form ``U_N - T S_alpha(rho_N)`` rather than assumed equal to it.
"""

from dataclasses import dataclass

import numpy as np

from .measures import (
    delta_terms,
    renyi_entropy,
    renyi_internal_energy,
    sandwiched_relative_entropy,
    trad_relative_entropy,
)
from .operators import random_density


@dataclass(frozen=True)
class FreeEnergyReport:
    f_tilde: float
    f_sand: float
    f_form: float
    f_equilibrium: float
    gap: float
    # ingredients, kept for the gap decomposition
    d_trad: float
    d_sand: float
    delta_prime_trad: float
    delta_prime_sand: float


def traditional_free_energy(rho_N, th):
    """Free energy of ``rho_N`` through the traditional Rényi divergence."""
    D = trad_relative_entropy(rho_N, th, th.alpha)
    dp = delta_terms(rho_N, th, "traditional").delta_prime
    return th.F + (D - dp) / th.beta


def sandwiched_free_energy(rho_N, th):
    """Free energy of ``rho_N`` through the sandwiched Rényi divergence."""
    D = sandwiched_relative_entropy(rho_N, th, th.alpha)
    dp = delta_terms(rho_N, th, "sandwiched").delta_prime
    return th.F + (D - dp) / th.beta


def free_energy_report(rho_N, th):
    """All free energies of ``rho_N`` at the temperature of ``th``.

    Raises ``ValueError`` at infinite temperature (``beta == 0``), where the
    free energies are not defined. Support and cutoff errors from the
    divergences propagate.
    """
    if th.beta == 0:
        raise ValueError("free energies need a finite temperature")
    T = 1.0 / th.beta
    a = th.alpha
    d_trad = trad_relative_entropy(rho_N, th, a)
    d_sand = sandwiched_relative_entropy(rho_N, th, a)
    dp_trad = delta_terms(rho_N, th, "traditional").delta_prime
    dp_sand = delta_terms(rho_N, th, "sandwiched").delta_prime
    f_tilde = th.F + (d_trad - dp_trad) / th.beta
    f_sand = th.F + (d_sand - dp_sand) / th.beta
    f_form = renyi_internal_energy(rho_N, th.H, a) - T * renyi_entropy(rho_N, a)
    return FreeEnergyReport(
        f_tilde=f_tilde, f_sand=f_sand, f_form=f_form, f_equilibrium=th.F,
        gap=f_form - th.F, d_trad=d_trad, d_sand=d_sand,
        delta_prime_trad=dp_trad, delta_prime_sand=dp_sand,
    )


@dataclass(frozen=True)
class MinimalityCertificate:
    min_gap: float
    argmin: np.ndarray
    samples: int


def minimality_certificate(th, samples, seed, sampler=None):
    """Smallest free-energy gap ``F(rho) - F_T`` over random states.

    Parameters
    ----------
    th : ThermalState
    samples : int
        Number of states drawn.
    seed : int
        Seed for ``numpy.random.default_rng``.
    sampler : callable, optional
        ``sampler(rng) -> density matrix``. Defaults to the Hilbert-Schmidt
        ensemble of dimension ``th.dim``.

    Returns
    -------
    MinimalityCertificate
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    if sampler is None:
        d = th.dim

        def sampler(r):
            return random_density(d, r)

    T = 1.0 / th.beta
    best, arg = np.inf, None
    for _ in range(samples):
        rho = sampler(rng)
        gap = renyi_internal_energy(rho, th.H, th.alpha) - T * renyi_entropy(rho, th.alpha) - th.F
        if gap < best:
            best, arg = gap, rho
    return MinimalityCertificate(float(best), arg, samples)
