"""Clausius-inequality experiments on a qubit with noncommuting states.

The setting is ``H = E1 |1><1|`` with thermal state ``diag(p0, p1)``; the
inverse temperature is fixed by :func:`~renyitherm.thermal.qubit_beta_closed_form`.
Variations are produced either by a thermal-state-preserving measure-and-
prepare map (:func:`clausius_sweep`) or by an explicit rotated-eigenbasis
state pair (:func:`rotated_pair_states`).
"""

import csv
import io
from dataclasses import astuple, dataclass

import numpy as np

from .channels import apply_channel, qubit_fixing_map
from .errors import CutoffViolation, SupportViolation
from .measures import (
    check_alpha,
    delta_terms,
    renyi_entropy,
    renyi_internal_energy,
    sandwiched_relative_entropy,
    trad_relative_entropy,
)
from .operators import spectral_power
from .thermal import qubit_beta_closed_form, solve_thermal_state

DEFAULT_ETA = np.array([[0.4, 0.2], [0.2, 0.6]])
DEFAULT_ALPHAS = tuple(np.round(np.arange(1, 51) * 0.1, 10))


@dataclass(frozen=True)
class ClausiusRecord:
    """First-order variations for one Rényi order.

    ``beta_dQ1`` and ``beta_dQ2`` weight ``d rho^alpha`` with ``H - U_N`` and
    ``H - U_T``; ``beta_dU`` is the escort-energy change. Entries that hit a
    support or cutoff failure are ``nan``.
    """

    alpha: float
    dS: float
    beta_dQ1: float
    beta_dQ2: float
    beta_dU: float
    dD_trad: float
    dD_sand: float
    dDeltaTildePrime: float

    def clausius_gaps(self):
        """``dS - beta dQ_i`` for the three heat expressions."""
        return (self.dS - self.beta_dQ1, self.dS - self.beta_dQ2, self.dS - self.beta_dU)


def qubit_hamiltonian(E1):
    return np.diag([0.0, float(E1)])


def coherent_qubit_state(p0, dq):
    """``diag(p0 + dq, p1 - dq)`` plus ``dq`` on both off-diagonals."""
    p1 = 1.0 - p0
    return np.array([[p0 + dq, dq], [dq, p1 - dq]], dtype=complex)


def _guard(fn):
    try:
        return fn()
    except (SupportViolation, CutoffViolation):
        return np.nan


def variation_record(rho, rho_new, th):
    """:class:`ClausiusRecord` for the change ``rho -> rho_new`` against thermal state ``th``."""
    a, beta, H = th.alpha, th.beta, th.H
    ra = spectral_power(rho, a)
    tr = float(np.trace(ra).real)
    d_ra = spectral_power(rho_new, a) - ra
    U_N = renyi_internal_energy(rho, H, a)
    eye = np.eye(H.shape[0])

    def heat(ref):
        return float(np.einsum("ij,ji->", d_ra, H - ref * eye).real / tr)

    dS = renyi_entropy(rho_new, a) - renyi_entropy(rho, a)
    dU = renyi_internal_energy(rho_new, H, a) - U_N
    dD_trad = _guard(lambda: trad_relative_entropy(rho_new, th, a) - trad_relative_entropy(rho, th, a))
    dD_sand = _guard(
        lambda: sandwiched_relative_entropy(rho_new, th, a) - sandwiched_relative_entropy(rho, th, a)
    )
    # from dD~ = -dS + beta dU + dDelta~'
    dDp = dD_sand + dS - beta * dU
    return ClausiusRecord(a, dS, beta * heat(U_N), beta * heat(th.U), beta * dU, dD_trad, dD_sand, dDp)


def qubit_clausius_setup(p0, E1, alpha, eta=DEFAULT_ETA):
    """Thermal state, map and inverse temperature of the qubit experiment for one order."""
    beta = qubit_beta_closed_form(p0, E1, alpha)
    th = solve_thermal_state(qubit_hamiltonian(E1), beta, alpha)
    return th, qubit_fixing_map(th.state, eta)


def clausius_sweep(p0, E1, dq, eta=DEFAULT_ETA, alphas=DEFAULT_ALPHAS):
    """Variations under the qubit thermal-preserving map for each order in ``alphas``.

    Parameters
    ----------
    p0 : float
        Ground-state population of the thermal state.
    E1 : float
        Excited-level energy.
    dq : float
        Displacement of the nonequilibrium state.
    eta : array_like
        State prepared on outcome ``|1>``.
    alphas : sequence of float

    Returns
    -------
    list of ClausiusRecord
    """
    rho = coherent_qubit_state(p0, dq)
    out = []
    for a in alphas:
        th, ch = qubit_clausius_setup(p0, E1, a, eta)
        out.append(variation_record(rho, apply_channel(ch, rho), th))
    return out


CLAUSIUS_COLUMNS = ("alpha", "dS", "beta_dQ1", "beta_dQ2", "beta_dU", "dD_trad", "dD_sand", "dDeltaTildePrime")


def clausius_csv(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CLAUSIUS_COLUMNS)
    for r in records:
        w.writerow(["nan" if np.isnan(v) else repr(float(v)) for v in astuple(r)])
    return buf.getvalue()


def rotated_basis(dq):
    """Orthonormal rotated basis ``e0 ~ (1+dq, dq)``, ``e1 ~ (-dq, 1+dq)`` as columns."""
    n = np.sqrt((1 + dq) ** 2 + dq**2)
    return np.array([[1 + dq, -dq], [dq, 1 + dq]], dtype=complex) / n


def rotated_pair_states(p0, dq):
    """``(rho_N, rho_N + drho)`` with eigenvalues ``p0 + 2dq``, ``p0 + dq`` in the rotated basis."""
    E = rotated_basis(dq)
    p1 = 1.0 - p0

    def state(s):
        return (E * np.array([p0 + s, p1 - s])) @ E.conj().T

    return state(2 * dq), state(dq)


def rotated_pair_closed_form(p0, E1, dq, alpha):
    """First-order entropy and heat changes of the rotated-basis pair.

    Returns ``(dS, beta_dQ)`` with
    ``dS = alpha dq (p1^(a-1) - p0^(a-1)) / ((1-a)(p0^a + p1^a))`` and
    ``beta_dQ`` equal to it, so ``dS - beta_dQ`` vanishes at first order.
    """
    alpha = check_alpha(alpha)
    if alpha == 1.0:
        raise ValueError("the closed form needs alpha != 1")
    p1 = 1.0 - p0
    dS = alpha * dq * (p1 ** (alpha - 1) - p0 ** (alpha - 1)) / ((1 - alpha) * (p0**alpha + p1**alpha))
    # unsimplified heat change, so the equality with dS is a check and not a tautology
    beta = qubit_beta_closed_form(p0, E1, alpha)
    beta_dQ = beta * alpha * dq * E1 * (p0 * p1) ** (alpha - 1) / (p0**alpha + p1**alpha) ** 2
    return dS, beta_dQ


def rotated_pair_variation(p0, E1, dq, alpha):
    """Raw numerical ``(dS, beta dU)`` of the rotated-basis pair (second-order terms included)."""
    alpha = check_alpha(alpha)
    H = qubit_hamiltonian(E1)
    beta = qubit_beta_closed_form(p0, E1, alpha)
    rho, rho_new = rotated_pair_states(p0, dq)
    dS = renyi_entropy(rho_new, alpha) - renyi_entropy(rho, alpha)
    dU = renyi_internal_energy(rho_new, H, alpha) - renyi_internal_energy(rho, H, alpha)
    return dS, beta * dU


def rotated_pair_first_order(p0, E1, dq, alpha):
    """First-order part of :func:`rotated_pair_variation` by five-point Richardson extrapolation.

    Combines the odd parts at ``dq`` and ``2 dq`` so that the remaining error
    is fifth order in ``dq``.
    """
    def odd(h):
        a, b = rotated_pair_variation(p0, E1, h, alpha), rotated_pair_variation(p0, E1, -h, alpha)
        return np.subtract(a, b)

    return tuple((8 * odd(dq) - odd(2 * dq)) / 12)


def rotated_pair_record(p0, E1, dq, alpha):
    """:class:`ClausiusRecord` of the raw rotated-basis variation."""
    beta = qubit_beta_closed_form(p0, E1, alpha)
    th = solve_thermal_state(qubit_hamiltonian(E1), beta, alpha)
    rho, rho_new = rotated_pair_states(p0, dq)
    return variation_record(rho, rho_new, th)


def delta_tilde_prime_direct(rho, rho_new, th):
    """``Delta~'(rho_new) - Delta~'(rho)`` straight from the correction-term definition."""
    return delta_terms(rho_new, th, "sandwiched").delta_prime - delta_terms(rho, th, "sandwiched").delta_prime
