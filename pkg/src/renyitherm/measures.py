"""Rényi entropies, escort energies and relative entropies.

All logarithms are natural and ``k_B = 1``. ``alpha == 1`` is dispatched to
the von Neumann expressions explicitly rather than reached as a limit.
"""

from dataclasses import dataclass

import numpy as np

from .errors import CutoffViolation, SupportViolation
from .operators import STRICT_SUPPORT, TOL, _scalar_power, check_dims

# Tr[rho^a sigma^(1-a)] at or below this is treated as zero overlap
OVERLAP_TOL = 1e-14
# below this |alpha - 1| the logarithms are evaluated as log1p of an escort
# average, so the trace normalisation error (~1e-16) is not divided by alpha - 1
NEAR_ONE = 1e-3


def check_alpha(alpha):
    alpha = float(alpha)
    if not (np.isfinite(alpha) and alpha > 0):
        raise ValueError(f"Renyi order must be positive and finite, got {alpha}")
    return alpha


def _spectrum(rho):
    p, V = np.linalg.eigh(np.asarray(rho, dtype=complex))
    return np.clip(p, 0.0, None), V


def _reference(sigma):
    """Matrix and ``(eigenvalues, eigenvectors)`` of a reference state.

    A :class:`~renyitherm.thermal.ThermalState` supplies its exact spectrum;
    re-diagonalising its matrix would put ``~1e-16`` absolute error on tiny
    populations, which negative powers amplify.
    """
    eig = getattr(sigma, "spectrum", None)
    if eig is not None:
        return sigma.state, eig
    sigma = np.asarray(sigma, dtype=complex)
    return sigma, np.linalg.eigh(sigma)


def _positive_power(p, a):
    return np.where(p > 0, p, 0.0) ** a


def _near_one(alpha):
    return alpha != 1.0 and abs(alpha - 1.0) < NEAR_ONE


def _log_mean_exp(w, x):
    """``ln(sum w exp(x) / sum w)`` accurate when ``x`` is small."""
    w = np.asarray(w, dtype=float)
    keep = w > 0
    w, x = w[keep], np.asarray(x, dtype=float)[keep]
    return float(np.log1p(np.dot(w, np.expm1(x)) / w.sum()))


def _log_power_sum(y, a):
    """``ln sum y^a - ln sum y`` for nonnegative ``y``."""
    pos = y > 0
    return _log_mean_exp(y[pos], (a - 1.0) * np.log(y[pos]))


def renyi_entropy(rho, alpha):
    r"""Rényi entropy :math:`S_\alpha(\rho) = \ln(\mathrm{Tr}\rho^\alpha)/(1-\alpha)`.

    At ``alpha == 1`` the von Neumann entropy ``-Tr rho ln rho`` is returned
    (with ``0 ln 0 = 0``).
    """
    alpha = check_alpha(alpha)
    p = np.clip(np.linalg.eigvalsh(np.asarray(rho, dtype=complex)), 0.0, None)
    if alpha == 1.0:
        p = p[p > 0]
        return float(-np.sum(p * np.log(p)))
    if _near_one(alpha):
        return _log_power_sum(p, alpha) / (1.0 - alpha)
    return float(np.log(np.sum(_positive_power(p, alpha))) / (1.0 - alpha))


def von_neumann_entropy(rho):
    return renyi_entropy(rho, 1.0)


def renyi_internal_energy(rho, H, alpha):
    r"""Escort-weighted energy :math:`\mathrm{Tr}[\rho^\alpha H]/\mathrm{Tr}\rho^\alpha`."""
    alpha = check_alpha(alpha)
    check_dims(rho, H)
    p, V = _spectrum(rho)
    w = _positive_power(p, alpha)
    # diagonal of H in the eigenbasis of rho
    h = np.einsum("ji,jk,ki->i", V.conj(), np.asarray(H), V).real
    return float(np.dot(w, h) / np.sum(w))


def von_neumann_relative_entropy(rho, sigma, policy=STRICT_SUPPORT):
    """``Tr rho (ln rho - ln sigma)``.

    Raises :class:`SupportViolation` when ``supp(rho)`` is not contained in
    ``supp(sigma)`` (the divergence is infinite) unless ``policy`` says how
    to regularise.
    """
    sigma, (q, B) = _reference(sigma)
    check_dims(rho, sigma)
    p, A = _spectrum(rho)
    q = np.clip(q, 0.0, None)
    overlap = np.abs(A.conj().T @ B) ** 2
    mass = p @ overlap  # weight of rho on each eigenvector of sigma
    if policy.mode == "floor":
        logq = np.log(np.maximum(q, policy.eps))
    else:
        null = q <= TOL
        if policy.mode == "strict-support" and np.any(mass[null] > TOL):
            raise SupportViolation("rho is not supported inside sigma")
        logq = np.zeros_like(q)
        logq[~null] = np.log(q[~null])
    pos = p > 0
    return float(np.sum(p[pos] * np.log(p[pos])) - np.dot(mass, logq))


def trad_relative_entropy(rho, sigma, alpha, policy=STRICT_SUPPORT):
    r"""Traditional (Petz) Rényi divergence
    :math:`D_\alpha = \ln\mathrm{Tr}[\rho^\alpha\sigma^{1-\alpha}]/(\alpha-1)`.

    Parameters
    ----------
    rho, sigma : array_like
        Density matrices of equal dimension. ``sigma`` may also be a
        ``ThermalState``, whose exact spectrum is then used.
    alpha : float
        Rényi order; ``1`` dispatches to the von Neumann relative entropy.
    policy : PowerPolicy
        Applied to the power of ``sigma``. Under the default strict policy a
        singular ``sigma`` is refused for ``alpha > 1``.

    Raises
    ------
    SupportViolation
        Singular ``sigma`` under a strict policy, or vanishing overlap
        ``Tr[rho^a sigma^(1-a)] <= 1e-14`` (disjoint supports).
    """
    alpha = check_alpha(alpha)
    if alpha == 1.0:
        return von_neumann_relative_entropy(rho, sigma, policy)
    sigma, (q, B) = _reference(sigma)
    check_dims(rho, sigma)
    p, A = _spectrum(rho)
    overlap = np.abs(A.conj().T @ B) ** 2
    w = p[:, None] * overlap
    if _near_one(alpha) and np.all(q[np.any(w > 0, axis=0)] > TOL):
        live = q > TOL
        L = np.full(w.shape, -np.inf)
        L[:, live] = np.log(np.where(p > 0, p, 1.0))[:, None] - np.log(q[live])[None, :]
        return _log_mean_exp(w.ravel(), (alpha - 1.0) * L.ravel()) / (alpha - 1.0)
    Q = _positive_power(p, alpha) @ overlap @ _scalar_power(q, 1.0 - alpha, policy)
    if Q <= OVERLAP_TOL:
        raise SupportViolation(f"Tr[rho^a sigma^(1-a)] = {Q:.3e} vanishes")
    return float(np.log(Q) / (alpha - 1.0))


def sandwiched_relative_entropy(rho, sigma, alpha, policy=STRICT_SUPPORT):
    r"""Sandwiched Rényi divergence
    :math:`\tilde D_\alpha = \ln\mathrm{Tr}[(\sigma^{s}\rho\sigma^{s})^\alpha]/(\alpha-1)`
    with :math:`s = (1-\alpha)/2\alpha`.

    Same conventions and errors as :func:`trad_relative_entropy`.
    """
    alpha = check_alpha(alpha)
    if alpha == 1.0:
        return von_neumann_relative_entropy(rho, sigma, policy)
    sigma, (q, B) = _reference(sigma)
    check_dims(rho, sigma)
    if _near_one(alpha) and q[0] > TOL:
        logq = np.log(q)
        X = (B * np.exp((1.0 - alpha) / (2.0 * alpha) * logq)) @ B.conj().T
        return _near_one_sandwich(X, rho, B, (1.0 - alpha) / alpha * logq, alpha) / (alpha - 1.0)
    s = _scalar_power(q, (1.0 - alpha) / (2.0 * alpha), policy)
    X = (B * s) @ B.conj().T
    Q = _sandwich_trace(X, rho, alpha)
    if Q <= OVERLAP_TOL:
        raise SupportViolation(f"sandwiched trace {Q:.3e} vanishes")
    return float(np.log(Q) / (alpha - 1.0))


def _near_one_sandwich(X, rho, B, log_x2, alpha):
    """``ln Tr[(X rho X)^alpha] - ln Tr rho`` near ``alpha = 1``, where ``X^2 = B diag(exp(log_x2)) B^H``.

    Split as ``ln Tr[X^2 rho]`` (a weighted mean over the eigenbasis of ``X``)
    plus the escort term of the eigenvalues of ``X rho X``.
    """
    mass = np.einsum("ji,jk,ki->i", B.conj(), np.asarray(rho), B).real
    first = _log_mean_exp(mass, log_x2)
    Y = X @ np.asarray(rho) @ X
    y = np.clip(np.linalg.eigvalsh((Y + Y.conj().T) / 2), 0.0, None)
    return first + _log_power_sum(y, alpha)


def _sandwich_trace(X, rho, alpha):
    """``Tr[(X rho X)^alpha]`` for Hermitian ``X``."""
    Y = X @ np.asarray(rho) @ X
    y = np.clip(np.linalg.eigvalsh((Y + Y.conj().T) / 2), 0.0, None)
    return float(np.sum(_positive_power(y, alpha)))


@dataclass(frozen=True)
class DeltaTerms:
    """Correction terms linking a state's entropy to the thermal entropy.

    ``delta_prime`` is always ``beta (U_T - U_N) + delta``.
    """

    delta: float
    delta_prime: float
    variant: str


def delta_terms(rho_N, th, variant="traditional"):
    """Correction terms of ``rho_N`` relative to the thermal state ``th``.

    ``traditional``
        ``ln[1 + (alpha-1) beta (U_N - U_T)] / (alpha - 1)``
    ``sandwiched``
        ``ln[Tr(A^{1/2a} rho_N A^{1/2a})^a / Tr rho_N^a] / (alpha - 1)``
        with ``A = 1 - (1-alpha) beta (H - U_T)``.

    At ``alpha == 1`` both reduce to ``beta (U_N - U_T)``, so ``delta_prime``
    vanishes there while ``delta`` in general does not.

    Raises
    ------
    CutoffViolation
        The log argument is not positive (traditional) or ``A`` has a
        negative eigenvalue (sandwiched).
    """
    if variant not in ("traditional", "sandwiched"):
        raise ValueError(f"unknown variant {variant!r}")
    a, beta = th.alpha, th.beta
    U_N = renyi_internal_energy(rho_N, th.H, a)
    if a == 1.0:
        # common limit of both variants; makes delta_prime vanish
        delta = beta * (U_N - th.U)
    elif variant == "traditional":
        arg = 1.0 + (a - 1.0) * beta * (U_N - th.U)
        if arg <= 0:
            raise CutoffViolation(f"log argument {arg:.3e} is not positive")
        delta = float(np.log1p((a - 1.0) * beta * (U_N - th.U)) / (a - 1.0))
    elif _near_one(a):
        e, V = np.linalg.eigh(np.asarray(th.H))
        shift = -(1.0 - a) * beta * (e - th.U)
        if shift[0] <= -1.0:
            raise CutoffViolation("operator A has a nonpositive eigenvalue")
        log_f = np.log1p(shift)
        X = (V * np.exp(log_f / (2.0 * a))) @ V.conj().T
        num = _near_one_sandwich(X, rho_N, V, log_f / a, a)
        p = np.clip(np.linalg.eigvalsh(np.asarray(rho_N, dtype=complex)), 0.0, None)
        delta = (num - _log_power_sum(p, a)) / (a - 1.0)
    else:
        f, V = np.linalg.eigh(np.asarray(th.A))
        if f[0] < -TOL:
            raise CutoffViolation(f"operator A has eigenvalue {f[0]:.3e} < 0")
        X = (V * _positive_power(np.clip(f, 0.0, None), 1.0 / (2.0 * a))) @ V.conj().T
        num = _sandwich_trace(X, rho_N, a)
        p = np.clip(np.linalg.eigvalsh(np.asarray(rho_N, dtype=complex)), 0.0, None)
        den = float(np.sum(_positive_power(p, a)))
        if num <= OVERLAP_TOL:
            raise SupportViolation("rho_N has no weight on the support of A")
        delta = float(np.log(num / den) / (a - 1.0))
    return DeltaTerms(delta, beta * (th.U - U_N) + delta, variant)
