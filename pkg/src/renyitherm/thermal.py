"""Self-consistent Rényi thermal states.

The maximum-Rényi-entropy state at fixed escort energy has the power-law form

    rho_T = A^{1/(1-alpha)} / Z,   A = 1 - (1-alpha) beta (H - U_T),

where ``U_T`` must equal the escort energy of ``rho_T`` itself. For a given
``beta`` this is a scalar fixed-point problem in ``U`` on the spectral hull of
``H``; see :func:`solve_thermal_state`.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from .errors import InfeasibleConstraint, MultipleRoots, NoConvergence
from .measures import check_alpha
from .operators import TOL, as_hermitian, validate_density

SCAN_POINTS = 64
DAMPING = 0.5
MAX_ITER = 10_000


@dataclass(frozen=True)
class ThermalState:
    """Converged Rényi thermal state of ``H`` at inverse temperature ``beta``.

    Attributes
    ----------
    state : ndarray
        The density matrix.
    H : ndarray
        Hamiltonian.
    alpha, beta : float
    Z : float
        Normalisation ``Tr A^{1/(1-alpha)}``. At ``alpha == 1`` this is the
        continuous limit ``sum exp(-beta (e_i - U))`` so that ``S == ln Z``
        holds for every order.
    U : float
        Self-consistent escort energy.
    S : float
        Rényi entropy of ``state``.
    F : float
        Equilibrium free energy ``U - S / beta`` (``-inf`` at ``beta == 0``).
    A : ndarray
        The operator ``1 - (1-alpha) beta (H - U)``; identity at ``alpha == 1``.
    cutoff_applied : bool
        Whether some level was zeroed by the positivity cutoff (``alpha < 1``).
    energies, populations : ndarray
        Spectrum of ``H`` and the matching occupation probabilities.
    eigenvectors : ndarray
        Eigenbasis of ``H`` (columns), shared by ``state``.
    """

    state: np.ndarray
    H: np.ndarray
    alpha: float
    beta: float
    Z: float
    U: float
    S: float
    F: float
    A: np.ndarray
    cutoff_applied: bool
    energies: np.ndarray
    populations: np.ndarray
    # d * p_i - 1, evaluated without cancellation; used for entropy differences
    population_excess: np.ndarray
    eigenvectors: np.ndarray

    @property
    def spectrum(self):
        """``(populations, eigenvectors)``; exact, unlike a re-diagonalisation of ``state``."""
        return self.populations, self.eigenvectors

    @property
    def T(self):
        return np.inf if self.beta == 0 else 1.0 / self.beta

    @property
    def dim(self):
        return self.state.shape[0]


def _log_weights(e, U, beta, alpha):
    """Log of the unnormalised populations ``f_i^{1/(1-alpha)}`` (``-inf`` where cut off)."""
    shift = -(1.0 - alpha) * beta * (e - U)
    f = 1.0 + shift
    # log1p keeps ln f accurate when alpha is within rounding of 1
    logf = np.where(f > 0, np.log1p(np.where(f > 0, shift, 0.0)), -np.inf)
    return logf / (1.0 - alpha), f


def _fixed_point_residual(U, e, beta, alpha):
    """Escort mean energy at trial ``U`` minus ``U``; vectorised over ``U``."""
    U = np.asarray(U, dtype=float)
    scalar = U.ndim == 0
    l, _ = _log_weights(e[None, :], U[..., None], beta, alpha)
    lw = alpha * l
    lw = lw - lw.max(axis=-1, keepdims=True)
    w = np.exp(lw)
    r = (w @ e) / w.sum(axis=-1) - U
    return float(r[0]) if scalar else r


def _binomial_remainder(x, alpha):
    """``(1+x)^alpha - 1 - alpha x`` (or ``(1+x) ln(1+x) - x`` at ``alpha == 1``).

    The linear term sums to zero over a normalised distribution, so dropping
    it removes rounding noise that would otherwise swamp second-order
    differences. Small ``|x|`` uses the binomial series.
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-2
    out = np.empty_like(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = x[~small]
        if alpha == 1.0:
            out[~small] = np.where(xs > -1.0, (1.0 + xs) * np.log1p(xs), 0.0) - xs
        else:
            # split as (1+x)((1+x)^(a-1) - 1) + (1-a)x; both terms stay accurate near alpha = 1
            # a cut-off level (x = -1) contributes alpha - 1
            out[~small] = np.where(
                xs > -1.0, (1.0 + xs) * np.expm1((alpha - 1.0) * np.log1p(xs)) + (1.0 - alpha) * xs, alpha - 1.0
            )
    xs = x[small]
    acc = np.zeros_like(xs)
    if alpha == 1.0:
        for k in range(13, 1, -1):
            acc = acc * xs + (-1.0) ** k / (k * (k - 1))
    else:
        coef = [1.0, alpha]
        for k in range(2, 14):
            coef.append(coef[-1] * (alpha - k + 1) / k)
        for c in coef[:1:-1]:
            acc = acc * xs + c
    out[small] = acc * xs * xs
    return out


def _entropy_deficit(x, alpha):
    """``ln d - S_alpha`` from the relative populations ``x_i = d p_i - 1``."""
    m = np.mean(_binomial_remainder(x, alpha))
    if alpha == 1.0:
        return float(m)
    return float(np.log1p(m) / (alpha - 1.0))


def _escort_shift(x, alpha):
    """``d * escort_i - 1`` for relative populations ``x``; escort weights are ``p^alpha`` normalised."""
    if alpha == 1.0:
        return np.asarray(x, dtype=float)
    g = _binomial_remainder(x, alpha)
    m = np.mean(g)
    return (alpha * x + g - m) / (1.0 + m)


def _relative_populations(l):
    lmax = np.max(l)
    with np.errstate(invalid="ignore"):
        L = lmax + np.log1p(np.mean(np.expm1(l - lmax)))
        return np.expm1(l - L)


def _find_roots(e, beta, alpha, scan_points):
    spread = e[-1] - e[0]
    lo, hi = e[0], e[-1]
    if alpha > 1.0:
        cap = e[0] + 1.0 / ((alpha - 1.0) * beta)
        if cap <= lo:
            raise InfeasibleConstraint("no energy keeps every level of A positive")
        if cap <= hi:
            hi = cap - 1e-12 * (cap - lo)
    grid = np.linspace(lo, hi, scan_points)
    vals = _fixed_point_residual(grid, e, beta, alpha)
    tol = 1e-12 * spread
    roots = [u for u, v in zip(grid, vals) if v == 0.0]
    for k in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        u = brentq(
            _fixed_point_residual, grid[k], grid[k + 1], args=(e, beta, alpha),
            xtol=1e-16 * spread, rtol=4 * np.finfo(float).eps, maxiter=500,
        )
        roots.append(_polish(u, e, beta, alpha, tol))
    if not roots:
        roots.append(_polish(0.5 * (lo + hi), e, beta, alpha, tol))
    distinct = []
    for u in sorted(roots):
        if not distinct or abs(u - distinct[-1]) > 1e-9 * spread:
            distinct.append(u)
    return distinct


def _polish(U, e, beta, alpha, tol):
    """Damped fixed-point iteration; a no-op when ``U`` already satisfies ``tol``."""
    for _ in range(MAX_ITER):
        r = float(_fixed_point_residual(U, e, beta, alpha))
        if abs(r) <= tol:
            return U
        U = U + DAMPING * r
    raise NoConvergence(f"fixed point not reached in {MAX_ITER} iterations (residual {r:.3e})")


def solve_thermal_state(H, beta, alpha, scan_points=SCAN_POINTS):
    """Solve for the Rényi thermal state of ``H`` at inverse temperature ``beta``.

    Works in the eigenbasis of ``H``. The self-consistent energy is bracketed
    by scanning the fixed-point residual on ``scan_points`` points of the
    spectral hull, then refined by Brent's method; a damped iteration takes
    over if the refined root misses the ``1e-12 * spread`` residual target.
    For ``alpha < 1`` levels with ``A <= 0`` are cut off (zero population).

    Raises
    ------
    MultipleRoots
        The scan found distinct self-consistent energies.
    NoConvergence, InfeasibleConstraint
    """
    H = as_hermitian(H)
    alpha = check_alpha(alpha)
    beta = float(beta)
    if not (beta >= 0 and np.isfinite(beta)):
        raise ValueError(f"beta must be finite and non-negative, got {beta}")
    e, V = np.linalg.eigh(H)
    d = len(e)
    spread = e[-1] - e[0]

    if beta == 0.0 or spread <= TOL * max(1.0, np.abs(e).max()):
        return _assemble(H, e, V, alpha, beta, float(np.mean(e)), np.zeros(d), np.ones(d))

    if alpha == 1.0:
        l = -beta * (e - e[0])
        p = np.exp(l - logsumexp(l))
        U = float(p @ e)
        return _assemble(H, e, V, alpha, beta, U, -beta * (e - U), np.ones(d))

    roots = _find_roots(e, beta, alpha, scan_points)
    if len(roots) > 1:
        raise MultipleRoots(f"{len(roots)} self-consistent energies found", roots)
    U = roots[0]
    l, f = _log_weights(e, U, beta, alpha)
    return _assemble(H, e, V, alpha, beta, U, l, f)


def _assemble(H, e, V, alpha, beta, U, l, f):
    logZ = float(logsumexp(l))
    p = np.exp(l - logZ)
    x = _relative_populations(l)
    state = validate_density((V * p) @ V.conj().T)
    A = (V * f) @ V.conj().T
    A.setflags(write=False)
    S = float(np.log(len(e)) - _entropy_deficit(x, alpha))
    F = -np.inf if beta == 0 else U - S / beta
    cutoff = bool(alpha < 1.0 and np.any(f <= 0))
    return ThermalState(
        state=state, H=H, alpha=alpha, beta=beta, Z=float(np.exp(logZ)), U=float(U),
        S=S, F=float(F), A=A, cutoff_applied=cutoff, energies=e, populations=p,
        population_excess=x, eigenvectors=V,
    )


def gibbs_state(H, beta):
    """Plain Gibbs state ``exp(-beta H) / Tr exp(-beta H)``."""
    H = as_hermitian(H)
    e, V = np.linalg.eigh(H)
    l = -beta * e
    p = np.exp(l - logsumexp(l))
    return validate_density((V * p) @ V.conj().T)


def qubit_beta_closed_form(p0, E1, alpha):
    r"""Inverse temperature at which ``diag(p0, 1-p0)`` is thermal for ``H = E1 |1><1|``.

    .. math::
        \beta = \frac{(p_0^\alpha + p_1^\alpha)(p_0^{1-\alpha} - p_1^{1-\alpha})}{E_1(1-\alpha)}

    with the Gibbs value ``ln(p0/p1)/E1`` at ``alpha == 1``.
    """
    alpha = check_alpha(alpha)
    p1 = 1.0 - p0
    if alpha == 1.0:
        return float(np.log(p0 / p1) / E1)
    return float((p0**alpha + p1**alpha) * (p0 ** (1 - alpha) - p1 ** (1 - alpha)) / (E1 * (1 - alpha)))


def beta_consistency_check(th, rel_step=1e-5):
    """Central finite-difference estimate of ``dS/dU`` along the thermal family.

    Solves at ``beta (1 +/- rel_step)`` and returns ``Delta S / Delta U``, which
    should reproduce ``th.beta``. Entropy differences are formed from the
    relative populations so that they survive the near-infinite-temperature
    regime where ``S`` is within ``1e-12`` of ``ln d``.
    """
    hi = solve_thermal_state(th.H, th.beta * (1 + rel_step), th.alpha)
    lo = solve_thermal_state(th.H, th.beta * (1 - rel_step), th.alpha)
    shift = _escort_shift(hi.population_excess, th.alpha) - _escort_shift(lo.population_excess, th.alpha)
    dU = float(np.mean(hi.energies * shift))
    if dU == 0.0:
        raise ValueError("energy does not vary with beta (degenerate Hamiltonian)")
    dS = _entropy_deficit(lo.population_excess, th.alpha) - _entropy_deficit(hi.population_excess, th.alpha)
    return dS / dU
