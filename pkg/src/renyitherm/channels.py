"""CPTP channels in Kraus form and thermal-state-preserving constructions."""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    FixedPointMismatch,
    NotCPTP,
    NotHermitian,
    NotPSD,
    TraceNotOne,
)
from .measures import sandwiched_relative_entropy, trad_relative_entropy
from .operators import TOL, random_density, trace_norm, validate_density

CPTP_TOL = 1e-10


@dataclass(frozen=True)
class Channel:
    """Completely positive trace-preserving map ``X -> sum_i K_i X K_i^dagger``.

    ``fixes``, when given, is a state certified on construction to satisfy
    ``||channel(fixes) - fixes||_1 <= 1e-10``.
    """

    kraus: tuple
    fixes: np.ndarray = field(default=None, compare=False)

    def __post_init__(self):
        ks = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ks:
            raise NotCPTP("empty Kraus set")
        d = ks[0].shape[1]
        for k in ks:
            if k.ndim != 2 or k.shape != (d, d):
                raise DimensionMismatch(f"Kraus operator of shape {k.shape}, expected {(d, d)}")
            k.setflags(write=False)
        dev = np.max(np.abs(sum(k.conj().T @ k for k in ks) - np.eye(d)))
        if dev > CPTP_TOL:
            raise NotCPTP(f"sum K^dagger K deviates from identity by {dev:.3e}")
        object.__setattr__(self, "kraus", ks)
        if self.fixes is not None:
            err = trace_norm(_apply(ks, self.fixes) - self.fixes)
            if err > CPTP_TOL:
                raise FixedPointMismatch(f"channel moves the certified state by {err:.3e}")

    @property
    def dim(self):
        return self.kraus[0].shape[0]

    def __call__(self, rho):
        return apply_channel(self, rho)


def _apply(kraus, rho):
    rho = np.asarray(rho)
    return sum(k @ rho @ k.conj().T for k in kraus)


def apply_channel(ch, rho):
    """Apply ``ch`` and revalidate the output as a density matrix.

    Raises ``DimensionMismatch`` for a wrong-sized input and ``NotPSD`` if the
    output is not a state (which signals a broken Kraus set).
    """
    rho = np.asarray(rho)
    if rho.shape != (ch.dim, ch.dim):
        raise DimensionMismatch(f"state of shape {rho.shape} for a {ch.dim}-dim channel")
    return validate_density(_apply(ch.kraus, rho))


def identity_channel(d):
    return Channel((np.eye(d),))


def unitary_channel(U):
    return Channel((np.asarray(U, dtype=complex),))


def depolarizing_channel(d):
    """Completely depolarising channel ``X -> Tr(X) 1/d``."""
    ks = []
    for i in range(d):
        for j in range(d):
            k = np.zeros((d, d), dtype=complex)
            k[i, j] = 1 / np.sqrt(d)
            ks.append(k)
    return Channel(tuple(ks))


def dephasing_channel(basis):
    """Complete dephasing in the orthonormal ``basis`` (columns)."""
    B = np.asarray(basis, dtype=complex)
    return Channel(tuple(np.outer(B[:, i], B[:, i].conj()) for i in range(B.shape[1])))


def mixture(channels, weights, fixes=None):
    """Convex combination of channels; Kraus operators scaled by ``sqrt(w)``."""
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1) > TOL:
        raise ValueError("weights must form a probability vector")
    ks = tuple(np.sqrt(w) * k for ch, w in zip(channels, weights) if w > 0 for k in ch.kraus)
    return Channel(ks, fixes=fixes)


def measurement_basis(rho_T):
    """Eigenbasis used by measure-and-prepare maps fixing ``rho_T``.

    A diagonal ``rho_T`` keeps the computational basis (so ``prepared[i]``
    belongs to ``|i>``); otherwise eigenvectors by decreasing eigenvalue.
    """
    rho_T = np.asarray(rho_T)
    d = rho_T.shape[0]
    if np.max(np.abs(rho_T - np.diag(np.diag(rho_T)))) <= TOL:
        return np.diag(rho_T).real.copy(), np.eye(d, dtype=complex)
    w, V = np.linalg.eigh(rho_T)
    return w[::-1].copy(), V[:, ::-1].copy()


def build_measure_prepare_fixing(rho_T, prepared, basis=None):
    """Measure in the eigenbasis of ``rho_T``, prepare ``prepared[i]`` on outcome ``i``.

    The map ``X -> sum_i <i|X|i> prepared[i]`` fixes ``rho_T`` exactly when
    ``sum_i p_i prepared[i] == rho_T``.

    Parameters
    ----------
    rho_T : array_like
    prepared : sequence of array_like
        One state per basis vector.
    basis : array_like, optional
        Eigenbasis of ``rho_T`` as columns; see :func:`measurement_basis`.

    Raises
    ------
    NotPSD
        A prepared operator is not a valid state.
    FixedPointMismatch
        The prepared states do not average to ``rho_T``.
    """
    rho_T = validate_density(rho_T)
    if basis is None:
        p, B = measurement_basis(rho_T)
    else:
        B = np.asarray(basis, dtype=complex)
        p = np.einsum("ji,jk,ki->i", B.conj(), rho_T, B).real
    d = rho_T.shape[0]
    if len(prepared) != d:
        raise DimensionMismatch(f"need {d} prepared states, got {len(prepared)}")
    sigmas = []
    for s in prepared:
        try:
            sigmas.append(validate_density(s))
        except (NotHermitian, TraceNotOne) as exc:
            raise NotPSD(f"prepared operator is not a state: {exc}") from exc
    avg = sum(pi * s for pi, s in zip(p, sigmas))
    if np.max(np.abs(avg - rho_T)) > CPTP_TOL:
        raise FixedPointMismatch("prepared states do not average to the fixed state")
    ks = []
    for i, s in enumerate(sigmas):
        w, V = np.linalg.eigh(s)
        bra = B[:, i].conj()
        for wj, vj in zip(w, V.T):
            if wj > 0:
                ks.append(np.sqrt(wj) * np.outer(vj, bra))
    return Channel(tuple(ks), fixes=rho_T)


def qubit_fixing_map(rho_T, eta):
    """Qubit thermal-preserving map ``|0> -> tau, |1> -> eta`` with ``tau = (rho_T - p1 eta)/p0``."""
    p, B = measurement_basis(rho_T)
    tau = (np.asarray(rho_T) - p[1] * np.asarray(eta)) / p[0]
    return build_measure_prepare_fixing(rho_T, [tau, eta], basis=B)


def _perturbed_prepared(p, B, rng, max_tries=60):
    """Prepared states near the eigenprojectors that still average to ``rho_T``.

    Every outcome except the most likely one prepares a random mixture of its
    eigenprojector; the most likely outcome absorbs the difference. The
    mixing strength halves until that remainder is a valid state.
    """
    d = len(p)
    k = int(np.argmax(p))
    proj = [np.outer(B[:, i], B[:, i].conj()) for i in range(d)]
    rho_T = sum(pi * P for pi, P in zip(p, proj))
    s = rng.uniform(0.2, 1.0)
    noise = [random_density(d, rng) for _ in range(d)]
    for _ in range(max_tries):
        sig = [(1 - s) * proj[i] + s * noise[i] for i in range(d)]
        rest = rho_T - sum(p[i] * sig[i] for i in range(d) if i != k)
        sig[k] = rest / p[k]
        if np.linalg.eigvalsh(sig[k])[0] >= 0:
            return sig
        s /= 2
    return proj


def random_thermal_fixing_channel(rho_T, seed):
    """Seeded random channel with ``rho_T`` as a certified fixed point.

    A convex mixture of dephasing in the eigenbasis of ``rho_T``, a
    measure-and-prepare map with randomly perturbed prepared states, and the
    identity. Deterministic in ``seed``.
    """
    rho_T = validate_density(rho_T)
    rng = np.random.default_rng(seed)
    p, B = measurement_basis(rho_T)
    weights = rng.dirichlet(np.ones(3))
    prepared = _perturbed_prepared(p, B, rng)
    parts = [
        dephasing_channel(B),
        build_measure_prepare_fixing(rho_T, prepared, basis=B),
        identity_channel(rho_T.shape[0]),
    ]
    return mixture(parts, weights, fixes=rho_T)


@dataclass(frozen=True)
class DPIResult:
    before: float
    after: float
    monotone: bool


def dpi_check(ch, rho, sigma, alpha, variant="traditional", tol=1e-10):
    """Compare ``D(rho||sigma)`` with ``D(ch(rho)||ch(sigma))``.

    ``monotone`` is ``after <= before + tol``.
    """
    div = {"traditional": trad_relative_entropy, "sandwiched": sandwiched_relative_entropy}[variant]
    before = div(rho, sigma, alpha)
    after = div(apply_channel(ch, rho), apply_channel(ch, sigma), alpha)
    return DPIResult(before, after, bool(after <= before + tol))
