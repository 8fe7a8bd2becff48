"""Dense Hermitian operator calculus.

Operators are plain complex ``numpy`` arrays. The constructors in this module
(:func:`as_hermitian`, :func:`validate_density`) check the invariants once and
return read-only copies, so downstream code can trust its inputs without
re-validating on every call.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NegativeBase,
    NotHermitian,
    NotPSD,
    SupportViolation,
    TraceNotOne,
)

TOL = 1e-12


@dataclass(frozen=True)
class PowerPolicy:
    """How :func:`spectral_power` treats (near-)zero eigenvalues.

    ``"strict-support"`` refuses non-positive exponents on singular bases,
    ``"zero-extend"`` maps zero eigenvalues to zero for every exponent (a
    support-restricted power, as in the Moore-Penrose inverse), and
    ``"floor"`` lifts every eigenvalue below ``eps`` to ``eps`` first.
    """

    mode: str = "strict-support"
    eps: float = 0.0

    def __post_init__(self):
        if self.mode not in ("strict-support", "zero-extend", "floor"):
            raise ValueError(f"unknown power policy {self.mode!r}")
        if self.mode == "floor" and not self.eps > 0:
            raise ValueError("floor policy needs eps > 0")

    @classmethod
    def floor(cls, eps):
        return cls("floor", float(eps))


STRICT_SUPPORT = PowerPolicy("strict-support")
ZERO_EXTEND = PowerPolicy("zero-extend")


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def as_hermitian(M, tol=TOL):
    """Return ``M`` as a read-only complex Hermitian array.

    Raises
    ------
    NotHermitian
        If ``M`` is not square or ``max |M - M^dagger| > tol``.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise NotHermitian(f"expected a non-empty square matrix, got shape {M.shape}")
    dev = np.max(np.abs(M - M.conj().T))
    if dev > tol:
        raise NotHermitian(f"matrix deviates from its adjoint by {dev:.3e}")
    return _frozen((M + M.conj().T) / 2)


def validate_density(M, tol=TOL):
    """Validate a density matrix.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero and the state is
    renormalised; anything more negative is rejected.

    Raises
    ------
    NotHermitian, NotPSD, TraceNotOne
    """
    H = as_hermitian(M, tol)
    tr = np.trace(H).real
    if abs(tr - 1.0) > tol:
        raise TraceNotOne(f"trace is {tr!r}")
    w, V = np.linalg.eigh(H)
    if w[0] < -tol:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} is negative")
    if w[0] < 0:
        w = np.clip(w, 0.0, None)
        w /= w.sum()
        return _frozen((V * w) @ V.conj().T)
    return H


def spectral_power(M, p, policy=STRICT_SUPPORT):
    """Matrix power ``M**p`` through the eigendecomposition of Hermitian ``M``.

    Parameters
    ----------
    M : array_like
        Hermitian matrix. Eigenvalues below ``-1e-12`` are only accepted for
        integer ``p`` (where the power is unambiguous).
    p : float
        Exponent.
    policy : PowerPolicy
        Treatment of eigenvalues in ``[-1e-12, 1e-12]``; see
        :class:`PowerPolicy`.

    Raises
    ------
    SupportViolation
        ``p <= 0`` and ``M`` has a zero eigenvalue under ``strict-support``.
    NegativeBase
        A genuinely negative eigenvalue with non-integer ``p``.
    """
    M = np.asarray(M, dtype=complex)
    w, V = np.linalg.eigh(M)
    f = _scalar_power(w, float(p), policy)
    return (V * f) @ V.conj().T


def _scalar_power(w, p, policy):
    if policy.mode == "floor":
        if w[0] < -TOL:
            raise NegativeBase(f"eigenvalue {w[0]:.3e} below zero")
        return np.maximum(w, policy.eps) ** p
    if w[0] < -TOL:
        if p.is_integer():
            return w**p
        raise NegativeBase(f"eigenvalue {w[0]:.3e} below zero with non-integer power {p}")
    small = w <= TOL
    if p <= 0 and small.any():
        if policy.mode == "strict-support":
            raise SupportViolation(f"power {p} of a matrix with eigenvalue {w[0]:.3e}")
        out = np.zeros_like(w)
        out[~small] = w[~small] ** p
        return out
    # p > 0: zero (and clamped tiny negative) eigenvalues map to zero
    return np.where(w > 0, np.abs(w) ** p, 0.0)


def check_dims(*ops):
    shapes = {np.shape(o) for o in ops}
    if len(shapes) != 1:
        raise DimensionMismatch(f"operator shapes differ: {sorted(shapes)}")


def expectation(rho, O):
    """``Tr(rho O)`` as a real number; the imaginary residue is discarded."""
    check_dims(rho, O)
    val = np.einsum("ij,ji->", np.asarray(rho), np.asarray(O))
    return float(val.real)


def trace_norm(M):
    return float(np.sum(np.abs(np.linalg.eigvalsh(np.asarray(M, dtype=complex)))))


def trace_distance(rho, sigma):
    """Half the trace norm of ``rho - sigma``."""
    check_dims(rho, sigma)
    return 0.5 * trace_norm(np.asarray(rho) - np.asarray(sigma))


def maximally_mixed(d):
    return _frozen(np.eye(d) / d)


def pure_state(vec):
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return validate_density(np.outer(v, v.conj()))


def random_density(d, rng):
    """Hilbert-Schmidt random mixed state: ``G G^dagger / Tr`` with complex Gaussian ``G``."""
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    R = G @ G.conj().T
    return validate_density(R / np.trace(R).real)


def random_hermitian(d, rng, scale=1.0):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return as_hermitian(scale * (G + G.conj().T) / 2)


def random_unitary(d, rng):
    """Haar unitary via QR with the phase fix of Mezzadri."""
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diagonal(R) / np.abs(np.diagonal(R))
    return Q * ph
