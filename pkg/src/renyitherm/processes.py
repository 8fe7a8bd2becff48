"""Quasistatic processes: first-law ledgers, isotherms, adiabats, Carnot cycles.

Heat and work along a path are accumulated with forward differences whose
state-side factors are taken at the start of each step. The discretisation
error of that scheme is first order in the step size, which is what the
step-halving checks in the test-suite rely on.

Sign conventions: :class:`StrokeReport` follows the first law
``dU = heat + work`` (heat absorbed by, work done on the system), whereas
:class:`CycleReport` lists the work done *by* the system per stroke.
"""

import csv
import io
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .channels import Channel, apply_channel
from .errors import CycleNotClosed, LedgerMismatch, NoBracket, NonMonotone
from .free_energy import sandwiched_free_energy, traditional_free_energy
from .measures import check_alpha, renyi_entropy
from .operators import as_hermitian, check_dims, trace_distance
from .thermal import solve_thermal_state

CLOSURE_TOL = 1e-8
ADIABAT_TOL = 1e-12


@dataclass(frozen=True)
class HamiltonianFamily:
    """Hamiltonians ``H(gamma)`` over a closed control interval."""

    evaluate: Callable[[float], np.ndarray]
    gamma_range: tuple

    def __call__(self, gamma):
        lo, hi = self.gamma_range
        if not lo <= gamma <= hi:
            raise ValueError(f"gamma={gamma} outside {self.gamma_range}")
        return as_hermitian(self.evaluate(gamma))

    @classmethod
    def linear(cls, H0, H1, gamma_range):
        """``H(gamma) = H0 + gamma H1``."""
        H0, H1 = as_hermitian(H0), as_hermitian(H1)
        return cls(lambda g: H0 + g * H1, tuple(gamma_range))


def qubit_gap_family(gamma_range=(0.05, 20.0)):
    """``H(gamma) = gamma |1><1|``."""
    return HamiltonianFamily.linear(np.zeros((2, 2)), np.diag([0.0, 1.0]), gamma_range)


@dataclass(frozen=True)
class StateFamily:
    """Stationary states ``rho(gamma, T)`` of a Hamiltonian family.

    With no ``channel_factory`` the family is the Rényi thermal state. With
    one, ``channel_factory(gamma, T)`` is applied to that thermal state,
    giving a nonequilibrium (deformed) family.
    """

    hamiltonian: HamiltonianFamily
    alpha: float
    channel_factory: Optional[Callable[[float, float], Channel]] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))

    @property
    def kind(self):
        return "thermal" if self.channel_factory is None else "deformed"

    def thermal(self, gamma, T):
        return solve_thermal_state(self.hamiltonian(gamma), 1.0 / T, self.alpha)

    def __call__(self, gamma, T):
        return self.point(gamma, T).state

    def point(self, gamma, T):
        th = self.thermal(gamma, T)
        state = th.state if self.channel_factory is None else apply_channel(self.channel_factory(gamma, T), th.state)
        return _Point(gamma, T, th, state, self.alpha)


class _Point:
    """One evaluated point of a state family with cached escort quantities."""

    def __init__(self, gamma, T, th, state, alpha):
        self.gamma, self.T, self.th, self.state = gamma, T, th, state
        self.H = th.H
        p, V = np.linalg.eigh(state)
        w = np.where(p > 0, np.clip(p, 0, None), 0.0) ** alpha
        self.rho_alpha = (V * w) @ V.conj().T
        self.trace_alpha = float(w.sum())
        self.U = float(np.einsum("ij,ji->", self.rho_alpha, self.H).real / self.trace_alpha)
        self.S = renyi_entropy(state, alpha)

    def free_energy(self, route):
        if route == "traditional":
            return traditional_free_energy(self.state, self.th)
        if route == "sandwiched":
            return sandwiched_free_energy(self.state, self.th)
        raise ValueError(f"unknown route {route!r}")


def coherent_mixing_factory(unitary, strength):
    """Channel factory ``rho -> (1-s) rho + s V rho V^dagger`` independent of ``(gamma, T)``.

    With a ``V`` that does not commute with ``H`` this injects coherence into
    the thermal state, producing noncommuting stationary states.
    """
    V = np.asarray(unitary, dtype=complex)
    ch = Channel((np.sqrt(1 - strength) * np.eye(V.shape[0]), np.sqrt(strength) * V))
    return lambda gamma, T: ch


def qubit_rotation(angle):
    """``exp(-i angle sigma_y)``."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass(frozen=True)
class FirstLawStep:
    dU: float
    dQ: float
    dW: float
    residual: float


def step_first_law(rho0, H0, rho1, H1, alpha):
    """Forward-difference first-law step between two (state, Hamiltonian) pairs.

    ``dQ = Tr[(rho1^a - rho0^a)(H0 - U0)] / Tr rho0^a``,
    ``dW = Tr[rho0^a (H1 - H0)] / Tr rho0^a`` and ``residual = dU - dQ - dW``,
    which is second order in the step.
    """
    check_dims(rho0, H0, rho1, H1)
    alpha = check_alpha(alpha)
    p0 = _Point(None, None, _Bare(as_hermitian(H0)), np.asarray(rho0), alpha)
    p1 = _Point(None, None, _Bare(as_hermitian(H1)), np.asarray(rho1), alpha)
    return _step(p0, p1)


class _Bare:
    def __init__(self, H):
        self.H = H


def _step(a, b):
    d = a.H.shape[0]
    dU = b.U - a.U
    dQ = float(np.einsum("ij,ji->", b.rho_alpha - a.rho_alpha, a.H - a.U * np.eye(d)).real / a.trace_alpha)
    dW = float(np.einsum("ij,ji->", a.rho_alpha, b.H - a.H).real / a.trace_alpha)
    return FirstLawStep(dU, dQ, dW, dU - dQ - dW)


@dataclass(frozen=True)
class StrokeReport:
    """Ledger of one stroke. Heats are absorbed by, works done on, the system."""

    dU: float
    heat_total: float
    heat_excess: float
    heat_housekeeping: float
    work_raw: float
    work_excess: float
    free_energy_change: float
    entropy_change: float
    residual: float = 0.0
    steps: int = 0


def path_first_law(family, gammas, T):
    """Summed first-law ledger ``(dU, sum dQ, sum dW, sum residual)`` along ``gammas`` at ``T``."""
    pts = [family.point(g, T) for g in gammas]
    steps = [_step(a, b) for a, b in zip(pts, pts[1:])]
    return (
        pts[-1].U - pts[0].U,
        sum(s.dQ for s in steps),
        sum(s.dW for s in steps),
        sum(s.residual for s in steps),
    )


def isotherm_decomposition(family, gamma0, gamma1, T, steps, route="traditional"):
    """Heat/work ledger of a quasistatic isotherm ``gamma0 -> gamma1`` at temperature ``T``.

    Per step: total heat and raw work from :func:`step_first_law`, excess
    work as the increment of the nonequilibrium free energy (``route``
    selects the divergence used), housekeeping heat
    ``excess work - raw work``, excess heat ``total heat - housekeeping``.

    Raises
    ------
    LedgerMismatch
        Excess heat disagrees with ``T * entropy change`` beyond what the
        accumulated first-law residual accounts for.
    """
    if steps < 2:
        raise ValueError("need at least two steps")
    gammas = np.linspace(gamma0, gamma1, steps + 1)
    prev = family.point(gammas[0], T)
    F_prev = prev.free_energy(route)
    start, F_start = prev, F_prev
    Q = Qhk = W = res = 0.0
    for g in gammas[1:]:
        cur = family.point(g, T)
        F_cur = cur.free_energy(route)
        st = _step(prev, cur)
        w_ex = F_cur - F_prev
        Q += st.dQ
        W += st.dW
        Qhk += w_ex - st.dW
        res += st.residual
        prev, F_prev = cur, F_cur
    dU = prev.U - start.U
    dF = F_prev - F_start
    dS = prev.S - start.S
    q_ex = Q - Qhk
    expected = T * dS - res
    if abs(q_ex - expected) > 1e-8 * (1.0 + abs(dU) + abs(T * dS)):
        raise LedgerMismatch(f"excess heat {q_ex!r} vs T dS - residual {expected!r}")
    return StrokeReport(
        dU=dU, heat_total=Q, heat_excess=q_ex, heat_housekeeping=Qhk, work_raw=W,
        work_excess=dF, free_energy_change=dF, entropy_change=dS, residual=res, steps=steps,
    )


def solve_adiabat(family, gamma_start, T_start, T_end, scan_points=64):
    """Control value at ``T_end`` with the same Rényi entropy as ``(gamma_start, T_start)``.

    Scans ``family.hamiltonian.gamma_range`` for sign changes of the entropy
    mismatch, requires exactly one, and refines it to ``|dS| <= 1e-12``.

    Raises
    ------
    NoBracket
        The target entropy is not reached on the scanned range.
    NonMonotone
        More than one crossing was found.
    """
    if T_start <= 0 or T_end <= 0:
        raise ValueError("temperatures must be positive")
    if T_end == T_start:
        return float(gamma_start)
    target = family.point(gamma_start, T_start).S

    def mismatch(g):
        return family.point(g, T_end).S - target

    lo, hi = family.hamiltonian.gamma_range
    grid = np.linspace(lo, hi, scan_points)
    vals = np.array([mismatch(g) for g in grid])
    exact = [g for g, v in zip(grid, vals) if v == 0.0]
    brackets = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    n = len(exact) + len(brackets)
    if n == 0:
        raise NoBracket(f"entropy {target:.6g} not attained on gamma in {family.hamiltonian.gamma_range}")
    if n > 1:
        raise NonMonotone(f"{n} entropy crossings on the scanned range")
    if exact:
        return float(exact[0])
    k = brackets[0]
    g = brentq(mismatch, grid[k], grid[k + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    if abs(mismatch(g)) > ADIABAT_TOL:
        raise NonMonotone(f"entropy mismatch {mismatch(g):.3e} after refinement")
    return float(g)


@dataclass(frozen=True)
class CycleReport:
    """Four-stroke Carnot cycle.

    ``works[k]`` is the excess work done by the system in stroke ``k + 1``;
    ``efficiency = total_work / Qex1``.
    """

    strokes: tuple
    Th: float
    Tc: float
    gammas: tuple
    works: tuple
    total_work: float
    Qex1: float
    Qex3: float
    efficiency: float
    closure_distance: float
    net_entropy: float
    # max |stroke-formula work + path-ledger work on the system|
    ledger_discrepancy: float

    @property
    def carnot_efficiency(self):
        return 1.0 - self.Tc / self.Th


def _adiabatic_stroke(a, Fa, b, Fb):
    dU = b.U - a.U
    return StrokeReport(
        dU=dU, heat_total=0.0, heat_excess=0.0, heat_housekeeping=0.0, work_raw=dU,
        work_excess=dU, free_energy_change=Fb - Fa, entropy_change=b.S - a.S,
    )


def run_carnot_cycle(family, gamma1, gamma2, Th, Tc, steps, route="traditional"):
    """Run isotherm ``(g1 -> g2, Th)``, adiabat, isotherm ``(g3 -> g4, Tc)``, adiabat.

    ``g3`` is the adiabat partner of ``g2`` at ``Tc`` and ``g4`` that of
    ``g1``. Stroke works are evaluated from free-energy and entropy endpoint
    values::

        W1 = F(g1,Th) - F(g2,Th)
        W2 = F(g2,Th) - F(g3,Tc) + (Th - Tc) S(g2,Th)
        W3 = F(g3,Tc) - F(g4,Tc)
        W4 = F(g4,Tc) - F(g1,Th) - (Th - Tc) S(g1,Th)

    with ``Qex1 = Th [S(g2,Th) - S(g1,Th)]``; the isotherm ledgers are
    integrated separately over ``steps`` steps and cross-checked.

    Raises
    ------
    CycleNotClosed
        Running the last adiabat back to ``Th`` does not return to the initial
        state within trace distance ``1e-8``.
    """
    if gamma1 == gamma2:
        raise ValueError("isotherm endpoints must differ")
    g3 = solve_adiabat(family, gamma2, Th, Tc)
    g4 = solve_adiabat(family, gamma1, Th, Tc)
    p1, p2 = family.point(gamma1, Th), family.point(gamma2, Th)
    p3, p4 = family.point(g3, Tc), family.point(g4, Tc)
    F1, F2, F3, F4 = (p.free_energy(route) for p in (p1, p2, p3, p4))

    s1 = isotherm_decomposition(family, gamma1, gamma2, Th, steps, route)
    s2 = _adiabatic_stroke(p2, F2, p3, F3)
    s3 = isotherm_decomposition(family, g3, g4, Tc, steps, route)
    s4 = _adiabatic_stroke(p4, F4, p1, F1)

    works = (
        F1 - F2,
        F2 - F3 + (Th - Tc) * p2.S,
        F3 - F4,
        F4 - F1 - (Th - Tc) * p1.S,
    )
    Qex1 = Th * (p2.S - p1.S)
    Qex3 = Tc * (p4.S - p3.S)
    total = float(sum(works))

    g1_back = solve_adiabat(family, g4, Tc, Th)
    closure = trace_distance(family(g1_back, Th), p1.state)
    if closure > CLOSURE_TOL:
        raise CycleNotClosed(f"cycle misses its start by trace distance {closure:.3e}")

    strokes = (s1, s2, s3, s4)
    discrepancy = max(abs(w + s.work_excess) for w, s in zip(works, strokes))
    return CycleReport(
        strokes=strokes, Th=Th, Tc=Tc, gammas=(gamma1, gamma2, g3, g4), works=works,
        total_work=total, Qex1=Qex1, Qex3=Qex3, efficiency=total / Qex1,
        closure_distance=closure, net_entropy=float(sum(s.entropy_change for s in strokes)),
        ledger_discrepancy=float(discrepancy),
    )


STROKE_COLUMNS = ("stroke", "dU", "heatTotal", "heatExcess", "heatHousekeeping", "workExcess", "entropyChange")


def cycle_report_csv(report):
    """CSV text: one row per stroke, then ``cycle,totalWork,Qex1,efficiency,analytic``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STROKE_COLUMNS)
    for k, s in enumerate(report.strokes, 1):
        w.writerow([k, *(repr(float(v)) for v in (
            s.dU, s.heat_total, s.heat_excess, s.heat_housekeeping, s.work_excess, s.entropy_change))])
    w.writerow(["cycle", repr(report.total_work), repr(report.Qex1), repr(report.efficiency),
                repr(report.carnot_efficiency)])
    return buf.getvalue()
