"""Round-trip wall operator, its Perron pair, and the invariant density.

One full wall cycle seen from the positive half is the stochastic map
O1 O2 on outgoing left-wall fluxes.  Its leading eigenvalue is 1 with a
nonnegative eigenfunction; dividing the pair of wall profiles by |v|
yields a space-homogeneous stationary density iff the inverse-speed
moments stay finite under truncation refinement, which is probed by a
v_min sweep rather than decided (the untruncated integral is out of
reach on any grid).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boundary import DiscreteBoundaryOp, discretize
from .errors import ConvergenceError, GridMismatchError, ParameterError
from .phase import PhaseDensity, x_nodes
from .vgrid import HalfGrid, HalfGridVector, build_grid

POWER_TOL = 1e-12
POWER_MAX_ITER = 100_000
CAUCHY_FRACTION = 0.01


def round_trip_matrix(o1: DiscreteBoundaryOp, o2: DiscreteBoundaryOp) -> np.ndarray:
    """Action matrix of O1 O2 on the positive half-grid."""
    if o2.source is not o1.target and not o2.source.is_mirror_of(o1.source):
        raise GridMismatchError("operators do not chain: need O2: pos->neg, O1: neg->pos")
    return o1.action @ o2.action


def leading_eigenpair(g0_action: np.ndarray, grid: HalfGrid,
                      tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER):
    """Perron pair of a nonnegative stochastic matrix by power iteration.

    Starts from the uniform positive vector; the iterate is kept at unit
    integral (automatic for stochastic columns).  Returns (r_sigma, h0)
    with h0 normalized to integral 1.  r_sigma is the Rayleigh ratio
    integral(G h)/integral(h), which stochasticity pins at 1.
    """
    w = grid.weights
    h = np.full(grid.n, 1.0 / np.sum(w))
    for _ in range(max_iter):
        h_new = g0_action @ h
        h_new = h_new / np.sum(w * h_new)
        if np.sum(w * np.abs(h_new - h)) < tol:
            h = h_new
            break
        h = h_new
    else:
        res = float(np.sum(w * np.abs(g0_action @ h - h)))
        raise ConvergenceError(
            f"power iteration did not converge in {max_iter} iterations", residual=res)
    r_sigma = float(np.sum(w * (g0_action @ h)) / np.sum(w * h))
    if abs(r_sigma - 1.0) >= 1e-10:
        raise ConvergenceError(
            f"leading eigenvalue {r_sigma} is not 1; input is not stochastic",
            residual=abs(r_sigma - 1.0))
    return r_sigma, h


def spectral_gap(g0_action: np.ndarray) -> float:
    """Modulus of the second-largest eigenvalue of the discrete round trip.

    Related to, but distinct from, the essential spectral radius of the
    continuum operator, which has no finite-grid counterpart.
    """
    ev = np.sort(np.abs(np.linalg.eigvals(g0_action)))
    return float(ev[-2]) if ev.size > 1 else 0.0


@dataclass(frozen=True)
class IntegrabilityDiagnostic:
    """Sweep of I(v_min) = integral h0/v + integral h0~/|v| and its verdict."""

    sweep: tuple  # ((v_min, I), ...)
    verdict: str  # "convergent-trend" | "divergent-trend"

    @property
    def values(self):
        return [p[1] for p in self.sweep]


@dataclass(frozen=True)
class EquilibriumProfile:
    """Perron wall fluxes, the integrability verdict, and the density.

    density (the normalized invariant phase density) is present only
    under a convergent-trend verdict.  degenerate_identity flags the pure
    specular case where the round trip is the identity and the Perron
    vector is not unique; it serves as the negative control.
    """

    eigenvalue: float
    flux_pos: HalfGridVector
    flux_neg: HalfGridVector
    integrability: IntegrabilityDiagnostic
    density: PhaseDensity | None
    degenerate_identity: bool


def _sweep_value(o1_spec, o2_spec, n, v_min, grading_q):
    pos = build_grid(+1, n, v_min, grading_q)
    neg = pos.mirror()
    o1 = discretize(o1_spec, neg, pos)
    o2 = discretize(o2_spec, pos, neg)
    _, h0 = leading_eigenpair(round_trip_matrix(o1, o2), pos)
    ht = o2.action @ h0
    i_val = np.sum(pos.weights * h0 / pos.speeds) + np.sum(neg.weights * ht / neg.speeds)
    return float(i_val)


def _integrability_verdict(sweep):
    vals = np.array([p[1] for p in sweep])
    increments = np.abs(np.diff(vals))
    if increments.size == 0 or increments[-1] < CAUCHY_FRACTION * abs(vals[-1]):
        return "convergent-trend"
    return "divergent-trend"


def invariant_density(o1: DiscreteBoundaryOp, o2: DiscreteBoundaryOp, a: float,
                      v_min_sweep, n_x: int = 65) -> EquilibriumProfile:
    """Perron profiles plus the truncation-sweep integrability diagnostic.

    The eigenproblem is re-solved on a fresh grid for every truncation in
    the sweep; the master profiles are the ones on the grids of the given
    operators.  Under a convergent trend the stationary density h0/|v|
    (constant in x, normalized over the slab) is attached.
    """
    if a <= 0:
        raise ParameterError(f"slab half-width must be positive, got {a}")
    pos, neg = o1.target, o2.target
    g0 = round_trip_matrix(o1, o2)
    r_sigma, h0 = leading_eigenpair(g0, pos)
    ht = o2.action @ h0
    degenerate = float(np.max(np.abs(g0 - np.eye(pos.n)))) < 1e-12

    sweep = [(float(vm), _sweep_value(o1.spec, o2.spec, pos.n, vm, pos.grading_q))
             for vm in v_min_sweep]
    verdict = _integrability_verdict(sweep)

    density = None
    if verdict == "convergent-trend":
        x = x_nodes(a, n_x)
        psi_pos = h0 / pos.speeds
        psi_neg = ht / neg.speeds
        total = 2.0 * a * (np.sum(pos.weights * psi_pos) + np.sum(neg.weights * psi_neg))
        density = PhaseDensity(
            x=x, pos_grid=pos, neg_grid=neg,
            pos=np.tile(psi_pos / total, (n_x, 1)),
            neg=np.tile(psi_neg / total, (n_x, 1)),
        )
    return EquilibriumProfile(
        eigenvalue=r_sigma,
        flux_pos=HalfGridVector(pos, h0),
        flux_neg=HalfGridVector(neg, ht),
        integrability=IntegrabilityDiagnostic(tuple(sweep), verdict),
        density=density,
        degenerate_identity=degenerate,
    )


@dataclass(frozen=True)
class IrreducibilityReport:
    positive_power: int | None  # smallest n <= n_max with G0^n entrywise > 0
    o2_strictly_positive: bool
    verdict: str  # "irreducible" | "inconclusive"


def irreducibility_check(g0_action: np.ndarray, o2: DiscreteBoundaryOp,
                         n_max: int = 8) -> IrreducibilityReport:
    """Discrete surrogate for the semigroup irreducibility criterion.

    Reports whether some power of the round trip is entrywise positive
    and whether O2 maps the constant 1 to an entrywise positive vector.
    """
    power = np.eye(g0_action.shape[0])
    positive_power = None
    for p in range(1, n_max + 1):
        power = power @ g0_action
        if np.all(power > 0.0):
            positive_power = p
            break
    strictly = bool(np.all(o2.action @ np.ones(o2.source.n) > 0.0))
    verdict = "irreducible" if (positive_power is not None and strictly) else "inconclusive"
    return IrreducibilityReport(positive_power, strictly, verdict)
