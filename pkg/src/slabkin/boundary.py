"""Stochastic boundary operators O = alpha*R + beta*K and their matrices.

The walls exchange fluxes h(v) = |v| f(wall, v).  In flux coordinates a
boundary operator is stochastic: positive, and preserving the integral of
nonnegative fluxes.  The specular part R reflects v -> -v; the diffuse
part K redistributes the outgoing velocity with a column-stochastic
kernel k(v_out, v_in).

Discretization convention
-------------------------
`DiscreteBoundaryOp.matrix` stores kernel values: M[i, j] ~ o(v_i, v'_j),
so weighted column sums  sum_i w_i M[i, j]  equal 1 exactly after
renormalization.  The matrix that acts on plain value vectors is
`action = matrix * source.weights`, i.e. apply(h) = action @ h.  The
specular part appears in `matrix` as the mirror permutation scaled by
inverse weights, which makes the discrete composition R1 R2 the exact
identity on mirror-aligned grids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError, ParameterError
from .vgrid import HalfGrid, HalfGridVector, build_grid

POWER_MAXWELL = "power_maxwell"
PERTURBED_POWER_MAXWELL = "perturbed_power_maxwell"
CONSTANT = "constant"

_FAMILIES = (POWER_MAXWELL, PERTURBED_POWER_MAXWELL, CONSTANT)

# fine reference rule for untruncated column normalizers on (0, 1)
_NORM_PANELS = 64
_NORM_ORDER = 10


@dataclass(frozen=True)
class KernelSpec:
    """Analytic diffuse-kernel family; columns integrate to 1 over (0, 1).

    power_maxwell:            k(v, v') = (m+1) |v|^m
    perturbed_power_maxwell:  k(v, v') = |v|^m (1 + theta*cos(pi v v')) / Z(v')
    constant:                 k(v, v') = 1  (realizes kernels bounded below)
    """

    family: str
    m: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ParameterError(f"unknown kernel family {self.family!r}")
        if self.m < 0:
            raise ParameterError(f"kernel exponent m must be >= 0, got {self.m}")
        if not 0.0 <= self.theta < 1.0:
            raise ParameterError(f"theta must lie in [0, 1), got {self.theta}")

    @staticmethod
    def power_maxwell(m: float) -> "KernelSpec":
        return KernelSpec(POWER_MAXWELL, m=m)

    @staticmethod
    def perturbed(m: float, theta: float) -> "KernelSpec":
        return KernelSpec(PERTURBED_POWER_MAXWELL, m=m, theta=theta)

    @staticmethod
    def constant() -> "KernelSpec":
        return KernelSpec(CONSTANT)


def _reference_rule():
    u = np.linspace(0.0, 1.0, _NORM_PANELS + 1)
    xg, wg = np.polynomial.legendre.leggauss(_NORM_ORDER)
    mid = 0.5 * (u[1:] + u[:-1])
    half = 0.5 * (u[1:] - u[:-1])
    return (mid[:, None] + half[:, None] * xg).ravel(), (half[:, None] * wg).ravel()


_REF_NODES, _REF_WEIGHTS = _reference_rule()


def kernel_eval(spec: KernelSpec, v_out, v_in):
    """Evaluate k(v_out, v_in); arguments may be arrays (broadcast).

    Signs are ignored: kernels depend on speeds only.  Out-of-range
    arguments raise ParameterError.
    """
    so = np.abs(np.asarray(v_out, dtype=float))
    si = np.abs(np.asarray(v_in, dtype=float))
    if np.any(so > 1.0) or np.any(si > 1.0) or np.any(so == 0.0) or np.any(si == 0.0):
        raise ParameterError("kernel arguments must have 0 < |v| <= 1")
    if spec.family == POWER_MAXWELL:
        out = (spec.m + 1.0) * so**spec.m
        return out + np.zeros_like(si)
    if spec.family == CONSTANT:
        return np.ones(np.broadcast_shapes(so.shape, si.shape))
    # perturbed family: normalize each column over the full interval (0, 1)
    rho = so**spec.m * (1.0 + spec.theta * np.cos(np.pi * so * si))
    zi = np.sum(
        _REF_WEIGHTS
        * _REF_NODES**spec.m
        * (1.0 + spec.theta * np.cos(np.pi * _REF_NODES * si[..., None])),
        axis=-1,
    )
    return rho / zi


@dataclass(frozen=True)
class BoundaryOperatorSpec:
    """One wall: convex combination of specular and diffuse reflection."""

    side: str  # "left" (x = -a) or "right" (x = +a)
    alpha: float
    kernel: KernelSpec

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ParameterError(f"side must be 'left' or 'right', got {self.side!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ParameterError(f"alpha must lie in [0, 1], got {self.alpha}")

    @property
    def beta(self) -> float:
        return 1.0 - self.alpha


@dataclass(frozen=True)
class DiscreteBoundaryOp:
    """Matrix form of a boundary operator between mirror half-grids."""

    matrix: np.ndarray  # kernel convention: weighted column sums == 1
    source: HalfGrid
    target: HalfGrid
    spec: BoundaryOperatorSpec
    action: np.ndarray = field(repr=False, default=None)  # matrix * source weights

    def __call__(self, values: np.ndarray) -> np.ndarray:
        return self.action @ values


def discretize(spec: BoundaryOperatorSpec, source: HalfGrid, target: HalfGrid) -> DiscreteBoundaryOp:
    """Discretize O = alpha*R + beta*K between mirror grids.

    The diffuse block is renormalized column by column so that weighted
    column sums are exactly 1; the specular block is exact on mirror grids.
    """
    if not source.is_mirror_of(target):
        raise GridMismatchError("source and target must be mirror half-grids")
    expect_source = -1 if spec.side == "left" else +1
    if source.sign != expect_source:
        raise GridMismatchError(
            f"{spec.side} wall maps sign {expect_source} to {-expect_source}, "
            f"got source sign {source.sign}"
        )

    n = source.n
    mat = np.zeros((n, n))
    if spec.alpha > 0.0:
        # mirror permutation scaled by inverse weights (flux-preserving)
        mat[np.arange(n), np.arange(n)] = spec.alpha / source.weights
    if spec.beta > 0.0:
        kd = kernel_eval(spec.kernel, target.nodes[:, None], source.nodes[None, :])
        colsum = target.weights @ kd
        mat += spec.beta * kd / colsum[None, :]
    return DiscreteBoundaryOp(
        matrix=mat,
        source=source,
        target=target,
        spec=spec,
        action=mat * source.weights[None, :],
    )


def apply(op: DiscreteBoundaryOp, flux: HalfGridVector) -> HalfGridVector:
    """Apply the operator to a flux on its source grid."""
    if flux.grid is not op.source and not flux.grid.is_mirror_of(op.target):
        raise GridMismatchError("flux lives on the wrong grid for this operator")
    return HalfGridVector(grid=op.target, values=op.action @ flux.values)


def weighted_op_norm(op, j_source: int = 0, j_target: int = 0, source: HalfGrid = None,
                     target: HalfGrid = None) -> float:
    """Exact L^1(|v|^-j_s dv) -> L^1(|v|^-j_t dv) norm of a discrete map.

    Accepts a DiscreteBoundaryOp or a raw action matrix (apply = A @ h)
    together with its grids.  The induced norm of a discrete L^1 map is
    attained on a coordinate direction, hence the max over columns.
    """
    if isinstance(op, DiscreteBoundaryOp):
        action, source, target = op.action, op.source, op.target
    else:
        action = op
        if source is None or target is None:
            raise ParameterError("raw matrices need explicit source/target grids")
    col = (target.weights / target.speeds**j_target) @ np.abs(action)
    return float(np.max(col * source.speeds**j_source / source.weights))


# ---------------------------------------------------------------------------
# structural-assumption checker
# ---------------------------------------------------------------------------

BOUNDED_SLOPE = 0.05


@dataclass(frozen=True)
class AssumptionEntry:
    name: str
    group: str
    description: str
    norms: tuple  # ((v_min, norm), ...)
    slope: float
    verdict: str  # "bounded-trend" | "growing-trend"


@dataclass(frozen=True)
class AssumptionReport:
    k: int
    entries: tuple

    def by_group(self, group: str):
        return [e for e in self.entries if e.group == group]

    def entry(self, name: str) -> AssumptionEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


def _trend(norms):
    v = np.array([p[0] for p in norms])
    y = np.array([p[1] for p in norms])
    slope = np.polyfit(np.log(1.0 / v), np.log(y), 1)[0]
    verdict = "bounded-trend" if slope < BOUNDED_SLOPE else "growing-trend"
    return float(slope), verdict


def check_assumptions(o1_spec, o2_spec, k, v_min_sequence, n=200, grading_q=3.0):
    """Probe the boundedness assumptions behind the decay-rate theorem.

    For each listed operator the exact discrete weighted norm is computed
    on a sequence of truncations, and the growth of log(norm) against
    log(1/v_min) is fitted; slope below 0.05 reads as bounded-trend.
    "Bounded operator" is undecidable on a truncated grid, so a trend is
    the honest surrogate.

    Compositions that multiply the *input* by |v|^-q are reported twice:
    literally (the multiplication folded into the composition, measured
    L^1 -> L^1) and in the weighted reading (the same composition measured
    from the weighted source space L^1(|v|^-q dv)).  Stochastic kernel
    columns carry unit mass down to v' -> 0, so the literal reading grows
    like v_min^-q for every such family; the weighted reading is the one
    the flux estimates actually consume.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if len(v_min_sequence) < 2 or np.any(np.diff(v_min_sequence) >= 0):
        raise ParameterError("v_min_sequence must be strictly decreasing, length >= 2")

    samples = {}

    def record(name, group, description, v_min, value):
        samples.setdefault(name, (group, description, []))[2].append((v_min, value))

    for v_min in v_min_sequence:
        pos = build_grid(+1, n, v_min, grading_q)
        neg = pos.mirror()
        o1 = discretize(o1_spec, neg, pos)
        o2 = discretize(o2_spec, pos, neg)
        a1, a2 = o1.action, o2.action
        inv_neg = 1.0 / neg.speeds
        inv_pos = 1.0 / pos.speeds

        for p in range(1, k + 1):
            for j in range(0, p + 1):
                comp = (a1 * (inv_neg**j)[None, :]) @ a2
                name = f"O1_vinv{j}_O2_vinv{p - j}"
                desc = f"O1 |v|^-{j} O2 |v|^-{p - j}"
                record(
                    name, "derivative_factors", desc, v_min,
                    weighted_op_norm(comp * (inv_pos**(p - j))[None, :], 0, 0, pos, pos),
                )
                if p - j > 0:
                    record(
                        name + "_weighted", "derivative_factors_weighted",
                        desc + f" from L1(|v|^-{p - j})", v_min,
                        weighted_op_norm(comp, p - j, 0, pos, pos),
                    )

        g0 = a1 @ a2
        record(
            "vinv_k1_O1O2", "composite_target", f"|v|^-{k + 1} O1 O2", v_min,
            weighted_op_norm(g0, 0, k + 1, pos, pos),
        )
        record(
            "vinvk_O1_vinv_O2", "mid_weight", f"|v|^-{k} O1 |v|^-1 O2", v_min,
            weighted_op_norm((a1 * inv_neg[None, :]) @ a2, 0, k, pos, pos),
        )
        record(
            "vinvk_O1O2_vinv", "trailing_literal", f"|v|^-{k} O1 O2 |v|^-1", v_min,
            weighted_op_norm(g0 * inv_pos[None, :], 0, k, pos, pos),
        )
        record(
            "vinvk_O1O2_vinv_weighted", "trailing_weighted",
            f"|v|^-{k} O1 O2 from L1(|v|^-1)", v_min,
            weighted_op_norm(g0, 1, k, pos, pos),
        )
        record(
            "O1_conjugation", "o1_conjugation", f"|v|^-{k + 1} O1 |v|^{k + 1}", v_min,
            weighted_op_norm(a1, k + 1, k + 1, neg, pos),
        )
        for p in range(0, k + 1):
            q = k + 1 - p
            record(
                f"O2_conjugation_p{p}", "o2_conjugation", f"|v|^-{q} O2 |v|^{q}", v_min,
                weighted_op_norm(a2, q, q, pos, neg),
            )

    entries = []
    for name, (group, desc, norms) in samples.items():
        slope, verdict = _trend(norms)
        entries.append(AssumptionEntry(name, group, desc, tuple(norms), slope, verdict))
    return AssumptionReport(k=k, entries=tuple(entries))
