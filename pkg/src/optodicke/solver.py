"""Stationary points, phase boundaries and ground-state selection.

Roots of the extremum function p are located by a dense scan in x =
gamma_bar^2 followed by bisection.  p is strictly concave in x on both
branches, which gives two useful guarantees: each branch has at most two
(normal) or one (inverted) positive roots, and tangent lines bound p from
above between scan nodes, so a scan either certifies an interval root-free
or flags it as unresolved (DegenerateBracket, raised near the fold where the
stable and unstable roots merge).

The turning point g_t is found by bisection on the number of stable
normal-branch roots (1 below the fold, 0 above), and the closure coupling
zeta_star by bisection on the width g_t - g_c of the superradiant window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import (
    ModelParams,
    Observables,
    PhaseLabel,
    SpinBranch,
    Stability,
    VariationalPoint,
    classify_stability,
    curvature,
    extremum_polynomial,
    extremum_polynomial_slope,
    observables_at,
    scaled_energy,
)

__all__ = [
    "SolverConfig",
    "SolverError",
    "DegenerateBracket",
    "NotFound",
    "RootSet",
    "GroundState",
    "CriticalPoints",
    "critical_coupling",
    "zero_photon_point",
    "find_roots",
    "enumerate_stationary_points",
    "ground_state",
    "turning_point",
    "sp_closure",
    "closure_estimate",
    "critical_points",
]

_BISECT_CAP = 300
_MAX_SCAN_POINTS = 2_048_000


class SolverError(Exception):
    """Base class for solver failures."""


class DegenerateBracket(SolverError):
    """Scan resolution could not separate a near-double root pair.

    Raised close to the turning point, where the stable and unstable roots
    merge; retrying with a larger ``scan_points`` resolves or certifies it.
    """


class NotFound(SolverError):
    """The requested critical point does not exist in the search window."""


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and scan resolution.

    tol_root    : absolute tolerance on gamma_bar for root bisection
    tol_curv    : half-width of the marginal-stability band on the curvature
    scan_points : number of scan intervals for bracketing
    tol_gt      : absolute tolerance on the turning-point coupling g_t
    """

    tol_root: float = 1e-10
    tol_curv: float = 1e-9
    scan_points: int = 2000
    tol_gt: float = 1e-6

    def __post_init__(self) -> None:
        for name in ("tol_root", "tol_curv", "tol_gt"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be > 0")
        if self.scan_points < 100:
            raise ValueError("scan_points must be >= 100")


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class RootSet:
    """All stationary points of one branch: positive roots plus gamma_bar=0."""

    branch: SpinBranch
    roots: tuple[VariationalPoint, ...]
    zero_point: VariationalPoint

    def __post_init__(self) -> None:
        amps = [r.amplitude for r in self.roots]
        if any(a <= 0.0 for a in amps) or amps != sorted(amps):
            raise ValueError("roots must have positive amplitude, sorted ascending")
        limit = 2 if self.branch is SpinBranch.NORMAL else 1
        if len(amps) > limit:
            raise ValueError(f"{self.branch.name} branch admits at most {limit} positive roots")

    @property
    def stable_roots(self) -> tuple[VariationalPoint, ...]:
        return tuple(r for r in self.roots if r.stability is Stability.STABLE)


@dataclass(frozen=True)
class GroundState:
    """Lowest local minimum of the scaled energy over both branches."""

    phase: PhaseLabel
    point: VariationalPoint
    observables: Observables


@dataclass(frozen=True)
class CriticalPoints:
    """Phase boundaries for one (omega, omega_a, omega_b) triple.

    g_t is None when absent (zeta = 0, or zeta at/beyond closure).
    """

    g_c: float
    g_t: float | None
    zeta_star: float


def critical_coupling(params: ModelParams) -> float:
    """Boundary g_c = sqrt(omega*omega_a) between NP(N-) and SP.

    Independent of omega_b, zeta and N: the oscillator does not move the
    normal-phase boundary.
    """
    return math.sqrt(params.omega * params.omega_a)


def _point_at(params: ModelParams, branch: SpinBranch, gamma_bar: float,
              config: SolverConfig) -> VariationalPoint:
    curv = float(curvature(params, branch, gamma_bar))
    return VariationalPoint(
        amplitude=gamma_bar,
        branch=branch,
        energy=float(scaled_energy(params, branch, gamma_bar)),
        curvature=curv,
        stability=classify_stability(curv, config.tol_curv),
    )


def zero_photon_point(params: ModelParams, branch: SpinBranch,
                      config: SolverConfig | None = None) -> VariationalPoint:
    """The gamma_bar = 0 stationary point of a branch.

    Curvature 2*(omega -/+ g^2/omega_a): the normal point N- is stable only
    below g_c, the inverted point N+ is stable for every g.
    """
    cfg = config if config is not None else DEFAULT_CONFIG
    return _point_at(params, branch, 0.0, cfg)


def _scan_limit(params: ModelParams, branch: SpinBranch) -> float:
    # Smallest x beyond which p < 0 is guaranteed:  p- <= omega - 2 z^2 x / w_b,
    # p+ <= omega + g^2/omega_a - 2 z^2 x / w_b (the inverted root always lies
    # beyond the normal-branch bound, so the bound must be branch-specific).
    top = params.omega
    if branch is SpinBranch.INVERTED:
        top += params.g**2 / params.omega_a
    return top * params.omega_b / (2.0 * params.zeta**2)


def _bisect_root(params: ModelParams, branch: SpinBranch, x_lo: float, x_hi: float,
                 p_lo: float, p_hi: float, tol_gamma: float) -> float:
    """Refine a sign-change bracket in x; returns gamma_bar of the root."""
    for _ in range(_BISECT_CAP):
        if math.sqrt(x_hi) - math.sqrt(x_lo) <= tol_gamma:
            break
        x_mid = 0.5 * (x_lo + x_hi)
        p_mid = float(extremum_polynomial(params, branch, math.sqrt(x_mid)))
        if p_mid == 0.0:
            return math.sqrt(x_mid)
        if p_lo * p_mid < 0.0:
            x_hi, p_hi = x_mid, p_mid
        else:
            x_lo, p_lo = x_mid, p_mid
    return 0.5 * (math.sqrt(x_lo) + math.sqrt(x_hi))


def find_roots(params: ModelParams, branch: SpinBranch,
               config: SolverConfig | None = None) -> RootSet:
    """Locate and classify every positive stationary amplitude of a branch.

    With zeta = 0 the normal branch has the closed-form root
    gamma_bar^2 = g^2/(4 omega^2) - omega_a^2/(4 g^2) above g_c and the
    inverted branch none.  Otherwise the scan covers (0, 1.2*x_max] with
    x_max the branch-specific bound from _scan_limit.

    Raises DegenerateBracket when two roots may hide between adjacent scan
    nodes (tangent bound inconclusive); retry with larger scan_points.
    """
    cfg = config if config is not None else DEFAULT_CONFIG
    zero = zero_photon_point(params, branch, cfg)

    if params.zeta == 0.0:
        roots: list[VariationalPoint] = []
        if branch is SpinBranch.NORMAL and params.g > critical_coupling(params):
            x = params.g**2 / (4.0 * params.omega**2) - params.omega_a**2 / (4.0 * params.g**2)
            roots.append(_point_at(params, branch, math.sqrt(x), cfg))
        return RootSet(branch=branch, roots=tuple(roots), zero_point=zero)

    x_hi = 1.2 * _scan_limit(params, branch)
    xs = np.linspace(0.0, x_hi, cfg.scan_points + 1)
    gammas = np.sqrt(xs)
    ps = np.asarray(extremum_polynomial(params, branch, gammas), dtype=float)

    root_gammas: list[float] = []
    for i in range(cfg.scan_points):
        p_l, p_r = ps[i], ps[i + 1]
        if p_r == 0.0 and i + 1 < cfg.scan_points:
            root_gammas.append(float(gammas[i + 1]))
        elif p_l * p_r < 0.0:
            root_gammas.append(
                _bisect_root(params, branch, float(xs[i]), float(xs[i + 1]),
                             float(p_l), float(p_r), cfg.tol_root))

    if branch is SpinBranch.NORMAL:
        _certify_no_hidden_pair(params, branch, xs, ps, cfg)

    for a, b in zip(root_gammas, root_gammas[1:]):
        if b - a <= 2.0 * cfg.tol_root:
            raise DegenerateBracket(
                f"roots closer than tol_root at gamma_bar ~ {a:.6g}; "
                "parameters sit numerically at the turning point")

    return RootSet(
        branch=branch,
        roots=tuple(_point_at(params, branch, gb, cfg) for gb in root_gammas),
        zero_point=zero,
    )


def _certify_no_hidden_pair(params: ModelParams, branch: SpinBranch,
                            xs: np.ndarray, ps: np.ndarray, cfg: SolverConfig) -> None:
    """Flag intervals that might hide a root pair around the interior maximum.

    p is concave in x, so its tangents bound it from above: on an interval
    with p < 0 at both ends and a slope sign change, the intersection of the
    two end tangents bounds the interior maximum.  A positive bound means the
    scan cannot tell whether a near-double root pair hides there.
    """
    dpdg = np.asarray(extremum_polynomial_slope(params, branch, np.sqrt(xs)), dtype=float)
    # slope w.r.t. x: dp/dx = (dp/dgamma) / (2 gamma); sign is what matters,
    # except at x=0 where dp/dx has the sign of the x-series coefficient
    with np.errstate(divide="ignore", invalid="ignore"):
        dpdx = np.where(xs > 0.0, dpdg / (2.0 * np.sqrt(np.where(xs > 0, xs, 1.0))), 0.0)
    dpdx[0] = 2.0 * (params.g**4 / params.omega_a**3 - params.zeta**2 / params.omega_b)

    suspicious = (dpdx[:-1] > 0.0) & (dpdx[1:] <= 0.0) & (ps[:-1] < 0.0) & (ps[1:] < 0.0)
    for i in np.nonzero(suspicious)[0]:
        x_l, x_r = xs[i], xs[i + 1]
        s_l, s_r = dpdx[i], dpdx[i + 1]
        if s_l == s_r:
            continue
        x_cross = (ps[i + 1] - ps[i] + s_l * x_l - s_r * x_r) / (s_l - s_r)
        x_cross = min(max(x_cross, x_l), x_r)
        upper = ps[i] + s_l * (x_cross - x_l)
        if upper > 0.0:
            raise DegenerateBracket(
                f"possible unresolved root pair in gamma_bar^2 interval "
                f"[{x_l:.9g}, {x_r:.9g}] at g={params.g!r}, zeta={params.zeta!r}; "
                "increase scan_points")


def enumerate_stationary_points(params: ModelParams,
                                config: SolverConfig | None = None
                                ) -> dict[SpinBranch, RootSet]:
    """RootSets of both branches (shared by ground_state and the sweeps)."""
    cfg = config if config is not None else DEFAULT_CONFIG
    return {branch: find_roots(params, branch, cfg) for branch in SpinBranch}


def _is_local_minimum(params: ModelParams, branch: SpinBranch, gamma_bar: float) -> bool:
    # Marginal points need a probe beyond the curvature: the energy slope is
    # 2*gamma_bar*p, so p's sign next to the point decides minimality.  At the
    # fold p <= 0 on both sides (inflection); at g = g_c the zero point stays
    # a minimum as long as p > 0 just above it.
    h = 1e-6 * max(1.0, gamma_bar)
    right = float(extremum_polynomial(params, branch, gamma_bar + h))
    if right < 0.0:
        return False
    if gamma_bar > h:
        left = float(extremum_polynomial(params, branch, gamma_bar - h))
        if left > 0.0:
            return False
    return True


def ground_state(params: ModelParams, config: SolverConfig | None = None) -> GroundState:
    """Pick the lowest local minimum over both branches and label the phase.

    Candidates are all stable stationary points, plus marginal ones that a
    one-sided slope probe confirms as minima (this keeps the energy curve
    continuous when a grid lands exactly on g_c).  Ties within 1e-12 in
    energy resolve to the smaller amplitude.  N+ is always stable, so a
    ground state always exists.
    """
    cfg = config if config is not None else DEFAULT_CONFIG
    rootsets = enumerate_stationary_points(params, cfg)
    return select_ground(params, rootsets, cfg)


def select_ground(params: ModelParams, rootsets: dict[SpinBranch, RootSet],
                  config: SolverConfig) -> GroundState:
    """Ground-state selection from already-enumerated stationary points."""
    candidates: list[VariationalPoint] = []
    for rs in rootsets.values():
        for point in (rs.zero_point, *rs.roots):
            if point.stability is Stability.STABLE:
                candidates.append(point)
            elif (point.stability is Stability.MARGINAL
                  and _is_local_minimum(params, point.branch, point.amplitude)):
                candidates.append(point)

    e_min = min(p.energy for p in candidates)
    pool = [p for p in candidates if p.energy <= e_min + 1e-12]
    point = min(pool, key=lambda p: p.amplitude)

    if point.amplitude == 0.0:
        phase = PhaseLabel.NP_NMINUS if point.branch is SpinBranch.NORMAL else PhaseLabel.NP_NPLUS
    elif point.branch is SpinBranch.NORMAL:
        phase = PhaseLabel.SP
    else:
        raise SolverError("stable nonzero root on the inverted branch should not exist")
    return GroundState(phase=phase, point=point, observables=observables_at(params, point))


def _stable_count(params: ModelParams, config: SolverConfig) -> int:
    """Stable normal-branch root count, escalating the scan when degenerate.

    Degeneracy that survives the densest scan means the parameters sit on the
    fold to within ~tol_root^2; counting that side as collapsed keeps the g_t
    bisection deterministic and within tolerance.
    """
    scan = config.scan_points
    while True:
        try:
            rs = find_roots(params, SpinBranch.NORMAL, replace(config, scan_points=scan))
        except DegenerateBracket:
            if scan >= _MAX_SCAN_POINTS:
                return 0
            scan = min(4 * scan, _MAX_SCAN_POINTS)
            continue
        return len(rs.stable_roots)


def turning_point(params: ModelParams, zeta: float | None = None,
                  config: SolverConfig | None = None) -> float:
    """Fold coupling g_t where the stable and unstable SP roots merge.

    Bisection on g over [g_c, g_hi] using the stable-root count (1 inside the
    superradiant window, 0 above it), refined to config.tol_gt.  params.g is
    ignored; zeta defaults to params.zeta.

    Raises NotFound for zeta = 0 (the superradiant region never closes) and
    when no window is detectable (zeta at or beyond the closure coupling).
    """
    cfg = config if config is not None else DEFAULT_CONFIG
    z = params.zeta if zeta is None else zeta
    if z <= 0.0:
        raise NotFound("no turning point: the superradiant region is unbounded at zeta=0")
    base = replace(params, zeta=z)
    g_c = critical_coupling(params)

    lo = None
    for delta in (1e-10, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2):
        g_probe = g_c * (1.0 + delta)
        if _stable_count(replace(base, g=g_probe), cfg) == 1:
            lo = g_probe
            break
    if lo is None:
        raise NotFound(
            f"no stable superradiant root above g_c at zeta={z!r}: "
            "the superradiant window is closed")

    hi = 2.0 * g_c
    while hi <= lo:
        hi *= 2.0
    while _stable_count(replace(base, g=hi), cfg) >= 1:
        hi *= 2.0
        if hi > 1e9 * g_c:
            raise NotFound(f"no fold below g = {hi!r} at zeta={z!r}")

    while hi - lo > cfg.tol_gt:
        mid = 0.5 * (lo + hi)
        if _stable_count(replace(base, g=mid), cfg) >= 1:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def closure_estimate(params: ModelParams) -> float:
    """Small-amplitude estimate of the closure coupling.

    Expanding p on the normal branch to first order in gamma_bar^2 at g = g_c
    gives the coefficient 2*(omega^2/omega_a - zeta^2/omega_b); the window
    closes exactly where it changes sign, zeta = sqrt(omega_b*omega^2/omega_a).
    """
    return math.sqrt(params.omega_b * params.omega**2 / params.omega_a)


def sp_closure(params: ModelParams, config: SolverConfig | None = None,
               width_tol: float = 1e-3) -> float:
    """Smallest zeta whose superradiant window g_t - g_c is <= width_tol.

    Bisection over zeta; the window width is strictly decreasing in zeta and
    reaches zero at closure_estimate(params).  params.g and params.zeta are
    ignored.
    """
    if width_tol <= 0.0:
        raise ValueError("width_tol must be > 0")
    cfg = config if config is not None else DEFAULT_CONFIG
    g_c = critical_coupling(params)

    def width(z: float) -> float:
        try:
            return turning_point(params, zeta=z, config=cfg) - g_c
        except NotFound:
            return 0.0

    hi = closure_estimate(params)
    lo = hi / 2.0
    for _ in range(60):
        if width(lo) > width_tol:
            break
        lo /= 2.0
    else:
        raise SolverError("could not bracket the closure coupling from below")

    tol_z = 1e-6 * max(1.0, hi)
    while hi - lo > tol_z:
        mid = 0.5 * (lo + hi)
        if width(mid) <= width_tol:
            hi = mid
        else:
            lo = mid
    return hi


def critical_points(params: ModelParams, config: SolverConfig | None = None,
                    width_tol: float = 1e-3) -> CriticalPoints:
    """g_c, g_t (None when absent) and zeta_star for the given frequencies."""
    cfg = config if config is not None else DEFAULT_CONFIG
    try:
        g_t: float | None = turning_point(params, config=cfg)
    except NotFound:
        g_t = None
    return CriticalPoints(
        g_c=critical_coupling(params),
        g_t=g_t,
        zeta_star=sp_closure(params, cfg, width_tol=width_tol),
    )
