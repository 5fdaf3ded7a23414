"""Parameter sweeps and phase-diagram grids, emitted as plain data tables.

Each row/cell is computed independently from its (g, zeta) pair, so callers
may parallelize freely; assembly order is always the grid order.  No file
I/O happens here, the CLI layer owns serialization.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np

from .model import ModelParams, Observables, PhaseLabel, SpinBranch, Stability, observables_at
from .solver import (
    DEFAULT_CONFIG,
    DegenerateBracket,
    NotFound,
    SolverConfig,
    critical_coupling,
    enumerate_stationary_points,
    select_ground,
    turning_point,
)

__all__ = [
    "SweepSpec",
    "GridSpec",
    "BranchEntry",
    "SweepRow",
    "GridCell",
    "BoundarySample",
    "PhaseGrid",
    "BoundaryRow",
    "BRANCH_TAGS",
    "SWEEP_ZETA_PRESETS",
    "sweep_g",
    "phase_grid",
    "boundary_trace",
]

# Branch tags, in emission order: the two zero-photon states, the stable
# superradiant root, and the unstable nonzero roots of either branch.
BRANCH_TAGS = ("N-", "N+", "gs-", "gus-", "gus+")

# Photon-phonon couplings for the standard set of observable-vs-g sweeps:
# the oscillator-free case, one with a clear multi-transition window, one
# with a narrow window, and one past the collapse of the superradiant phase.
SWEEP_ZETA_PRESETS = (0.0, 1.0, 2.0, 3.0)

_BOUNDARY_RESOLUTION = 1e-4


@dataclass(frozen=True)
class SweepSpec:
    """A sweep over g at fixed zeta.

    Grid endpoints are inclusive; g_steps is the number of samples.
    """

    omega: float = 1.0
    omega_a: float = 1.0
    omega_b: float = 10.0
    n_atoms: int = 1
    zeta: float = 0.0
    g_min: float = 0.0
    g_max: float = 3.0
    g_steps: int = 301

    def __post_init__(self) -> None:
        if not self.g_min < self.g_max:
            raise ValueError("g_min must be < g_max")
        if self.g_steps < 2:
            raise ValueError("g_steps must be >= 2")
        self.params_at(max(self.g_min, 0.0))  # validates the fixed parameters

    def params_at(self, g: float) -> ModelParams:
        return ModelParams(omega=self.omega, omega_a=self.omega_a, omega_b=self.omega_b,
                           g=g, zeta=self.zeta, n_atoms=self.n_atoms)

    def grid(self) -> np.ndarray:
        return np.linspace(self.g_min, self.g_max, self.g_steps)


@dataclass(frozen=True)
class GridSpec:
    """A rectangular grid in the g-zeta plane."""

    omega: float = 1.0
    omega_a: float = 1.0
    omega_b: float = 10.0
    n_atoms: int = 1
    g_min: float = 0.0
    g_max: float = 3.0
    g_steps: int = 61
    zeta_min: float = 0.0
    zeta_max: float = 3.0
    zeta_steps: int = 61

    def __post_init__(self) -> None:
        if not self.g_min < self.g_max:
            raise ValueError("g_min must be < g_max")
        if not self.zeta_min < self.zeta_max:
            raise ValueError("zeta_min must be < zeta_max")
        if self.g_steps < 2 or self.zeta_steps < 2:
            raise ValueError("step counts must be >= 2")
        self.params_at(max(self.g_min, 0.0), max(self.zeta_min, 0.0))

    def params_at(self, g: float, zeta: float) -> ModelParams:
        return ModelParams(omega=self.omega, omega_a=self.omega_a, omega_b=self.omega_b,
                           g=g, zeta=zeta, n_atoms=self.n_atoms)

    def g_grid(self) -> np.ndarray:
        return np.linspace(self.g_min, self.g_max, self.g_steps)

    def zeta_grid(self) -> np.ndarray:
        return np.linspace(self.zeta_min, self.zeta_max, self.zeta_steps)


@dataclass(frozen=True)
class BranchEntry:
    tag: str  # one of BRANCH_TAGS
    observables: Observables
    stability: Stability


@dataclass(frozen=True)
class SweepRow:
    g: float
    phase: PhaseLabel
    ground: Observables
    branches: tuple[BranchEntry, ...]


@dataclass(frozen=True)
class GridCell:
    g: float
    zeta: float
    phase: PhaseLabel


@dataclass(frozen=True)
class BoundarySample:
    """A refined phase boundary between two adjacent grid cells."""

    zeta: float
    g_refined: float
    phase_below: PhaseLabel
    phase_above: PhaseLabel


@dataclass(frozen=True)
class PhaseGrid:
    cells: tuple[GridCell, ...]
    boundaries: tuple[BoundarySample, ...]


@dataclass(frozen=True)
class BoundaryRow:
    zeta: float
    g_c: float
    g_t: float | None


def _row_at(params: ModelParams, g: float, config: SolverConfig) -> SweepRow:
    rootsets = enumerate_stationary_points(params, config)
    gs = select_ground(params, rootsets, config)

    entries: list[BranchEntry] = []
    for branch, zero_tag in ((SpinBranch.NORMAL, "N-"), (SpinBranch.INVERTED, "N+")):
        rs = rootsets[branch]
        entries.append(BranchEntry(zero_tag, observables_at(params, rs.zero_point),
                                   rs.zero_point.stability))
        for root in rs.roots:
            if branch is SpinBranch.NORMAL:
                tag = "gus-" if root.stability is Stability.UNSTABLE else "gs-"
            else:
                tag = "gus+"
            entries.append(BranchEntry(tag, observables_at(params, root), root.stability))

    entries.sort(key=lambda e: BRANCH_TAGS.index(e.tag))
    return SweepRow(g=g, phase=gs.phase, ground=gs.observables, branches=tuple(entries))


def sweep_row(spec: SweepSpec, g: float, config: SolverConfig | None = None) -> SweepRow:
    """One sweep row; module-level so process pools can map it."""
    cfg = config if config is not None else DEFAULT_CONFIG
    try:
        return _row_at(spec.params_at(g), float(g), cfg)
    except DegenerateBracket as exc:
        raise DegenerateBracket(f"sweep row at g={g!r}: {exc}") from exc


def sweep_g(spec: SweepSpec, config: SolverConfig | None = None,
            mapper=map) -> list[SweepRow]:
    """Ground state plus all coexisting branches for each g of the sweep.

    ``mapper`` may be an order-preserving parallel map (the mapped callable
    is picklable); rows come back in grid order either way.
    """
    cfg = config if config is not None else DEFAULT_CONFIG
    return list(mapper(partial(sweep_row, spec, config=cfg), spec.grid()))


def _phase_at(spec: GridSpec, g: float, zeta: float, config: SolverConfig) -> PhaseLabel:
    params = spec.params_at(g, zeta)
    try:
        return select_ground(params, enumerate_stationary_points(params, config), config).phase
    except DegenerateBracket as exc:
        raise DegenerateBracket(f"grid cell at g={g!r}, zeta={zeta!r}: {exc}") from exc


def grid_row(spec: GridSpec, zeta: float, config: SolverConfig | None = None
             ) -> tuple[list[GridCell], list[BoundarySample]]:
    """All cells of one zeta row plus refined boundaries between them."""
    cfg = config if config is not None else DEFAULT_CONFIG
    zeta = float(zeta)
    gs = spec.g_grid()
    labels = [_phase_at(spec, float(g), zeta, cfg) for g in gs]
    cells = [GridCell(g=float(g), zeta=zeta, phase=lab) for g, lab in zip(gs, labels)]

    boundaries: list[BoundarySample] = []
    for i in range(len(gs) - 1):
        if labels[i] is labels[i + 1]:
            continue
        lo, hi = float(gs[i]), float(gs[i + 1])
        lab_lo, lab_hi = labels[i], labels[i + 1]
        while hi - lo > _BOUNDARY_RESOLUTION:
            mid = 0.5 * (lo + hi)
            lab_mid = _phase_at(spec, mid, zeta, cfg)
            if lab_mid is lab_lo:
                lo = mid
            else:
                hi, lab_hi = mid, lab_mid
        boundaries.append(BoundarySample(zeta=zeta, g_refined=0.5 * (lo + hi),
                                         phase_below=lab_lo, phase_above=lab_hi))
    return cells, boundaries


def phase_grid(spec: GridSpec, config: SolverConfig | None = None,
               mapper=map) -> PhaseGrid:
    """Label every grid cell by its ground-state phase.

    Cells are ordered by (zeta, g).  Wherever the label changes between two
    g-adjacent cells, the boundary coupling is refined by bisection to 1e-4
    and emitted as a BoundarySample.
    """
    cfg = config if config is not None else DEFAULT_CONFIG
    cells: list[GridCell] = []
    boundaries: list[BoundarySample] = []
    for row_cells, row_bounds in mapper(partial(grid_row, spec, config=cfg), spec.zeta_grid()):
        cells.extend(row_cells)
        boundaries.extend(row_bounds)
    return PhaseGrid(cells=tuple(cells), boundaries=tuple(boundaries))


def boundary_trace(spec: GridSpec, config: SolverConfig | None = None) -> list[BoundaryRow]:
    """(zeta, g_c, g_t) rows over the zeta grid; g_t is None where absent.

    g_c does not depend on zeta or omega_b; g_t comes from the fold search
    and is absent for zeta = 0 and beyond the closure coupling.
    """
    cfg = config if config is not None else DEFAULT_CONFIG
    params = spec.params_at(0.0, 0.0)
    g_c = critical_coupling(params)
    rows: list[BoundaryRow] = []
    for zeta in spec.zeta_grid():
        try:
            g_t: float | None = turning_point(params, zeta=float(zeta), config=cfg)
        except NotFound:
            g_t = None
        rows.append(BoundaryRow(zeta=float(zeta), g_c=g_c, g_t=g_t))
    return rows
