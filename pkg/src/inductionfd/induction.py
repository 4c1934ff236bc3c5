"""Semi-discrete scheme for the 2D magnetic induction equations.

The PDE is the non-conservative symmetric form of the induction equations
for a magnetic field B = (B1, B2) advected by a given velocity u = (u1, u2):

    dB1/dt + u1 dB1/dx + u2 dB1/dy = -(du2/dy) B1 + (du1/dy) B2
    dB2/dt + u1 dB2/dx + u2 dB2/dy =  (du2/dx) B1 - (du1/dx) B2

Space is discretized with 1D SBP derivative operators applied along each
axis, the velocity-gradient coupling uses the same operators applied to
the sampled velocity, and Dirichlet data is imposed weakly through
simultaneous-approximation-term (SAT) penalties that act only at inflow
boundary nodes.  The penalty strength is chosen so that the boundary
quadratic form in the discrete energy estimate is non-positive, which
makes the semi-discrete scheme energy-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import Grid2D
from .sbp import SbpOperator1D, apply_dx, apply_dy

SIDES = ("xmin", "xmax", "ymin", "ymax")


@dataclass(frozen=True)
class MagneticField:
    """Two-component field on a grid, stored as an array of shape (2, npx, npy).

    Flattening ``data`` in C order gives the component-major, x-major,
    y-inner vector layout shared by all operators.
    """

    grid: Grid2D
    data: np.ndarray

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=float)
        if data.shape != (2, self.grid.npx, self.grid.npy):
            raise ValueError(
                f"field data must have shape (2, {self.grid.npx}, {self.grid.npy}), "
                f"got {data.shape}"
            )
        if not np.isfinite(data).all():
            raise ValueError("field data contains non-finite values")
        object.__setattr__(self, "data", data)

    @property
    def v1(self) -> np.ndarray:
        return self.data[0]

    @property
    def v2(self) -> np.ndarray:
        return self.data[1]

    @property
    def vector(self) -> np.ndarray:
        """Flat view of length 2*npx*npy in the shared ordering."""
        return self.data.reshape(-1)

    def magnitude(self) -> np.ndarray:
        """Pointwise |B| = sqrt(B1^2 + B2^2), shape (npx, npy)."""
        return np.hypot(self.data[0], self.data[1])

    @classmethod
    def from_vector(cls, grid: Grid2D, vec: np.ndarray) -> "MagneticField":
        return cls(grid, np.asarray(vec, dtype=float).reshape(2, grid.npx, grid.npy))

    @classmethod
    def sample(cls, grid: Grid2D, fn: Callable) -> "MagneticField":
        """Sample a vectorized callable (X, Y) -> (B1, B2) at the grid nodes."""
        xx, yy = grid.meshgrid()
        b1, b2 = fn(xx, yy)
        data = np.stack(
            [np.broadcast_to(b1, grid.shape), np.broadcast_to(b2, grid.shape)]
        ).astype(float)
        return cls(grid, data)


@dataclass(frozen=True)
class VelocityCoeffs:
    """Frozen velocity samples and their SBP derivative grids.

    ``lam_x`` and ``lam_y`` are the advection speeds u1 and u2 at the
    nodes; the ``du*`` grids are the discrete velocity gradients entering
    the zeroth-order coupling term.  All arrays have shape (npx, npy) and
    are read-only.
    """

    grid: Grid2D
    lam_x: np.ndarray
    lam_y: np.ndarray
    du1dx: np.ndarray
    du1dy: np.ndarray
    du2dx: np.ndarray
    du2dy: np.ndarray
    velocity: Callable | None = None

    @property
    def max_speed(self) -> float:
        """max over nodes of |u1| + |u2|; the default dissipation strength."""
        return float(np.max(np.abs(self.lam_x) + np.abs(self.lam_y)))


def sample_velocity(
    velocity: Callable,
    grid: Grid2D,
    op_x: SbpOperator1D,
    op_y: SbpOperator1D,
) -> VelocityCoeffs:
    """Sample a velocity callable (X, Y) -> (u1, u2) and form its gradients.

    The gradient grids are computed with the same SBP operators used by the
    scheme, so a constant velocity yields exactly zero coupling and a
    linear velocity yields its exact gradients.
    """
    xx, yy = grid.meshgrid()
    u1, u2 = velocity(xx, yy)
    u1 = np.broadcast_to(np.asarray(u1, dtype=float), grid.shape)
    u2 = np.broadcast_to(np.asarray(u2, dtype=float), grid.shape)
    for name, u in (("u1", u1), ("u2", u2)):
        if not np.isfinite(u).all():
            i, j = np.argwhere(~np.isfinite(u))[0]
            raise ValueError(f"velocity component {name} is not finite at node ({i}, {j})")
    u1 = np.ascontiguousarray(u1)
    u2 = np.ascontiguousarray(u2)
    coeffs = VelocityCoeffs(
        grid=grid,
        lam_x=u1,
        lam_y=u2,
        du1dx=apply_dx(op_x, u1, grid),
        du1dy=apply_dy(op_y, u1, grid),
        du2dx=apply_dx(op_x, u2, grid),
        du2dy=apply_dy(op_y, u2, grid),
        velocity=velocity,
    )
    for a in (coeffs.lam_x, coeffs.lam_y, coeffs.du1dx, coeffs.du1dy, coeffs.du2dx, coeffs.du2dy):
        a.setflags(write=False)
    return coeffs


def sat_sigma(u_inward, theta: float = 1.0):
    """Penalty coefficient for a boundary node with inward normal speed ``u_inward``.

    Inflow (u_inward > 0) gets sigma = -theta * u_inward; outflow gets 0.
    Any theta >= 1/2 keeps the boundary terms of the energy estimate
    non-positive; theta < 1/2 would allow growth and is rejected.
    """
    if theta < 0.5:
        raise ValueError(f"penalty factor theta must be >= 0.5, got {theta}")
    return -theta * np.maximum(u_inward, 0.0)


@dataclass(frozen=True)
class SatConfig:
    """Per-side SAT penalties divided by the boundary norm weight.

    ``sigma_*`` hold the raw penalty values per boundary node; ``coef_*``
    are sigma / (h * p_end) and multiply (V - g) on the boundary slice.
    Corner nodes receive the contributions of both adjacent sides.
    """

    theta: float
    sigma_xmin: np.ndarray
    sigma_xmax: np.ndarray
    sigma_ymin: np.ndarray
    sigma_ymax: np.ndarray
    coef_xmin: np.ndarray
    coef_xmax: np.ndarray
    coef_ymin: np.ndarray
    coef_ymax: np.ndarray


def make_sat_config(
    coeffs: VelocityCoeffs,
    grid: Grid2D,
    op_x: SbpOperator1D,
    op_y: SbpOperator1D,
    theta: float = 1.0,
) -> SatConfig:
    """Build inflow penalties for all four sides from the sampled velocity."""
    sig = {
        "xmin": sat_sigma(coeffs.lam_x[0, :], theta),
        "xmax": sat_sigma(-coeffs.lam_x[-1, :], theta),
        "ymin": sat_sigma(coeffs.lam_y[:, 0], theta),
        "ymax": sat_sigma(-coeffs.lam_y[:, -1], theta),
    }
    p0x = grid.dx * op_x.p[0]
    pnx = grid.dx * op_x.p[-1]
    p0y = grid.dy * op_y.p[0]
    pny = grid.dy * op_y.p[-1]
    return SatConfig(
        theta=theta,
        sigma_xmin=sig["xmin"],
        sigma_xmax=sig["xmax"],
        sigma_ymin=sig["ymin"],
        sigma_ymax=sig["ymax"],
        coef_xmin=sig["xmin"] / p0x,
        coef_xmax=sig["xmax"] / pnx,
        coef_ymin=sig["ymin"] / p0y,
        coef_ymax=sig["ymax"] / pny,
    )


@dataclass(frozen=True)
class BoundaryData:
    """Dirichlet data evaluator for the four sides of the domain.

    ``mode`` is one of ``zero``, ``exact`` or ``table``.  In ``exact`` mode
    ``exact`` is a callable (X, Y, t) -> (B1, B2) sampled on the requested
    side; in ``table`` mode ``table`` maps each side to (times, g1, g2)
    arrays of shape (nt,), (nt, m), (nt, m) that are interpolated linearly
    in time.
    """

    grid: Grid2D
    mode: str
    exact: Callable | None = None
    table: dict | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("zero", "exact", "table"):
            raise ValueError(f"unknown boundary mode {self.mode!r}")
        if self.mode == "exact" and self.exact is None:
            raise ValueError("exact boundary mode needs an exact-solution callable")
        if self.mode == "table" and self.table is None:
            raise ValueError("table boundary mode needs per-side time tables")

    @classmethod
    def zero(cls, grid: Grid2D) -> "BoundaryData":
        return cls(grid, "zero")

    @classmethod
    def from_exact(cls, grid: Grid2D, exact: Callable) -> "BoundaryData":
        return cls(grid, "exact", exact=exact)

    @classmethod
    def from_table(cls, grid: Grid2D, table: dict) -> "BoundaryData":
        return cls(grid, "table", table=table)


def _side_coords(grid: Grid2D, side: str) -> tuple[np.ndarray, np.ndarray]:
    if side == "xmin":
        return np.full(grid.npy, grid.xmin), grid.y
    if side == "xmax":
        return np.full(grid.npy, grid.xmax), grid.y
    if side == "ymin":
        return grid.x, np.full(grid.npx, grid.ymin)
    if side == "ymax":
        return grid.x, np.full(grid.npx, grid.ymax)
    raise ValueError(f"unknown side {side!r}, expected one of {SIDES}")


def boundary_trace(bdata: BoundaryData, side: str, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate the Dirichlet data (g1, g2) along one side at time t.

    Returns arrays of length npy for the x sides and npx for the y sides,
    ordered by the node index along the side.
    """
    x, y = _side_coords(bdata.grid, side)
    if bdata.mode == "zero":
        return np.zeros(x.size), np.zeros(x.size)
    if bdata.mode == "exact":
        g1, g2 = bdata.exact(x, y, t)
        return (
            np.broadcast_to(np.asarray(g1, dtype=float), x.shape).copy(),
            np.broadcast_to(np.asarray(g2, dtype=float), x.shape).copy(),
        )
    times, g1, g2 = bdata.table[side]
    if not (times[0] <= t <= times[-1]):
        raise ValueError(f"time {t} outside tabulated range [{times[0]}, {times[-1]}]")
    k = int(np.searchsorted(times, t, side="right") - 1)
    k = min(k, len(times) - 2)
    w = (t - times[k]) / (times[k + 1] - times[k])
    return (
        (1 - w) * np.asarray(g1[k], dtype=float) + w * np.asarray(g1[k + 1], dtype=float),
        (1 - w) * np.asarray(g2[k], dtype=float) + w * np.asarray(g2[k + 1], dtype=float),
    )


def _dissipation_ops(diss) -> tuple:
    """Normalize a dissipation argument (None, one operator, or a
    sequence of operators) to a tuple."""
    if diss is None:
        return ()
    if isinstance(diss, (tuple, list)):
        return tuple(diss)
    return (diss,)


def compute_rhs(
    v: np.ndarray,
    t: float,
    grid: Grid2D,
    coeffs: VelocityCoeffs,
    bdata: BoundaryData,
    sat: SatConfig,
    op_x: SbpOperator1D,
    op_y: SbpOperator1D,
    diss_x=None,
    diss_y=None,
) -> np.ndarray:
    """Semi-discrete tendency dV/dt for a field of shape (2, npx, npy).

    Adds, in order: the advection terms, the velocity-gradient coupling,
    optional dissipation along each axis (``diss_x``/``diss_y`` each take
    one operator or a sequence whose contributions add), and the per-side
    SAT penalties (sigma / p_boundary) * (V - g) on the boundary slices of
    both components.  Corner nodes accumulate both adjacent sides.
    """
    if v.shape != (2, grid.npx, grid.npy):
        raise ValueError(
            f"state must have shape (2, {grid.npx}, {grid.npy}), got {v.shape}"
        )
    if not np.isfinite(v).all():
        raise ValueError("state contains non-finite values")
    v1, v2 = v[0], v[1]

    t1 = -coeffs.lam_x * apply_dx(op_x, v1, grid)
    t1 -= coeffs.lam_y * apply_dy(op_y, v1, grid)
    t1 -= coeffs.du2dy * v1
    t1 += coeffs.du1dy * v2

    t2 = -coeffs.lam_x * apply_dx(op_x, v2, grid)
    t2 -= coeffs.lam_y * apply_dy(op_y, v2, grid)
    t2 += coeffs.du2dx * v1
    t2 -= coeffs.du1dx * v2

    for op in _dissipation_ops(diss_x):
        t1 += apply_dx(op, v1, grid)
        t2 += apply_dx(op, v2, grid)
    for op in _dissipation_ops(diss_y):
        t1 += apply_dy(op, v1, grid)
        t2 += apply_dy(op, v2, grid)

    g1, g2 = boundary_trace(bdata, "xmin", t)
    t1[0, :] += sat.coef_xmin * (v1[0, :] - g1)
    t2[0, :] += sat.coef_xmin * (v2[0, :] - g2)
    g1, g2 = boundary_trace(bdata, "xmax", t)
    t1[-1, :] += sat.coef_xmax * (v1[-1, :] - g1)
    t2[-1, :] += sat.coef_xmax * (v2[-1, :] - g2)
    g1, g2 = boundary_trace(bdata, "ymin", t)
    t1[:, 0] += sat.coef_ymin * (v1[:, 0] - g1)
    t2[:, 0] += sat.coef_ymin * (v2[:, 0] - g2)
    g1, g2 = boundary_trace(bdata, "ymax", t)
    t1[:, -1] += sat.coef_ymax * (v1[:, -1] - g1)
    t2[:, -1] += sat.coef_ymax * (v2[:, -1] - g2)

    return np.stack([t1, t2])
