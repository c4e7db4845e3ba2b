"""Configuration and state types for the fractionally damped sandwich beam.

The model couples two longitudinal wave equations (face-layer displacements
``u``, ``v``) and one transverse bending equation (``w``) through the shear
combination ``-u + v + gamma*w_x``, with a generalized Caputo damping channel
of order ``alpha`` and exponential weight ``eta`` acting on all three fields.
Unit densities are assumed, and all fields satisfy homogeneous Dirichlet
(and, for ``w``, clamped) boundary conditions on ``(0, ell)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .operators import DiscreteOperators

__all__ = [
    "BeamParams",
    "FractionalParams",
    "SpatialGrid",
    "TimeGrid",
    "NewmarkParams",
    "BeamState",
    "ValidationReport",
    "validate_config",
    "initial_profiles",
    "build_initial_state",
]


@dataclass(frozen=True)
class BeamParams:
    """Physical coefficients of the beam.

    ``theta`` and ``chi`` are the tension moduli of the two face layers,
    ``zeta`` the bending stiffness of the transverse field, ``k`` the shear
    coupling stiffness (zero decouples the layers), ``gamma`` the shear
    geometry factor and ``ell`` the beam length. Stiffness moduli and the
    length must be positive; ``k`` must be nonnegative.
    """

    theta: float = 1.0
    chi: float = 1.0
    zeta: float = 1.0
    k: float = 1.0
    gamma: float = 1.0
    ell: float = 1.0


@dataclass(frozen=True)
class FractionalParams:
    """Order and exponential weight of the generalized Caputo derivative.

    ``c_frak = sin(alpha*pi)/pi`` normalizes the diffusive realization of the
    operator; it is derived from ``alpha`` and not settable.
    """

    alpha: float
    eta: float
    c_frak: float = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "c_frak", math.sin(self.alpha * math.pi) / math.pi)


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform interior grid ``x_j = j*dx`` for ``j = 1..j_count``.

    ``dx * j_count`` equals the beam length; ghost values at ``j = 0`` and
    ``j = j_count + 1`` (and ``j = -1``, ``j_count + 2`` for the fourth
    difference) are zero.
    """

    j_count: int
    dx: float

    @classmethod
    def for_beam(cls, j_count: int, ell: float) -> "SpatialGrid":
        return cls(j_count=j_count, dx=ell / j_count)

    @property
    def ell(self) -> float:
        return self.dx * self.j_count

    def nodes(self) -> np.ndarray:
        return np.arange(1, self.j_count + 1, dtype=float) * self.dx


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid with step ``dt`` and ``n_steps`` steps."""

    dt: float
    n_steps: int

    @property
    def t_final(self) -> float:
        return self.dt * self.n_steps

    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1, dtype=float) * self.dt


@dataclass(frozen=True)
class NewmarkParams:
    """Integrator parameters; (1/4, 1/2) is the energy-conserving
    average-acceleration choice and the default."""

    beta_tilde: float = 0.25
    gamma_tilde: float = 0.5


@dataclass
class BeamState:
    """Displacement, velocity and acceleration at one time level.

    Vectors of length ``3J`` hold the three fields concatenated in the fixed
    block order ``[u; v; w]``, matching the block structure of the stiffness
    matrix.
    """

    u_disp: np.ndarray
    u_vel: np.ndarray
    u_acc: np.ndarray
    t: float = 0.0

    @property
    def j_count(self) -> int:
        return self.u_disp.shape[0] // 3

    def blocks(self, which: str = "disp") -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Views of the u/v/w blocks of one state vector."""
        vec = {"disp": self.u_disp, "vel": self.u_vel, "acc": self.u_acc}[which]
        j = self.j_count
        return vec[:j], vec[j : 2 * j], vec[2 * j :]

    def copy(self) -> "BeamState":
        return BeamState(self.u_disp.copy(), self.u_vel.copy(), self.u_acc.copy(), self.t)


@dataclass
class ValidationReport:
    """Outcome of configuration validation: empty ``violations`` means pass."""

    violations: list[tuple[str, str]]

    @property
    def ok(self) -> bool:
        return not self.violations

    def messages(self) -> list[str]:
        return [f"{name}: {msg}" for name, msg in self.violations]

    def __str__(self) -> str:
        return "pass" if self.ok else "; ".join(self.messages())


def validate_config(
    params: BeamParams,
    frac: FractionalParams,
    sgrid: SpatialGrid,
    tgrid: TimeGrid,
    newmark: NewmarkParams | None = None,
) -> ValidationReport:
    """Check every structural invariant of a run configuration.

    Report-style: never raises, returns the list of violated invariants with
    the offending field names.
    """
    bad: list[tuple[str, str]] = []

    for name in ("theta", "chi", "zeta", "ell"):
        if not getattr(params, name) > 0.0:
            bad.append((name, "must be strictly positive"))
    if not params.k >= 0.0:
        bad.append(("k", "must be nonnegative"))

    if not 0.0 < frac.alpha < 1.0:
        bad.append(("alpha", "must lie in open interval (0,1)"))
    if not frac.eta >= 0.0:
        bad.append(("eta", "must be nonnegative"))
    expected_c = math.sin(frac.alpha * math.pi) / math.pi
    if not abs(frac.c_frak - expected_c) <= 4.0 * abs(expected_c) * np.finfo(float).eps:
        bad.append(("c_frak", "must equal sin(alpha*pi)/pi"))

    if sgrid.j_count < 3:
        bad.append(("j_count", "j_count >= 3 required by the fourth-difference stencil"))
    if not sgrid.dx > 0.0:
        bad.append(("dx", "must be strictly positive"))
    elif abs(sgrid.dx * sgrid.j_count - params.ell) > 1e-12 * max(params.ell, 1.0):
        bad.append(("dx", "dx * j_count must equal ell"))

    if not tgrid.dt > 0.0:
        bad.append(("dt", "must be strictly positive"))
    if tgrid.n_steps < 1:
        bad.append(("n_steps", "must be at least 1"))

    if newmark is not None:
        if not 0.0 <= newmark.beta_tilde <= 0.5:
            bad.append(("beta_tilde", "must lie in [0, 1/2]"))
        if not 0.0 <= newmark.gamma_tilde <= 1.0:
            bad.append(("gamma_tilde", "must lie in [0, 1]"))

    return ValidationReport(bad)


def initial_profiles(x: np.ndarray, params: BeamParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Closed-form initial displacements sampled at the points ``x``.

    ``u0 = x*(ell^3/8 - |x - ell/2|^3)`` and
    ``w0 = x*(x - ell/2)*(ell^3/8 - |x - ell/2|^3)`` vanish at both beam ends;
    ``v0`` is identically zero. All initial velocities are zero.
    """
    x = np.asarray(x, dtype=float)
    ell = params.ell
    bump = ell**3 / 8.0 - np.abs(x - ell / 2.0) ** 3
    u0 = x * bump
    v0 = np.zeros_like(x)
    w0 = x * (x - ell / 2.0) * bump
    return u0, v0, w0


def build_initial_state(sgrid: SpatialGrid, params: BeamParams, ops: "DiscreteOperators") -> BeamState:
    """Sample the initial data on the grid and form a consistent start state.

    Velocities are zero, so the damping channels (diffusive field and history
    sum alike) vanish at t=0 and the initial acceleration solves the
    undamped equation of motion, ``acc = -K @ disp``; the implicit recursion
    needs this consistent start level.
    """
    x = sgrid.nodes()
    u0, v0, w0 = initial_profiles(x, params)
    disp = np.concatenate([u0, v0, w0])
    vel = np.zeros_like(disp)
    acc = -(ops.k_stiff @ disp)
    return BeamState(u_disp=disp, u_vel=vel, u_acc=acc, t=0.0)
