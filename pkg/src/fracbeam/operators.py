"""Finite-difference operators and stiffness assembly on the uniform grid.

Second differences are closed with Dirichlet ghost zeros, fourth differences
with zero ghosts one node beyond (or a reflected ghost for the clamped
condition, behind ``d4_closure``). The upper-triangular factor R with
R^T R = -D2 plays the role of a first derivative in the energy sense:
``||R w||^2 = -w^T D2 w``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import cholesky as dense_cholesky
from scipy.sparse.linalg import splu

from .model import BeamParams, SpatialGrid

__all__ = [
    "D4_CLOSURES",
    "DiscreteOperators",
    "build_d2",
    "build_d4",
    "cholesky_factor_r",
    "assemble_stiffness",
    "build_shear_map",
    "shear_vector",
    "build_operators",
    "EffectiveSolver",
    "factor_effective",
]

D4_CLOSURES = ("zero_ghost", "reflection")


def build_d2(sgrid: SpatialGrid) -> sp.dia_matrix:
    """Tridiagonal (1, -2, 1)/dx^2 with Dirichlet ghost zeros."""
    j = sgrid.j_count
    if j < 1:
        raise ValueError("grid too small: j_count must be at least 1")
    inv = 1.0 / sgrid.dx**2
    main = np.full(j, -2.0 * inv)
    off = np.full(j - 1, inv)
    return sp.diags([off, main, off], [-1, 0, 1], format="dia")


def build_d4(sgrid: SpatialGrid, closure: str = "zero_ghost") -> sp.dia_matrix:
    """Pentadiagonal (1, -4, 6, -4, 1)/dx^4.

    ``zero_ghost`` sets w at the four ghost nodes to zero; ``reflection``
    folds the outermost ghost back (w_{-1} = w_1), the usual second-order
    closure for the clamped condition w_x = 0.
    """
    j = sgrid.j_count
    if j < 1:
        raise ValueError("grid too small: j_count must be at least 1")
    if closure not in D4_CLOSURES:
        raise ValueError(f"unknown d4 closure {closure!r}; expected one of {D4_CLOSURES}")
    inv = 1.0 / sgrid.dx**4
    main = np.full(j, 6.0 * inv)
    off1 = np.full(max(j - 1, 0), -4.0 * inv)
    off2 = np.full(max(j - 2, 0), 1.0 * inv)
    if closure == "reflection":
        main[0] += inv
        main[-1] += inv
    return sp.diags([off2, off1, main, off1, off2], [-2, -1, 0, 1, 2], format="dia")


def cholesky_factor_r(d2) -> np.ndarray:
    """Upper-triangular R with R^T R = -d2.

    Accepts any symmetric negative-definite matrix (dense or sparse); a
    non-positive pivot in the factorization signals an invalid input.
    """
    a = d2.toarray() if sp.issparse(d2) else np.asarray(d2, dtype=float)
    try:
        return dense_cholesky(-a, lower=False)
    except np.linalg.LinAlgError as exc:
        raise ValueError("matrix is not negative definite") from exc


def _gram_tridiagonal(r: np.ndarray) -> sp.dia_matrix:
    """R^T R for upper-bidiagonal R, assembled entrywise so the result is
    exactly symmetric."""
    d0 = np.diag(r)
    d1 = np.diag(r, 1)
    main = d0**2
    main[1:] += d1**2
    off = d0[:-1] * d1
    return sp.diags([off, main, off], [-1, 0, 1], format="dia")


def build_shear_map(params: BeamParams, r_factor: np.ndarray) -> sp.csr_matrix:
    """S = [-I, I, gamma*R], mapping [u; v; w] to the shear -u + v + gamma*R w."""
    j = r_factor.shape[0]
    eye = sp.identity(j, format="csr")
    return sp.hstack([-eye, eye, params.gamma * sp.csr_matrix(r_factor)], format="csr")


def assemble_stiffness(
    params: BeamParams,
    d2: sp.spmatrix,
    d4: sp.spmatrix,
    r_factor: np.ndarray,
) -> sp.csr_matrix:
    """K = blockdiag(-theta*D2, -chi*D2, zeta*D4) + k*S^T S.

    The coupling blocks are written out with exactly mirrored transposes and
    the (3,3) Gram block R^T R is built entrywise, so K is symmetric to the
    bit, not merely up to round-off.
    """
    j = d2.shape[0]
    if d4.shape[0] != j or r_factor.shape != (j, j):
        raise ValueError("operator dimensions disagree")
    k, g = params.k, params.gamma
    a11 = (-params.theta) * d2
    a22 = (-params.chi) * d2
    a33 = params.zeta * d4
    if k != 0.0:
        eye = sp.identity(j, format="csr")
        r_sp = sp.csr_matrix(np.triu(r_factor))
        rt_sp = sp.csr_matrix(r_sp.T)
        gram = _gram_tridiagonal(r_factor)
        blocks = [
            [a11 + k * eye, -k * eye, (-k * g) * r_sp],
            [-k * eye, a22 + k * eye, (k * g) * r_sp],
            [(-k * g) * rt_sp, (k * g) * rt_sp, a33 + (k * g * g) * gram],
        ]
    else:
        blocks = [[a11, None, None], [None, a22, None], [None, None, a33]]
    return sp.bmat(blocks, format="csr")


@dataclass(frozen=True)
class DiscreteOperators:
    """Assembled spatial operators shared (read-only) by a simulation run."""

    d2: sp.spmatrix
    d4: sp.spmatrix
    r_factor: np.ndarray
    k_stiff: sp.csr_matrix
    shear_map: sp.csr_matrix
    j_count: int
    dx: float

    @property
    def n_dof(self) -> int:
        return 3 * self.j_count


def build_operators(
    sgrid: SpatialGrid, params: BeamParams, d4_closure: str = "zero_ghost"
) -> DiscreteOperators:
    d2 = build_d2(sgrid)
    d4 = build_d4(sgrid, closure=d4_closure)
    r = cholesky_factor_r(d2)
    k_stiff = assemble_stiffness(params, d2, d4, r)
    shear = build_shear_map(params, r)
    return DiscreteOperators(
        d2=d2, d4=d4, r_factor=r, k_stiff=k_stiff, shear_map=shear,
        j_count=sgrid.j_count, dx=sgrid.dx,
    )


def shear_vector(state, ops: DiscreteOperators) -> np.ndarray:
    """s = -u + v + gamma*R w for the current displacement."""
    return ops.shear_map @ state.u_disp


class EffectiveSolver:
    """Factorization of tau*I + sigma*K, reused for every step of a run."""

    def __init__(self, ops: DiscreteOperators, tau: float, sigma: float):
        n = ops.n_dof
        matrix = (sigma * ops.k_stiff + tau * sp.identity(n, format="csr")).tocsc()
        self.matrix = matrix
        self.tau = tau
        self.sigma = sigma
        try:
            self._lu = splu(matrix)
        except RuntimeError as exc:  # singular factorization
            raise ValueError("effective system matrix is singular") from exc

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return self._lu.solve(rhs)


def factor_effective(ops: DiscreteOperators, tau: float, sigma: float) -> EffectiveSolver:
    """Factor tau*I + sigma*K once; K is positive semidefinite so the system
    is definite for any tau > 0."""
    return EffectiveSolver(ops, tau, sigma)
