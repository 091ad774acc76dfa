"""Lattice Hamiltonians and 2n x 2n block operators.

Builds the discrete Laplacian under three boundary modes, multiplication
operators, the d-wave off-diagonal block, the block assemblies
[[A, B], [B, -A]] (plain and with different diagonal blocks), the explicit
unitary conjugations used as independent oracles, and a plain-text triplet
export.  All matrices are dense, symmetric by construction.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .lattice import Cube, boundary_deficiency, neighbours, parity, sites


class BoundaryMode(Enum):
    ADJACENCY = "adjacency"   # plain truncation of the centred Laplacian
    NEUMANN = "neumann"       # graph Laplacian
    DIRICHLET = "dirichlet"   # graph Laplacian + 2*Gamma


class PreconditionError(ValueError):
    """A transform was applied to a matrix violating its hypothesis."""


def adjacency(cube: Cube) -> np.ndarray:
    """Nearest-neighbour adjacency matrix of the cube (0/1 entries)."""
    n = cube.n_sites
    a = np.zeros((n, n))
    for j in sites(cube):
        i = cube.index_of(j)
        for k in neighbours(cube, j):
            a[i, cube.index_of(k)] = 1.0
    return a


def gamma(cube: Cube) -> np.ndarray:
    """Diagonal boundary-deficiency operator (missing-neighbour counts)."""
    return np.diag([float(boundary_deficiency(cube, j)) for j in sites(cube)])


def laplacian(cube: Cube, mode: BoundaryMode, sign: int = 1) -> np.ndarray:
    """sign times the truncated Laplacian in the given boundary mode.

    ADJACENCY: hopping only, zero diagonal (sign=+1 gives the centred
    discrete Laplacian restricted to the cube).  NEUMANN: adjacency minus
    degree, so sign=-1 yields the positive semidefinite graph Laplacian.
    DIRICHLET: Neumann shifted by -2*Gamma, i.e. -lap_D = -lap_N + 2*Gamma.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a = adjacency(cube)
    if mode is BoundaryMode.ADJACENCY:
        lap = a
    elif mode is BoundaryMode.NEUMANN:
        lap = a - np.diag(a.sum(axis=1))
    elif mode is BoundaryMode.DIRICHLET:
        lap = a - np.diag(a.sum(axis=1)) - 2.0 * gamma(cube)
    else:
        raise ValueError(f"unknown boundary mode {mode}")
    return sign * lap


def diag_op(values) -> np.ndarray:
    """Multiplication operator for per-site values in linear-index order."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise ValueError("expected a flat array of site values")
    return np.diag(values)


def parity_values(cube: Cube) -> np.ndarray:
    """(-1)^(sum of coordinates) per site, in linear-index order."""
    return np.array([float(parity(j)) for j in sites(cube)])


def dwave_b(cube: Cube, beta: float, mode: BoundaryMode = BoundaryMode.ADJACENCY) -> np.ndarray:
    """d-wave pair potential: beta * (1-d Laplacian in x minus in y).

    Only defined on two-dimensional cubes.  The x direction is axis 0 of the
    site coordinates.
    """
    if cube.dim != 2:
        raise ValueError("d-wave block requires a 2-dimensional cube")
    n = cube.n_sites
    b = np.zeros((n, n))
    deg = np.zeros((n, 2))  # per-direction degree, for Neumann/Dirichlet
    for j in sites(cube):
        i = cube.index_of(j)
        for k in neighbours(cube, j):
            axis = 0 if k[0] != j[0] else 1
            b[i, cube.index_of(k)] += 1.0 if axis == 0 else -1.0
            deg[i, axis] += 1.0
    if mode in (BoundaryMode.NEUMANN, BoundaryMode.DIRICHLET):
        b -= np.diag(deg[:, 0] - deg[:, 1])
    if mode is BoundaryMode.DIRICHLET:
        miss = np.array([[2.0 - deg[cube.index_of(j), axis] for axis in (0, 1)]
                         for j in sites(cube)])
        b -= 2.0 * np.diag(miss[:, 0] - miss[:, 1])
    return beta * b


def assemble(h: np.ndarray, b: np.ndarray) -> np.ndarray:
    """The block operator [[H, B], [B, -H]]."""
    h = np.asarray(h, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if h.shape != b.shape or h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("H and B must be square matrices of equal dimension")
    return np.block([[h, b], [b, -h]])


def assemble_bracketing(h_top: np.ndarray, h_bot: np.ndarray, b: np.ndarray) -> np.ndarray:
    """The block operator [[H_top, B], [B, -H_bot]] (bracketing variant)."""
    h_top = np.asarray(h_top, dtype=np.float64)
    h_bot = np.asarray(h_bot, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if not (h_top.shape == h_bot.shape == b.shape) or h_top.ndim != 2:
        raise ValueError("blocks must be square matrices of equal dimension")
    return np.block([[h_top, b], [b, -h_bot]])


def _split_blocks(m: np.ndarray):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 != 0:
        raise ValueError("expected a 2n x 2n block matrix")
    n = m.shape[0] // 2
    return m[:n, :n], m[:n, n:], m[n:, :n], m[n:, n:], n


def transform_u1(m: np.ndarray) -> np.ndarray:
    """Conjugation by (1/sqrt2) [[1, 1], [1, -1]]: swaps diagonal and
    off-diagonal blocks of [[H, B], [B, -H]]."""
    _, _, _, _, n = _split_blocks(m)
    eye = np.eye(n)
    u = np.block([[eye, eye], [eye, -eye]]) / np.sqrt(2.0)
    return u @ m @ u.T


def transform_u2(m: np.ndarray) -> np.ndarray:
    """Particle-hole conjugation by [[0, 1], [-1, 0]]; negates the block
    operator when it has the [[H, B], [B, -H]] shape."""
    _, _, _, _, n = _split_blocks(m)
    eye = np.eye(n)
    u = np.block([[np.zeros((n, n)), eye], [-eye, np.zeros((n, n))]])
    return u @ m @ u.T


def transform_u3_square(m: np.ndarray) -> np.ndarray:
    """Conjugation of M^2 by (1/sqrt2) [[1, i], [i, 1]].

    For M = [[H, B], [B, -H]] the result is block-diagonal with blocks
    H^2 + B^2 -/+ i[H, B].  Returns a complex matrix.
    """
    _, _, _, _, n = _split_blocks(m)
    eye = np.eye(n)
    u = np.block([[eye, 1j * eye], [1j * eye, eye]]) / np.sqrt(2.0)
    m2 = np.asarray(m, dtype=np.float64) @ np.asarray(m, dtype=np.float64)
    return u @ m2 @ u.conj().T


def transform_parity(m: np.ndarray, cube: Cube, tol: float = 1e-12):
    """Block-diagonalization via the on-site parity involution.

    Requires that the top-left block anticommutes with U = diag((-1)^j) and
    that the off-diagonal block commutes with U (diagonal B always does);
    otherwise raises PreconditionError.  Returns (conjugated matrix,
    H_plus, H_minus) where H_pm = A +/- U B.
    """
    a, b, _, d, n = _split_blocks(m)
    if np.abs(d + a).max() > tol * max(1.0, np.abs(a).max()):
        raise PreconditionError("bottom-right block is not -top-left")
    if cube.n_sites != n:
        raise PreconditionError("cube size does not match block dimension")
    uvals = parity_values(cube)
    u = np.diag(uvals)
    scale = max(1.0, np.abs(a).max(), np.abs(b).max())
    if np.abs(u @ a + a @ u).max() > tol * scale:
        raise PreconditionError("top-left block does not anticommute with parity")
    if np.abs(b @ u - u @ b).max() > tol * scale:
        raise PreconditionError("off-diagonal block does not commute with parity")
    uu = np.block([[np.eye(n), u], [np.eye(n), -u]]) / np.sqrt(2.0)
    conj = uu @ np.asarray(m, dtype=np.float64) @ uu.T
    h_plus = a + u @ b
    h_minus = a - u @ b
    return conj, h_plus, h_minus


def square_identity_residual(h: np.ndarray, b: np.ndarray) -> float:
    """Frobenius norm of M^2 minus its closed-form block expression,
    M = [[H, B], [B, -H]]."""
    h = np.asarray(h, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if h.shape != b.shape:
        raise ValueError("H and B must have equal dimensions")
    m = assemble(h, b)
    m2 = m @ m
    comm = h @ b - b @ h
    diag = h @ h + b @ b
    expected = np.block([[diag, comm], [-comm, diag]])
    return float(np.linalg.norm(m2 - expected))


def to_triplets(m: np.ndarray, tol: float = 0.0) -> str:
    """Plain-text (row, col, value) export for cross-checking, one entry per
    line, zeros below ``tol`` omitted."""
    m = np.asarray(m)
    lines = [f"# rows {m.shape[0]} cols {m.shape[1]}"]
    rows, cols = np.nonzero(np.abs(m) > tol)
    for r, c in zip(rows, cols):
        lines.append(f"{r} {c} {float(m[r, c])!r}")
    return "\n".join(lines) + "\n"
