"""Finite cubes of Z^d: site enumeration, neighbours, parity, boundary data.

Sites are ordered row-major over coordinates (last coordinate fastest); the
linear index of a site is fixed once here and used for every matrix layout in
the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

# guard against absurd configuration blowing up memory downstream
_MAX_SITES = 50_000_000


@dataclass(frozen=True)
class Cube:
    """A finite box Λ ⊂ Z^d with L^d sites.

    When ``centered`` is set and L is odd the coordinates run over
    {-(L-1)/2, ..., (L-1)/2} in each direction, otherwise {0, ..., L-1}.
    """

    dim: int
    side: int
    centered: bool = False

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be a positive integer")
        if self.side < 1:
            raise ValueError("side must be a positive integer")
        if self.side**self.dim > _MAX_SITES:
            raise ValueError(f"cube with {self.side}^{self.dim} sites is too large")

    @property
    def n_sites(self) -> int:
        return self.side**self.dim

    @property
    def origin(self) -> int:
        """Smallest coordinate value along each axis."""
        if self.centered and self.side % 2 == 1:
            return -(self.side - 1) // 2
        return 0

    def contains(self, j) -> bool:
        lo = self.origin
        return all(lo <= c < lo + self.side for c in j)

    def index_of(self, j) -> int:
        """Row-major linear index of site j."""
        if not self.contains(j):
            raise ValueError(f"site {tuple(j)} outside cube")
        lo = self.origin
        idx = 0
        for c in j:
            idx = idx * self.side + (c - lo)
        return idx

    def site_of(self, idx: int):
        """Inverse of index_of."""
        if not 0 <= idx < self.n_sites:
            raise ValueError(f"index {idx} out of range")
        lo = self.origin
        coords = []
        for _ in range(self.dim):
            coords.append(lo + idx % self.side)
            idx //= self.side
        return tuple(reversed(coords))


def sites(cube: Cube) -> list[tuple[int, ...]]:
    """All sites of the cube in row-major order."""
    lo = cube.origin
    rng = range(lo, lo + cube.side)
    return [tuple(j) for j in product(rng, repeat=cube.dim)]


def neighbours(cube: Cube, j) -> list[tuple[int, ...]]:
    """Nearest neighbours of j that lie inside the cube."""
    if not cube.contains(j):
        raise ValueError(f"site {tuple(j)} outside cube")
    out = []
    for axis in range(cube.dim):
        for step in (-1, 1):
            k = list(j)
            k[axis] += step
            if cube.contains(k):
                out.append(tuple(k))
    return out


def boundary_deficiency(cube: Cube, j) -> int:
    """Number of nearest neighbours of j missing from the cube (0..2d)."""
    if not cube.contains(j):
        raise ValueError(f"site {tuple(j)} outside cube")
    return 2 * cube.dim - len(neighbours(cube, j))


def parity(j) -> int:
    """(-1)^(j_1 + ... + j_d)."""
    return 1 if sum(j) % 2 == 0 else -1


@dataclass(frozen=True)
class PeriodicPotential:
    """Periodic background potential on Z^d, evaluated componentwise mod p."""

    period: tuple[int, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "period", tuple(int(p) for p in self.period))
        vals = np.asarray(self.values, dtype=np.float64)
        if any(p < 1 for p in self.period):
            raise ValueError("period entries must be positive")
        if vals.shape != self.period:
            raise ValueError(f"values shape {vals.shape} != period {self.period}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, dim: int) -> "PeriodicPotential":
        return cls(period=(1,) * dim, values=np.zeros((1,) * dim))

    def at(self, j) -> float:
        idx = tuple(c % p for c, p in zip(j, self.period))
        return float(self.values[idx])

    def on_cube(self, cube: Cube) -> np.ndarray:
        """Potential evaluated at every site, in linear-index order."""
        return np.array([self.at(j) for j in sites(cube)])
