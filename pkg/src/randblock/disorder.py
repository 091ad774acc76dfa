"""Compactly supported disorder densities, i.i.d. sampling, seeding.

Sampling is inverse-CDF over a piecewise-constant density, driven by the
Philox 4x64 counter-based generator from NumPy with one stream per
(realization, field).  Identical seeds give bit-identical streams within one
build of the package; cross-platform bit equality of the float arithmetic is
not promised.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_NORM_TOL = 1e-12

# stream tags for the two random fields
FIELD_V = 0
FIELD_B = 1
_FIELD_TAGS = {"V": FIELD_V, "b": FIELD_B}


@dataclass(frozen=True)
class DensitySpec:
    """Piecewise-constant probability density with compact support.

    ``breakpoints`` are the ascending cell edges (len k+1), ``heights`` the
    density value on each cell (len k).  Must integrate to one.
    """

    breakpoints: tuple[float, ...]
    heights: tuple[float, ...]

    def __post_init__(self):
        bp = tuple(float(x) for x in self.breakpoints)
        hs = tuple(float(h) for h in self.heights)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "heights", hs)
        if len(bp) < 2 or len(hs) != len(bp) - 1:
            raise ValueError("need k+1 breakpoints for k cell heights")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly ascending")
        if any(h < 0 for h in hs):
            raise ValueError("heights must be non-negative")
        total = sum(h * (b2 - b1) for h, b1, b2 in zip(hs, bp, bp[1:]))
        if abs(total - 1.0) > _NORM_TOL:
            raise ValueError(f"density integrates to {total}, not 1")

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "DensitySpec":
        if not hi > lo:
            raise ValueError("need hi > lo")
        return cls((lo, hi), (1.0 / (hi - lo),))

    def pdf(self, x: float) -> float:
        bp = self.breakpoints
        if x < bp[0] or x > bp[-1]:
            return 0.0
        for h, b1, b2 in zip(self.heights, bp, bp[1:]):
            if b1 <= x <= b2:
                return h
        return 0.0

    def cdf(self, x: float) -> float:
        acc = 0.0
        for h, b1, b2 in zip(self.heights, self.breakpoints, self.breakpoints[1:]):
            if x <= b1:
                break
            acc += h * (min(x, b2) - b1)
        return min(acc, 1.0)


@dataclass(frozen=True)
class ConstantValue:
    """Degenerate point mass; usable wherever only sampling and support
    bounds are needed (e.g. constant off-diagonal b)."""

    value: float


Density = DensitySpec | ConstantValue


def support_bounds(density: Density) -> tuple[float, float]:
    """Exact support interval endpoints."""
    if isinstance(density, ConstantValue):
        return density.value, density.value
    return density.breakpoints[0], density.breakpoints[-1]


def bv_norm(density: DensitySpec) -> float:
    """Total variation of the density on R, including the jumps from and to
    zero at the support edges."""
    if isinstance(density, ConstantValue):
        raise ValueError("point mass has no density of bounded variation")
    levels = (0.0,) + density.heights + (0.0,)
    return sum(abs(b - a) for a, b in zip(levels, levels[1:]))


@dataclass(frozen=True)
class DisorderModel:
    """Laws of the i.i.d. on-site potential V and off-diagonal b,
    independent of each other."""

    mu_v: Density
    mu_b: Density


@dataclass(frozen=True)
class SeedPolicy:
    """Deterministic stream derivation: the Philox key for one field of one
    realization is the 128-bit integer (base_seed << 64) | (2*index + tag),
    tag 0 for V and 1 for b.  Collision-free for index < 2^63."""

    base_seed: int

    def __post_init__(self):
        if not 0 <= self.base_seed < 2**64:
            raise ValueError("base_seed must fit in 64 bits")

    def generator(self, realization_index: int, field: str) -> np.random.Generator:
        if field not in _FIELD_TAGS:
            raise ValueError(f"field must be one of {sorted(_FIELD_TAGS)}")
        if realization_index < 0:
            raise ValueError("realization index must be non-negative")
        key = (self.base_seed << 64) | (2 * realization_index + _FIELD_TAGS[field])
        return np.random.Generator(np.random.Philox(key=key))


def sample_iid(density: Density, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. draws via inverse CDF of the piecewise-constant density."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if isinstance(density, ConstantValue):
        return np.full(n, density.value)
    u = rng.random(n)
    bp = np.asarray(density.breakpoints)
    hs = np.asarray(density.heights)
    widths = np.diff(bp)
    cum = np.concatenate([[0.0], np.cumsum(hs * widths)])
    cum[-1] = 1.0  # guard round-off at the top
    # zero-height cells carry no probability; searchsorted side='right' skips them
    cell = np.clip(np.searchsorted(cum, u, side="right") - 1, 0, len(hs) - 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(hs[cell] > 0, (u - cum[cell]) / hs[cell], 0.0)
    return bp[cell] + frac
