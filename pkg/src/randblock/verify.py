"""Exact-identity verification suites over randomized small instances.

Each suite checks one finite-dimensional spectral identity of the block
operators at small randomized sizes and reports pass/fail together with the
seed needed to replay a failure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import operators as ops
from .analysis import const_b_map
from .eigen import eigvalsh
from .lattice import Cube, boundary_deficiency, sites
from .operators import BoundaryMode
from .spectra import symmetry_residual, zero_split_check


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str
    seed: int


def _rng(seed: int, tag: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=(seed << 64) | tag))


def _random_symmetric(rng, n: int) -> np.ndarray:
    a = rng.standard_normal((n, n))
    return (a + a.T) / 2.0


def _spec(m) -> np.ndarray:
    return eigvalsh(m).eigenvalues


def suite_symmetry(seed: int, trials: int = 10) -> SuiteResult:
    """Spectra of [[H, b], [b, -H]] are symmetric about zero."""
    rng = _rng(seed, 1)
    worst = 0.0
    for _ in range(trials):
        side = int(rng.integers(6, 20))
        cube = Cube(1, side)
        h = ops.laplacian(cube, BoundaryMode.NEUMANN, -1) + np.diag(rng.uniform(0, 2, side))
        m = ops.assemble(h, np.diag(rng.uniform(-1, 1, side)))
        ev = _spec(m)
        scale = max(1.0, np.abs(ev).max())
        worst = max(worst, symmetry_residual(ev) / scale)
    passed = worst <= 1e-9
    return SuiteResult("symmetry", passed, f"max relative residual {worst:.3e}", seed)


def suite_square_identity(seed: int, trials: int = 10) -> SuiteResult:
    """Closed-form block expression for the squared operator, plus the
    Dirichlet = Neumann + 2*Gamma boundary relation against an independent
    missing-neighbour count."""
    rng = _rng(seed, 2)
    worst = 0.0
    for t in range(trials):
        n = int(rng.integers(2, 17))
        if t % 3 == 0:
            h = np.diag(rng.uniform(-1, 1, n))
            b = np.diag(rng.uniform(-1, 1, n))      # commuting pair
        else:
            h = _random_symmetric(rng, n)
            b = _random_symmetric(rng, n)
        scale = (np.abs(_spec(h)).max() + np.abs(_spec(b)).max()) ** 2
        worst = max(worst, ops.square_identity_residual(h, b) / max(scale, 1e-30))
    boundary_ok = True
    for dim, side in ((1, 5), (2, 4)):
        cube = Cube(dim, side)
        diff = ops.laplacian(cube, BoundaryMode.DIRICHLET, -1) - ops.laplacian(cube, BoundaryMode.NEUMANN, -1)
        expected = 2.0 * np.diag([float(boundary_deficiency(cube, j)) for j in sites(cube)])
        if np.abs(diff - expected).max() > 0:
            boundary_ok = False
    passed = worst <= 1e-12 and boundary_ok
    detail = f"max relative residual {worst:.3e}, boundary relation {'ok' if boundary_ok else 'VIOLATED'}"
    return SuiteResult("square-identity", passed, detail, seed)


def suite_parity_equivalence(seed: int, trials: int = 6) -> SuiteResult:
    """spec([[Δ, b], [b, -Δ]]) equals spec(Δ + Ub) ∪ spec(Δ - Ub) for the
    hopping-only Laplacian; the Neumann variant must fail (negative control,
    its diagonal breaks the anticommutation)."""
    rng = _rng(seed, 3)
    worst = 0.0
    control_gap = np.inf
    for t in range(trials):
        dim = 1 if t % 2 == 0 else 2
        side = int(rng.integers(4, 10)) if dim == 1 else int(rng.integers(3, 5))
        cube = Cube(dim, side)
        bdiag = rng.uniform(-1, 1, cube.n_sites)
        delta = ops.laplacian(cube, BoundaryMode.ADJACENCY, 1)
        m = ops.assemble(delta, np.diag(bdiag))
        _, h_plus, h_minus = ops.transform_parity(m, cube)
        direct = _spec(m)
        split = np.sort(np.concatenate([_spec(h_plus), _spec(h_minus)]))
        scale = max(1.0, np.abs(direct).max())
        worst = max(worst, np.abs(direct - split).max() / scale)
        # negative control: same construction with the graph Laplacian
        neu = ops.laplacian(cube, BoundaryMode.NEUMANN, -1)
        u = np.diag(ops.parity_values(cube))
        m_neu = ops.assemble(neu, np.diag(bdiag))
        split_neu = np.sort(np.concatenate([
            _spec(neu + u @ np.diag(bdiag)), _spec(neu - u @ np.diag(bdiag))]))
        control_gap = min(control_gap, float(np.abs(_spec(m_neu) - split_neu).max()))
    passed = worst <= 1e-8 and control_gap > 1e-3
    detail = f"max relative mismatch {worst:.3e}, Neumann control deviation {control_gap:.3e}"
    return SuiteResult("parity-equivalence", passed, detail, seed)


def suite_gap_bound(seed: int, trials: int = 25) -> SuiteResult:
    """No eigenvalue inside (-sqrt(lam^2+beta^2), +sqrt(lam^2+beta^2)) when
    H >= lam and diagonal b >= beta; bracketing variants keep (-lam, lam)
    free when both diagonal blocks are >= lam."""
    rng = _rng(seed, 4)
    ok = True
    worst = np.inf
    for _ in range(trials):
        n = int(rng.integers(2, 33))
        lam = rng.uniform(0.1, 2.0)
        beta = rng.uniform(0.0, 2.0)
        h = _random_symmetric(rng, n)
        h += (lam - _spec(h)[0]) * np.eye(n)
        b = np.diag(beta + rng.uniform(0, 1, n))
        gap = np.abs(_spec(ops.assemble(h, b))).min()
        bound = np.sqrt(lam**2 + beta**2)
        worst = min(worst, gap - bound)
        if gap < bound - 1e-9:
            ok = False
        h2 = _random_symmetric(rng, n)
        h2 += (lam - _spec(h2)[0]) * np.eye(n)
        b_any = _random_symmetric(rng, n)
        gap2 = np.abs(_spec(ops.assemble_bracketing(h, h2, b_any))).min()
        if gap2 < lam - 1e-9:
            ok = False
            worst = min(worst, gap2 - lam)
    return SuiteResult("gap-bound", ok, f"worst margin {worst:.3e}", seed)


def suite_zero_split(seed: int, trials: int = 8) -> SuiteResult:
    """Gapped realizations have exactly n negative and n positive
    eigenvalues under every boundary restriction."""
    rng = _rng(seed, 5)
    ok = True
    for _ in range(trials):
        side = int(rng.integers(5, 15))
        cube = Cube(1, side)
        v = rng.uniform(1, 2, side)
        bdiag = rng.uniform(-0.5, 0.5, side)
        neu = ops.laplacian(cube, BoundaryMode.NEUMANN, -1)
        dir_ = ops.laplacian(cube, BoundaryMode.DIRICHLET, -1)
        h_n = neu + np.diag(v)
        h_d = dir_ + np.diag(v)
        b = np.diag(bdiag)
        for m in (ops.assemble(h_n, b), ops.assemble(h_d, b),
                  ops.assemble_bracketing(h_d, h_n, b),
                  ops.assemble_bracketing(h_n, h_d, b)):
            if not zero_split_check(_spec(m)):
                ok = False
    return SuiteResult("zero-split", ok, "half-and-half split" if ok else "split violated", seed)


def suite_bracketing_sandwich(seed: int, trials: int = 6, n_grid: int = 32) -> SuiteResult:
    """Counting functions are ordered: plus-bracketing counts least, minus
    counts most, with D and N in between, at every probe energy."""
    rng = _rng(seed, 6)
    ok = True
    for _ in range(trials):
        side = int(rng.integers(5, 15))
        cube = Cube(1, side)
        v = rng.uniform(0, 2, side)
        bdiag = rng.uniform(-1, 1, side)
        neu = ops.laplacian(cube, BoundaryMode.NEUMANN, -1)
        dir_ = ops.laplacian(cube, BoundaryMode.DIRICHLET, -1)
        b = np.diag(bdiag)
        ev_plus = _spec(ops.assemble_bracketing(dir_ + np.diag(v), neu + np.diag(v), b))
        ev_minus = _spec(ops.assemble_bracketing(neu + np.diag(v), dir_ + np.diag(v), b))
        ev_d = _spec(ops.assemble(dir_ + np.diag(v), b))
        ev_n = _spec(ops.assemble(neu + np.diag(v), b))
        grid = np.linspace(ev_minus.min() - 0.5, ev_plus.max() + 0.5, n_grid)
        for e in grid:
            c = {k: int(np.searchsorted(ev, e, side="right"))
                 for k, ev in (("+", ev_plus), ("-", ev_minus), ("D", ev_d), ("N", ev_n))}
            if not (c["+"] <= c["D"] <= c["-"] and c["+"] <= c["N"] <= c["-"]):
                ok = False
    return SuiteResult("bracketing-sandwich", ok,
                       "counting chains hold" if ok else "counting chain violated", seed)


def suite_const_b_map(seed: int, trials: int = 6) -> SuiteResult:
    """spec([[H, beta], [beta, -H]]) equals the mapped multiset
    {±sqrt(E^2+beta^2)}."""
    rng = _rng(seed, 7)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 25))
        beta = rng.uniform(0.2, 2.0)
        h = _random_symmetric(rng, n)
        direct = _spec(ops.assemble(h, beta * np.eye(n)))
        mapped = const_b_map(_spec(h), beta)
        scale = max(1.0, np.abs(direct).max())
        worst = max(worst, np.abs(direct - mapped).max() / scale)
    passed = worst <= 1e-8
    return SuiteResult("const-b-map", passed, f"max relative mismatch {worst:.3e}", seed)


ALL_SUITES = (
    suite_symmetry,
    suite_square_identity,
    suite_parity_equivalence,
    suite_gap_bound,
    suite_zero_split,
    suite_bracketing_sandwich,
    suite_const_b_map,
)


def run_all(seed: int = 0) -> list[SuiteResult]:
    return [suite(seed) for suite in ALL_SUITES]
