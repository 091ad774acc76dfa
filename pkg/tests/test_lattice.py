import numpy as np
import pytest

from randblock.lattice import (
    Cube,
    PeriodicPotential,
    boundary_deficiency,
    neighbours,
    parity,
    sites,
)


def test_sites_centered_1d():
    assert sites(Cube(1, 3, centered=True)) == [(-1,), (0,), (1,)]


def test_sites_single_site_2d():
    assert sites(Cube(2, 1)) == [(0, 0)]


def test_sites_count_row_major():
    cube = Cube(2, 3)
    ss = sites(cube)
    assert len(ss) == 9
    assert ss[0] == (0, 0) and ss[1] == (0, 1) and ss[3] == (1, 0)


def test_index_roundtrip():
    for cube in (Cube(1, 5), Cube(2, 4), Cube(3, 3, centered=True), Cube(3, 3)):
        for i, j in enumerate(sites(cube)):
            assert cube.index_of(j) == i
            assert cube.site_of(i) == j


def test_even_side_never_centered():
    assert Cube(1, 4, centered=True).origin == 0


def test_boundary_deficiency_examples():
    c = Cube(1, 3, centered=True)
    assert boundary_deficiency(c, (-1,)) == 1
    assert boundary_deficiency(c, (0,)) == 0
    assert boundary_deficiency(Cube(2, 3), (0, 0)) == 2


def test_boundary_deficiency_outside_raises():
    with pytest.raises(ValueError):
        boundary_deficiency(Cube(1, 3), (5,))


def test_neighbour_count_range():
    for cube in (Cube(1, 4), Cube(2, 3), Cube(3, 2)):
        for j in sites(cube):
            k = len(neighbours(cube, j))
            assert cube.dim <= k <= 2 * cube.dim


@pytest.mark.parametrize("dim", [1, 2, 3])
@pytest.mark.parametrize("side", [1, 2, 3, 4, 5, 6])
def test_total_deficiency_is_surface_count(dim, side):
    cube = Cube(dim, side)
    total = sum(boundary_deficiency(cube, j) for j in sites(cube))
    if side == 1:
        assert total == 2 * dim
    else:
        assert total == 2 * dim * side ** (dim - 1)


def test_parity_examples():
    assert parity((0, 0)) == 1
    assert parity((1, 0)) == -1
    assert parity((1, 1)) == 1


def test_parity_flips_across_neighbours():
    cube = Cube(2, 4)
    for j in sites(cube):
        for k in neighbours(cube, j):
            assert parity(j) == -parity(k)


def test_overflow_guard():
    with pytest.raises(ValueError):
        Cube(3, 100000)


class TestPeriodicPotential:
    def test_periodicity(self):
        pot = PeriodicPotential((2,), np.array([0.0, 5.0]))
        assert pot.at((0,)) == 0.0
        assert pot.at((3,)) == 5.0
        assert pot.at((-1,)) == 5.0

    def test_on_cube(self):
        pot = PeriodicPotential((2, 2), np.array([[1.0, 2.0], [3.0, 4.0]]))
        vals = pot.on_cube(Cube(2, 2))
        assert list(vals) == [1.0, 2.0, 3.0, 4.0]

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            PeriodicPotential((2,), np.zeros(3))
