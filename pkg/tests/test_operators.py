import numpy as np
import pytest

from randblock.eigen import eigvalsh
from randblock.lattice import Cube
from randblock.operators import (
    BoundaryMode,
    PreconditionError,
    assemble,
    assemble_bracketing,
    diag_op,
    dwave_b,
    gamma,
    laplacian,
    parity_values,
    square_identity_residual,
    to_triplets,
    transform_parity,
    transform_u1,
    transform_u2,
    transform_u3_square,
)


def spec(m):
    return eigvalsh(m).eigenvalues


class TestLaplacian:
    def test_adjacency_1d(self):
        lap = laplacian(Cube(1, 3), BoundaryMode.ADJACENCY, 1)
        assert np.array_equal(lap, [[0, 1, 0], [1, 0, 1], [0, 1, 0]])
        assert np.allclose(spec(lap), [-np.sqrt(2), 0, np.sqrt(2)])

    def test_neumann_1d(self):
        neg = laplacian(Cube(1, 3), BoundaryMode.NEUMANN, -1)
        assert np.array_equal(neg, [[1, -1, 0], [-1, 2, -1], [0, -1, 1]])
        assert abs(spec(neg)[0]) < 1e-12

    def test_dirichlet_minus_neumann_is_2gamma(self):
        c = Cube(1, 3)
        diff = laplacian(c, BoundaryMode.DIRICHLET, -1) - laplacian(c, BoundaryMode.NEUMANN, -1)
        assert np.array_equal(diff, 2.0 * np.diag([1.0, 0.0, 1.0]))

    def test_sign_flag(self):
        c = Cube(2, 3)
        assert np.array_equal(laplacian(c, BoundaryMode.NEUMANN, 1),
                              -laplacian(c, BoundaryMode.NEUMANN, -1))


class TestGamma:
    def test_1d(self):
        assert np.array_equal(gamma(Cube(1, 3)), np.diag([1.0, 0.0, 1.0]))
        assert np.array_equal(gamma(Cube(1, 1)), np.diag([2.0]))

    def test_2d_row_major(self):
        assert np.array_equal(np.diagonal(gamma(Cube(2, 3))),
                              [2, 1, 2, 1, 0, 1, 2, 1, 2])


class TestDiagOp:
    def test_basic(self):
        assert np.array_equal(diag_op([1, 2, 3]), np.diag([1.0, 2.0, 3.0]))
        assert np.array_equal(diag_op(np.zeros(4)), np.zeros((4, 4)))

    def test_parity_values_centred(self):
        vals = parity_values(Cube(1, 3, centered=True))
        assert list(vals) == [-1.0, 1.0, -1.0]

    def test_shape_error(self):
        with pytest.raises(ValueError):
            diag_op(np.zeros((2, 2)))


class TestDwave:
    def test_zero_beta(self):
        assert np.abs(dwave_b(Cube(2, 3), 0.0)).max() == 0

    def test_single_site(self):
        assert np.abs(dwave_b(Cube(2, 1), 1.0)).max() == 0

    def test_row_sums_bounded(self):
        b = dwave_b(Cube(2, 3), 1.0, BoundaryMode.ADJACENCY)
        assert np.abs(b).sum(axis=1).max() <= 4
        assert np.array_equal(b, b.T)

    def test_wrong_dim(self):
        with pytest.raises(ValueError):
            dwave_b(Cube(1, 3), 1.0)

    def test_x_minus_y_structure(self):
        # x-hops carry +beta, y-hops -beta
        cube = Cube(2, 2)
        b = dwave_b(cube, 2.0)
        i00, i01, i10 = cube.index_of((0, 0)), cube.index_of((0, 1)), cube.index_of((1, 0))
        assert b[i00, i10] == 2.0
        assert b[i00, i01] == -2.0


class TestAssemble:
    def test_3_4_5(self):
        m = assemble(np.array([[3.0]]), np.array([[4.0]]))
        assert np.allclose(spec(m), [-5, 5])

    def test_b_zero_decouples(self):
        rng = np.random.default_rng(0)
        h = rng.standard_normal((5, 5))
        h = h + h.T
        ev = spec(assemble(h, np.zeros((5, 5))))
        hh = spec(h)
        assert np.allclose(ev, np.sort(np.concatenate([hh, -hh])), atol=1e-10)

    def test_h_zero_diag_b(self):
        b = np.diag([1.0, -2.0, 3.0])
        ev = spec(assemble(np.zeros((3, 3)), b))
        assert np.allclose(ev, [-3, -2, -1, 1, 2, 3], atol=1e-12)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            assemble(np.zeros((2, 2)), np.zeros((3, 3)))


class TestAssembleBracketing:
    def test_reduces_to_assemble(self):
        rng = np.random.default_rng(1)
        h = rng.standard_normal((4, 4))
        h = h + h.T
        b = np.diag(rng.standard_normal(4))
        assert np.array_equal(assemble_bracketing(h, h, b), assemble(h, b))

    def test_toy(self):
        m = assemble_bracketing(np.array([[3.0]]), np.array([[2.0]]), np.array([[1.0]]))
        assert np.array_equal(m, [[3.0, 1.0], [1.0, -2.0]])

    def test_interlacing_with_plain(self):
        # plus-variant eigenvalues dominate the others pointwise
        rng = np.random.default_rng(2)
        cube = Cube(1, 8)
        v = rng.uniform(0, 2, 8)
        hd = laplacian(cube, BoundaryMode.DIRICHLET, -1) + np.diag(v)
        hn = laplacian(cube, BoundaryMode.NEUMANN, -1) + np.diag(v)
        b = np.diag(rng.uniform(-1, 1, 8))
        ev_plus = spec(assemble_bracketing(hd, hn, b))
        ev_minus = spec(assemble_bracketing(hn, hd, b))
        for ev_mid in (spec(assemble(hd, b)), spec(assemble(hn, b))):
            assert np.all(ev_minus <= ev_mid + 1e-10)
            assert np.all(ev_mid <= ev_plus + 1e-10)


class TestTransforms:
    def setup_method(self):
        rng = np.random.default_rng(3)
        self.h = rng.standard_normal((6, 6))
        self.h = self.h + self.h.T
        self.b = rng.standard_normal((6, 6))
        self.b = self.b + self.b.T
        self.m = assemble(self.h, self.b)

    def test_u1_swaps_blocks(self):
        swapped = transform_u1(self.m)
        assert np.allclose(swapped, assemble(self.b, self.h), atol=1e-12)
        assert np.allclose(spec(swapped), spec(self.m), atol=1e-10)

    def test_u2_negates(self):
        assert np.allclose(transform_u2(self.m), -self.m, atol=1e-12)
        ev = spec(self.m)
        assert np.allclose(spec(transform_u2(self.m)), -ev[::-1], atol=1e-10)

    def test_u3_block_diagonalizes_square(self):
        out = transform_u3_square(self.m)
        n = 6
        assert np.abs(out[:n, n:]).max() < 1e-10
        assert np.abs(out[n:, :n]).max() < 1e-10
        comm = self.h @ self.b - self.b @ self.h
        k_minus = self.h @ self.h + self.b @ self.b - 1j * comm
        assert np.allclose(out[:n, :n], k_minus, atol=1e-10)

    def test_parity_example_from_path_graph(self):
        # 1-d centred cube, hopping Laplacian, b = 1: blocks are
        # adjacency ± parity; eigenvalues {-√3, -√3, -1, 1, √3, √3}
        cube = Cube(1, 3, centered=True)
        delta = laplacian(cube, BoundaryMode.ADJACENCY, 1)
        m = assemble(delta, np.eye(3))
        conj, h_plus, h_minus = transform_parity(m, cube)
        expected = np.sort([-np.sqrt(3), -np.sqrt(3), -1, 1, np.sqrt(3), np.sqrt(3)])
        assert np.allclose(spec(m), expected, atol=1e-10)
        union = np.sort(np.concatenate([spec(h_plus), spec(h_minus)]))
        assert np.allclose(union, expected, atol=1e-10)
        # conjugated matrix is block diagonal with those blocks
        assert np.abs(conj[:3, 3:]).max() < 1e-12
        assert np.allclose(conj[:3, :3], h_plus, atol=1e-12)

    def test_parity_precondition_neumann_fails(self):
        cube = Cube(1, 4)
        neu = laplacian(cube, BoundaryMode.NEUMANN, -1)
        m = assemble(neu, np.eye(4))
        with pytest.raises(PreconditionError):
            transform_parity(m, cube)


class TestSquareIdentity:
    def test_commuting_pair(self):
        h = np.diag([1.0, 2.0, 3.0])
        b = np.diag([4.0, 5.0, 6.0])
        assert square_identity_residual(h, b) <= 1e-12 * (3 + 6) ** 2
        m = assemble(h, b)
        m2 = m @ m
        assert np.abs(m2[:3, 3:]).max() == 0

    def test_random_pair(self):
        rng = np.random.default_rng(4)
        h = rng.standard_normal((8, 8))
        h = h + h.T
        b = rng.standard_normal((8, 8))
        b = b + b.T
        scale = (np.abs(spec(h)).max() + np.abs(spec(b)).max()) ** 2
        assert square_identity_residual(h, b) <= 1e-12 * scale

    def test_b_zero(self):
        rng = np.random.default_rng(5)
        h = rng.standard_normal((4, 4))
        h = h + h.T
        m = assemble(h, np.zeros((4, 4)))
        assert np.allclose(m @ m, np.block([[h @ h, np.zeros((4, 4))],
                                            [np.zeros((4, 4)), h @ h]]), atol=1e-12)


def test_triplet_export_roundtrip():
    m = np.array([[0.0, 1.5], [1.5, -2.0]])
    text = to_triplets(m)
    rebuilt = np.zeros((2, 2))
    for line in text.splitlines():
        if line.startswith("#"):
            continue
        r, c, v = line.split()
        rebuilt[int(r), int(c)] = float(v)
    assert np.array_equal(rebuilt, m)
