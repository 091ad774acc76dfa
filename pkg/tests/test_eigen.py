import subprocess
import sys

import numpy as np
import pytest

from randblock.eigen import (
    EigenError,
    Spectrum,
    backend_name,
    counting,
    eigvalsh,
    min_eig_tridiag,
    sturm_count_matrix,
)
from randblock.eigen import _pykernels
from randblock.operators import assemble


class TestEigvalsh:
    def test_swap_matrix(self):
        s = eigvalsh([[0.0, 1.0], [1.0, 0.0]])
        assert np.allclose(s.eigenvalues, [-1, 1], atol=1e-14)

    def test_diag(self):
        s = eigvalsh(np.diag([3.0, -1.0, 2.0]))
        assert np.allclose(s.eigenvalues, [-1, 2, 3], atol=1e-14)

    def test_path_graph_closed_form(self):
        # adjacency of the n-path has eigenvalues 2 cos(k pi / (n+1))
        n = 12
        a = np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)
        expected = np.sort(2 * np.cos(np.arange(1, n + 1) * np.pi / (n + 1)))
        assert np.allclose(eigvalsh(a).eigenvalues, expected, atol=1e-12)

    def test_3_4_5_block(self):
        m = assemble(np.array([[3.0]]), np.array([[4.0]]))
        assert np.allclose(eigvalsh(m).eigenvalues, [-5, 5], atol=1e-13)

    def test_vectors_residual(self):
        rng = np.random.default_rng(0)
        m = rng.standard_normal((40, 40))
        m = m + m.T
        s = eigvalsh(m, want_vectors=True)
        assert s.report.max_residual < 1e-12
        assert s.report.orthogonality_defect < 1e-12
        assert s.report.converged

    def test_trace_preserved(self):
        rng = np.random.default_rng(1)
        for n in (3, 17, 60):
            m = rng.standard_normal((n, n))
            m = m + m.T
            s = eigvalsh(m)
            scale = np.abs(m).max()
            assert abs(s.eigenvalues.sum() - np.trace(m)) < 1e-9 * n * scale

    def test_matches_reference_solver(self):
        rng = np.random.default_rng(2)
        for n in (1, 2, 5, 33, 101):
            m = rng.standard_normal((n, n))
            m = m + m.T
            got = eigvalsh(m).eigenvalues
            ref = np.linalg.eigvalsh(m)
            assert np.abs(got - ref).max() < 1e-11 * max(1.0, np.abs(ref).max())

    def test_non_square(self):
        with pytest.raises(ValueError):
            eigvalsh(np.zeros((2, 3)))

    def test_non_finite(self):
        with pytest.raises(ValueError):
            eigvalsh(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class TestSturm:
    def test_counts_match_dense(self):
        rng = np.random.default_rng(3)
        n = 30
        d = rng.standard_normal(n)
        e = rng.standard_normal(n - 1)
        m = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        ev = eigvalsh(m).eigenvalues
        for x in rng.uniform(ev[0] - 0.5, ev[-1] + 0.5, 20):
            assert sturm_count_matrix(m, x) == int(np.sum(ev < x))

    def test_not_tridiagonal(self):
        with pytest.raises(ValueError):
            sturm_count_matrix(np.ones((4, 4)), 0.0)

    def test_min_eig_examples(self):
        assert min_eig_tridiag(np.diag([2.0, -3.0, 5.0])) == pytest.approx(-3.0, abs=1e-9)
        m = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert min_eig_tridiag(m) == pytest.approx(-1.0, abs=1e-9)

    def test_min_eig_matches_full_solve(self):
        rng = np.random.default_rng(4)
        n = 50
        d = rng.uniform(0, 2, n)
        m = np.diag(d) - np.diag(np.ones(n - 1), 1) - np.diag(np.ones(n - 1), -1) + 2 * np.eye(n)
        assert min_eig_tridiag(m) == pytest.approx(eigvalsh(m).eigenvalues[0], abs=1e-9)


class TestCounting:
    def test_half(self):
        s = Spectrum(np.array([-5.0, 5.0]), 2)
        assert counting(s, 0.0, 2.0) == 0.5
        assert counting(s, -6.0, 2.0) == 0.0
        assert counting(s, 5.0, 2.0) == 1.0

    def test_bad_normalization(self):
        with pytest.raises(ValueError):
            counting(Spectrum(np.array([0.0]), 1), 0.0, 0.0)

    def test_monotone_under_ordering(self):
        # A <= B in quadratic-form order implies pointwise counting(A) >= counting(B)
        rng = np.random.default_rng(5)
        n = 10
        a = rng.standard_normal((n, n))
        a = a + a.T
        bump = rng.standard_normal((n, 3))
        b = a + bump @ bump.T
        ea, eb = eigvalsh(a), eigvalsh(b)
        for x in np.linspace(-8, 8, 33):
            assert counting(ea, x, n) >= counting(eb, x, n)


def test_spectrum_rejects_unsorted():
    with pytest.raises(ValueError):
        Spectrum(np.array([1.0, 0.0]), 2)


def test_backend_name_valid():
    assert backend_name() in ("c", "python")


def test_python_kernels_agree_with_active_backend():
    rng = np.random.default_rng(6)
    m = rng.standard_normal((24, 24))
    m = m + m.T
    d, e, q = _pykernels.tridiagonalize(m.copy(), True)
    w, _, ok = _pykernels.tql(d, e, q)
    assert ok
    assert np.allclose(np.sort(w), eigvalsh(m).eigenvalues, atol=1e-11)


def test_forced_python_backend_subprocess():
    code = (
        "import randblock.eigen as e; import numpy as np;"
        "m = np.array([[0.,1.],[1.,0.]]);"
        "assert e.backend_name() == 'python';"
        "assert np.allclose(e.eigvalsh(m).eigenvalues, [-1, 1])"
    )
    subprocess.run([sys.executable, "-c", code],
                   env={"RANDBLOCK_FORCE_PY": "1", "PATH": "/usr/bin:/bin"},
                   check=True)
