# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled symmetric eigensolver kernels.

Householder tridiagonalization + implicitly shifted QL, and Sturm-sequence
counting for tridiagonal matrices.  Mirrors _pykernels exactly; selected at
import when the extension built.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt, hypot, copysign

cnp.import_array()

BACKEND = "c"

cdef double _EPS = 2.220446049250313e-16


def tridiagonalize(a_in, bint want_q):
    """Reduce a real symmetric matrix to tridiagonal form T = Q^T A Q."""
    cdef cnp.ndarray[double, ndim=2] a = np.array(a_in, dtype=np.float64, order="C")
    cdef Py_ssize_t n = a.shape[0]
    cdef cnp.ndarray[double, ndim=2] q = None
    cdef cnp.ndarray[double, ndim=1] v = np.zeros(n)
    cdef cnp.ndarray[double, ndim=1] w = np.zeros(n)
    cdef Py_ssize_t k, i, j, m
    cdef double xnorm, alpha, vnorm, tau, s, acc

    if want_q:
        q = np.eye(n)
    for k in range(n - 2):
        m = n - k - 1          # size of trailing block
        xnorm = 0.0
        for i in range(k + 1, n):
            xnorm += a[i, k] * a[i, k]
        xnorm = sqrt(xnorm)
        if xnorm == 0.0:
            continue
        alpha = -copysign(xnorm, a[k + 1, k]) if a[k + 1, k] != 0.0 else -xnorm
        vnorm = 0.0
        for i in range(m):
            v[i] = a[k + 1 + i, k]
        v[0] -= alpha
        for i in range(m):
            vnorm += v[i] * v[i]
        vnorm = sqrt(vnorm)
        if vnorm == 0.0:
            continue
        for i in range(m):
            v[i] /= vnorm
        # w = A22 v ; tau = v.w
        tau = 0.0
        for i in range(m):
            acc = 0.0
            for j in range(m):
                acc += a[k + 1 + i, k + 1 + j] * v[j]
            w[i] = acc
            tau += v[i] * acc
        # A22 <- A22 - 2(v w^T + w v^T) + 4 tau v v^T
        for i in range(m):
            for j in range(m):
                a[k + 1 + i, k + 1 + j] += (
                    -2.0 * (v[i] * w[j] + w[i] * v[j]) + 4.0 * tau * v[i] * v[j]
                )
        for i in range(k + 1, n):
            a[i, k] = 0.0
            a[k, i] = 0.0
        a[k + 1, k] = alpha
        a[k, k + 1] = alpha
        if want_q:
            # Q[k+1:, :] -= 2 v (v^T Q[k+1:, :]); accumulating P_k on the left
            # of previously accumulated product transposed; we instead apply
            # reflectors to the right: Q <- Q P_k restricted to rows k+1:
            for j in range(n):
                acc = 0.0
                for i in range(m):
                    acc += v[i] * q[j, k + 1 + i]
                acc *= 2.0
                for i in range(m):
                    q[j, k + 1 + i] -= acc * v[i]

    d = np.empty(n)
    e = np.empty(n - 1 if n > 1 else 0)
    for i in range(n):
        d[i] = a[i, i]
    for i in range(n - 1):
        e[i] = a[i + 1, i]
    return d, e, q


def tql(d_in, e_in, q_in, Py_ssize_t max_sweeps=50):
    """Implicit-shift QL on a symmetric tridiagonal matrix.

    Returns (eigenvalues, total_sweeps, converged); q_in updated in place.
    """
    cdef cnp.ndarray[double, ndim=1] d = np.asarray(d_in, dtype=np.float64).copy()
    cdef Py_ssize_t n = d.shape[0]
    if n == 1:
        return d, 0, True
    cdef cnp.ndarray[double, ndim=1] ee = np.zeros(n)
    ee[: n - 1] = e_in
    cdef cnp.ndarray[double, ndim=2] q = q_in
    cdef bint have_q = q_in is not None
    cdef Py_ssize_t l, m, i, k, sweeps, total_iter = 0
    cdef double dd, g, r, s, c, p, f, b, col
    cdef bint converged = True, underflow

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(ee[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            total_iter += 1
            if sweeps > max_sweeps:
                converged = False
                break
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + ee[l] / (g + copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * ee[i]
                b = c * ee[i]
                r = hypot(f, g)
                ee[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    ee[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if have_q:
                    for k in range(n):
                        col = q[k, i + 1]
                        q[k, i + 1] = s * q[k, i] + c * col
                        q[k, i] = c * q[k, i] - s * col
            if not underflow:
                d[l] -= p
                ee[l] = g
                ee[m] = 0.0
    return d, total_iter, converged


def sturm_count(d_in, e_in, double x):
    """Number of eigenvalues of the tridiagonal matrix strictly below x."""
    cdef cnp.ndarray[double, ndim=1] d = np.ascontiguousarray(d_in, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] e = np.ascontiguousarray(e_in, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i, count = 0
    cdef double qv = d[0] - x
    if qv < 0.0:
        count += 1
    for i in range(1, n):
        if qv == 0.0:
            qv = _EPS * (fabs(e[i - 1]) + _EPS)
        qv = d[i] - x - e[i - 1] * e[i - 1] / qv
        if qv < 0.0:
            count += 1
    return count
