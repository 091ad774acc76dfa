"""Real symmetric eigensolver and eigenvalue-counting utilities.

The heavy kernels (Householder reduction, QL iteration, Sturm counts) live in
a compiled extension when available; otherwise a pure NumPy implementation of
the same algorithms is used.  Set ``RANDBLOCK_FORCE_PY=1`` to force the
fallback (used by the backend benchmark).
"""

from .core import (
    EigenError,
    SolveReport,
    Spectrum,
    backend_name,
    counting,
    eigvalsh,
    min_eig_tridiag,
    sturm_count_matrix,
)

__all__ = [
    "EigenError",
    "SolveReport",
    "Spectrum",
    "backend_name",
    "counting",
    "eigvalsh",
    "min_eig_tridiag",
    "sturm_count_matrix",
]
