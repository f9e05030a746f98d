"""Kernel selection: compiled extension when built, numpy fallback otherwise."""

from . import _kernels_py

try:
    from . import _kernels_cy as _impl  # type: ignore[attr-defined]

    HAVE_COMPILED = True
except ImportError:
    _impl = _kernels_py
    HAVE_COMPILED = False

labelsum_range = _impl.labelsum_range
jacobi_diagonalize = _impl.jacobi_diagonalize

# the fallback stays importable for cross-checks and benchmarks
labelsum_range_py = _kernels_py.labelsum_range
jacobi_diagonalize_py = _kernels_py.jacobi_diagonalize
