"""Pure numpy fallbacks for the hot kernels.

Same contracts as the compiled versions in ``_kernels_cy``; see
``_kernels`` for the import-time selection.
"""

import numpy as np

IS_COMPILED = False

_BLOCK = 1 << 15


def labelsum_range(
    q: int,
    coeffs: np.ndarray,
    values: np.ndarray,
    offsets: np.ndarray,
    start: int,
    stop: int,
) -> complex:
    """Sum over the labelings ``start <= lab < stop`` of the per-vertex entry product.

    ``coeffs[v, e]`` is the flat-index weight of edge ``e`` in vertex ``v``'s
    tensor; ``values`` holds all vertex tensors concatenated, with vertex ``v``
    starting at ``offsets[v]``.  Labeling ``lab`` assigns edge ``e`` the digit
    ``(lab // q**(E-1-e)) % q``.
    """
    n_vertices, n_edges = coeffs.shape
    place = q ** (n_edges - 1 - np.arange(n_edges, dtype=np.int64))
    total = 0.0 + 0.0j
    for s in range(start, stop, _BLOCK):
        labs = np.arange(s, min(s + _BLOCK, stop), dtype=np.int64)
        digits = (labs[None, :] // place[:, None]) % q
        prod = np.ones(labs.shape[0], dtype=np.complex128)
        for v in range(n_vertices):
            idx = offsets[v] + coeffs[v] @ digits
            prod *= values[idx]
        total += complex(prod.sum())
    return total


def jacobi_diagonalize(h: np.ndarray, rel_tol: float = 1e-14, max_sweeps: int = 100) -> float:
    """Cyclic Jacobi sweeps on the Hermitian matrix ``h``, in place.

    Stops once the off-diagonal Frobenius norm drops below ``rel_tol`` times
    the total Frobenius norm (which is rotation invariant).  Returns the final
    off/total ratio; eigenvalues end up on the diagonal.
    """
    n = h.shape[0]
    total = float(np.linalg.norm(h))
    if n <= 1 or total == 0.0:
        return 0.0
    skip = 0.1 * rel_tol * total / n
    for _ in range(max_sweeps):
        off = _offdiag_norm(h)
        if off <= rel_tol * total:
            return off / total
        for p in range(n - 1):
            for s in range(p + 1, n):
                _rotate(h, p, s, skip)
    return _offdiag_norm(h) / total


def _offdiag_norm(h: np.ndarray) -> float:
    m = h.copy()
    np.fill_diagonal(m, 0.0)
    return float(np.linalg.norm(m))


def _rotate(h: np.ndarray, p: int, s: int, skip: float) -> None:
    apq = h[p, s]
    mag = abs(apq)
    if mag <= skip:
        return
    phase = apq / mag
    app = h[p, p].real
    ass = h[s, s].real
    tau = (ass - app) / (2.0 * mag)
    if abs(tau) > 1e12:
        t = 1.0 / (2.0 * tau)
    else:
        t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    sn = t * c
    # unitary block [[c, s*ph], [-s*conj(ph), c*conj(ph)]] applied as h <- G^H h G
    col_p = h[:, p].copy()
    col_s = h[:, s].copy()
    h[:, p] = c * col_p - sn * np.conj(phase) * col_s
    h[:, s] = sn * col_p + c * np.conj(phase) * col_s
    row_p = h[p, :].copy()
    row_s = h[s, :].copy()
    h[p, :] = c * row_p - sn * phase * row_s
    h[s, :] = sn * row_p + c * phase * row_s
    h[p, s] = 0.0
    h[s, p] = 0.0
    h[p, p] = h[p, p].real
    h[s, s] = h[s, s].real
