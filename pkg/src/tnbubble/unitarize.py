"""Embedding an arbitrary linear map into a unitary on one extra qubit.

``embed_square`` realizes ``A/||A||`` as the ancilla-0 -> ancilla-0 block of a
unitary ``U`` on the original registers plus one qubit; rectangular maps are
first padded to square registers by :func:`embed_rect`.  Register layout: the
ancilla qubit is the least significant index, so ``U`` has shape
``(2m, 2m)`` with basis index ``register*2 + ancilla``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError

UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SubUnitary:
    """Unitary ``u`` whose ancilla-0 block equals the source map over its norm."""

    u: np.ndarray
    source_norm: float
    input_pad: int
    output_pad: int

    def block(self) -> np.ndarray:
        """The ancilla-0 -> ancilla-0 block of ``u``."""
        return np.ascontiguousarray(self.u[0::2, 0::2])


def embed_square(a: np.ndarray) -> SubUnitary:
    """Embed a square map: ``U (|x> ⊗ |0>) = (A|x>/||A||) ⊗ |0> + (...) ⊗ |1>``.

    Uses a singular value decomposition ``A/||A|| = V1 D V2`` and rotates each
    singular direction into the ancilla: the diagonal blocks are
    ``[[d, sqrt(1-d^2)], [-sqrt(1-d^2), d]]``.  Rejects the zero map.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.size == 0:
        raise ValueError("embed_square needs a non-empty square matrix")
    u, sing, vh = _svd_fixed_phase(a)
    norm = float(sing[0])
    if norm == 0.0:
        raise NumericError("cannot embed the zero operator (norm 0)")
    return SubUnitary(_assemble(u, sing / norm, vh), norm, 0, 0)


def embed_rect(a: np.ndarray, q: int) -> SubUnitary:
    """Embed a ``q^l x q^k`` map by padding the smaller side's registers with |0>.

    The padded square matrix acts like ``a`` when every pad register is 0 and
    as the zero operator otherwise, which preserves the norm.  Pads are
    prepended as the most significant registers.  Square inputs come back as
    plain :func:`embed_square` results.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("embed_rect needs a non-empty matrix")
    out_regs = _register_count(a.shape[0], q)
    in_regs = _register_count(a.shape[1], q)
    if out_regs == in_regs:
        return embed_square(a)
    side = max(a.shape)
    padded = np.zeros((side, side), dtype=np.complex128)
    padded[: a.shape[0], : a.shape[1]] = a
    sub = embed_square(padded)
    return SubUnitary(sub.u, sub.source_norm, max(out_regs - in_regs, 0), max(in_regs - out_regs, 0))


def _register_count(dim: int, q: int) -> int:
    count = 0
    while dim > 1:
        if q < 2 or dim % q:
            raise ValueError(f"matrix side {dim} is not a power of q={q}")
        dim //= q
        count += 1
    return count


def _svd_fixed_phase(a: np.ndarray):
    """SVD with a reproducible convention: descending singular values and the
    first nonzero entry of each right-singular vector real positive."""
    u, s, vh = np.linalg.svd(a)
    for i in range(vh.shape[0]):
        row = vh[i]
        nz = np.flatnonzero(np.abs(row) > 1e-300)
        if nz.size:
            ph = row[nz[0]] / abs(row[nz[0]])
            vh[i] *= np.conj(ph)
            u[:, i] *= ph
    return u, s, vh


def _assemble(v1: np.ndarray, d: np.ndarray, v2: np.ndarray) -> np.ndarray:
    m = d.shape[0]
    dd = np.clip(d, 0.0, 1.0)
    rest = np.sqrt(1.0 - dd * dd)
    ud = np.zeros((2 * m, 2 * m), dtype=np.complex128)
    ud[0::2, 0::2] = np.diag(dd)
    ud[0::2, 1::2] = np.diag(rest)
    ud[1::2, 0::2] = -np.diag(rest)
    ud[1::2, 1::2] = np.diag(dd)
    left = np.kron(v1, np.eye(2))
    right = np.kron(v2, np.eye(2))
    return left @ ud @ right
