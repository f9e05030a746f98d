"""Bubbling orderings, frontiers, swallowing operators, and approximation scale.

A bubbling is an ordering of the vertices; after step ``i`` the frontier
``Z_i`` holds the edges with exactly one swallowed endpoint.  Absorbing vertex
``v_i`` applies the linear map carried by its tensor from the input-edge
registers to the output-edge registers, and the product of the operator norms
of these maps is the approximation scale ``delta`` of the sampling algorithm
in :mod:`tnbubble.qsim`.

Frontier registers are kept in ascending edge-id order at every step, so the
matrices built here have a reproducible layout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _guards, _jsonfmt, _kernels
from .errors import NetworkFormatError
from .netcore import TensorNetwork

JACOBI_REL_TOL = 1e-14


@dataclass(frozen=True)
class Bubbling:
    """A vertex ordering; must be a permutation of the network's vertex ids."""

    order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))

    def validate(self, net: TensorNetwork) -> None:
        if sorted(self.order) != sorted(net.vertex_ids):
            raise ValueError("bubbling is not a permutation of the network's vertex ids")

    def __len__(self) -> int:
        return len(self.order)


def bubbling_to_json(b: Bubbling) -> str:
    return _jsonfmt.dumps(list(b.order))


def bubbling_from_json(text: str) -> Bubbling:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in obj
    ):
        raise NetworkFormatError("bubbling file must be a JSON array of vertex ids")
    return Bubbling(tuple(obj))


def frontiers(net: TensorNetwork, b: Bubbling) -> list[frozenset[int]]:
    """Edge sets Z_0..Z_n; Z_i holds edges with exactly one endpoint swallowed."""
    b.validate(net)
    swallowed: set[int] = set()
    current: set[int] = set()
    out = [frozenset()]
    for v in b.order:
        for e in net.ports(v):
            if e in current:
                current.discard(e)
            else:
                current.add(e)
        swallowed.add(v)
        out.append(frozenset(current))
    return out


def step_edges(net: TensorNetwork, b: Bubbling, i: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Input, output and untouched edge ids (each sorted) for step ``i`` (1-based)."""
    b.validate(net)
    if not 1 <= i <= len(b.order):
        raise ValueError(f"step must be in 1..{len(b.order)}")
    earlier = set(b.order[: i - 1])
    v = b.order[i - 1]
    ins, outs = [], []
    for e in net.ports(v):
        a, c = net.edge_vertices(e)
        other = c if a == v else a
        (ins if other in earlier else outs).append(e)
    z_prev = set()
    for u in b.order[: i - 1]:
        for e in net.ports(u):
            z_prev.symmetric_difference_update({e})
    untouched = sorted(z_prev - set(ins))
    return tuple(sorted(ins)), tuple(sorted(outs)), tuple(untouched)


@dataclass(frozen=True, eq=False)
class SwallowingOperator:
    """The map applied when one vertex is absorbed.

    ``matrix`` acts on the active registers only: it is the
    ``q^len(output_edges) x q^len(input_edges)`` matrix taking the input-edge
    registers (ascending edge id, first register most significant) to the
    output-edge registers; untouched frontier edges carry the identity.
    """

    input_edges: tuple[int, ...]
    output_edges: tuple[int, ...]
    untouched_edges: tuple[int, ...]
    matrix: np.ndarray
    norm: float


def vertex_map_matrix(net: TensorNetwork, v: int, input_edges, output_edges) -> np.ndarray:
    """Reshape vertex ``v``'s tensor into the input->output register matrix."""
    ins = sorted(input_edges)
    outs = sorted(output_edges)
    port_of = {e: p for p, e in net._incident[v]}
    perm = [port_of[e] for e in outs] + [port_of[e] for e in ins]
    arr = net.tensor(v).as_array().transpose(perm)
    return np.ascontiguousarray(arr.reshape(net.q ** len(outs), net.q ** len(ins)))


def swallowing_operator(net: TensorNetwork, b: Bubbling, i: int) -> SwallowingOperator:
    """Build the step-``i`` operator and its norm (largest singular value)."""
    ins, outs, untouched = step_edges(net, b, i)
    _guards.check_amplitudes(net.q ** (len(ins) + len(outs)), "active registers")
    v = b.order[i - 1]
    matrix = vertex_map_matrix(net, v, ins, outs)
    return SwallowingOperator(ins, outs, untouched, matrix, operator_norm(matrix))


def operator_norm(m: np.ndarray) -> float:
    """Largest singular value of a dense complex matrix.

    Computed from a cyclic-Jacobi eigendecomposition of the Gram matrix of the
    smaller side; relative accuracy well below 1e-10 at the sizes the guards
    allow.
    """
    a = np.ascontiguousarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("operator_norm needs a non-empty matrix")
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ValueError("operator_norm needs finite entries")
    if a.shape[0] < a.shape[1]:
        gram = a @ a.conj().T
    else:
        gram = a.conj().T @ a
    gram = np.ascontiguousarray(gram)
    _kernels.jacobi_diagonalize(gram, JACOBI_REL_TOL)
    top = max(float(np.max(np.diagonal(gram).real)), 0.0)
    return float(np.sqrt(top))


@dataclass(frozen=True)
class ScaleReport:
    """Per-bubbling summary: scale, norms, bubble width and extreme-vertex count."""

    delta: float
    per_vertex_norms: tuple[float, ...]
    bubble_width: int
    extreme_count: int

    def to_json(self) -> str:
        return _jsonfmt.dumps(self.to_obj())

    def to_obj(self) -> dict:
        return {
            "delta": float(self.delta),
            "bubble_width": self.bubble_width,
            "extreme_count": self.extreme_count,
            "norms": [float(x) for x in self.per_vertex_norms],
        }


def scale(net: TensorNetwork, b: Bubbling) -> ScaleReport:
    """Approximation scale of ``b``: the product of all swallowing-operator norms."""
    b.validate(net)
    norms = []
    for i in range(1, len(b.order) + 1):
        norms.append(swallowing_operator(net, b, i).norm)
    delta = 1.0
    for x in norms:
        delta *= x
    width = max(len(z) for z in frontiers(net, b))
    return ScaleReport(delta, tuple(norms), width, extreme_count(net, b))


def extreme_count(net: TensorNetwork, b: Bubbling) -> int:
    """Vertices whose edges all point the same way in the induced orientation.

    Each edge is directed away from its earlier-swallowed endpoint; a vertex
    is extreme when its edges are all outgoing or all incoming.
    """
    b.validate(net)
    pos = {v: i for i, v in enumerate(b.order)}
    count = 0
    for v, _ in net.vertices:
        outgoing = incoming = 0
        for e in net.ports(v):
            a, c = net.edge_vertices(e)
            other = c if a == v else a
            if pos[v] < pos[other]:
                outgoing += 1
            else:
                incoming += 1
        if outgoing == 0 or incoming == 0:
            count += 1
    return count


def greedy_bubbling(net: TensorNetwork) -> Bubbling:
    """Deterministic ordering that greedily minimizes the next frontier size.

    Ties break toward the smallest vertex id.  Heuristic only; the minimal
    bubble width of a graph is NP-hard to find.
    """
    remaining = set(net.vertex_ids)
    frontier: set[int] = set()
    order: list[int] = []
    while remaining:
        best = None
        best_key = None
        for v in sorted(remaining):
            gain = 0
            for e in net.ports(v):
                gain += -1 if e in frontier else 1
            key = (len(frontier) + gain, v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        order.append(best)
        remaining.discard(best)
        for e in net.ports(best):
            frontier.symmetric_difference_update({e})
    return Bubbling(tuple(order))
