"""Graph-plus-tensor data model and exact network evaluation.

A tensor network here is a graph whose vertices carry dense rank-``degree``
tensors of a common local dimension ``q``; every port of every vertex is
joined to exactly one edge, so the fully contracted network evaluates to a
single complex number.  Two independent evaluation routes are provided:

* :func:`eval_labeling_sum` enumerates every assignment of colors ``0..q-1``
  to the edges and sums the products of vertex entries, and
* :func:`eval_contract` absorbs vertices one at a time along a given ordering,
  carrying a frontier tensor.

Conventions: a vertex's tensor index ``s`` corresponds to its ``s``-th port;
entries are stored flat in row-major order with port 0 most significant.
Self-loops are disallowed (insert an identity vertex instead); parallel edges
between two vertices are fine.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import _guards, _jsonfmt, _kernels
from .errors import NetworkFormatError

REL_TOL = 1e-9


def close(a: complex, b: complex, tol: float = REL_TOL) -> bool:
    """Relative comparison used throughout: |a-b| <= tol*(1+max(|a|,|b|))."""
    return abs(a - b) <= tol * (1.0 + max(abs(a), abs(b)))


@dataclass(frozen=True, eq=False)
class Tensor:
    """Dense rank-``rank`` tensor of local dimension ``q``, stored flat."""

    q: int
    rank: int
    entries: np.ndarray

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("local dimension q must be positive")
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        arr = np.ascontiguousarray(self.entries, dtype=np.complex128).reshape(-1)
        if arr.shape[0] != self.q**self.rank:
            raise ValueError(
                f"expected {self.q ** self.rank} entries for rank {self.rank}, got {arr.shape[0]}"
            )
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("tensor entries must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    @classmethod
    def identity(cls, q: int, rank: int) -> "Tensor":
        """1 when all indices carry the same color, 0 otherwise."""
        arr = np.zeros(q**rank, dtype=np.complex128)
        if rank == 0:
            arr[0] = 1.0
        else:
            for c in range(q):
                idx = 0
                for _ in range(rank):
                    idx = idx * q + c
                arr[idx] = 1.0
        return cls(q, rank, arr)

    @classmethod
    def basis(cls, q: int, color: int) -> "Tensor":
        """Rank-1 indicator of a single color."""
        if not 0 <= color < q:
            raise ValueError("color out of range")
        arr = np.zeros(q, dtype=np.complex128)
        arr[color] = 1.0
        return cls(q, 1, arr)

    def as_array(self) -> np.ndarray:
        return self.entries.reshape((self.q,) * self.rank)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.entries, Tensor.identity(self.q, self.rank).entries))


def tensor_product(a: Tensor, b: Tensor) -> Tensor:
    """Outer product; the result has ``a``'s indices followed by ``b``'s."""
    if a.q != b.q:
        raise ValueError(f"dimension mismatch: {a.q} != {b.q}")
    return Tensor(a.q, a.rank + b.rank, np.outer(a.entries, b.entries).reshape(-1))


def contract_pair(t: Tensor, l: int, m: int) -> Tensor:
    """Contract indices ``l`` and ``m`` of ``t`` (summing their shared color)."""
    if not (0 <= l < m < t.rank):
        raise ValueError(f"need 0 <= l < m < rank, got l={l}, m={m}, rank={t.rank}")
    arr = np.trace(t.as_array(), axis1=l, axis2=m)
    return Tensor(t.q, t.rank - 2, np.ascontiguousarray(arr).reshape(-1))


Endpoint = tuple[int, int]  # (vertex id, port)


@dataclass(frozen=True, eq=False)
class TensorNetwork:
    """Immutable, fully contracted network: shareable across threads."""

    q: int
    vertices: tuple[tuple[int, Tensor], ...]
    edges: tuple[tuple[Endpoint, Endpoint], ...]

    def __post_init__(self):
        vertices = tuple((int(v), t) for v, t in self.vertices)
        edges = tuple(
            (((int(a), int(pa))), ((int(b), int(pb)))) for (a, pa), (b, pb) in self.edges
        )
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)

        by_id: dict[int, Tensor] = {}
        for v, t in vertices:
            if v in by_id:
                raise ValueError(f"duplicate vertex id {v}")
            if not isinstance(t, Tensor):
                raise ValueError(f"vertex {v} does not carry a Tensor")
            if t.q != self.q:
                raise ValueError(f"vertex {v} has dimension {t.q}, network has {self.q}")
            by_id[v] = t

        seen: dict[Endpoint, int] = {}
        incident: dict[int, list[tuple[int, int]]] = {v: [] for v in by_id}
        for e, ((a, pa), (b, pb)) in enumerate(edges):
            if a == b:
                raise ValueError(f"edge {e} is a self-loop on vertex {a}")
            for v, p in ((a, pa), (b, pb)):
                if v not in by_id:
                    raise ValueError(f"edge {e} references unknown vertex {v}")
                if not 0 <= p < by_id[v].rank:
                    raise ValueError(f"edge {e} references port {p} of vertex {v} (rank {by_id[v].rank})")
                if (v, p) in seen:
                    raise ValueError(f"port {p} of vertex {v} used by edges {seen[(v, p)]} and {e}")
                seen[(v, p)] = e
                incident[v].append((p, e))
        for v, t in by_id.items():
            if len(incident[v]) != t.rank:
                raise ValueError(
                    f"vertex {v} has rank {t.rank} but degree {len(incident[v])} (free ports)"
                )
            incident[v].sort()

        object.__setattr__(self, "_tensors", by_id)
        object.__setattr__(self, "_incident", {v: tuple(pe for pe in inc) for v, inc in incident.items()})

    # --- lookups -----------------------------------------------------------

    @property
    def vertex_ids(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.vertices)

    def tensor(self, v: int) -> Tensor:
        return self._tensors[v]

    def degree(self, v: int) -> int:
        return len(self._incident[v])

    def ports(self, v: int) -> tuple[int, ...]:
        """Edge id attached to each port of ``v``, in port order."""
        return tuple(e for _, e in self._incident[v])

    def edge_vertices(self, e: int) -> tuple[int, int]:
        (a, _), (b, _) = self.edges[e]
        return a, b

    def with_tensors(self, tensors: Mapping[int, Tensor]) -> "TensorNetwork":
        """Same wiring with some vertex tensors replaced."""
        return TensorNetwork(
            self.q,
            tuple((v, tensors.get(v, t)) for v, t in self.vertices),
            self.edges,
        )

    # --- evaluation --------------------------------------------------------

    def _labelsum_tables(self):
        n_edges = len(self.edges)
        ids = self.vertex_ids
        coeffs = np.zeros((len(ids), n_edges), dtype=np.int64)
        for row, v in enumerate(ids):
            rank = self.degree(v)
            for port, e in self._incident[v]:
                coeffs[row, e] += self.q ** (rank - 1 - port)
        values = np.concatenate([self._tensors[v].entries for v in ids]) if ids else np.zeros(0, complex)
        offsets = np.zeros(len(ids), dtype=np.int64)
        acc = 0
        for row, v in enumerate(ids):
            offsets[row] = acc
            acc += self._tensors[v].entries.shape[0]
        return coeffs, values, offsets


def labeling_weight(net: TensorNetwork, labels: Sequence[int]) -> complex:
    """Product of vertex entries for one explicit edge labeling."""
    if len(labels) != len(net.edges):
        raise ValueError("labeling must assign every edge")
    prod = 1.0 + 0.0j
    for v, t in net.vertices:
        idx = 0
        for port, e in net._incident[v]:
            c = labels[e]
            if not 0 <= c < net.q:
                raise ValueError(f"edge {e} labeled {c}, out of range")
            idx = idx * net.q + c
        prod *= t.entries[idx]
    return prod


_CHUNK = 1 << 16


def eval_labeling_sum(net: TensorNetwork, threads: int | None = 1) -> complex:
    """Network value by direct enumeration of all q^|E| edge labelings.

    Guarded by the enumeration limit.  With ``threads`` > 1 the labeling range
    is split into fixed-size chunks evaluated concurrently; chunk results are
    added in order, so the value does not depend on the thread count.
    """
    n_edges = len(net.edges)
    total = net.q**n_edges
    _guards.check_labelings(total)
    coeffs, values, offsets = net._labelsum_tables()
    if threads is None:
        import os

        threads = os.cpu_count() or 1
    bounds = [(s, min(s + _CHUNK, total)) for s in range(0, total, _CHUNK)] or [(0, total)]
    if threads <= 1 or len(bounds) == 1:
        return complex(
            sum(_kernels.labelsum_range(net.q, coeffs, values, offsets, a, b) for a, b in bounds)
        )
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(
            pool.map(lambda ab: _kernels.labelsum_range(net.q, coeffs, values, offsets, *ab), bounds)
        )
    return complex(sum(parts))


def eval_contract(net: TensorNetwork, order) -> complex:
    """Network value by absorbing vertices along ``order`` (a vertex-id sequence
    or a Bubbling); pure contraction, no normalization."""
    ids = _order_ids(net, order)
    frontier = np.array(1.0 + 0.0j)  # rank-0 start
    axis_edges: list[int] = []  # edge id carried by each axis, kept sorted
    for v in ids:
        arr = net.tensor(v).as_array()
        in_axes: list[int] = []
        in_ports: list[int] = []
        out_edges: list[int] = []  # edges opened by this swallow, in port order
        for port, e in net._incident[v]:
            if e in axis_edges:
                in_axes.append(axis_edges.index(e))
                in_ports.append(port)
            else:
                out_edges.append(e)
        contracted = {axis_edges[i] for i in in_axes}
        order_now = [e for e in axis_edges if e not in contracted] + out_edges
        _guards.check_amplitudes(net.q ** len(order_now), "frontier tensor")
        frontier = np.tensordot(frontier, arr, axes=(in_axes, in_ports))
        # tensordot leaves the kept frontier axes first, then the open ports
        target = sorted(order_now)
        frontier = np.transpose(frontier, [order_now.index(e) for e in target])
        axis_edges = target
    return complex(frontier.reshape(()))


def _order_ids(net: TensorNetwork, order) -> tuple[int, ...]:
    ids = tuple(getattr(order, "order", order))
    if sorted(ids) != sorted(net.vertex_ids):
        raise ValueError("order is not a permutation of the network's vertex ids")
    return ids


def reduce_degree(net: TensorNetwork, vertex: int, max_degree: int) -> TensorNetwork:
    """Replace a high-degree identity vertex by a tree of identity vertices.

    Each tree vertex has degree at most ``max_degree`` (>= 3); the network
    value is unchanged.  Networks already within the bound come back as-is.
    """
    if max_degree < 3:
        raise ValueError("max_degree must be at least 3")
    t = net.tensor(vertex)
    if not t.is_identity():
        raise ValueError(f"vertex {vertex} does not carry an identity tensor")
    k = t.rank
    if k <= max_degree:
        return net

    # chain of identity vertices: ends carry max_degree-1 original ports,
    # interior ones max_degree-2, plus the chain links
    leaf_edges = [net.ports(vertex)[p] for p in range(k)]
    groups: list[list[int]] = []
    i = 0
    remaining = k
    while remaining > 0:
        cap = max_degree - (1 if not groups else 2)
        # the final group may also use max_degree-1 slots
        if remaining <= max_degree - 1 and groups:
            cap = max_degree - 1
        take = min(cap, remaining)
        groups.append(list(range(i, i + take)))
        i += take
        remaining -= take
    if len(groups) == 1:  # pragma: no cover - guarded by k <= max_degree above
        return net

    next_id = max(net.vertex_ids) + 1
    chain_ids = [vertex] + [next_id + j for j in range(len(groups) - 1)]

    new_vertices = []
    for v, tens in net.vertices:
        if v == vertex:
            continue
        new_vertices.append((v, tens))
    new_edges = list(net.edges)

    # reassign the original ports of `vertex` and wire the chain
    port_of: dict[int, int] = {}  # ports used so far per chain vertex
    endpoint_map: dict[int, Endpoint] = {}
    for g, group in enumerate(groups):
        cid = chain_ids[g]
        base = 0 if g == 0 else 1  # port 0 links to the previous chain vertex
        for j, orig_port in enumerate(group):
            endpoint_map[orig_port] = (cid, base + j)
        port_of[cid] = base + len(group)
    rewired = []
    for (a, pa), (b, pb) in new_edges:
        ea = endpoint_map[pa] if a == vertex else (a, pa)
        eb = endpoint_map[pb] if b == vertex else (b, pb)
        rewired.append((ea, eb))
    for g in range(len(groups) - 1):
        rewired.append(((chain_ids[g], port_of[chain_ids[g]]), (chain_ids[g + 1], 0)))
    degrees = {cid: port_of[cid] + (1 if g < len(groups) - 1 else 0) for g, cid in enumerate(chain_ids)}
    for cid in chain_ids:
        new_vertices.append((cid, Tensor.identity(net.q, degrees[cid])))
    return TensorNetwork(net.q, tuple(new_vertices), tuple(rewired))


# --- JSON network format ----------------------------------------------------


def network_to_json(net: TensorNetwork, indent: int | None = None) -> str:
    obj = {
        "q": net.q,
        "vertices": [
            {"id": v, "entries": [[float(z.real), float(z.imag)] for z in t.entries]}
            for v, t in net.vertices
        ],
        "edges": [[[a, pa], [b, pb]] for (a, pa), (b, pb) in net.edges],
    }
    return _jsonfmt.dumps(obj, indent=indent)


def network_from_json(text: str) -> TensorNetwork:
    """Parse the network file format, rejecting bad input with its position."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return _network_from_obj(obj)


def _network_from_obj(obj) -> TensorNetwork:
    if not isinstance(obj, dict):
        raise NetworkFormatError("top level: expected an object")
    q = _expect_int(obj, "q")
    if q < 1:
        raise NetworkFormatError("q: must be a positive integer")
    raw_vertices = _expect_list(obj, "vertices")
    raw_edges = _expect_list(obj, "edges")

    degree: dict[int, int] = {}
    edges = []
    for i, e in enumerate(raw_edges):
        where = f"edges[{i}]"
        ends = _expect_pair(e, where)
        pair = []
        for j, end in enumerate(ends):
            ep = _expect_pair(end, f"{where}[{j}]")
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in ep):
                raise NetworkFormatError(f"{where}[{j}]: endpoints are [vertex id, port] integers")
            pair.append((ep[0], ep[1]))
        edges.append((pair[0], pair[1]))
        for vid, _ in pair:
            degree[vid] = degree.get(vid, 0) + 1

    vertices = []
    for i, v in enumerate(raw_vertices):
        where = f"vertices[{i}]"
        if not isinstance(v, dict):
            raise NetworkFormatError(f"{where}: expected an object")
        vid = _expect_int(v, "id", where)
        entries = _expect_list(v, "entries", where)
        deg = degree.get(vid, 0)
        if len(entries) != q**deg:
            raise NetworkFormatError(
                f"{where}.entries: expected {q ** deg} entries for degree {deg}, got {len(entries)}"
            )
        flat = np.empty(len(entries), dtype=np.complex128)
        for j, z in enumerate(entries):
            if (
                not isinstance(z, list)
                or len(z) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)
            ):
                raise NetworkFormatError(f"{where}.entries[{j}]: expected [re, im]")
            flat[j] = complex(z[0], z[1])
        try:
            vertices.append((vid, Tensor(q, deg, flat)))
        except ValueError as exc:
            raise NetworkFormatError(f"{where}: {exc}") from exc

    try:
        return TensorNetwork(q, tuple(vertices), tuple(edges))
    except ValueError as exc:
        raise NetworkFormatError(str(exc)) from exc


def _expect_int(obj, key, where="top level"):
    if key not in obj:
        raise NetworkFormatError(f"{where}: missing key {key!r}")
    val = obj[key]
    if not isinstance(val, int) or isinstance(val, bool):
        raise NetworkFormatError(f"{where}.{key}: expected an integer")
    return val


def _expect_list(obj, key, where="top level"):
    if key not in obj:
        raise NetworkFormatError(f"{where}: missing key {key!r}")
    val = obj[key]
    if not isinstance(val, list):
        raise NetworkFormatError(f"{where}.{key}: expected an array")
    return val


def _expect_pair(val, where):
    if not isinstance(val, list) or len(val) != 2:
        raise NetworkFormatError(f"{where}: expected a pair")
    return val
