"""Networks for q-state statistical models and their approximation scales.

Two constructions are provided for the partition function
``Z(beta) = sum_sigma exp(-beta * H(sigma))`` of a model on a simple connected
graph:

* the general construction places an identity tensor on every model vertex
  and a Boltzmann-weight tensor in the middle of every edge; the network value
  is ``Z`` itself;
* the difference construction (for couplings depending only on the color
  difference modulo q) works over difference variables built from a spanning
  tree plus one consistency constraint per independent cycle; the network
  value is ``Z / q``.

Couplings and ``beta`` may be complex; norms then use the modulus.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass

import numpy as np

from . import _guards, _jsonfmt
from ._build import NetworkBuilder
from .bubbling import Bubbling, operator_norm
from .errors import NetworkFormatError
from .netcore import Tensor, TensorNetwork, reduce_degree


@dataclass(frozen=True, eq=False)
class Coupling:
    """Per-edge interaction energy: a q-vector (difference form) or q x q table."""

    q: int
    difference: bool
    table: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.table, dtype=np.complex128)
        expect = (self.q,) if self.difference else (self.q, self.q)
        if arr.shape != expect:
            raise ValueError(f"coupling table has shape {arr.shape}, expected {expect}")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("coupling table must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "table", arr)

    def energy(self, a: int, b: int) -> complex:
        if self.difference:
            return complex(self.table[(a - b) % self.q])
        return complex(self.table[a, b])


def coupling_ising(J: float | complex = 1.0) -> Coupling:
    """Two-state spins, energy -J when aligned and +J when anti-aligned."""
    return Coupling(2, True, np.array([-J, J]))


def coupling_clock(q: int, J: float | complex = 1.0) -> Coupling:
    """Planar spins at q equally spaced angles, energy -J cos(angle difference)."""
    if q < 2:
        raise ValueError("clock model needs q >= 2")
    return Coupling(q, True, np.array([-J * np.cos(2 * np.pi * n / q) for n in range(q)]))


def coupling_potts(q: int, J: float | complex = 1.0) -> Coupling:
    """Energy -J when the two colors match, 0 otherwise."""
    if q < 2:
        raise ValueError("potts model needs q >= 2")
    table = np.zeros(q, dtype=np.complex128)
    table[0] = -J
    return Coupling(q, True, table)


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """A q-state model: simple undirected graph, inverse temperature, couplings.

    ``pins`` optionally fixes chosen vertices to a color; pinned builds
    restrict the partition sum accordingly.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    q: int
    beta: complex
    couplings: tuple[Coupling, ...]
    pins: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("model needs at least one vertex")
        if self.q < 2:
            raise ValueError("model needs q >= 2")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        seen = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        couplings = tuple(self.couplings)
        if len(couplings) == 1 and len(edges) > 1:
            couplings = couplings * len(edges)
        if len(couplings) != len(edges):
            raise ValueError(f"{len(couplings)} couplings for {len(edges)} edges")
        for c in couplings:
            if c.q != self.q:
                raise ValueError("coupling dimension differs from model q")
        pins = tuple((int(v), int(c)) for v, c in self.pins)
        for v, c in pins:
            if not 0 <= v < self.n:
                raise ValueError(f"pinned vertex {v} out of range")
            if not 0 <= c < self.q:
                raise ValueError(f"pin color {c} out of range")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "couplings", couplings)
        object.__setattr__(self, "pins", pins)
        object.__setattr__(self, "beta", complex(self.beta))

    @property
    def is_difference(self) -> bool:
        return all(c.difference for c in self.couplings)

    def weight_matrix(self, e: int) -> np.ndarray:
        """q x q Boltzmann weights exp(-beta * h_e(a, b)) for edge ``e``."""
        c = self.couplings[e]
        out = np.empty((self.q, self.q), dtype=np.complex128)
        for a in range(self.q):
            for b in range(self.q):
                out[a, b] = cmath.exp(-self.beta * c.energy(a, b))
        return out

    def weight_vector(self, e: int) -> np.ndarray:
        """Difference-form weights exp(-beta * h_e(delta)); difference models only."""
        c = self.couplings[e]
        if not c.difference:
            raise ValueError(f"edge {e} does not carry a difference coupling")
        return np.array([cmath.exp(-self.beta * c.table[d]) for d in range(self.q)])

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        adj: dict[int, list[int]] = {v: [] for v in range(self.n)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n


def partition_function(spec: ModelSpec, threads: int | None = 1) -> complex:
    """Z by direct enumeration of all q^n colorings (guarded); honors pins."""
    total = spec.q**spec.n
    _guards.check_labelings(total)
    energies = [(u, v, spec.couplings[e]) for e, (u, v) in enumerate(spec.edges)]
    pinned = dict(spec.pins)

    def chunk(lo: int, hi: int) -> complex:
        acc = 0.0 + 0.0j
        sigma = [0] * spec.n
        for code in range(lo, hi):
            rem = code
            for v in range(spec.n - 1, -1, -1):
                sigma[v] = rem % spec.q
                rem //= spec.q
            if any(sigma[v] != c for v, c in pinned.items()):
                continue
            h = 0.0 + 0.0j
            for u, v, c in energies:
                h += c.energy(sigma[u], sigma[v])
            acc += cmath.exp(-spec.beta * h)
        return acc

    if threads is None:
        import os

        threads = os.cpu_count() or 1
    if threads <= 1 or total < 4096:
        return chunk(0, total)
    from concurrent.futures import ThreadPoolExecutor

    step = (total + threads - 1) // threads
    bounds = [(s, min(s + step, total)) for s in range(0, total, step)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return complex(sum(pool.map(lambda ab: chunk(*ab), bounds)))


# --- general construction -----------------------------------------------------


def build_general(spec: ModelSpec, max_degree: int | None = None) -> TensorNetwork:
    """Network evaluating Z: identity tensors on model vertices, weight tensors
    on edge midpoints.

    Vertex ids: model vertices keep ``0..n-1``, the weight vertex of edge ``j``
    is ``n + j``, pin vertices follow.  With ``max_degree``, identity vertices
    above the bound are expanded into trees.
    """
    weights = [spec.weight_matrix(e) for e in range(len(spec.edges))]
    return _build_midpoint_network(spec.n, spec.edges, spec.q, weights, spec.pins, max_degree)


def build_coloring(n: int, edges, q: int, max_degree: int | None = None) -> TensorNetwork:
    """Network counting proper q-colorings: midpoint tensors forbid equal colors."""
    if q < 2:
        raise ValueError("coloring needs q >= 2")
    edges = tuple((int(u), int(v)) for u, v in edges)
    block = np.ones((q, q), dtype=np.complex128) - np.eye(q, dtype=np.complex128)
    return _build_midpoint_network(n, edges, q, [block] * len(edges), (), max_degree)


def _build_midpoint_network(n, edges, q, weights, pins, max_degree) -> TensorNetwork:
    if n < 2 or not edges:
        raise ValueError("construction needs a connected graph with at least one edge")
    _check_connected(n, edges)
    build = NetworkBuilder(q)
    for v in range(n):
        build.add_vertex(v)
    for j, (u, v) in enumerate(edges):
        mid = n + j
        build.add_vertex(mid)
        build.connect(u, "edge", mid, "u")
        build.connect(mid, "v", v, "edge")
        build.set_tensor(mid, Tensor(q, 2, weights[j].reshape(-1)))
    for k, (v, color) in enumerate(pins):
        pin = n + len(edges) + k
        build.add_vertex(pin)
        build.connect(v, "pin", pin, "vertex")
        build.set_tensor(pin, Tensor.basis(q, color))
    for v in range(n):
        build.set_tensor(v, Tensor.identity(q, build.degree(v)))
    net = build.network()
    if max_degree is not None:
        for v in range(n):
            if net.degree(v) > max_degree:
                net = reduce_degree(net, v, max_degree)
    return net


def _check_connected(n, edges) -> None:
    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != n:
        raise ValueError("graph must be connected")


def plane_sweep_bubbling(net: TensorNetwork, heights) -> tuple[Bubbling, int]:
    """Bottom-to-top sweep of a midpoint network built by this module.

    ``heights`` assigns one distinct height per model vertex (ids ``0..n-1``);
    each weight vertex sits at the mean height of its two neighbors, so it is
    swallowed with one edge in and one edge out.  Pin vertices ride just below
    their model vertex.  Returns the ordering together with the number of
    model vertices swallowed with all edges in or all edges out.
    """
    heights = [float(h) for h in heights]
    n = len(heights)
    if len(set(heights)) != n:
        raise ValueError("heights must be distinct per model vertex")
    ids = set(net.vertex_ids)
    if set(range(n)) - ids:
        raise ValueError("heights do not match the network's model vertices")
    keyed = []
    for v in net.vertex_ids:
        if v < n:
            keyed.append(((heights[v], 0, v), v))
        else:
            nbrs = {net.edge_vertices(e)[0] for e in net.ports(v)} | {
                net.edge_vertices(e)[1] for e in net.ports(v)
            }
            nbrs.discard(v)
            if net.degree(v) == 1:  # pin vertex
                (w,) = nbrs
                keyed.append(((heights[w], -1, v), v))
            elif net.degree(v) == 2 and len(nbrs) == 2 and all(u < n for u in nbrs):
                u, w = sorted(nbrs)
                keyed.append((((heights[u] + heights[w]) / 2.0, 0, v), v))
            else:
                raise ValueError("plane sweep needs the unreduced midpoint network")
    keyed.sort()
    order = Bubbling(tuple(v for _, v in keyed))
    pos = {v: i for i, v in enumerate(order.order)}
    b = 0
    for v in range(n):
        before = after = 0
        for e in net.ports(v):
            a, c = net.edge_vertices(e)
            other = c if a == v else a
            if pos[other] < pos[v]:
                before += 1
            else:
                after += 1
        if before == 0 or after == 0:
            b += 1
    return order, b


def scale_general(spec: ModelSpec, b: Bubbling) -> float:
    """Analytic scale bound q^(b/2) * prod of per-edge weight-matrix norms.

    ``b`` counts the model vertices whose edges all point one way in the
    orientation the bubbling induces on the model graph.
    """
    pos = {v: i for i, v in enumerate(b.order)}
    extreme = 0
    for v in range(spec.n):
        before = after = 0
        for u, w in spec.edges:
            if v not in (u, w):
                continue
            other = w if v == u else u
            if pos[other] < pos[v]:
                before += 1
            else:
                after += 1
        if before == 0 or after == 0:
            extreme += 1
    bound = float(spec.q) ** (extreme / 2.0)
    for e in range(len(spec.edges)):
        bound *= operator_norm(spec.weight_matrix(e))
    return bound


# --- difference construction ---------------------------------------------------


@dataclass(frozen=True)
class DeltaGraph:
    """Spanning-tree data behind a difference-model network.

    ``cycles[j]`` lists the signed tree edges closing cycle edge ``j``:
    traversing the cycle starting along edge ``j``'s own direction, a
    co-directed tree edge enters with +1 and a counter-directed one with -1.
    ``weights[e]`` holds the difference weights exp(-beta h_e(delta)).
    Directions: tree edges point away from the root, cycle edges from the
    lower to the higher vertex id.
    """

    n: int
    q: int
    tree_edges: tuple[int, ...]
    cycle_edges: tuple[int, ...]
    directions: tuple[tuple[int, int], ...]
    cycles: dict[int, tuple[tuple[int, int], ...]]
    weights: tuple[tuple[complex, ...], ...]

    def node_vertex(self, e: int) -> int:
        return e

    def energy_vertex(self, e: int) -> int:
        return len(self.directions) + e

    def mid_vertex(self, e: int) -> int:
        return 2 * len(self.directions) + e


def spanning_tree(n: int, edges) -> tuple[list[int], list[int], dict[int, tuple[int, int]]]:
    """Breadth-first spanning tree from vertex 0.

    Returns (tree edge indices, non-tree edge indices, parent map); the parent
    map sends each non-root vertex to (parent vertex, connecting edge index).
    Neighbors are explored in ascending edge-index order.
    """
    incident: dict[int, list[int]] = {v: [] for v in range(n)}
    for j, (u, v) in enumerate(edges):
        incident[u].append(j)
        incident[v].append(j)
    parent: dict[int, tuple[int, int]] = {}
    visited = {0}
    queue = [0]
    tree: list[int] = []
    while queue:
        u = queue.pop(0)
        for j in incident[u]:
            a, b = edges[j]
            other = b if a == u else a
            if other not in visited:
                visited.add(other)
                parent[other] = (u, j)
                tree.append(j)
                queue.append(other)
    if len(visited) != n:
        raise ValueError("graph must be connected")
    tree_set = set(tree)
    cycle = [j for j in range(len(edges)) if j not in tree_set]
    return sorted(tree), cycle, parent


def delta_graph(spec: ModelSpec) -> DeltaGraph:
    """Spanning tree, directed edges, and signed independent cycles for ``spec``."""
    if not spec.is_difference:
        raise ValueError("the difference construction needs difference-form couplings")
    tree, cycle, parent = spanning_tree(spec.n, spec.edges)
    tree_set = set(tree)
    directions = []
    for j, (u, v) in enumerate(spec.edges):
        if j in tree_set:
            child = v if v in parent and parent[v][1] == j else u
            par = parent[child][0]
            directions.append((par, child))  # away from the root
        else:
            directions.append((min(u, v), max(u, v)))

    def root_path(v: int) -> list[tuple[int, int, int]]:
        # list of (edge, tail, head) steps walking from v up to the root
        path = []
        while v in parent:
            par, j = parent[v]
            path.append((j, v, par))
            v = par
        return path

    cycles: dict[int, tuple[tuple[int, int], ...]] = {}
    for j in cycle:
        a, b = directions[j]  # traversal starts a -> b along the cycle edge
        up_b = root_path(b)
        up_a = root_path(a)
        # trim the common tail to the lowest common ancestor
        while up_b and up_a and up_b[-1][0] == up_a[-1][0]:
            up_b.pop()
            up_a.pop()
        steps = up_b + [(e, head, tail) for e, tail, head in reversed(up_a)]
        signed = []
        for e, tail, head in steps:
            sign = 1 if directions[e] == (tail, head) else -1
            signed.append((e, sign))
        cycles[j] = tuple(signed)
    weights = tuple(tuple(complex(w) for w in spec.weight_vector(e)) for e in range(len(spec.edges)))
    return DeltaGraph(spec.n, spec.q, tuple(tree), tuple(cycle), tuple(directions), cycles, weights)


def build_delta(spec: ModelSpec) -> tuple[TensorNetwork, DeltaGraph, Bubbling]:
    """Difference-variable network evaluating Z/q, with its four-plane bubbling.

    Layout per model edge ``e``: a node vertex (id ``e``) in the middle --
    a tree vertex for spanning-tree edges, a cycle vertex otherwise -- plus an
    energy vertex (id ``|E|+e``); tree edges additionally get a mid vertex
    (id ``2|E|+e``) between node and energy.  Cycle vertices connect to the
    tree and mid vertices of their cycle and enforce the signed sum of the
    difference variables to vanish modulo q.
    """
    if spec.pins:
        raise ValueError("pins are not supported by the difference construction")
    dg = delta_graph(spec)
    net = _delta_network(dg, improved=False)
    return net, dg, canonical_bubbling(dg, net)


def improve_delta_weights(net: TensorNetwork, dg: DeltaGraph) -> TensorNetwork:
    """Rebalanced difference network with the same value but smaller scale.

    Cycle vertices absorb their energy weight (their energy vertices
    disappear), and each tree edge's weight is split as a square root between
    the tree vertex and its energy vertex.
    """
    expected = _delta_network(dg, improved=False)
    if net.q != expected.q or set(net.vertex_ids) != set(expected.vertex_ids) or net.edges != expected.edges:
        raise ValueError("network does not match the given difference construction")
    return _delta_network(dg, improved=True)


def canonical_bubbling(dg: DeltaGraph, net: TensorNetwork) -> Bubbling:
    """Four planes bottom-to-top: tree vertices, cycle vertices, mids, energies."""
    ids = set(net.vertex_ids)
    m = len(dg.directions)
    planes = [
        [dg.node_vertex(e) for e in dg.tree_edges],
        [dg.node_vertex(e) for e in dg.cycle_edges],
        [dg.mid_vertex(e) for e in dg.tree_edges],
        [dg.energy_vertex(e) for e in range(m)],
    ]
    order = [v for plane in planes for v in sorted(plane) if v in ids]
    if set(order) != ids:
        raise ValueError("network does not match the given difference construction")
    return Bubbling(tuple(order))


def _delta_network(dg: DeltaGraph, improved: bool) -> TensorNetwork:
    q = dg.q
    build = NetworkBuilder(q)
    tree_set = set(dg.tree_edges)

    for e in dg.tree_edges:
        build.connect(dg.node_vertex(e), "mid", dg.mid_vertex(e), "tree")
        build.connect(dg.mid_vertex(e), "energy", dg.energy_vertex(e), "mid")
    for e in dg.cycle_edges:
        if not improved:
            build.connect(dg.node_vertex(e), "energy", dg.energy_vertex(e), "cycle")
        for t, sign in dg.cycles[e]:
            build.connect(dg.node_vertex(e), ("tree", t, sign), dg.node_vertex(t), ("cycle", e))
            build.connect(dg.node_vertex(e), ("mid", t, sign), dg.mid_vertex(t), ("cycle", e))

    for e in dg.tree_edges:
        w = np.array(dg.weights[e], dtype=np.complex128)
        if improved:
            root_w = np.sqrt(w)
            diag = np.zeros(q**build.degree(dg.node_vertex(e)), dtype=np.complex128)
            rank = build.degree(dg.node_vertex(e))
            for c in range(q):
                idx = 0
                for _ in range(rank):
                    idx = idx * q + c
                diag[idx] = root_w[c]
            build.set_tensor(dg.node_vertex(e), Tensor(q, rank, diag))
            build.set_tensor(dg.energy_vertex(e), Tensor(q, 1, root_w))
        else:
            build.set_tensor(dg.node_vertex(e), Tensor.identity(q, build.degree(dg.node_vertex(e))))
            build.set_tensor(dg.energy_vertex(e), Tensor(q, 1, w))
        build.set_tensor(dg.mid_vertex(e), Tensor.identity(q, build.degree(dg.mid_vertex(e))))

    for e in dg.cycle_edges:
        v = dg.node_vertex(e)
        tags = build.port_tags(v)
        rank = len(tags)
        entries = np.zeros(q**rank, dtype=np.complex128)
        members = dg.cycles[e]
        weights = np.array(dg.weights[e], dtype=np.complex128)
        for assign in np.ndindex(*([q] * len(members))):
            delta = {t: assign[i] for i, (t, _) in enumerate(members)}
            resid = -sum(sign * delta[t] for t, sign in members) % q
            idx = 0
            for tag in tags:
                if tag == "energy":
                    digit = resid
                else:
                    _, t, _sign = tag
                    digit = delta[t]
                idx = idx * q + digit
            entries[idx] = weights[resid] if improved else 1.0
        build.set_tensor(v, Tensor(q, rank, entries))
        if not improved:
            build.set_tensor(dg.energy_vertex(e), Tensor(q, 1, np.array(dg.weights[e])))

    return build.network()


def scale_delta(spec: ModelSpec, dg: DeltaGraph | None = None) -> tuple[float, float]:
    """Analytic scales of the difference construction, for Z (factor q included).

    Returns ``(basic, improved)``:

    * basic:    q^((|V|+1)/2) * prod_e (sum_j |w_e(j)|^2)^(1/2)
    * improved: q * prod_tree (sum_j |w_e(j)|) * prod_cycle (max_j |w_e(j)|)

    The improved value never exceeds the basic one, and equals q times the
    computed scale of the improved network under its four-plane bubbling.
    """
    if dg is None:
        dg = delta_graph(spec)
    basic = float(spec.q) ** ((spec.n + 1) / 2.0)
    for e in range(len(spec.edges)):
        basic *= float(np.sqrt(np.sum(np.abs(np.array(dg.weights[e])) ** 2)))
    improved = float(spec.q)
    for e in dg.tree_edges:
        improved *= float(np.sum(np.abs(np.array(dg.weights[e]))))
    for e in dg.cycle_edges:
        improved *= float(np.max(np.abs(np.array(dg.weights[e]))))
    return basic, improved


# --- model file format ----------------------------------------------------------


def model_to_json(spec: ModelSpec) -> str:
    kind = "difference_table" if spec.is_difference else "table"
    first = spec.couplings[0]
    obj = {
        "q": spec.q,
        "beta": [spec.beta.real, spec.beta.imag],
        "graph": {"vertices": spec.n, "edges": [[u, v] for u, v in spec.edges]},
        "coupling": {
            "kind": kind,
            "table": _table_obj(first.table),
        },
    }
    if spec.pins:
        obj["pins"] = [[v, c] for v, c in spec.pins]
    return _jsonfmt.dumps(obj)


def _table_obj(table: np.ndarray):
    if table.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in table]
    return [[[float(z.real), float(z.imag)] for z in row] for row in table]


def model_from_json(text: str) -> ModelSpec:
    """Parse the model file format; couplings are homogeneous across edges."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise NetworkFormatError("top level: expected an object")
    q = obj.get("q")
    if not isinstance(q, int) or isinstance(q, bool) or q < 2:
        raise NetworkFormatError("q: expected an integer >= 2")
    beta = _parse_number(obj.get("beta", 1.0), "beta")
    graph = obj.get("graph")
    if not isinstance(graph, dict):
        raise NetworkFormatError("graph: expected an object")
    n = graph.get("vertices")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise NetworkFormatError("graph.vertices: expected a positive integer")
    raw_edges = graph.get("edges")
    if not isinstance(raw_edges, list):
        raise NetworkFormatError("graph.edges: expected an array")
    edges = []
    for i, e in enumerate(raw_edges):
        if (
            not isinstance(e, list)
            or len(e) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in e)
        ):
            raise NetworkFormatError(f"graph.edges[{i}]: expected [u, v]")
        edges.append((e[0], e[1]))
    coupling = obj.get("coupling")
    if not isinstance(coupling, dict):
        raise NetworkFormatError("coupling: expected an object")
    kind = coupling.get("kind")
    if kind == "ising":
        if q != 2:
            raise NetworkFormatError("coupling.kind ising needs q = 2")
        c = coupling_ising(_parse_number(coupling.get("J", 1.0), "coupling.J"))
    elif kind == "potts":
        c = coupling_potts(q, _parse_number(coupling.get("J", 1.0), "coupling.J"))
    elif kind == "clock":
        c = coupling_clock(q, _parse_number(coupling.get("J", 1.0), "coupling.J"))
    elif kind == "difference_table":
        table = coupling.get("table")
        if not isinstance(table, list) or len(table) != q:
            raise NetworkFormatError(f"coupling.table: expected {q} entries")
        c = Coupling(q, True, np.array([_parse_number(x, "coupling.table") for x in table]))
    elif kind == "table":
        table = coupling.get("table")
        if not isinstance(table, list) or len(table) != q:
            raise NetworkFormatError(f"coupling.table: expected {q} rows")
        rows = []
        for row in table:
            if not isinstance(row, list) or len(row) != q:
                raise NetworkFormatError(f"coupling.table: expected {q} columns per row")
            rows.append([_parse_number(x, "coupling.table") for x in row])
        c = Coupling(q, False, np.array(rows))
    else:
        raise NetworkFormatError(f"coupling.kind: unknown kind {kind!r}")
    pins = []
    raw_pins = obj.get("pins", [])
    if not isinstance(raw_pins, list):
        raise NetworkFormatError("pins: expected an array")
    for i, p in enumerate(raw_pins):
        if (
            not isinstance(p, list)
            or len(p) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in p)
        ):
            raise NetworkFormatError(f"pins[{i}]: expected [vertex, color]")
        pins.append((p[0], p[1]))
    try:
        return ModelSpec(n, tuple(edges), q, beta, (c,) * len(edges) if edges else (), tuple(pins))
    except ValueError as exc:
        raise NetworkFormatError(str(exc)) from exc


def _parse_number(x, where) -> complex:
    if isinstance(x, bool):
        raise NetworkFormatError(f"{where}: expected a number")
    if isinstance(x, (int, float)):
        return complex(x)
    if (
        isinstance(x, list)
        and len(x) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x)
    ):
        return complex(x[0], x[1])
    raise NetworkFormatError(f"{where}: expected a number or [re, im]")
