"""Shared test utilities: independent oracles and graph/network generators.

Everything here is deliberately written against the definitions, not the
library's evaluation paths, so tests compare two independent routes.
"""

import itertools

import numpy as np

from tnbubble.netcore import Tensor, TensorNetwork

# --- reference graphs ----------------------------------------------------------

TRIANGLE = ((0, 1), (1, 2), (0, 2))
PATH4 = ((0, 1), (1, 2), (2, 3))
K4 = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
GRID_2X3 = ((0, 1), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (4, 5))
PETERSEN = tuple(
    [(i, (i + 1) % 5) for i in range(5)]
    + [(i, i + 5) for i in range(5)]
    + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
)
FIG9 = ((0, 1), (1, 2), (2, 0), (0, 3), (2, 3))  # 4 vertices, 5 edges, 2 independent cycles


def graph_vertices(edges) -> int:
    return max(max(u, v) for u, v in edges) + 1


# --- random connected networks --------------------------------------------------


def random_network(rng, n_vertices: int, q: int, max_degree: int = 3) -> TensorNetwork:
    """Connected multigraph with random complex tensors and degree <= max_degree."""
    degrees = [0] * n_vertices
    pairs = []
    for v in range(1, n_vertices):
        u = int(rng.integers(0, v))
        tries = 0
        while degrees[u] >= max_degree and tries < 20:
            u = int(rng.integers(0, v))
            tries += 1
        pairs.append((u, v))
        degrees[u] += 1
        degrees[v] += 1
    extra = int(rng.integers(0, n_vertices))
    for _ in range(extra):
        candidates = [v for v in range(n_vertices) if degrees[v] < max_degree]
        if len(candidates) < 2:
            break
        u, v = rng.choice(candidates, size=2, replace=False)
        if u == v:
            continue
        pairs.append((int(min(u, v)), int(max(u, v))))
        degrees[int(u)] += 1
        degrees[int(v)] += 1
    ports = [0] * n_vertices
    edges = []
    for u, v in pairs:
        edges.append(((u, ports[u]), (v, ports[v])))
        ports[u] += 1
        ports[v] += 1
    vertices = []
    for v in range(n_vertices):
        k = ports[v]
        entries = rng.normal(size=q**k) + 1j * rng.normal(size=q**k)
        vertices.append((v, Tensor(q, k, entries)))
    return TensorNetwork(q, tuple(vertices), tuple(edges))


# --- independent oracles ---------------------------------------------------------


def oracle_value(net: TensorNetwork) -> complex:
    """Network value by plain nested loops over labelings (no shared code)."""
    n_edges = len(net.edges)
    ports = {}
    for v, t in net.vertices:
        ports[v] = [None] * t.rank
    for e, ((a, pa), (b, pb)) in enumerate(net.edges):
        ports[a][pa] = e
        ports[b][pb] = e
    total = 0j
    for labeling in itertools.product(range(net.q), repeat=n_edges):
        prod = 1.0 + 0j
        for v, t in net.vertices:
            idx = 0
            for e in ports[v]:
                idx = idx * net.q + labeling[e]
            prod *= complex(t.entries[idx])
        total += prod
    return total


def oracle_partition(n, edges, q, beta, energy) -> complex:
    """Z by explicit enumeration; ``energy(e, a, b)`` gives h_e(sigma_a, sigma_b)."""
    import cmath

    total = 0j
    for sigma in itertools.product(range(q), repeat=n):
        h = 0j
        for e, (u, v) in enumerate(edges):
            h += energy(e, sigma[u], sigma[v])
        total += cmath.exp(-beta * h)
    return total


def oracle_colorings(n, edges, q) -> int:
    count = 0
    for sigma in itertools.product(range(q), repeat=n):
        if all(sigma[u] != sigma[v] for u, v in edges):
            count += 1
    return count


def apply_gate(state: np.ndarray, matrix: np.ndarray, targets, n: int) -> np.ndarray:
    """Apply a d-qubit gate to a 2^n statevector (qubit 0 most significant)."""
    d = len(targets)
    state = state.reshape([2] * n)
    axes = list(targets)
    state = np.moveaxis(state, axes, range(d))
    state = np.tensordot(matrix, state.reshape(2**d, -1), axes=([1], [0]))
    state = state.reshape([2] * n)
    state = np.moveaxis(state, range(d), axes)
    return state.reshape(-1)


def oracle_circuit_amplitude(n, gates) -> complex:
    """<0..0| circuit |0..0> by direct statevector simulation."""
    state = np.zeros(2**n, dtype=complex)
    state[0] = 1.0
    for matrix, targets in gates:
        state = apply_gate(state, matrix, targets, n)
    return complex(state[0])


def oracle_measure_zero(n, gates, qubit) -> float:
    """Probability of reading 0 on one qubit after the circuit."""
    state = np.zeros(2**n, dtype=complex)
    state[0] = 1.0
    for matrix, targets in gates:
        state = apply_gate(state, matrix, targets, n)
    probs = np.abs(state.reshape([2] * n)) ** 2
    return float(np.sum(np.take(probs, 0, axis=qubit)))


def power_iteration_norm(a: np.ndarray, iters: int = 2000, seed: int = 0) -> float:
    """Largest singular value via power iteration on the Gram matrix."""
    rng = np.random.default_rng(seed)
    gram = a.conj().T @ a
    v = rng.normal(size=gram.shape[0]) + 1j * rng.normal(size=gram.shape[0])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = gram @ v
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = w / nw
        lam = nw
    return float(np.sqrt(lam))


def random_unitary(d: int, rng) -> np.ndarray:
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    qmat, r = np.linalg.qr(z)
    return qmat * (np.diagonal(r) / np.abs(np.diagonal(r)))


def exhaustive_min_width(n_vertices, edges) -> int:
    """Minimal bubble width over every vertex ordering (small graphs only)."""
    best = None
    for perm in itertools.permutations(range(n_vertices)):
        cur = set()
        width = 0
        for v in perm:
            for i, (a, b) in enumerate(edges):
                if v in (a, b):
                    cur.symmetric_difference_update({i})
            width = max(width, len(cur))
            if best is not None and width >= best:
                break
        if best is None or width < best:
            best = width
    return best


def identity_network(q, n_vertices, graph_edges) -> TensorNetwork:
    """All-identity network on a plain graph (tensors don't matter for widths)."""
    ports = [0] * n_vertices
    edges = []
    for u, v in graph_edges:
        edges.append(((u, ports[u]), (v, ports[v])))
        ports[u] += 1
        ports[v] += 1
    vertices = tuple((v, Tensor.identity(q, ports[v])) for v in range(n_vertices))
    return TensorNetwork(q, vertices, tuple(edges))


def rel_err(a, b) -> float:
    return abs(a - b) / (1.0 + max(abs(a), abs(b)))
