"""Quantum circuits as tensor networks.

A circuit on ``n`` qubits becomes a q=2 network: one rank-1 ket tensor per
input qubit, a rank-2d tensor per d-qubit gate (input ports before output
ports), and one rank-1 bra tensor per output qubit, wired along the qubit
lines.  The network's value is the amplitude ``<0..0|circuit|0..0>``.

``acceptance_network`` builds the standard copy construction: run the circuit,
copy the measured qubit onto a fresh qubit with a CNOT, then run the inverse
circuit gate by gate.  The resulting amplitude equals the probability of
measuring 0 on that qubit, and swallowing the network in circuit order gives
unit norms everywhere, hence scale 1.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from .bubbling import Bubbling
from .errors import NetworkFormatError
from .netcore import Tensor, TensorNetwork

UNITARY_WARN_TOL = 1e-10

CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    dtype=np.complex128,
)


@dataclass(frozen=True, eq=False)
class Gate:
    matrix: np.ndarray
    targets: tuple[int, ...]

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        targets = tuple(int(t) for t in self.targets)
        if len(set(targets)) != len(targets):
            raise ValueError("gate targets must be distinct")
        d = len(targets)
        if m.shape != (2**d, 2**d):
            raise ValueError(f"gate on {d} qubit(s) needs a {2 ** d}x{2 ** d} matrix")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "targets", targets)

    def is_unitary(self, tol: float = UNITARY_WARN_TOL) -> bool:
        d = self.matrix.shape[0]
        return bool(np.max(np.abs(self.matrix.conj().T @ self.matrix - np.eye(d))) <= tol)


@dataclass(frozen=True, eq=False)
class Circuit:
    """Ordered gate list on ``n`` qubits; non-unitary gates are legal but warned."""

    n: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("circuit needs at least one qubit")
        gates = tuple(self.gates)
        for g in gates:
            if any(not 0 <= t < self.n for t in g.targets):
                raise ValueError(f"gate targets {g.targets} out of range for n={self.n}")
            if not g.is_unitary():
                warnings.warn("gate is not unitary; the circuit-order scale will exceed 1", stacklevel=2)
        object.__setattr__(self, "gates", gates)


def gate_tensor(matrix: np.ndarray) -> Tensor:
    """Rank-2d tensor of a d-qubit gate: ports d inputs then d outputs.

    Entry at (inputs k, outputs l) is the matrix element <l|Q|k>.
    """
    d = int(round(np.log2(matrix.shape[0])))
    arr = np.ascontiguousarray(np.transpose(matrix)).reshape(-1)  # [k, l] order
    return Tensor(2, 2 * d, arr)


def encode_circuit(c: Circuit) -> TensorNetwork:
    """Network whose value is ``<0^n| c |0^n>``.

    Vertex ids: kets are ``0..n-1`` (qubit order), gates ``n..n+L-1`` in
    circuit order, bras ``n+L..n+L+n-1`` (qubit order).
    """
    ket = Tensor.basis(2, 0)
    vertices: list[tuple[int, Tensor]] = []
    edges: list[tuple[tuple[int, int], tuple[int, int]]] = []
    cursor: dict[int, tuple[int, int]] = {}  # qubit -> open (vertex, port)
    for qubit in range(c.n):
        vertices.append((qubit, ket))
        cursor[qubit] = (qubit, 0)
    gate_base = c.n
    for g_idx, g in enumerate(c.gates):
        vid = gate_base + g_idx
        d = len(g.targets)
        vertices.append((vid, gate_tensor(g.matrix)))
        for i, t in enumerate(g.targets):
            edges.append((cursor[t], (vid, i)))
            cursor[t] = (vid, d + i)
    bra_base = c.n + len(c.gates)
    for qubit in range(c.n):
        vid = bra_base + qubit
        vertices.append((vid, ket))
        edges.append((cursor[qubit], (vid, 0)))
    return TensorNetwork(2, tuple(vertices), tuple(edges))


def acceptance_network(q_circuit: Circuit, measured: int | None = None) -> TensorNetwork:
    """Network whose value is the probability of measuring 0 on one qubit.

    Builds circuit + CNOT(measured -> fresh qubit) + inverse circuit on
    ``n+1`` qubits and encodes it; the value is real and lies in [0, 1].
    ``measured`` defaults to the last qubit.
    """
    n = q_circuit.n
    if measured is None:
        measured = n - 1
    if not 0 <= measured < n:
        raise ValueError(f"measured qubit {measured} out of range")
    gates = list(q_circuit.gates)
    gates.append(Gate(CNOT, (measured, n)))
    for g in reversed(q_circuit.gates):
        gates.append(Gate(g.matrix.conj().T, g.targets))
    return encode_circuit(Circuit(n + 1, tuple(gates)))


def circuit_order_bubbling(net: TensorNetwork) -> Bubbling:
    """Swallow kets first, then gates in circuit order, then bras.

    Works on networks from :func:`encode_circuit`, whose vertex ids already
    follow that order, so this is the identity ordering.
    """
    return Bubbling(tuple(sorted(net.vertex_ids)))


# --- circuit file format ------------------------------------------------------


def circuit_to_json(c: Circuit, measured: int | None = None) -> str:
    from . import _jsonfmt

    obj = {
        "n": c.n,
        "gates": [
            {
                "targets": list(g.targets),
                "matrix": [[float(z.real), float(z.imag)] for z in g.matrix.reshape(-1)],
            }
            for g in c.gates
        ],
    }
    if measured is not None:
        obj["measured"] = measured
    return _jsonfmt.dumps(obj)


def circuit_from_json(text: str) -> tuple[Circuit, int | None]:
    """Parse ``{"n":..., "gates":[{"targets":..., "matrix":...}], "measured":...}``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise NetworkFormatError("top level: expected an object")
    n = obj.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise NetworkFormatError("n: expected a positive integer")
    raw_gates = obj.get("gates")
    if not isinstance(raw_gates, list):
        raise NetworkFormatError("gates: expected an array")
    gates = []
    for i, g in enumerate(raw_gates):
        where = f"gates[{i}]"
        if not isinstance(g, dict):
            raise NetworkFormatError(f"{where}: expected an object")
        targets = g.get("targets")
        if not isinstance(targets, list) or not targets or not all(
            isinstance(t, int) and not isinstance(t, bool) for t in targets
        ):
            raise NetworkFormatError(f"{where}.targets: expected a non-empty integer array")
        raw_m = g.get("matrix")
        side = 2 ** len(targets)
        if not isinstance(raw_m, list) or len(raw_m) != side * side:
            raise NetworkFormatError(f"{where}.matrix: expected {side * side} [re, im] entries")
        flat = np.empty(side * side, dtype=np.complex128)
        for j, z in enumerate(raw_m):
            if not isinstance(z, list) or len(z) != 2 or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool) for x in z
            ):
                raise NetworkFormatError(f"{where}.matrix[{j}]: expected [re, im]")
            flat[j] = complex(z[0], z[1])
        try:
            gates.append(Gate(flat.reshape(side, side), tuple(targets)))
        except ValueError as exc:
            raise NetworkFormatError(f"{where}: {exc}") from exc
    measured = obj.get("measured")
    if measured is not None and (not isinstance(measured, int) or isinstance(measured, bool)):
        raise NetworkFormatError("measured: expected an integer")
    try:
        return Circuit(n, tuple(gates)), measured
    except ValueError as exc:
        raise NetworkFormatError(str(exc)) from exc
