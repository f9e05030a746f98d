"""Small helper for assembling networks without manual port arithmetic.

Ports are handed out per vertex in the order edges are added; each vertex
records a tag per port so tensor factories can be written against meanings
("which neighbor kind is this port") instead of raw indices.
"""

from __future__ import annotations

from .netcore import Tensor, TensorNetwork


class NetworkBuilder:
    def __init__(self, q: int):
        self.q = q
        self._order: list[int] = []
        self._tags: dict[int, list] = {}
        self._tensors: dict[int, Tensor] = {}
        self._edges: list[tuple[tuple[int, int], tuple[int, int]]] = []

    def add_vertex(self, v: int) -> None:
        if v in self._tags:
            raise ValueError(f"vertex {v} already present")
        self._order.append(v)
        self._tags[v] = []

    def connect(self, u: int, utag, v: int, vtag) -> int:
        """Join the next free port of ``u`` to the next free port of ``v``."""
        for w in (u, v):
            if w not in self._tags:
                self.add_vertex(w)
        pu = len(self._tags[u])
        self._tags[u].append(utag)
        pv = len(self._tags[v])
        self._tags[v].append(vtag)
        self._edges.append(((u, pu), (v, pv)))
        return len(self._edges) - 1

    def port_tags(self, v: int) -> list:
        return list(self._tags[v])

    def degree(self, v: int) -> int:
        return len(self._tags[v])

    def set_tensor(self, v: int, tensor: Tensor) -> None:
        if tensor.rank != len(self._tags[v]):
            raise ValueError(f"vertex {v}: tensor rank {tensor.rank} != degree {len(self._tags[v])}")
        self._tensors[v] = tensor

    def network(self) -> TensorNetwork:
        missing = [v for v in self._order if v not in self._tensors]
        if missing:
            raise ValueError(f"vertices without tensors: {missing}")
        return TensorNetwork(
            self.q,
            tuple((v, self._tensors[v]) for v in self._order),
            tuple(self._edges),
        )
