"""Classical simulation of the additive-approximation sampling algorithm.

Two backends compute the final overlap ``x = T / delta`` (network value over
the product of swallowing-operator norms):

* the amplitude backend tracks only the all-ancilla-zero branch, applying each
  step's map divided by its norm -- ancillas are never revisited, so this
  branch is the whole story;
* the statevector backend keeps every ancilla qubit explicitly, applying the
  embedded unitaries from :mod:`tnbubble.unitarize` step by step, and reads
  the overlap from the everything-zero amplitude.  It is the faithful
  transcript of the algorithm and serves as a validation oracle.

Sampling follows the Hadamard test: per shot, +1 is returned with probability
``(1 + Re x)/2`` (imaginary part via the ``-i`` phase variant), and the
estimate is rescaled by ``delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _guards, _jsonfmt
from .bubbling import Bubbling, step_edges, vertex_map_matrix
from .errors import NumericError
from .netcore import TensorNetwork
from .unitarize import embed_rect

NORM_DRIFT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class StateVector:
    """Snapshot of the simulated state after one swallowing step.

    ``active`` lists the live frontier registers as (edge id, q) pairs in
    ascending edge order; ``env_dims`` holds the retired registers (ancilla
    qubits and zero-padded leftovers) in creation order.
    """

    amplitudes: np.ndarray
    active: tuple[tuple[int, int], ...]
    env_dims: tuple[int, ...]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def ancilla_zero_branch(self) -> np.ndarray:
        """Amplitudes over the active registers with every retired register at 0."""
        shape = tuple(q for _, q in self.active) + self.env_dims
        arr = self.amplitudes.reshape(shape)
        return arr[(Ellipsis,) + (0,) * len(self.env_dims)].copy()


@dataclass(frozen=True)
class ApproxResult:
    """Outcome of one seeded approximation run."""

    r: complex
    delta: float
    epsilon: float
    shots_real: int
    shots_imag: int
    seed: int

    def to_obj(self) -> dict:
        return {
            "r": [float(self.r.real), float(self.r.imag)],
            "delta": float(self.delta),
            "epsilon": float(self.epsilon),
            "shots": int(self.shots_real),
            "seed": int(self.seed),
        }

    def to_json(self) -> str:
        return _jsonfmt.dumps(self.to_obj())


def _steps(net: TensorNetwork, b: Bubbling):
    b.validate(net)
    for i in range(1, len(b.order) + 1):
        ins, outs, untouched = step_edges(net, b, i)
        _guards.check_amplitudes(net.q ** (len(ins) + len(outs)), "active registers")
        yield b.order[i - 1], ins, outs, untouched


def evolve(net: TensorNetwork, b: Bubbling) -> complex:
    """Final overlap ``T/delta`` from the amplitude backend.

    A zero swallowing operator means the network value is exactly 0; the
    overlap is reported as 0 in that case (``delta`` is 0 too).
    """
    overlap, _ = overlap_and_norms(net, b)
    return overlap


def overlap_and_norms(net: TensorNetwork, b: Bubbling) -> tuple[complex, tuple[float, ...]]:
    """Amplitude-backend overlap together with every per-step operator norm."""
    from .bubbling import operator_norm

    q = net.q
    frontier = np.array(1.0 + 0.0j)
    axis_edges: list[int] = []
    norms: list[float] = []
    dead = False
    for v, ins, outs, untouched in _steps(net, b):
        matrix = vertex_map_matrix(net, v, ins, outs)
        if not matrix.any():
            norms.append(0.0)
            dead = True
            continue
        norm = operator_norm(matrix)
        norms.append(norm)
        if dead:
            continue
        in_axes = [axis_edges.index(e) for e in ins]
        arr = (matrix / norm).reshape((q,) * (len(outs) + len(ins)))
        # arr axes: outputs (ascending edge id) then inputs (ascending edge id)
        frontier = np.tensordot(frontier, arr, axes=(in_axes, [len(outs) + j for j in range(len(ins))]))
        order_now = [e for e in axis_edges if e not in set(ins)] + list(outs)
        target = sorted(order_now)
        frontier = np.transpose(frontier, [order_now.index(e) for e in target])
        axis_edges = target
    if dead:
        return 0.0 + 0.0j, tuple(norms)
    return complex(frontier.reshape(())), tuple(norms)


def evolve_statevector(net: TensorNetwork, b: Bubbling, return_states: bool = False):
    """Final overlap from the explicit-ancilla backend.

    One fresh ancilla qubit is created per step and never touched again;
    rectangular steps add zero-initialized pad registers, retired afterwards.
    The overlap is the amplitude of the everything-zero configuration at the
    end.  With ``return_states`` the per-step normalized states are returned
    as a list of :class:`StateVector` alongside the overlap.
    """
    q = net.q
    state = np.array([1.0 + 0.0j])
    active: list[int] = []
    env_dims: list[int] = []
    states: list[StateVector] = []
    for v, ins, outs, untouched in _steps(net, b):
        matrix = vertex_map_matrix(net, v, ins, outs)
        if not matrix.any():
            return (0.0 + 0.0j, states) if return_states else 0.0 + 0.0j
        sub = embed_rect(matrix, q)
        k, ell = len(ins), len(outs)
        m = max(k, ell)
        grow = q**sub.input_pad * 2
        _guards.check_amplitudes(state.size * grow, "statevector")

        shape = [q] * len(active) + env_dims
        arr = state.reshape(shape)
        # prepend input pads in |0>
        if sub.input_pad:
            pad = np.zeros((q,) * sub.input_pad, dtype=np.complex128)
            pad[(0,) * sub.input_pad] = 1.0
            arr = np.tensordot(pad, arr, axes=0)
        # bring [pads, input edges] to the front, ancilla slot after them
        pad_axes = list(range(sub.input_pad))
        in_axes = [sub.input_pad + active.index(e) for e in ins]
        rest_axes = [ax for ax in range(sub.input_pad + len(active) + len(env_dims)) if ax not in pad_axes + in_axes]
        arr = np.transpose(arr, pad_axes + in_axes + rest_axes)
        rest_shape = arr.shape[m:]
        arr = np.tensordot(arr.reshape((q,) * m + (-1,)), np.array([1.0, 0.0], dtype=np.complex128), axes=0)
        # now [m registers, rest, ancilla]; flatten as (m regs + ancilla) x rest
        arr = np.moveaxis(arr, -1, m)
        mat_side = q**m * 2
        arr = arr.reshape(m * (q,) + (2,) + rest_shape)
        flat = arr.reshape(mat_side, -1)
        flat = sub.u @ flat
        arr = flat.reshape(m * (q,) + (2,) + rest_shape)

        # front registers now mean: [output pads, output edges]; retire pads+ancilla
        out_pad_axes = list(range(sub.output_pad))
        out_axes = list(range(sub.output_pad, sub.output_pad + ell))
        anc_axis = m
        rest_start = m + 1
        new_active = sorted(set(untouched) | set(outs))
        out_pos = {e: out_axes[i] for i, e in enumerate(outs)}
        rest_list = [e for e in active if e in untouched]  # untouched keep their order
        rest_pos = {e: rest_start + rest_list.index(e) for e in rest_list}
        perm = [out_pos.get(e, rest_pos.get(e)) for e in new_active]
        perm += [rest_start + len(rest_list) + j for j in range(len(env_dims))]
        perm += out_pad_axes + [anc_axis]
        arr = np.transpose(arr, perm)

        env_dims = env_dims + [q] * sub.output_pad + [2]
        active = new_active
        state = arr.reshape(-1)
        drift = abs(float(np.linalg.norm(state)) - 1.0)
        if drift > NORM_DRIFT_TOL:
            raise NumericError(f"state norm drifted by {drift:.3e} after swallowing vertex {v}")
        if return_states:
            states.append(StateVector(state.copy(), tuple((e, q) for e in active), tuple(env_dims)))
    overlap = complex(state.reshape(-1)[0])
    return (overlap, states) if return_states else overlap


def shots_for(epsilon: float, failure: float) -> int:
    """Per-part shot count: ceil((2/eps^2) ln(4/failure)) keeps each part's
    Hoeffding failure below failure/2."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not 0 < failure < 0.5:
        raise ValueError("failure budget must lie in (0, 1/2)")
    return int(math.ceil((2.0 / (epsilon * epsilon)) * math.log(4.0 / failure)))


def hadamard_test(
    overlap_oracle,
    epsilon: float,
    failure: float = 0.25,
    seed: int = 0,
    aggregator: str = "mean",
) -> complex:
    """Sampled estimate of a true overlap with |overlap| <= 1.

    ``overlap_oracle`` is the exact overlap (or a callable producing it); the
    estimator draws ``shots_for(epsilon, failure)`` +/-1 samples per part from
    the exact Bernoulli law and satisfies
    ``Pr(|estimate - overlap| >= epsilon) <= failure``.  Runs are reproducible
    from the seed alone (counter-based generator).
    """
    overlap = complex(overlap_oracle() if callable(overlap_oracle) else overlap_oracle)
    n = shots_for(epsilon, failure)
    if aggregator not in ("mean", "median_of_means"):
        raise ValueError(f"unknown aggregator {aggregator!r}")
    rng = np.random.Generator(np.random.Philox(key=seed % (1 << 64)))
    re = _sample_part(rng, overlap.real, n, aggregator)
    im = _sample_part(rng, overlap.imag, n, aggregator)
    return complex(re, im)


def _sample_part(rng, component: float, n: int, aggregator: str) -> float:
    p = min(max((1.0 + component) / 2.0, 0.0), 1.0)
    x = np.where(rng.random(n) < p, 1.0, -1.0)
    if aggregator == "mean":
        return float(x.mean())
    groups = np.array_split(x, 9)
    return float(np.median([g.mean() for g in groups if g.size]))


def approximate(
    net: TensorNetwork,
    b: Bubbling,
    epsilon: float,
    seed: int,
    failure: float = 0.25,
    backend: str = "amplitude",
    aggregator: str = "mean",
) -> ApproxResult:
    """Estimate the network value: ``Pr(|T - r| >= epsilon*delta) <= failure``.

    ``r`` is ``delta`` times a Hadamard-test estimate of the overlap; networks
    containing an all-zero tensor short-circuit to ``r = 0`` exactly.
    """
    if backend == "amplitude":
        overlap, norms = overlap_and_norms(net, b)
        delta = math.prod(norms)
    elif backend == "statevector":
        from .bubbling import scale

        report = scale(net, b)
        delta = report.delta
        overlap = evolve_statevector(net, b) if delta > 0.0 else 0.0
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if delta == 0.0:
        return ApproxResult(0.0 + 0.0j, 0.0, epsilon, 0, 0, seed)
    n = shots_for(epsilon, failure)
    est = hadamard_test(overlap, epsilon, failure, seed, aggregator)
    return ApproxResult(delta * est, delta, epsilon, n, n, seed)
