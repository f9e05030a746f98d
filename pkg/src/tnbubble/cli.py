"""Command-line front end: build, evaluate, scale, and approximate networks.

Subcommands
-----------
eval    exact network value by sequential contraction
approx  seeded additive approximation (r, delta, epsilon, shots)
build   model or circuit file -> network JSON (plus a sidecar for
        difference builds when --output is given)
scale   per-bubbling scale report, with analytic bounds when a model is given
bubble  emit the greedy ordering for a network

Exit codes: 0 success, 1 usage, 2 input format, 3 resource guard, 4 numeric
failure.  All numeric JSON output uses 17 significant digits, so identical
inputs and seeds give byte-identical output.  The environment variable
``TENSORNET_GUARD_BITS`` overrides both resource-guard exponents.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import _jsonfmt, bubbling, circuits, netcore, qsim, statmech
from .errors import GuardError, NetworkFormatError, NumericError


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; this tool reserves 2 for format."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="tnbubble", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(p, bubbling_flag=True):
        if bubbling_flag:
            p.add_argument(
                "--bubbling",
                default="greedy",
                help="ordering source: 'greedy', 'circuit-order', 'plane-sweep', or a JSON file of vertex ids",
            )
        p.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
        p.add_argument("--output", help="write JSON here instead of stdout")

    p = sub.add_parser("eval", help="exact value of a network file")
    p.add_argument("network")
    p.add_argument(
        "--method",
        choices=["contract", "labeling-sum"],
        default="contract",
        help="sequential contraction (default) or the enumeration oracle",
    )
    add_common(p)

    p = sub.add_parser("approx", help="seeded additive approximation of a network file")
    p.add_argument("network")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--backend", choices=["amplitude", "statevector"], default="amplitude")
    add_common(p)

    p = sub.add_parser("build", help="turn a model or circuit file into a network file")
    p.add_argument("input")
    p.add_argument(
        "--construction",
        choices=["general", "delta", "delta-improved", "coloring", "encode", "acceptance"],
        default=None,
        help="model files default to 'general', circuit files to 'acceptance'",
    )
    p.add_argument("--measured", type=int, default=None, help="measured qubit for acceptance builds")
    p.add_argument("--max-degree", type=int, default=None, help="expand identity vertices above this degree")
    add_common(p, bubbling_flag=False)

    p = sub.add_parser("scale", help="scale report for a network under a bubbling")
    p.add_argument("network")
    p.add_argument("--model", help="model file for analytic bounds")
    add_common(p)

    p = sub.add_parser("bubble", help="emit the greedy ordering of a network")
    p.add_argument("network")
    add_common(p, bubbling_flag=False)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = _run(args)
    except NetworkFormatError as exc:
        print(f"tnbubble: format error: {exc}", file=sys.stderr)
        return 2
    except GuardError as exc:
        print(f"tnbubble: guard error: {exc}", file=sys.stderr)
        return 3
    except NumericError as exc:
        print(f"tnbubble: numeric error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"tnbubble: format error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"tnbubble: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _run(args) -> str:
    if args.command == "eval":
        net = _load_network(args.network)
        order = _resolve_bubbling(args, net)
        if args.method == "labeling-sum":
            value = netcore.eval_labeling_sum(net, threads=args.threads)
        else:
            value = netcore.eval_contract(net, order)
        width = max(len(z) for z in bubbling.frontiers(net, order))
        return _jsonfmt.dumps({"value": [value.real, value.imag], "bubble_width": width})
    if args.command == "approx":
        if args.epsilon <= 0:
            raise NetworkFormatError("epsilon must be positive")
        net = _load_network(args.network)
        order = _resolve_bubbling(args, net)
        result = qsim.approximate(net, order, args.epsilon, args.seed, backend=args.backend)
        return result.to_json()
    if args.command == "build":
        return _cmd_build(args)
    if args.command == "scale":
        return _cmd_scale(args)
    if args.command == "bubble":
        net = _load_network(args.network)
        return bubbling.bubbling_to_json(bubbling.greedy_bubbling(net))
    raise AssertionError(f"unhandled command {args.command}")


def _cmd_build(args) -> str:
    raw = _read(args.input)
    kind = _sniff(raw)
    construction = args.construction
    if kind == "circuit":
        construction = construction or "acceptance"
        if construction not in ("encode", "acceptance"):
            raise NetworkFormatError(f"construction {construction!r} needs a model file")
        circuit, measured = circuits.circuit_from_json(raw)
        if args.measured is not None:
            measured = args.measured
        if construction == "encode":
            net = circuits.encode_circuit(circuit)
        else:
            net = circuits.acceptance_network(circuit, measured)
        return netcore.network_to_json(net)
    construction = construction or "general"
    spec = statmech.model_from_json(raw)
    if construction == "general":
        net = statmech.build_general(spec, max_degree=args.max_degree)
        return netcore.network_to_json(net)
    if construction == "coloring":
        net = statmech.build_coloring(spec.n, spec.edges, spec.q, max_degree=args.max_degree)
        return netcore.network_to_json(net)
    if construction in ("delta", "delta-improved"):
        net, dgraph, order = statmech.build_delta(spec)
        if construction == "delta-improved":
            net = statmech.improve_delta_weights(net, dgraph)
            order = statmech.canonical_bubbling(dgraph, net)
        if args.output:
            sidecar = _delta_sidecar(dgraph, order)
            with open(args.output + ".delta.json", "w") as fh:
                fh.write(sidecar + "\n")
        return netcore.network_to_json(net)
    raise NetworkFormatError(f"construction {construction!r} needs a circuit file")


def _delta_sidecar(dgraph: statmech.DeltaGraph, order: bubbling.Bubbling) -> str:
    return _jsonfmt.dumps(
        {
            "tree_edges": list(dgraph.tree_edges),
            "cycle_edges": list(dgraph.cycle_edges),
            "directions": [[u, v] for u, v in dgraph.directions],
            "cycles": {str(e): [[t, s] for t, s in members] for e, members in dgraph.cycles.items()},
            "bubbling": list(order.order),
        }
    )


def _cmd_scale(args) -> str:
    net = _load_network(args.network)
    spec = None
    if args.model:
        spec = statmech.model_from_json(_read(args.model))
    order = _resolve_bubbling(args, net, spec)
    report = bubbling.scale(net, order)
    obj = report.to_obj()
    if spec is not None:
        obj["general_bound"] = statmech.scale_general(spec, order) if _covers_model(net, spec) else None
        if spec.is_difference:
            basic, improved = statmech.scale_delta(spec)
            obj["difference_scale_basic"] = basic
            obj["difference_scale_improved"] = improved
        if obj.get("general_bound") is None:
            obj.pop("general_bound")
    return _jsonfmt.dumps(obj)


def _covers_model(net: netcore.TensorNetwork, spec: statmech.ModelSpec) -> bool:
    return set(range(spec.n)).issubset(set(net.vertex_ids))


def _resolve_bubbling(args, net, spec=None):
    source = getattr(args, "bubbling", "greedy")
    if source == "greedy":
        return bubbling.greedy_bubbling(net)
    if source == "circuit-order":
        return circuits.circuit_order_bubbling(net)
    if source == "plane-sweep":
        if spec is None and getattr(args, "model", None):
            spec = statmech.model_from_json(_read(args.model))
        if spec is None:
            raise NetworkFormatError("plane-sweep bubbling needs --model to supply the vertex count")
        order, _ = statmech.plane_sweep_bubbling(net, [float(v) for v in range(spec.n)])
        return order
    order = bubbling.bubbling_from_json(_read(source))
    order.validate(net)
    return order


def _sniff(raw: str) -> str:
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if isinstance(obj, dict) and "gates" in obj:
        return "circuit"
    return "model"


def _load_network(path: str) -> netcore.TensorNetwork:
    return netcore.network_from_json(_read(path))


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


if __name__ == "__main__":
    sys.exit(main())
