"""Model builders against brute-force enumeration, and the analytic scales."""

import cmath
import itertools
import math

import numpy as np
import pytest

from helpers import (
    FIG9,
    GRID_2X3,
    K4,
    PATH4,
    PETERSEN,
    TRIANGLE,
    graph_vertices,
    oracle_colorings,
    oracle_partition,
    rel_err,
)
from tnbubble import bubbling as bb
from tnbubble import netcore as nc
from tnbubble import statmech as sm
from tnbubble.errors import NetworkFormatError


def spec_for(edges, q, beta, coupling):
    return sm.ModelSpec(graph_vertices(edges), tuple(edges), q, beta, (coupling,))


class TestCouplings:
    def test_ising_table(self):
        c = sm.coupling_ising(1.0)
        assert c.table.tolist() == [-1, 1]

    def test_potts_table(self):
        c = sm.coupling_potts(3, 1.0)
        assert c.table.tolist() == [-1, 0, 0]

    def test_clock_q4_table(self):
        c = sm.coupling_clock(4, 1.0)
        assert np.allclose(c.table, [-1, 0, 1, 0], atol=1e-12)

    def test_clock_q2_equals_ising(self):
        assert np.allclose(sm.coupling_clock(2, 0.7).table, sm.coupling_ising(0.7).table)

    def test_q_too_small(self):
        with pytest.raises(ValueError):
            sm.coupling_potts(1)


class TestBuildGeneral:
    def test_single_edge_potts(self):
        spec = spec_for(((0, 1),), 3, 1.0, sm.coupling_potts(3, 1.0))
        assert rel_err(nc.eval_labeling_sum(sm.build_general(spec)), 3 * math.e + 6) <= 1e-9

    def test_ising_triangle_closed_form(self):
        spec = spec_for(TRIANGLE, 2, 0.3, sm.coupling_ising(1.0))
        z = 2 * math.exp(0.9) + 6 * math.exp(-0.3)
        assert rel_err(nc.eval_labeling_sum(sm.build_general(spec)), z) <= 1e-9

    def test_beta_zero_counts_colorings(self):
        spec = spec_for(TRIANGLE, 3, 0.0, sm.coupling_potts(3))
        assert nc.eval_labeling_sum(sm.build_general(spec)) == pytest.approx(27)

    @pytest.mark.parametrize("edges", [TRIANGLE, PATH4, K4, GRID_2X3])
    @pytest.mark.parametrize("beta", [0.0, 0.3, 0.3 + 0.2j])
    def test_matches_brute_force(self, edges, beta):
        n = graph_vertices(edges)
        couplings = {
            "ising": sm.coupling_ising(1.0) if True else None,
            "potts": sm.coupling_potts(3, 1.0),
            "clock": sm.coupling_clock(3, 0.8),
        }
        for name, c in couplings.items():
            q = c.q
            spec = spec_for(edges, q, beta, c)
            net = sm.build_general(spec)
            z_net = nc.eval_contract(net, bb.greedy_bubbling(net))
            z_ref = oracle_partition(n, edges, q, beta, lambda e, a, b: c.energy(a, b))
            assert rel_err(z_net, z_ref) <= 1e-9
            assert rel_err(sm.partition_function(spec), z_ref) <= 1e-9

    def test_structure_ids(self):
        spec = spec_for(TRIANGLE, 3, 1.0, sm.coupling_potts(3))
        net = sm.build_general(spec)
        assert sorted(net.vertex_ids) == [0, 1, 2, 3, 4, 5]
        for v in range(3):
            assert net.tensor(v).is_identity() and net.degree(v) == 2
        for v in range(3, 6):
            assert net.degree(v) == 2 and not net.tensor(v).is_identity()

    def test_pins_restrict_the_sum(self):
        edges = TRIANGLE
        c = sm.coupling_ising(1.0)
        spec = sm.ModelSpec(3, edges, 2, 0.3, (c,), pins=((0, 1),))
        net = sm.build_general(spec)
        z_pin = nc.eval_labeling_sum(net)
        expect = 0j
        for sigma in itertools.product(range(2), repeat=3):
            if sigma[0] != 1:
                continue
            h = sum(c.energy(sigma[u], sigma[v]) for u, v in edges)
            expect += cmath.exp(-0.3 * h)
        assert rel_err(z_pin, expect) <= 1e-9

    def test_max_degree_expansion_preserves_value(self):
        star = tuple((0, i) for i in range(1, 6))
        spec = spec_for(star, 2, 0.4, sm.coupling_ising(1.0))
        full = sm.build_general(spec)
        reduced = sm.build_general(spec, max_degree=3)
        assert all(reduced.degree(v) <= 3 for v in reduced.vertex_ids)
        assert rel_err(nc.eval_labeling_sum(full), nc.eval_labeling_sum(reduced)) <= 1e-12

    def test_disconnected_rejected(self):
        spec = sm.ModelSpec(4, ((0, 1), (2, 3)), 2, 1.0, (sm.coupling_ising(),))
        with pytest.raises(ValueError, match="connected"):
            sm.build_general(spec)


class TestBuildColoring:
    def test_triangle(self):
        assert nc.eval_labeling_sum(sm.build_coloring(3, TRIANGLE, 3)) == pytest.approx(6)

    def test_k4_not_three_colorable(self):
        assert nc.eval_labeling_sum(sm.build_coloring(4, K4, 3)) == pytest.approx(0)

    def test_single_edge(self):
        assert nc.eval_labeling_sum(sm.build_coloring(2, ((0, 1),), 3)) == pytest.approx(6)

    def test_petersen_matches_enumeration(self):
        net = sm.build_coloring(10, PETERSEN, 3)
        value = nc.eval_contract(net, bb.greedy_bubbling(net))
        assert oracle_colorings(10, PETERSEN, 3) == 120
        assert value == pytest.approx(120, rel=1e-9)

    def test_antiferromagnetic_limit(self):
        # beta*J -> -inf Potts weights reproduce the proper-coloring count
        spec = spec_for(TRIANGLE, 3, 50.0, sm.coupling_potts(3, -1.0))
        z = nc.eval_labeling_sum(sm.build_general(spec))
        assert z == pytest.approx(6, rel=1e-9)


class TestPlaneSweep:
    def test_path_endpoints_only(self):
        spec = spec_for(PATH4, 2, 0.5, sm.coupling_ising(1.0))
        net = sm.build_general(spec)
        order, b = sm.plane_sweep_bubbling(net, [0.0, 1.0, 2.0, 3.0])
        assert b == 2

    def test_grid_corner_to_corner(self):
        spec = spec_for(GRID_2X3, 2, 0.5, sm.coupling_ising(1.0))
        net = sm.build_general(spec)
        heights = [r + c + 0.01 * r for r, c in [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]]
        order, b = sm.plane_sweep_bubbling(net, heights)
        assert b == 2

    def test_star_hub_lowest(self):
        # enumeration over orientations gives extreme counts {4, 5}; hub-lowest hits 5
        star = tuple((0, i) for i in range(1, 5))
        spec = spec_for(star, 2, 0.5, sm.coupling_ising(1.0))
        net = sm.build_general(spec)
        order, b = sm.plane_sweep_bubbling(net, [0.0, 1.0, 2.0, 3.0, 4.0])
        assert b == 5
        counts = set()
        for heights in itertools.permutations(range(5)):
            _, bh = sm.plane_sweep_bubbling(net, heights)
            counts.add(bh)
        assert counts == {4, 5}

    def test_energy_vertices_swallowed_one_to_one(self):
        spec = spec_for(K4, 2, 0.5, sm.coupling_ising(1.0))
        net = sm.build_general(spec)
        order, _ = sm.plane_sweep_bubbling(net, [0.0, 1.0, 2.0, 3.0])
        for i, v in enumerate(order.order, start=1):
            if v >= 4:  # weight vertex
                op = bb.swallowing_operator(net, order, i)
                assert len(op.input_edges) == 1 and len(op.output_edges) == 1

    def test_duplicate_heights_rejected(self):
        spec = spec_for(TRIANGLE, 2, 0.5, sm.coupling_ising(1.0))
        net = sm.build_general(spec)
        with pytest.raises(ValueError, match="distinct"):
            sm.plane_sweep_bubbling(net, [0.0, 0.0, 1.0])


class TestScaleGeneral:
    def test_computed_delta_within_bound(self):
        for edges, beta, c in [
            (TRIANGLE, 0.3, sm.coupling_ising(1.0)),
            (PATH4, 0.7, sm.coupling_potts(3, 1.0)),
            (GRID_2X3, 0.2 + 0.1j, sm.coupling_clock(3, 0.9)),
        ]:
            spec = spec_for(edges, c.q, beta, c)
            net = sm.build_general(spec)
            order, b = sm.plane_sweep_bubbling(net, [float(i) for i in range(spec.n)])
            computed = bb.scale(net, order).delta
            bound = sm.scale_general(spec, order)
            assert computed <= bound * (1 + 1e-9)

    def test_potts_edge_norm(self):
        spec = spec_for(((0, 1),), 3, 0.7, sm.coupling_potts(3, 1.0))
        assert bb.operator_norm(spec.weight_matrix(0)) == pytest.approx(math.exp(0.7) + 2, rel=1e-10)

    def test_beta_zero_bound(self):
        spec = spec_for(TRIANGLE, 3, 0.0, sm.coupling_potts(3, 1.0))
        net = sm.build_general(spec)
        order, b = sm.plane_sweep_bubbling(net, [0.0, 1.0, 2.0])
        bound = sm.scale_general(spec, order)
        assert bound == pytest.approx(3 ** (b / 2) * 3 ** len(TRIANGLE), rel=1e-9)

    def test_sandwich_inequality(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            q = int(rng.choice([2, 3, 4]))
            table = rng.normal(size=q) + 1j * rng.normal(size=q)
            spec = spec_for(((0, 1),), q, 1.0, sm.Coupling(q, True, table))
            w = np.abs(spec.weight_vector(0))
            norm = bb.operator_norm(spec.weight_matrix(0))
            assert w.max() <= norm * (1 + 1e-9)
            assert norm <= w.sum() * (1 + 1e-9)


class TestBuildDelta:
    def test_triangle_structure(self):
        spec = spec_for(TRIANGLE, 2, 0.3, sm.coupling_ising(1.0))
        net, dg, order = sm.build_delta(spec)
        assert len(dg.tree_edges) == 2 and len(dg.cycle_edges) == 1
        assert len(dg.cycles[dg.cycle_edges[0]]) == 2

    def test_fig9_two_independent_cycles(self):
        spec = spec_for(FIG9, 3, 0.3, sm.coupling_potts(3))
        net, dg, order = sm.build_delta(spec)
        assert len(dg.tree_edges) == 3
        assert len(dg.cycle_edges) == 2

    def test_tree_graph_value(self):
        spec = spec_for(PATH4, 3, 0.4, sm.coupling_potts(3, 1.0))
        net, dg, order = sm.build_delta(spec)
        z_general = nc.eval_labeling_sum(sm.build_general(spec))
        assert rel_err(3 * nc.eval_labeling_sum(net), z_general) <= 1e-9

    def test_triangle_ising_closed_form(self):
        spec = spec_for(TRIANGLE, 2, 0.3, sm.coupling_ising(1.0))
        net, dg, order = sm.build_delta(spec)
        z = 2 * math.exp(0.9) + 6 * math.exp(-0.3)
        assert rel_err(2 * nc.eval_labeling_sum(net), z) <= 1e-9

    @pytest.mark.parametrize("edges", [TRIANGLE, PATH4, K4, GRID_2X3, FIG9])
    @pytest.mark.parametrize("beta", [0.0, 0.3, 0.3 + 0.2j])
    def test_q_times_delta_matches_general(self, edges, beta):
        for c in (sm.coupling_ising(1.0), sm.coupling_potts(3, 0.8), sm.coupling_clock(4, 0.6)):
            spec = spec_for(edges, c.q, beta, c)
            net, dg, order = sm.build_delta(spec)
            # the four-plane ordering optimizes the scale, not the frontier
            # size; evaluate along the greedy ordering instead
            z_delta = nc.eval_contract(net, bb.greedy_bubbling(net))
            general = sm.build_general(spec)
            z_general = nc.eval_contract(general, bb.greedy_bubbling(general))
            assert rel_err(c.q * z_delta, z_general) <= 1e-9

    def test_general_table_rejected(self):
        table = np.arange(9, dtype=float).reshape(3, 3)
        spec = spec_for(TRIANGLE, 3, 0.3, sm.Coupling(3, False, table))
        with pytest.raises(ValueError, match="difference"):
            sm.build_delta(spec)

    def test_cycle_labelings_biject_with_consistent_assignments(self):
        # every nonzero network labeling corresponds to exactly one consistent
        # difference assignment, and all of them appear
        for edges in (TRIANGLE, FIG9):
            q = 2
            spec = spec_for(edges, q, 0.25, sm.coupling_ising(1.0))
            net, dg, order = sm.build_delta(spec)
            edge_of = {}
            for e in range(len(spec.edges)):
                node = dg.node_vertex(e)
                partner = dg.mid_vertex(e) if e in dg.tree_edges else dg.energy_vertex(e)
                for i, (a, b) in enumerate(net.edges):
                    vids = (a[0], b[0])
                    if set(vids) == {node, partner}:
                        edge_of[e] = i
                        break
            seen = []
            for labels in itertools.product(range(q), repeat=len(net.edges)):
                if nc.labeling_weight(net, labels) != 0:
                    seen.append(tuple(labels[edge_of[e]] for e in range(len(spec.edges))))
            consistent = set()
            for sigma in itertools.product(range(q), repeat=spec.n):
                consistent.add(
                    tuple((sigma[h] - sigma[t]) % q for t, h in dg.directions)
                )
            assert len(seen) == len(set(seen))
            assert set(seen) == consistent


class TestImproveDelta:
    def test_value_preserved(self):
        for edges, c in [(TRIANGLE, sm.coupling_ising(1.0)), (FIG9, sm.coupling_potts(3, 0.7))]:
            spec = spec_for(edges, c.q, 0.3, c)
            net, dg, order = sm.build_delta(spec)
            improved = sm.improve_delta_weights(net, dg)
            a = nc.eval_labeling_sum(net)
            b2 = nc.eval_labeling_sum(improved)
            assert rel_err(a, b2) <= 1e-12

    def test_cycle_vertex_norm_is_max_weight(self):
        spec = spec_for(TRIANGLE, 3, 0.7, sm.coupling_potts(3, 1.0))
        net, dg, _ = sm.build_delta(spec)
        improved = sm.improve_delta_weights(net, dg)
        order = sm.canonical_bubbling(dg, improved)
        cycle_vertex = dg.node_vertex(dg.cycle_edges[0])
        i = order.order.index(cycle_vertex) + 1
        op = bb.swallowing_operator(improved, order, i)
        assert op.norm == pytest.approx(math.exp(0.7), rel=1e-10)

    def test_tree_edge_combined_contribution(self):
        spec = spec_for(TRIANGLE, 3, 0.7, sm.coupling_potts(3, 1.0))
        net, dg, _ = sm.build_delta(spec)
        improved = sm.improve_delta_weights(net, dg)
        order = sm.canonical_bubbling(dg, improved)
        t = dg.tree_edges[0]
        i_node = order.order.index(dg.node_vertex(t)) + 1
        i_energy = order.order.index(dg.energy_vertex(t)) + 1
        node_norm = bb.swallowing_operator(improved, order, i_node).norm
        energy_norm = bb.swallowing_operator(improved, order, i_energy).norm
        assert node_norm * energy_norm == pytest.approx(math.exp(0.7) + 2, rel=1e-9)

    def test_mismatched_network_rejected(self):
        spec = spec_for(TRIANGLE, 2, 0.3, sm.coupling_ising(1.0))
        _, dg, _ = sm.build_delta(spec)
        other = sm.build_general(spec)
        with pytest.raises(ValueError):
            sm.improve_delta_weights(other, dg)


class TestScaleDelta:
    def test_potts_ferromagnetic_closed_form(self):
        spec = spec_for(K4, 3, 0.5, sm.coupling_potts(3, 1.0))
        _, improved = sm.scale_delta(spec)
        n, m = 4, 6
        expect = 3 * (2 + math.exp(0.5)) ** (n - 1) * math.exp(0.5) ** (m - n + 1)
        assert improved == pytest.approx(expect, rel=1e-9)

    def test_potts_antiferromagnetic_closed_form(self):
        spec = spec_for(K4, 3, 0.5, sm.coupling_potts(3, -1.0))
        _, improved = sm.scale_delta(spec)
        expect = 3 * (2 + math.exp(-0.5)) ** 3
        assert improved == pytest.approx(expect, rel=1e-9)

    def test_chromatic_limit(self):
        # e^{beta J} -> 0 recovers q (q-1)^{|V|-1}
        spec = spec_for(TRIANGLE, 3, 1.0, sm.coupling_potts(3, math.log(1e-18)))
        _, improved = sm.scale_delta(spec)
        assert improved == pytest.approx(3 * 2 ** 2, rel=1e-9)

    def test_improved_never_exceeds_basic(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            q = int(rng.choice([2, 3]))
            n = int(rng.integers(3, 6))
            edges = _random_connected_edges(rng, n)
            table = rng.normal(size=q) + 1j * rng.normal(size=q)
            spec = sm.ModelSpec(n, edges, q, complex(rng.normal(), rng.normal() * 0.2), (sm.Coupling(q, True, table),))
            basic, improved = sm.scale_delta(spec)
            assert improved <= basic * (1 + 1e-9)

    def test_computed_scale_matches_improved_formula(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            q = int(rng.choice([2, 3]))
            n = int(rng.integers(3, 6))
            edges = _random_connected_edges(rng, n)
            table = rng.normal(size=q)
            spec = sm.ModelSpec(n, edges, q, 0.6, (sm.Coupling(q, True, table),))
            net, dg, _ = sm.build_delta(spec)
            improved_net = sm.improve_delta_weights(net, dg)
            order = sm.canonical_bubbling(dg, improved_net)
            computed = bb.scale(improved_net, order).delta
            _, improved = sm.scale_delta(spec, dg)
            assert rel_err(q * computed, improved) <= 1e-9

    def test_basic_formula_matches_unimproved_network(self):
        spec = spec_for(TRIANGLE, 2, 0.3, sm.coupling_ising(1.0))
        net, dg, order = sm.build_delta(spec)
        basic, _ = sm.scale_delta(spec, dg)
        computed = bb.scale(net, order).delta
        assert rel_err(2 * computed, basic) <= 1e-9


def _random_connected_edges(rng, n):
    edges = set()
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges.add((u, v))
    for _ in range(int(rng.integers(0, n))):
        u, v = sorted(rng.choice(n, size=2, replace=False).tolist())
        if u != v:
            edges.add((u, v))
    return tuple(sorted(edges))


class TestModelJson:
    def test_round_trip(self):
        spec = spec_for(TRIANGLE, 3, 0.4, sm.coupling_potts(3, 1.0))
        text = sm.model_to_json(spec)
        back = sm.model_from_json(text)
        assert back.n == spec.n and back.edges == spec.edges and back.q == spec.q
        assert rel_err(sm.partition_function(back), sm.partition_function(spec)) <= 1e-12

    def test_named_kinds(self):
        for kind, q in (("ising", 2), ("potts", 3), ("clock", 5)):
            text = (
                '{"q": %d, "beta": 0.3, "graph": {"vertices": 2, "edges": [[0, 1]]},'
                ' "coupling": {"kind": "%s", "J": 1.0}}' % (q, kind)
            )
            spec = sm.model_from_json(text)
            assert spec.q == q and spec.is_difference

    def test_general_table(self):
        text = (
            '{"q": 2, "beta": 1.0, "graph": {"vertices": 2, "edges": [[0, 1]]},'
            ' "coupling": {"kind": "table", "table": [[0.0, 1.0], [0.5, [0.0, 0.25]]]}}'
        )
        spec = sm.model_from_json(text)
        assert not spec.is_difference
        assert spec.couplings[0].energy(1, 1) == 0.25j

    def test_pins_parsed(self):
        text = (
            '{"q": 2, "beta": 1.0, "graph": {"vertices": 3, "edges": [[0,1],[1,2],[0,2]]},'
            ' "coupling": {"kind": "ising"}, "pins": [[0, 1]]}'
        )
        assert sm.model_from_json(text).pins == ((0, 1),)

    def test_ising_needs_q2(self):
        text = '{"q": 3, "beta": 1.0, "graph": {"vertices": 2, "edges": [[0,1]]}, "coupling": {"kind": "ising"}}'
        with pytest.raises(NetworkFormatError):
            sm.model_from_json(text)

    def test_bad_edge_reported(self):
        text = '{"q": 2, "beta": 1.0, "graph": {"vertices": 2, "edges": [[0]]}, "coupling": {"kind": "ising"}}'
        with pytest.raises(NetworkFormatError, match=r"edges\[0\]"):
            sm.model_from_json(text)


class TestPartitionFunction:
    def test_threads_agree(self):
        spec = spec_for(GRID_2X3, 2, 0.4, sm.coupling_ising(1.0))
        assert rel_err(sm.partition_function(spec, threads=1), sm.partition_function(spec, threads=4)) <= 1e-12

    def test_guard(self, monkeypatch):
        monkeypatch.setenv("TENSORNET_GUARD_BITS", "2")
        spec = spec_for(GRID_2X3, 2, 0.4, sm.coupling_ising(1.0))
        with pytest.raises(Exception):
            sm.partition_function(spec)
