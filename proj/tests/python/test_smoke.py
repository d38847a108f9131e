"""Smoke tests for the compiled extension module."""

import json
import math

import pytest

subdiff = pytest.importorskip("subdiff")

CHAIN = json.dumps(
    {
        "vertices": ["u", "v", "w"],
        "edges": [["u", "v"], ["v", "w"]],
        "models": {
            "v": {"kind": "ic", "p": {"u": 0.5}},
            "w": {"kind": "ic", "p": {"v": 0.5}},
        },
    }
)

AND_GADGET = json.dumps(
    {
        "vertices": ["a", "b", "v"],
        "edges": [["a", "v"], ["b", "v"]],
        "models": {"v": {"kind": "table", "a": [0, 0, 0, 1]}},
    }
)


def test_lattice_roundtrip():
    x = [0.1, 0.2, 0.3, 0.4]
    back = subdiff.mobius_transform(subdiff.zeta_transform(x, 2), 2)
    assert all(abs(p - q) < 1e-12 for p, q in zip(back, x))


def test_connection_matrix():
    m = subdiff.connection_matrix(2)
    assert m == [[0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 1], [0, 1, 1, 1]]


def test_certify_feasible_and_infeasible():
    cert = subdiff.certify_vertex(subdiff.ActivationTable(2, [0.0, 0.5, 0.5, 0.75]))
    assert cert.feasible
    assert all(abs(b - 0.25) < 1e-9 for b in cert.b)

    bad = subdiff.certify_vertex(subdiff.ActivationTable(2, [0.0, 0.0, 0.0, 1.0]))
    assert not bad.feasible
    assert bad.witness_pattern == 3
    assert abs(bad.witness_value + 1.0) < 1e-9


def test_projection():
    res = subdiff.project_vertex(subdiff.ActivationTable(2, [0.0, 0.0, 0.0, 1.0]))
    assert res.converged
    assert abs(res.a_star.a[3] - 2.0 / 3) < 1e-5
    assert abs(res.objective - 1.0 / 3) < 1e-5


def test_network_and_simulation():
    net = subdiff.load_network(CHAIN)
    assert net.vertex_count() == 3
    u = net.vertex_id("u")
    assert subdiff.exact_spread(net, {u}) == pytest.approx(1.75)
    mean, stderr = subdiff.estimate_spread(net, {u}, samples=20000, rng_seed=3)
    assert abs(mean - 1.75) < 3 * stderr + 1e-9
    activated = subdiff.simulate_once(net, {u}, 1)
    assert u in activated


def test_model_projection_makes_certifiable():
    net = subdiff.load_network(AND_GADGET)
    feasible, _ = subdiff.certify_model(net)
    assert not feasible
    projected, converged = subdiff.project_model(net)
    assert converged
    feasible, _ = subdiff.certify_model(projected, eps=1e-6)
    assert feasible


def test_greedy_and_opt():
    net = subdiff.load_network(CHAIN)
    trace = subdiff.greedy_select(net, 1)
    assert trace.chosen == [net.vertex_id("u")]
    seeds, spread = subdiff.brute_force_opt(net, 1)
    assert spread == pytest.approx(1.75)
    assert trace.marginal_gains[0] == pytest.approx(spread)


def test_falsify():
    assert subdiff.falsify_equivalence(2, 500, 1) == []
    tables = subdiff.falsify_equivalence(3, 300, 7)
    assert tables, "three-parent divergences should exist"
    for t in tables:
        assert not subdiff.certify_vertex(t).feasible
        assert all(subdiff.theorem2_check(t))
