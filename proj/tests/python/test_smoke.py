import math

import cldg


def test_power_rule_constant():
    # derivative of 1 is x^-s / gamma(1-s)
    s = 0.3
    got = cldg.rl_power_rule(s, 0, 0.0, 0.5)
    want = 0.5 ** (-s) / math.gamma(1.0 - s)
    assert abs(got - want) < 1e-12


def test_gauss_jacobi_moment():
    nodes, weights = cldg.gauss_jacobi_rule(4, -0.3)
    acc = sum(w * x for x, w in zip(nodes, weights))
    assert abs(acc - 1.0 / 1.7) < 1e-12


def test_mesh_shape():
    mesh = cldg.build_mesh(1, 4)
    assert mesh["n"] == 4
    assert len(mesh["dual_edges"]) == 6
    assert abs(mesh["dual_edges"][1] - 0.125) < 1e-15


def test_gl_matches_power_rule():
    n = 2048
    h = 1.0 / n
    samples = [i * h for i in range(n + 1)]
    d = cldg.gl_fractional_derivative(samples, 0.5, h, "left")
    want = math.gamma(2.0) / math.gamma(1.5) * math.sqrt(0.5)
    assert abs(d[n // 2] - want) / want < 0.01


def test_convergence_rate():
    rows = cldg.run_convergence("example1", alpha=1.5, k=1, cells=[4, 8])
    assert rows[0]["rate1"] is None
    assert rows[1]["rate1"] > 1.5
    assert rows[1]["E1"] < rows[0]["E1"]


def test_stability_verdict():
    res = cldg.run_stability("example1", alpha=1.5, k=1, cells=[8], max_steps=50)
    assert res["non_increasing"]
    assert res["max_relative_increase"] <= 1e-12
