import math

import numpy as np
import pytest

import hyperwalk as hw


@pytest.fixture()
def tiny():
    # two overlapping triangles plus a bridge pair
    return hw.Hypergraph(
        [["a", "b", "c"], ["b", "c", "d"], ["c", "d", "e"], ["a", "d", "e"], ["b", "e", "a"]],
        weighting="sender-first",
    )


def planted(communities=4, size=8, seed=5):
    rng = np.random.default_rng(seed)
    edges = []
    for c in range(communities):
        nodes = [f"n{c * size + i}" for i in range(size)]
        edges.append(nodes[: size // 2])
        edges.append(nodes[size // 2:])
        for _ in range(6):
            pick = rng.choice(size, size=4, replace=False)
            edges.append([nodes[i] for i in pick])
    for c in range(communities):
        other = (c + 1) % communities
        edges.append(
            [f"n{c * size}", f"n{c * size + 1}", f"n{other * size}", f"n{other * size + 1}"]
        )
    return hw.Hypergraph(edges, weighting="sender-first")


def test_hypergraph_basics(tiny):
    assert tiny.node_count == 5
    assert tiny.edge_count == 5
    assert tiny.is_connected()
    assert tiny.omega(0) == 3.0
    assert tiny.gamma(0, "a") == 2.0
    assert tiny.gamma(0, "b") == 1.0


def test_transition_rows_sum_to_one(tiny):
    for t in (hw.markov_transition(tiny), hw.clique_transition(tiny)):
        p = t.P
        assert np.allclose(p.sum(axis=1), 1.0, atol=1e-12)
        assert (p >= 0).all()


def test_eivw_reduction():
    h = hw.Hypergraph([["a", "b"], ["b", "c"], ["a", "b", "c"]], weighting="uniform")
    markov = hw.markov_transition(h).P
    clique = hw.clique_transition(h).P
    assert np.abs(markov - clique).max() < 1e-12


def test_hyperwalk_estimate_deterministic(tiny):
    est1 = hw.hyperwalk_estimate(tiny, n_walks=300, max_len=4, seed=7, threads=1)
    est2 = hw.hyperwalk_estimate(tiny, n_walks=300, max_len=4, seed=7, threads=4)
    for a, b in zip(est1.steps, est2.steps):
        assert np.array_equal(a, b)
        assert np.allclose(a.sum(axis=1), 1.0, atol=1e-12)


def test_stationary_and_balance(tiny):
    clique = hw.clique_transition(tiny)
    pi = hw.stationary(clique)
    assert math.isclose(pi.sum(), 1.0, abs_tol=1e-12)
    report = hw.balance_report(clique, pi)
    assert report.reversible
    assert report.max_violation < 1e-10

    markov = hw.markov_transition(tiny)
    report = hw.balance_report(markov, hw.stationary(markov))
    assert report.total_violations == report.moderate_violations + report.severe_violations


def test_scoring(tiny):
    sim = hw.similarity_avg(hw.markov_transition(tiny), 3)
    score = hw.hyperedge_score_named(sim, tiny, ["a", "b", "c"])
    assert 0.0 <= score <= 1.0
    # identical distributions
    assert hw.gjs_divergence([np.array([0.5, 0.5]), np.array([0.5, 0.5])]) == 0.0
    # disjoint point masses
    js = hw.gjs_divergence([np.array([1.0, 0.0]), np.array([0.0, 1.0])])
    assert math.isclose(js, 1.0, abs_tol=1e-12)


def test_auc():
    assert hw.auc([0.9, 0.8], [0.5, 0.8]) == 0.875
    assert hw.auc([1.0], [0.0]) == 1.0


def test_split_and_samplers():
    h = planted()
    split = hw.split_train_probe(h, 0.1, seed=3)
    assert set(split.train).isdisjoint(split.probe)
    assert h.restrict(split.train).is_connected()
    fakes = hw.sample_alpha(h, split.probe, alpha=0.5, seed=4)
    assert len(fakes.fakes) == len(split.probe)


def test_detection_pipeline():
    h = planted()
    report = hw.run_detection(
        h, folds=2, probe_fraction=0.1, max_steps=4, n_walks=500, seed=11, threads=2
    )
    mean, std = report.mean_auc("markov", "2-")
    assert mean is not None
    assert 0.0 <= mean <= 1.0
    assert report.to_json() == hw.run_detection(
        h, folds=2, probe_fraction=0.1, max_steps=4, n_walks=500, seed=11, threads=1
    ).to_json()


def test_prediction_pipeline():
    h = planted()
    report = hw.run_prediction(
        h,
        folds=2,
        probe_fraction=0.1,
        methods=["markov"],
        max_steps=3,
        n_walks=300,
        seed=13,
        threads=2,
    )
    assert report.method_names == ["markov", "random"]
    mean, _ = report.ratio("markov", "2-", "overall")
    rnd, _ = report.ratio("random", "2-", "overall")
    assert mean is not None and rnd is not None
    assert mean > rnd


def test_gap_over_steps():
    h = planted()
    gaps = hw.gap_over_steps(
        h, folds=2, probe_fraction=0.1, methods=["markov", "hyperwalk"],
        max_steps=6, n_walks=400, seed=17, threads=2
    )
    assert set(gaps) == {"markov", "hyperwalk"}
    assert len(gaps["markov"]) == 6
    assert gaps["markov"][0] > 0


def test_exponential_fit_and_intruder_line():
    y = [0.4 * math.exp(-0.3 * x) + 0.02 for x in range(1, 25)]
    fit = hw.fit_exponential(y)
    assert math.isclose(fit.a, 0.4, abs_tol=1e-6)
    assert math.isclose(fit.b, -0.3, abs_tol=1e-6)
    line = hw.intruder_line([(n, hw.fit_exponential([0.05 * n * math.exp(-0.3 * x) + 0.01 for x in range(1, 25)])) for n in (1, 2, 3)])
    assert line.slope > 0
    assert line.r_squared > 0.99
    assert hw.predict_intruders(line, line.intercept + 2 * line.slope) == 2
