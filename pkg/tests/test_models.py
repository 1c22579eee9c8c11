import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from postocr.errors import ConfigError, DataError
from postocr.features import DECISION_FEATURES, RANKER_FEATURES
from postocr.models import (
    LogisticModel,
    TrainConfig,
    TrainingSet,
    cross_validate,
    decide,
    loss_and_grad,
    loss_history,
    pick_threshold,
    rank,
    score,
    threshold_curve,
    train_logistic,
)


def finite_difference_error(rng, dim=4, rows=30, l2=1e-3, h=1e-5):
    X = rng.normal(size=(rows, dim))
    y = (rng.random(rows) < 0.5).astype(float)
    w = rng.normal(size=dim)
    b = float(rng.normal())
    _, gw, gb = loss_and_grad(w, b, X, y, l2)
    numeric = np.empty(dim + 1)
    for k in range(dim + 1):
        step = np.zeros(dim + 1)
        step[k] = h
        up = loss_and_grad(w + step[:dim], b + step[dim], X, y, l2)[0]
        down = loss_and_grad(w - step[:dim], b - step[dim], X, y, l2)[0]
        numeric[k] = (up - down) / (2 * h)
    analytic = np.append(gw, gb)
    return np.linalg.norm(analytic - numeric) / max(np.linalg.norm(analytic), np.linalg.norm(numeric), 1e-12)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    assert max(finite_difference_error(rng) for _ in range(20)) < 1e-6


def separable(n=200, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0, 1, size=(n, 2))
    X = X[np.abs(X[:, 0] - X[:, 1]) > 0.05]
    return TrainingSet(X, (X[:, 0] > X[:, 1]).astype(float))


def test_separable_set_fully_learned():
    data = separable()
    model = train_logistic(data, ("x1", "x2"), TrainConfig(epochs=2000, learning_rate=0.5, l2=0.0))
    assert np.mean((model.score(data.features) >= 0.5) == (data.labels == 1)) == 1.0


def test_zero_features_learn_base_rate():
    data = TrainingSet(np.zeros((100, 3)), np.r_[np.ones(30), np.zeros(70)])
    model = train_logistic(data, ("a", "b", "c"), TrainConfig(epochs=3000, learning_rate=0.5))
    assert model.score([0, 0, 0]) == pytest.approx(0.3, abs=1e-3)


def test_loss_non_increasing():
    history = loss_history(separable(), TrainConfig(epochs=300, learning_rate=0.1))
    assert all(b <= a + 1e-15 for a, b in zip(history, history[1:]))


def test_training_is_deterministic():
    data = separable()
    a = train_logistic(data, ("x1", "x2"))
    b = train_logistic(data, ("x1", "x2"))
    assert np.array_equal(a.weights, b.weights) and a.bias == b.bias


def test_degenerate_data_rejected():
    with pytest.raises(DataError, match="both labels"):
        train_logistic(TrainingSet(np.ones((5, 2)), np.ones(5)), ("a", "b"))
    X = np.ones((4, 2))
    X[2, 1] = np.nan
    with pytest.raises(DataError, match="row 2"):
        train_logistic(TrainingSet(X, [0, 1, 0, 1]), ("a", "b"))
    with pytest.raises(ConfigError):
        train_logistic(separable(), ("only_one",))


def test_score_basics():
    m = LogisticModel(np.zeros(3), 0.0, ("a", "b", "c"))
    assert score(m, [5, -2, 100]) == 0.5
    with pytest.raises(ValueError):
        m.score([1, 2])
    m = LogisticModel(np.array([1.0, 0.0]), 0.0, ("a", "b"))
    assert m.score([1, 0]) > m.score([0, 0]) > m.score([-1, 0])
    assert 0 < m.score([1e6, 0]) < 1 and 0 < m.score([-1e6, 0]) < 1


def test_save_load_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    m = LogisticModel(rng.normal(size=4) * 1e3, float(rng.normal()), RANKER_FEATURES)
    m.save(tmp_path / "m.model")
    back = LogisticModel.load(tmp_path / "m.model")
    X = rng.normal(size=(100, 4)) * 10
    assert np.max(np.abs(m.score(X) - back.score(X))) <= 1e-12
    assert back.feature_names == RANKER_FEATURES
    text = (tmp_path / "m.model").read_text(encoding="utf-8").splitlines()
    assert text[0] == "logistic v1" and text[-1].startswith("bias\t")


def test_load_rejects_garbage(tmp_path):
    (tmp_path / "m.model").write_text("logistic v1\nfeature_names\ta\nb\t1\nbias\t0\n", encoding="utf-8")
    with pytest.raises(DataError):
        LogisticModel.load(tmp_path / "m.model")


def test_rank_orders_and_breaks_ties():
    m = LogisticModel(np.array([1.0]), 0.0, ("x",))
    assert [c for c, _ in rank(m, ["b", "a", "c"], [[1], [1], [2]])] == ["c", "a", "b"]
    assert rank(m, [], []) == []
    assert [c for c, _ in rank(m, ["only"], [[-50]])] == ["only"]


def test_great_outranks_greet_under_non_negative_weights():
    rng = np.random.default_rng(2)
    for _ in range(200):
        m = LogisticModel(rng.uniform(0, 1, 4) * (rng.random(4) < 0.7), float(rng.normal()), RANKER_FEATURES)
        if not m.weights.any():
            continue
        order = [c for c, _ in rank(m, ["greet", "great"], [[5, 3124, 27, 0], [41, 17222, 1238, 73]])]
        assert order == ["great", "greet"]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=1, max_size=10))
def test_rank_invariant_under_monotone_transform(values):
    m = LogisticModel(np.array([1.0]), 0.0, ("x",))
    cands = [f"c{k}" for k in range(len(values))]
    a = [c for c, _ in rank(m, cands, [[v] for v in values])]
    b = [c for c, _ in rank(m, cands, [[3 * v + 1] for v in values])]
    assert a == b


def test_decide_thresholds():
    m = LogisticModel(np.array([1.0]), 0.0, ("x",))
    assert decide(m, [2.0], 0.5)
    assert not decide(m, [-2.0], 0.5)
    assert not decide(m, [1e9], 1.0)
    xs = np.linspace(-5, 5, 41)
    low = {x for x in xs if decide(m, [x], 0.3)}
    high = {x for x in xs if decide(m, [x], 0.7)}
    assert high <= low


def test_table_three_row_replaces():
    # proportions well above 1 with low confidence are the replacement pattern
    rng = np.random.default_rng(3)
    n = 400
    pos = np.column_stack([rng.uniform(50, 1e4, n), rng.uniform(5, 1e3, n), rng.uniform(5, 1e3, n),
                           rng.uniform(1, 5, n), rng.uniform(0.3, 0.8, n), rng.integers(1, 50, n)])
    neg = np.column_stack([rng.uniform(0.5, 2, n), rng.uniform(0.5, 2, n), rng.uniform(0.5, 2, n),
                           rng.uniform(0.5, 2, n), rng.uniform(0.6, 1.0, n), rng.integers(0, 50, n)])
    data = TrainingSet(np.vstack([pos, neg]), np.r_[np.ones(n), np.zeros(n)])
    model = train_logistic(data, DECISION_FEATURES)
    assert decide(model, [10000, 100, 100, 2, 0.4, 15])
    assert not decide(model, [1, 1, 1, 1, 0.99, 15])


def test_threshold_curve_and_pick():
    m = LogisticModel(np.array([1.0]), 0.0, ("x",))
    data = TrainingSet(np.array([[-3.0], [-1.0], [1.0], [3.0]]), [0, 0, 1, 1])
    curve = threshold_curve(m, data, [0.1, 0.5, 0.9])
    assert [r["false_positive_rate"] for r in curve] == [0.5, 0.0, 0.0]
    assert [r["false_negative_rate"] for r in curve] == [0.0, 0.0, 0.5]
    assert pick_threshold(curve, 0.05) == 0.5
    assert pick_threshold([{"threshold": 0.5, "false_positive_rate": 0.9}], 0.05) == 1.0


def test_cross_validation_groups_stay_together():
    data = separable(300)
    data.groups = [f"g{k // 3}" for k in range(len(data))]
    folds = cross_validate(data, ("x1", "x2"), TrainConfig(epochs=300), k=5)
    assert len(folds) == 5
    assert sum(f["rows"] for f in folds) == len(data)
    assert all(f["accuracy"] > 0.9 for f in folds)
