import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from pcamlp.preprocess import (PcaModel, ScalerParams, apply_scaler, fit_pca, fit_scaler,
                               preprocess_from_json, preprocess_to_json, project, reconstruct)

from oracles import population_covariance, symmetric3_eigenvalues

# fixed instances for the characteristic-polynomial oracle
FIXED_4x3 = np.array([[2.0, 0.5, -1.0],
                      [1.0, 3.0, 0.0],
                      [-1.5, 1.0, 2.5],
                      [0.5, -2.0, 1.0]])
FIXED_6x3 = np.array([[0.3, 1.7, -2.2],
                      [4.1, -0.6, 0.9],
                      [-1.2, 2.4, 1.1],
                      [2.2, 0.0, -0.7],
                      [-3.0, 1.5, 2.8],
                      [0.9, -1.1, 0.4]])


def test_scaler_insulin_worked_example():
    p = ScalerParams(np.array([10.01208]), np.array([10.0242]), np.array([False]))
    z = apply_scaler(p, np.array([[2.707]]))
    assert z[0, 0] == pytest.approx(-0.7287, abs=5e-4)


def test_scaler_identity_and_unit_cases():
    p = ScalerParams(np.array([3.0, -2.0]), np.array([2.0, 0.5]), np.zeros(2, bool))
    z = apply_scaler(p, np.array([[3.0, -2.0], [5.0, -1.5]]))
    np.testing.assert_allclose(z, [[0.0, 0.0], [1.0, 1.0]])


def test_scaler_symmetric_pair():
    p = fit_scaler(np.array([[-1.0], [1.0]]))
    assert p.mu[0] == 0.0 and p.sigma[0] == 1.0


def test_scaler_uses_population_std():
    p = fit_scaler(np.array([[1.0], [2.0], [3.0], [4.0]]))
    assert p.sigma[0] == pytest.approx(np.sqrt(1.25))


def test_constant_column_flagged():
    with pytest.warns(RuntimeWarning, match="constant"):
        p = fit_scaler(np.array([[5.0, 1.0], [5.0, 2.0], [5.0, 4.0]]))
    assert p.mu[0] == 5.0 and p.sigma[0] == 1.0
    assert p.constant.tolist() == [True, False]


def test_scaler_errors():
    with pytest.raises(ValueError):
        fit_scaler(np.empty((0, 3)))
    p = fit_scaler(np.arange(6.0).reshape(3, 2))
    with pytest.raises(ValueError):
        apply_scaler(p, np.ones((2, 3)))


def test_pca_rank_one_line():
    t = np.array([-2.0, -0.5, 0.0, 1.0, 3.5])
    X = np.column_stack([t, t])
    model = fit_pca(X, 1)
    s = 1 / np.sqrt(2)
    np.testing.assert_allclose(model.components[0], [s, s], atol=1e-12)
    full = fit_pca(X, 2)
    assert abs(full.explained_variance[1]) < 1e-12
    # coordinates are signed distances along the line from the mean
    expected = (t - t.mean()) * np.sqrt(2)
    np.testing.assert_allclose(project(model, X)[:, 0], expected, atol=1e-10)


def test_project_mean_row_is_zero():
    model = fit_pca(FIXED_6x3, 2)
    np.testing.assert_allclose(project(model, model.mean[None, :]), 0.0, atol=1e-15)


@pytest.mark.parametrize("X", [FIXED_4x3, FIXED_6x3])
def test_pca_eigenvalues_match_characteristic_polynomial(X):
    expected = symmetric3_eigenvalues(population_covariance(X.tolist()))
    model = fit_pca(X, 3)
    np.testing.assert_allclose(model.explained_variance, expected, atol=1e-8, rtol=0)


def test_pca_random_5x3_reconstruction(rng):
    X = rng.normal(size=(5, 3))
    model = fit_pca(X, 3)
    np.testing.assert_allclose(reconstruct(model, project(model, X)), X - X.mean(axis=0), atol=1e-8)


def test_pca_argument_errors():
    with pytest.raises(ValueError):
        fit_pca(FIXED_4x3, 0)
    with pytest.raises(ValueError):
        fit_pca(FIXED_4x3, 4)
    with pytest.raises(ValueError):
        fit_pca(FIXED_4x3[:1], 1)
    with pytest.raises(ValueError):
        project(fit_pca(FIXED_4x3, 2), np.ones((2, 4)))


def test_sign_convention_and_determinism(rng):
    X = rng.normal(size=(30, 6)) @ rng.normal(size=(6, 6))
    a, b = fit_pca(X, 6), fit_pca(X.copy(), 6)
    assert a.components.tobytes() == b.components.tobytes()
    for row in a.components:
        assert row[np.argmax(np.abs(row))] > 0


def test_json_round_trip(rng):
    X = rng.normal(size=(20, 9))
    s = fit_scaler(X)
    p = fit_pca(apply_scaler(s, X), 4)
    doc = json.loads(preprocess_to_json(s, p))
    assert {"mu", "sigma", "mean", "components", "explained_variance", "k"} <= doc.keys()
    s2, p2 = preprocess_from_json(preprocess_to_json(s, p))
    np.testing.assert_array_equal(s2.sigma, s.sigma)
    np.testing.assert_array_equal(p2.components, p.components)
    assert p2.k == 4


matrices = st.integers(min_value=2, max_value=7).flatmap(
    lambda n: arrays(np.float64, st.tuples(st.integers(min_value=3, max_value=25), st.just(n)),
                     elements=st.floats(-100, 100, allow_nan=False, allow_infinity=False)))


@given(matrices)
@settings(max_examples=80, deadline=None)
def test_scaled_columns_have_zero_mean_unit_std(X):
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        p = fit_scaler(X)
    Z = apply_scaler(p, X)
    live = ~p.constant
    assert np.all(np.abs(Z.mean(axis=0)[live]) < 1e-9)
    assert np.all(np.abs(Z.std(axis=0)[live] - 1) < 1e-9)


@given(matrices)
@settings(max_examples=80, deadline=None)
def test_pca_properties(X):
    n = X.shape[1]
    model = fit_pca(X, n)
    C = model.components
    np.testing.assert_allclose(C @ C.T, np.eye(n), atol=1e-8)
    ev = model.explained_variance
    assert np.all(np.diff(ev) <= 1e-12 * max(1.0, ev[0]))
    Xc = X - X.mean(axis=0)
    total = np.sum(Xc * Xc) / X.shape[0]
    assert abs(ev.sum() - total) <= 1e-8 * max(1.0, total)
    Z = project(model, X)
    np.testing.assert_allclose(reconstruct(model, Z), Xc, atol=1e-8 * max(1.0, np.abs(Xc).max()))
    k = max(1, n // 2)
    Zk = project(fit_pca(X, k), X)
    assert np.all(np.linalg.norm(Zk, axis=1) <= np.linalg.norm(Xc, axis=1) + 1e-10 * max(1.0, np.abs(Xc).max()))
