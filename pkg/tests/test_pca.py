import numpy as np
import pytest

from varclass.errors import DataError
from varclass.pca import PcaReducer


def random_data(m=40, n=12, seed=0):
    rng = np.random.default_rng(seed)
    # anisotropic so the eigenvalue order is unambiguous
    scales = np.linspace(3.0, 0.2, n)
    return rng.normal(size=(m, n)) * scales + rng.normal(size=n)


class TestFit:
    def test_components_are_orthonormal(self):
        X = random_data()
        pca = PcaReducer(n_components=8).fit(X)
        gram = pca.components_ @ pca.components_.T
        np.testing.assert_allclose(gram, np.eye(8), atol=1e-10)

    def test_eigenvalues_descending_nonnegative(self):
        pca = PcaReducer(n_components=10).fit(random_data())
        eig = pca.eigenvalues_
        assert np.all(eig >= 0)
        assert np.all(np.diff(eig) <= 1e-12)

    def test_eigenvalue_sum_is_total_column_variance(self):
        X = random_data()
        pca = PcaReducer(n_components=12).fit(X)
        total = X.var(axis=0).sum()
        np.testing.assert_allclose(pca.total_variance_, total, rtol=1e-9)

    def test_sign_convention_largest_entry_positive(self):
        X = random_data()
        pca = PcaReducer(n_components=6).fit(X)
        for row in pca.components_:
            assert row[np.argmax(np.abs(row))] > 0

    def test_fit_is_deterministic(self):
        X = random_data()
        a = PcaReducer(n_components=5).fit(X)
        b = PcaReducer(n_components=5).fit(X)
        np.testing.assert_array_equal(a.components_, b.components_)

    def test_zero_variance_flagged(self):
        X = np.ones((10, 4))
        pca = PcaReducer(n_components=2).fit(X)
        assert pca.zero_variance_
        assert pca.retained_variance() == 0.0

    @pytest.mark.parametrize("c", [0, 13, 41, "6"])
    def test_component_count_validated(self, c):
        with pytest.raises(DataError):
            PcaReducer(n_components=c).fit(random_data())


class TestTransform:
    def test_round_trip_at_full_rank(self):
        X = random_data()
        pca = PcaReducer(n_components=12).fit(X)
        back = pca.inverse_transform(pca.transform(X))
        np.testing.assert_allclose(back, X, atol=1e-9)

    def test_projection_never_stretches_distances(self):
        X = random_data()
        pca = PcaReducer(n_components=4).fit(X)
        Z = pca.transform(X)
        rng = np.random.default_rng(3)
        for _ in range(100):
            i, j = rng.integers(0, len(X), size=2)
            before = np.linalg.norm(X[i] - X[j])
            after = np.linalg.norm(Z[i] - Z[j])
            assert after <= before + 1e-9

    def test_dimension_mismatch(self):
        pca = PcaReducer(n_components=3).fit(random_data())
        with pytest.raises(DataError):
            pca.transform(np.zeros((2, 5)))
        with pytest.raises(DataError):
            pca.inverse_transform(np.zeros((2, 5)))


class TestRetainedVariance:
    def test_monotone_and_reaches_one(self):
        X = random_data()
        pca = PcaReducer(n_components=12).fit(X)
        curve = [pca.retained_variance(c) for c in range(13)]
        assert curve[0] == 0.0
        assert np.all(np.diff(curve) >= -1e-15)
        assert curve[-1] == pytest.approx(1.0, abs=1e-9)

    def test_out_of_range(self):
        pca = PcaReducer(n_components=3).fit(random_data())
        with pytest.raises(DataError):
            pca.retained_variance(4)

    def test_transformed_variance_matches_eigenvalues(self):
        X = random_data()
        pca = PcaReducer(n_components=5).fit(X)
        Z = pca.transform(X)
        np.testing.assert_allclose(Z.var(axis=0), pca.eigenvalues_, rtol=1e-9)


def test_get_params_round_trip():
    pca = PcaReducer(n_components=7)
    assert pca.get_params() == {"n_components": 7}
    assert PcaReducer(**pca.get_params()).n_components == 7
