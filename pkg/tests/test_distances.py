import numpy as np
import pytest
import scipy.spatial.distance as ssd
import scipy.stats

from varclass.distances import (
    METRICS,
    DistanceMetric,
    distance,
    fractional_ranks,
    pairwise_distance,
)
from varclass.errors import DataError


def fitted(kind, X):
    return DistanceMetric(kind).fit(X)


def random_pairs(seed=0, m=30, d=8, binary=False):
    rng = np.random.default_rng(seed)
    if binary:
        A = (rng.random((m, d)) < 0.5).astype(float)
        B = (rng.random((m, d)) < 0.5).astype(float)
    else:
        A = rng.normal(size=(m, d))
        B = rng.normal(size=(m, d))
    return A, B


class TestAgainstScipy:
    @pytest.mark.parametrize(
        "kind,scipy_name",
        [
            ("cityblock", "cityblock"),
            ("euclidean", "euclidean"),
            ("chebychev", "chebyshev"),
            ("cosine", "cosine"),
            ("correlation", "correlation"),
            ("hamming", "hamming"),
        ],
    )
    def test_dense_metrics(self, kind, scipy_name):
        A, B = random_pairs(seed=1)
        mine = pairwise_distance(A, B, kind)
        ref = ssd.cdist(A, B, scipy_name)
        np.testing.assert_allclose(mine, ref, atol=1e-10)

    def test_seuclidean(self):
        rng = np.random.default_rng(2)
        train = rng.normal(size=(50, 8)) * np.linspace(0.5, 3.0, 8)
        A, B = random_pairs(seed=3)
        dm = fitted("seuclidean", train)
        ref = ssd.cdist(A, B, "seuclidean", V=train.std(axis=0) ** 2)
        np.testing.assert_allclose(dm.pairwise(A, B), ref, atol=1e-10)

    def test_jaccard_on_binary_data(self):
        # on binary vectors min/max-sum jaccard coincides with the set form
        A, B = random_pairs(seed=4, binary=True)
        mine = pairwise_distance(A, B, "jaccard")
        ref = ssd.cdist(A.astype(bool), B.astype(bool), "jaccard")
        np.testing.assert_allclose(mine, ref, atol=1e-12)

    def test_spearman_pairwise(self):
        A, B = random_pairs(seed=5, m=12, d=10)
        mine = pairwise_distance(A, B, "spearman")
        for i in range(len(A)):
            for j in range(len(B)):
                rho = scipy.stats.spearmanr(A[i], B[j]).statistic
                assert mine[i, j] == pytest.approx(1.0 - rho, abs=1e-10)

    def test_fractional_ranks_match_rankdata(self):
        rng = np.random.default_rng(6)
        X = rng.integers(0, 4, size=(20, 9)).astype(float)
        mine = fractional_ranks(X)
        for i, row in enumerate(X):
            np.testing.assert_allclose(
                mine[i], scipy.stats.rankdata(row, method="average")
            )


class TestHandFormulas:
    def test_jaccard_general_values(self):
        a = np.array([2.0, 0.0, 1.0])
        b = np.array([1.0, 3.0, 1.0])
        # sum of mins 2, sum of maxes 6
        assert distance(a, b, "jaccard") == pytest.approx(1 - 2 / 6, abs=1e-12)

    def test_hamming_is_fraction_of_differing(self):
        a = np.array([1.0, 2.0, 3.0, 4.0])
        b = np.array([1.0, 0.0, 3.0, 0.0])
        assert distance(a, b, "hamming") == pytest.approx(0.5, abs=1e-12)

    def test_cityblock_chebychev_euclidean(self):
        a = np.array([0.0, 0.0])
        b = np.array([3.0, 4.0])
        assert distance(a, b, "cityblock") == pytest.approx(7.0)
        assert distance(a, b, "chebychev") == pytest.approx(4.0)
        assert distance(a, b, "euclidean") == pytest.approx(5.0)

    def test_cosine_of_orthogonal_and_opposite(self):
        x = np.array([1.0, 0.0])
        y = np.array([0.0, 1.0])
        assert distance(x, y, "cosine") == pytest.approx(1.0)
        assert distance(x, -x, "cosine") == pytest.approx(2.0)

    def test_spearman_perfect_monotone(self):
        a = np.array([1.0, 2.0, 3.0, 4.0])
        b = np.array([10.0, 20.0, 30.0, 40.0])
        assert distance(a, b, "spearman") == pytest.approx(0.0, abs=1e-12)
        assert distance(a, b[::-1], "spearman") == pytest.approx(2.0, abs=1e-12)


class TestDegenerateInputs:
    def test_cosine_zero_vector(self):
        z = np.zeros(3)
        a = np.array([1.0, 2.0, 3.0])
        assert distance(z, a, "cosine") == 1.0
        assert distance(a, z, "cosine") == 1.0
        assert distance(z, z, "cosine") == 1.0

    def test_correlation_constant_vector(self):
        c = np.array([5.0, 5.0, 5.0])
        a = np.array([1.0, 2.0, 3.0])
        assert distance(c, a, "correlation") == 1.0
        assert distance(c, c, "correlation") == 1.0

    def test_spearman_constant_vector(self):
        c = np.array([2.0, 2.0, 2.0])
        a = np.array([1.0, 2.0, 3.0])
        assert distance(c, a, "spearman") == 1.0

    def test_jaccard_all_zero(self):
        z = np.zeros(4)
        assert distance(z, z, "jaccard") == 0.0
        assert distance(z, np.array([0.0, 0.0, 1.0, 0.0]), "jaccard") == 1.0

    def test_seuclidean_zero_variance_dimension_excluded(self):
        train = np.array([[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
        dm = fitted("seuclidean", train)
        a = np.array([1.0, 100.0])
        b = np.array([2.0, -50.0])
        sd = train[:, 0].std()
        assert dm(a, b) == pytest.approx(1.0 / sd, abs=1e-12)


class TestMetricLaws:
    @pytest.mark.parametrize("kind", METRICS)
    def test_identity_and_symmetry(self, kind):
        rng = np.random.default_rng(7)
        train = rng.normal(size=(20, 6))
        dm = fitted(kind, train)
        for _ in range(20):
            a = rng.normal(size=6)
            b = rng.normal(size=6)
            assert dm(a, a) == pytest.approx(0.0, abs=1e-12)
            assert dm(a, b) == pytest.approx(dm(b, a), abs=1e-12)

    @pytest.mark.parametrize("kind", ["cityblock", "euclidean", "chebychev", "hamming"])
    def test_triangle_inequality(self, kind):
        rng = np.random.default_rng(8)
        dm = DistanceMetric(kind)
        for _ in range(200):
            a, b, c = rng.normal(size=(3, 5))
            assert dm(a, c) <= dm(a, b) + dm(b, c) + 1e-9

    def test_bounded_ranges(self):
        rng = np.random.default_rng(9)
        A = rng.normal(size=(40, 6))
        B = rng.normal(size=(40, 6))
        for kind in ("cosine", "correlation", "spearman"):
            D = pairwise_distance(A, B, kind)
            assert np.all((D >= 0) & (D <= 2))
        binary = (rng.random((40, 6)) < 0.5).astype(float)
        for kind in ("hamming", "jaccard"):
            D = pairwise_distance(binary, 1.0 - binary, kind)
            assert np.all((D >= 0) & (D <= 1))


class TestApiSurface:
    def test_unknown_metric(self):
        with pytest.raises(DataError):
            DistanceMetric("manhattan")

    def test_dimension_mismatch(self):
        with pytest.raises(DataError):
            distance(np.zeros(3), np.zeros(4), "euclidean")

    def test_correlation_needs_two_dims(self):
        with pytest.raises(DataError):
            distance(np.zeros(1), np.zeros(1), "correlation")

    def test_seuclidean_requires_fit(self):
        with pytest.raises(DataError):
            distance(np.zeros(3), np.ones(3), "seuclidean")

    def test_pairwise_shape(self):
        A, B = random_pairs(seed=10, m=7, d=4)
        assert pairwise_distance(A, B[:3], "cityblock").shape == (7, 3)

    def test_blocked_path_matches_direct(self, monkeypatch):
        import varclass.distances as dmod

        A, B = random_pairs(seed=11, m=25, d=6)
        full = pairwise_distance(A, B, "cityblock")
        monkeypatch.setattr(dmod, "_BLOCK_ELEMENTS", 64)
        blocked = pairwise_distance(A, B, "cityblock")
        np.testing.assert_array_equal(full, blocked)
