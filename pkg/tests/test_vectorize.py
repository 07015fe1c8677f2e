import numpy as np
import pytest

from varclass.errors import DataError
from varclass.textprep import Vocabulary
from varclass.vectorize import (
    ProductMatrix,
    build_product_matrix,
    build_variety_matrix,
    vectorize_words,
)

VOCAB = Vocabulary(("oil", "olive", "extra", "juice"))


class TestProductMatrix:
    def test_hand_example(self):
        lists = [["oil", "olive"], ["olive", "extra"], ["juice"]]
        pm = build_product_matrix(lists, VOCAB, [1, 1, 0])
        np.testing.assert_array_equal(
            pm.X, [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]]
        )
        assert pm.X.dtype == np.uint8

    def test_unknown_words_ignored(self):
        x = vectorize_words(["oil", "mystery"], VOCAB)
        np.testing.assert_array_equal(x, [1, 0, 0, 0])

    def test_empty_word_list_gives_zero_row(self):
        pm = build_product_matrix([[]], VOCAB, [0])
        assert pm.X.sum() == 0

    def test_label_count_mismatch(self):
        with pytest.raises(DataError):
            build_product_matrix([["oil"]], VOCAB, [0, 1])

    def test_zero_products(self):
        with pytest.raises(DataError):
            build_product_matrix([], VOCAB, [])


class TestVarietyMatrix:
    def test_column_sums_per_variety(self):
        lists = [["oil", "olive"], ["olive", "extra"], ["juice"], ["juice", "oil"]]
        pm = build_product_matrix(lists, VOCAB, [1, 1, 0, 0])
        vm = build_variety_matrix(pm)
        # variety 0: juice + juice,oil; variety 1: the two olive products
        np.testing.assert_array_equal(vm.Y, [[1, 0, 0, 2], [1, 2, 1, 0]])
        np.testing.assert_array_equal(vm.word_totals, [3, 4])
        assert vm.mean_word_total == pytest.approx(3.5)

    def test_explicit_variety_count_pads_empty_rows(self):
        pm = build_product_matrix([["oil"]], VOCAB, [0])
        vm = build_variety_matrix(pm, n_varieties=3)
        assert vm.Y.shape == (3, 4)
        np.testing.assert_array_equal(vm.word_totals, [1, 0, 0])

    def test_label_out_of_range(self):
        pm = build_product_matrix([["oil"]], VOCAB, [5])
        with pytest.raises(DataError):
            build_variety_matrix(pm, n_varieties=2)

    def test_negative_label(self):
        pm = ProductMatrix(np.ones((1, 4), dtype=np.uint8), np.array([-1]))
        with pytest.raises(DataError):
            build_variety_matrix(pm)

    def test_totals_match_row_sums_on_random_data(self):
        rng = np.random.default_rng(7)
        X = (rng.random((50, 12)) < 0.3).astype(np.uint8)
        labels = rng.integers(0, 4, size=50)
        vm = build_variety_matrix(ProductMatrix(X, labels))
        np.testing.assert_array_equal(vm.word_totals, vm.Y.sum(axis=1))
        assert vm.Y.sum() == X.sum()
