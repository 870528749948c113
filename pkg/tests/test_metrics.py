import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emms.errors import BadKError, TooFewModelsError, ZeroVarianceError
from emms.metrics import (
    ScorePair,
    kendall_tau,
    pearson,
    rel_at_k,
    weighted_kendall_tau,
    weighted_pearson,
)

from oracles import kendall_enum, pearson_textbook, weighted_kendall_enum


def _pairs(t_scores, g_scores):
    return [
        ScorePair(f"m{i}", float(t), float(g))
        for i, (t, g) in enumerate(zip(t_scores, g_scores))
    ]


distinct_scores = st.lists(
    st.floats(min_value=-100, max_value=100, allow_nan=False),
    min_size=2,
    max_size=8,
    unique=True,
)


class TestKendallTau:
    def test_identical_orderings(self):
        assert kendall_tau(_pairs([1, 2, 3, 4], [10, 20, 30, 40])) == 1.0

    def test_reversed_orderings(self):
        assert kendall_tau(_pairs([4, 3, 2, 1], [10, 20, 30, 40])) == -1.0

    def test_one_discordant_pair(self):
        assert kendall_tau(_pairs([1, 3, 2], [1, 2, 3])) == pytest.approx(1 / 3)

    def test_too_few_models(self):
        with pytest.raises(TooFewModelsError):
            kendall_tau(_pairs([1], [1]))

    def test_ties_count_as_concordant(self):
        # the sign convention maps sgn(0) to +1
        assert kendall_tau(_pairs([1, 1], [5, 3])) == 1.0

    def test_all_permutations_match_enumeration_oracle(self):
        g = [0.1, 0.4, 0.7, 0.9]
        for perm in itertools.permutations([10.0, 20.0, 30.0, 40.0]):
            assert kendall_tau(_pairs(perm, g)) == kendall_enum(list(perm), g)

    @given(distinct_scores)
    @settings(max_examples=100, deadline=None)
    def test_matches_oracle_on_random_inputs(self, t):
        g = sorted(t)
        assert kendall_tau(_pairs(t, g)) == pytest.approx(kendall_enum(t, g), abs=1e-12)


class TestWeightedKendallTau:
    def test_identical_orderings(self):
        assert weighted_kendall_tau(_pairs([1, 2, 3], [4, 5, 6])) == 1.0

    def test_reversed_orderings(self):
        assert weighted_kendall_tau(_pairs([3, 2, 1], [4, 5, 6])) == -1.0

    def test_hand_computed_value(self):
        # G=(1,2,3), T=(1,3,2): weights by descending G are (1/3, 1/2, 1);
        # pair sums 5/6, 4/3, 3/2 with signs +, +, -; total (2/3)/(11/3) = 2/11
        got = weighted_kendall_tau(_pairs([1, 3, 2], [1, 2, 3]))
        assert got == pytest.approx(2 / 11, abs=1e-12)
        assert got == pytest.approx(weighted_kendall_enum([1, 3, 2], [1, 2, 3]), abs=1e-12)

    @given(distinct_scores)
    @settings(max_examples=100, deadline=None)
    def test_matches_oracle_on_random_inputs(self, t):
        g = list(np.linspace(0, 1, len(t)))
        assert weighted_kendall_tau(_pairs(t, g)) == pytest.approx(
            weighted_kendall_enum(t, g), abs=1e-12
        )

    def test_bounded(self):
        rng = np.random.default_rng(61)
        for _ in range(50):
            t = rng.standard_normal(5)
            g = rng.standard_normal(5)
            assert -1.0 <= weighted_kendall_tau(_pairs(t, g)) <= 1.0


class TestPearson:
    def test_exact_positive(self):
        assert pearson(_pairs([1, 2, 3], [1, 2, 3])) == pytest.approx(1.0)

    def test_exact_negative(self):
        assert pearson(_pairs([1, 2, 3], [3, 2, 1])) == pytest.approx(-1.0)

    def test_matches_textbook_formula(self):
        t = [0.3, 1.7, -0.4, 2.2]
        g = [10.0, 14.0, 9.5, 12.0]
        assert pearson(_pairs(t, g)) == pytest.approx(pearson_textbook(t, g), abs=1e-12)

    def test_zero_variance(self):
        with pytest.raises(ZeroVarianceError):
            pearson(_pairs([1, 1, 1], [1, 2, 3]))
        with pytest.raises(ZeroVarianceError):
            weighted_pearson(_pairs([1, 2, 3], [2, 2, 2]))

    def test_weighted_equals_plain_under_uniform_weights(self):
        # with two models the weights alone never flip the sign
        p = _pairs([1.0, 2.0], [3.0, 1.0])
        assert np.sign(weighted_pearson(p)) == np.sign(pearson(p))


class TestRelAtK:
    def test_full_k_is_one(self):
        for m in (2, 3, 5):
            p = _pairs(np.arange(m), np.random.default_rng(m).uniform(0.1, 1.0, m))
            assert rel_at_k(p, m) == 1.0

    def test_second_best_ranked_first(self):
        p = [
            ScorePair("a", 1.0, 0.9),
            ScorePair("b", 3.0, 0.8),
            ScorePair("c", 2.0, 0.7),
        ]
        assert rel_at_k(p, 1) == pytest.approx(0.8 / 0.9)

    def test_best_ranked_first(self):
        p = [ScorePair("a", 3.0, 0.9), ScorePair("b", 1.0, 0.8)]
        assert rel_at_k(p, 1) == 1.0

    def test_bad_k(self):
        p = _pairs([1, 2], [1, 2])
        with pytest.raises(BadKError):
            rel_at_k(p, 0)
        with pytest.raises(BadKError):
            rel_at_k(p, 3)

    def test_tie_break_by_model_id(self):
        p = [ScorePair("b", 1.0, 0.5), ScorePair("a", 1.0, 0.9)]
        assert rel_at_k(p, 1) == 1.0  # "a" wins the tie and holds the best g

    @given(st.integers(min_value=2, max_value=7), st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=60, deadline=None)
    def test_nondecreasing_in_k(self, m, seed):
        rng = np.random.default_rng(seed)
        p = _pairs(rng.standard_normal(m), rng.uniform(0.1, 1.0, m))
        values = [rel_at_k(p, k) for k in range(1, m + 1)]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert values[-1] == 1.0


class TestMonotoneInvariance:
    # integer-spaced scores keep the transforms injective in float64
    @given(st.lists(st.integers(min_value=-30, max_value=30), min_size=2, max_size=8, unique=True))
    @settings(max_examples=60, deadline=None)
    def test_rank_metrics_invariant_under_monotone_transforms(self, t_ints):
        t = [float(x) for x in t_ints]
        g = list(np.linspace(0.1, 1.0, len(t)))
        base_tau = kendall_tau(_pairs(t, g))
        base_tw = weighted_kendall_tau(_pairs(t, g))
        base_rel = rel_at_k(_pairs(t, g), 1)
        for f in (lambda x: 2.0 * x + 3.0, np.exp, lambda x: np.arctan(x) * 5.0):
            ft = [float(f(x)) for x in t]
            assert kendall_tau(_pairs(ft, g)) == base_tau
            assert weighted_kendall_tau(_pairs(ft, g)) == base_tw
            assert rel_at_k(_pairs(ft, g), 1) == base_rel
