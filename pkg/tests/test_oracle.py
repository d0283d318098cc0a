"""The brute-force reference implementations themselves."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from nbxplain import SpaceTooLarge, compute_axp, slack
from nbxplain import oracle

from conftest import make_trained_model, positively_predicted_instance
from test_counting import small_qk


class TestBruteCount:
    def test_golden_counts(self, knap4_qk):
        assert oracle.brute_count(knap4_qk, [None] * 4) == 50
        assert oracle.brute_count(knap4_qk, [None, 0, None, 2]) == 6

    def test_zero_bound(self):
        assert oracle.brute_count(small_qk([(1, 2)], 0), [None]) == 0

    def test_enumeration_cap(self):
        qk = small_qk([(1, 2)] * 21, 100)
        with pytest.raises(SpaceTooLarge):
            oracle.brute_count(qk, [None] * 21)


class TestBrutePrecision:
    def test_full_fix_is_one(self, knap4_model):
        assert oracle.brute_precision(knap4_model, (2, 2, 2, 2), range(4)) == 1

    def test_empty_fix(self, knap4_model):
        assert oracle.brute_precision(knap4_model, (2, 2, 2, 2), []) == Fraction(50, 81)

    def test_explains_the_negative_class_too(self, knap4_model):
        # margin of (1,1,1,1) is -3, so the explained class is the negative
        # one and the full fix still has precision 1
        assert oracle.brute_precision(knap4_model, (0, 0, 0, 0), range(4)) == 1
        assert oracle.brute_precision(knap4_model, (0, 0, 0, 0), []) == Fraction(31, 81)


class TestCheckAxp:
    def test_accepts_computed_result(self, knap4_model, knap4_xlc):
        result = compute_axp(slack(knap4_xlc, (2, 2, 2, 2)))
        assert oracle.check_axp(knap4_model, (2, 2, 2, 2), result)

    def test_rejects_non_minimal_full_set(self, knap4_model):
        assert not oracle.check_axp(knap4_model, (2, 2, 2, 2), range(4))

    def test_rejects_empty_set_on_non_constant_classifier(self, knap4_model):
        assert not oracle.check_axp(knap4_model, (2, 2, 2, 2), [])


class TestBruteMinPaxp:
    def test_threshold_below_base_rate_needs_nothing(self, knap4_model):
        got = oracle.brute_min_paxp(knap4_model, (2, 2, 2, 2), Fraction(6, 10))
        assert got == ()

    def test_threshold_just_above_base_rate_needs_one(self, knap4_model):
        # base rate is 50/81 ~ 0.617; every singleton reaches 23/27 ~ 0.852
        got = oracle.brute_min_paxp(knap4_model, (2, 2, 2, 2), Fraction(62, 100))
        assert got == (0,)
        assert oracle.brute_precision(knap4_model, (2, 2, 2, 2), got) == Fraction(23, 27)

    def test_threshold_one_is_a_smallest_entailing_set(self):
        rng = random.Random(61)
        checked = 0
        while checked < 10:
            model = make_trained_model(rng, rng.randint(2, 6), num_rows=30)
            found = positively_predicted_instance(model, rng)
            if found is None:
                continue
            v, _, _, profile = found
            smallest = oracle.brute_min_paxp(model, v, Fraction(1))
            assert oracle.entails_prediction(model, v, smallest)
            assert len(smallest) <= len(compute_axp(profile))
            checked += 1

    def test_feature_cap(self):
        rng = random.Random(62)
        model = make_trained_model(rng, 13, max_domain=2, num_rows=30)
        v = tuple(0 for _ in range(13))
        with pytest.raises(SpaceTooLarge):
            oracle.brute_min_paxp(model, v, Fraction(1, 2))
