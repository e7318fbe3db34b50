import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import beta_quadrature, pearson_two_pass, t_two_tailed_quadrature
from wordengage.corpus import EngagementProfile
from wordengage.errors import DegenerateDataError, InputError
from wordengage.lexicon import ScoreVector, parse_lexicon
from wordengage.stats import (
    correlate_all,
    correlations_to_tsv,
    describe,
    incomplete_beta,
    p_two_tailed,
    pearson,
    significance_tier,
)


class TestPearson:
    @pytest.mark.parametrize("x, y, r", [
        ([1, 2, 3], [2, 4, 6], 1.0),
        ([1, 2, 3], [6, 4, 2], -1.0),
        ([1, 2, 3, 4], [1, 3, 2, 4], 0.8),
    ])
    def test_examples(self, x, y, r):
        assert pearson(x, y) == pytest.approx(r, abs=1e-12)

    def test_errors(self):
        with pytest.raises(InputError):
            pearson([1, 2, 3], [1, 2])
        with pytest.raises(InputError):
            pearson([1, 2], [1, 2])
        with pytest.raises(DegenerateDataError):
            pearson([1, 1, 1], [1, 2, 3])

    vectors = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=3, max_size=40)

    @given(st.data())
    def test_symmetry_and_affine(self, data):
        n = data.draw(st.integers(3, 40))
        x = np.array(data.draw(st.lists(st.floats(-1e3, 1e3), min_size=n, max_size=n)))
        y = np.array(data.draw(st.lists(st.floats(-1e3, 1e3), min_size=n, max_size=n)))
        if x.std() < 1e-3 or y.std() < 1e-3:
            return
        r = pearson(x, y)
        assert abs(r - pearson(y, x)) <= 1e-12
        a = data.draw(st.floats(0.1, 10)) * data.draw(st.sampled_from([-1, 1]))
        b = data.draw(st.floats(-100, 100))
        assert abs(pearson(a * x + b, y) - np.sign(a) * r) <= 1e-9

    def test_matches_two_pass_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            n = int(rng.integers(3, 200))
            x = rng.normal(size=n)
            y = 0.3 * x + rng.normal(size=n)
            assert abs(pearson(x, y) - pearson_two_pass(x.tolist(), y.tolist())) <= 1e-10


class TestIncompleteBeta:
    @pytest.mark.parametrize("a, b", [(0.5, 0.5), (2, 5), (30, 0.5)])
    def test_boundaries(self, a, b):
        assert incomplete_beta(0.0, a, b) == 0.0
        assert incomplete_beta(1.0, a, b) == 1.0

    @pytest.mark.parametrize("a", [0.3, 1.0, 7.5, 250.0])
    def test_symmetry(self, a):
        assert incomplete_beta(0.5, a, a) == pytest.approx(0.5, abs=1e-12)

    def test_against_quadrature(self):
        assert incomplete_beta(0.3, 2, 5) == pytest.approx(beta_quadrature(0.3, 2, 5), abs=1e-8)
        # I_0.3(2,5) = 1 - 0.7^6 - 6 * 0.3 * 0.7^5 (binomial identity)
        assert incomplete_beta(0.3, 2, 5) == pytest.approx(1 - 0.7**6 - 6 * 0.3 * 0.7**5, abs=1e-12)

    @pytest.mark.parametrize("x, a, b", [(-0.1, 1, 1), (1.1, 1, 1), (0.5, 0, 1), (0.5, 1, -2)])
    def test_domain(self, x, a, b):
        with pytest.raises(InputError):
            incomplete_beta(x, a, b)


class TestPValue:
    def test_examples(self):
        assert p_two_tailed(0.0, 10) == pytest.approx(1.0, abs=1e-12)
        assert p_two_tailed(1.0, 10) == 0.0
        assert p_two_tailed(-1.0, 10) == 0.0
        oracle = t_two_tailed_quadrature(0.195, 102)
        assert abs(oracle - 0.0495) <= 0.001
        assert p_two_tailed(0.195, 102) == pytest.approx(oracle, abs=1e-9)

    def test_small_n(self):
        with pytest.raises(InputError):
            p_two_tailed(0.5, 2)

    @given(st.floats(0.0, 0.99), st.floats(0.0, 0.99), st.integers(3, 5000))
    def test_monotone_in_r(self, r1, r2, n):
        lo, hi = sorted((r1, r2))
        assert p_two_tailed(hi, n) <= p_two_tailed(lo, n) + 1e-15
        assert p_two_tailed(-hi, n) == p_two_tailed(hi, n)

    @given(st.floats(0.01, 0.99), st.integers(3, 3000), st.integers(1, 500))
    def test_monotone_in_n(self, r, n, extra):
        assert p_two_tailed(r, n + extra) <= p_two_tailed(r, n) + 1e-15

    def test_tiers(self):
        assert [significance_tier(p) for p in (0.2, 0.049, 0.0099, 0.05, 0.01)] == [
            "ns", "star", "double_star", "ns", "star"]


LEX = parse_lexicon("%\n1\tanger\n2\tsocial\n3\tunused\n%\nhate*\t1\nfriend*\t2\nzzz\t3\n")


def _profiles(n, seed=0, response=True):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        y = float(rng.random())
        scores = {1: 0.1 - 0.05 * y + 0.01 * rng.random(), 2: float(rng.random()) * 0.1, 3: 0.0}
        out.append(EngagementProfile(f"u{i}", y if response else None, 1 - y, ScoreVector(f"u{i}", scores, 100)))
    return out


class TestCorrelateAll:
    def test_sorted_and_flagged(self):
        res = correlate_all(_profiles(60), "response", LEX)
        assert [c.category_name for c in res][0] == "anger"
        assert res[0].r < -0.9 and res[0].tier == "double_star"
        unused = [c for c in res if c.category_name == "unused"][0]
        assert unused.zero_variance and unused.tier == "ns"
        assert all(abs(a.r) >= abs(b.r) for a, b in zip(res, res[1:]))
        assert all(c.n == 60 for c in res)

    def test_no_response_rates(self):
        with pytest.raises(DegenerateDataError, match="too few usable profiles"):
            correlate_all(_profiles(30, response=False), "response", LEX)
        assert len(correlate_all(_profiles(30, response=False), "retweet", LEX)) == 3

    def test_unknown_target(self):
        with pytest.raises(InputError):
            correlate_all(_profiles(10), "likes", LEX)

    def test_tsv(self):
        text = correlations_to_tsv(correlate_all(_profiles(60), "retweet", LEX))
        lines = text.splitlines()
        assert lines[0] == "category\tr\tp\tn\ttier"
        cat, r, p, n, tier = lines[1].split("\t")
        assert cat == "anger" and tier == "**" and n == "60" and len(r.split(".")[1]) == 6


def test_describe():
    d = describe([1, 2, 3, 4])
    assert d == {"n": 4, "mean": 2.5, "sd": pytest.approx(1.2909944487358056)}
