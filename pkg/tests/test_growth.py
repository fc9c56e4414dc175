"""Growth-law families, the logarithmic integral, and the model catalog."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knowgrow.growth import (
    INCREMENT_LAW_FAMILIES,
    QUASI_LINEAR_FAMILIES,
    STANDARD_FAMILIES,
    DomainError,
    GrowthModel,
    family_spec,
    li_three_term,
    log_integral,
    model_catalog,
)

from _oracles import simpson_li

LI_PROBES = [10.0, 1e2, 1e3, 1e4, 1e5, 1e6]


class TestLogIntegral:
    def test_oracle_self_consistency(self):
        # doubling the fixed step count must not move the oracle at 1e-11 rel
        for x in (10.0, 1e3, 1e6):
            coarse = simpson_li(x, steps_per_segment=4096)
            fine = simpson_li(x, steps_per_segment=8192)
            assert abs(fine - coarse) <= 1e-11 * abs(fine)

    def test_matches_simpson_oracle(self):
        for x in LI_PROBES:
            expected = simpson_li(x)
            assert log_integral(x) == pytest.approx(expected, rel=1e-9)

    def test_lower_limit_is_zero(self):
        assert log_integral(2.0) == 0.0

    def test_value_at_ten(self):
        # frozen from the Simpson oracle: li(10) - li(2)
        assert log_integral(10.0) == pytest.approx(5.1204357246698, rel=1e-10)

    def test_strictly_increasing(self):
        xs = np.geomspace(2.5, 1e6, 40)
        vals = [log_integral(x) for x in xs]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_asymptotic_dominance_over_t_over_ln_t(self):
        x = 1e6
        ratio = log_integral(x) / (x / math.log(x))
        assert 1.0 < ratio < 1.2

    def test_domain_error_below_two(self):
        with pytest.raises(DomainError):
            log_integral(1.5)

    @pytest.mark.parametrize("tol", [1e-13, 1e-2, 0.5])
    def test_invalid_tolerance(self, tol):
        with pytest.raises(ValueError):
            log_integral(10.0, rel_tol=tol)

    def test_respects_requested_tolerance(self):
        loose = log_integral(1e5, rel_tol=1e-3)
        assert loose == pytest.approx(simpson_li(1e5), rel=1e-3)


class TestLiThreeTerm:
    def test_hand_value_at_e_squared(self):
        # (e^2/2) * (1 + 1/2 + 3/4), evaluated by hand
        assert li_three_term(math.e**2) == pytest.approx(8.312688111296981, rel=1e-12)

    def test_ratio_to_li_near_one_at_1e6(self):
        assert li_three_term(1e6) / log_integral(1e6) == pytest.approx(1.0, abs=0.01)

    def test_ratio_bounded_and_converging(self):
        # the ratio is not monotone in x (the heavier ln^-2 coefficient and
        # the lower-limit offset pull in opposite directions) but it stays
        # within a narrow band and tightens by 1e6
        devs = {x: abs(li_three_term(x) / log_integral(x) - 1.0) for x in LI_PROBES[1:]}
        assert all(d < 0.05 for d in devs.values())
        assert devs[1e6] < 0.05
        assert devs[1e6] < devs[1e2]

    def test_monotone_increasing(self):
        xs = np.geomspace(10, 1e6, 50)
        vals = li_three_term(xs)
        assert np.all(np.diff(vals) > 0)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            li_three_term(2.9)


class TestEvaluate:
    def test_wag_linear_hand_value(self):
        wag = model_catalog()["wag_articles"]
        assert wag.evaluate(10) == pytest.approx(4100.0)

    def test_category_model_reproduces_2023_count(self):
        wc = model_catalog()["wiki_categories"]
        t = wc.index_of("2023-01")
        assert t == 205
        assert wc.evaluate(t) == pytest.approx(2_334_875, rel=1e-3)

    def test_mag_fields_at_origin(self):
        mf = model_catalog()["mag_fields"]
        assert mf.evaluate(1) == pytest.approx(144_612.0)

    def test_vectorized_matches_scalar(self):
        m = GrowthModel("log_integral", (140000.0, 100.0, 1_350_000.0))
        ts = np.array([1.0, 10.0, 100.0])
        vec = m.evaluate(ts)
        assert vec == pytest.approx([m.evaluate(float(t)) for t in ts])

    def test_domain_error_on_invalid_t(self):
        mi = model_catalog()["wiki_articles_increment"]  # 140000 / ln(t)
        with pytest.raises(DomainError):
            mi.evaluate(1)  # ln(1) = 0
        m = GrowthModel("log_integral", (1.0, 0.0, 0.0))
        with pytest.raises(DomainError):
            m.evaluate(1.5)  # below the Li lower limit


class TestIncrement:
    def test_reciprocal_log_is_own_increment(self):
        mi = model_catalog()["wiki_articles_increment"]
        assert mi.increment(math.e**5) == pytest.approx(28000.0)

    def test_logarithmic_is_own_increment(self):
        mc = GrowthModel("logarithmic", (2000.0, 0.0, 0.0))
        assert mc.increment(math.e) == pytest.approx(2000.0)

    def test_inclusion_increment_hand_value(self):
        incl = model_catalog()["wiki_inclusion"]
        t_at_ct_e = math.e / 0.033
        assert incl.increment(t_at_ct_e) == pytest.approx(10560.0)

    @pytest.mark.parametrize(
        "family,params",
        [
            ("log_integral", (140000.0, 100.0, 1_350_000.0)),
            ("t_ln_t", (2467.0, -2467.0, 147079.0)),
            ("shifted_t_ln_t", (2000.0, 12.0, 0.0)),
            ("linear", (30.0, 3800.0)),
            ("t_over_ln_t", (1000.0, 20.0, 5000.0)),
            ("exponential", (50.0, 0.01, 1000.0)),
        ],
    )
    def test_increment_consistent_with_difference(self, family, params):
        # cumulative families: analytic increment within 1% of the discrete
        # difference for t >= 24
        m = GrowthModel(family, params)
        for t in (24.0, 36.0, 60.0, 120.0, 240.0):
            diff = m.evaluate(t + 1) - m.evaluate(t)
            assert m.increment(t) == pytest.approx(diff, rel=0.01)


class TestFamilies:
    def test_arity_validation(self):
        with pytest.raises(ValueError, match="parameters"):
            GrowthModel("linear", (1.0,))

    def test_unknown_family(self):
        with pytest.raises(ValueError, match="unknown"):
            GrowthModel("quadratic_log", (1.0,))

    def test_non_finite_params_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            GrowthModel("linear", (math.nan, 0.0))

    def test_polynomial_degree_from_name(self):
        assert family_spec("polynomial2").arity == 3
        assert family_spec("polynomial").arity == 4  # default cubic
        m = GrowthModel("polynomial", (1.0, 0.0, 0.0, 0.0))
        assert m.family == "polynomial3"
        assert m.evaluate(3.0) == pytest.approx(27.0)

    def test_standard_family_count(self):
        assert len(STANDARD_FAMILIES) == 11
        assert set(QUASI_LINEAR_FAMILIES) <= set(STANDARD_FAMILIES)

    _GROWING = {
        "linear": (3.0, 7.0),
        "polynomial3": (0.5, 1.0, 2.0, 3.0),
        "logarithmic": (10.0, 1.0, 5.0),
        "t_over_ln_t": (4.0, 3.0, 1.0),
        "log_integral": (7.0, 2.0, 0.0),
        "t_ln_t": (2.0, 1.0, 3.0),
        "shifted_t_ln_t": (2.0, 1.0, 0.0),
        "exponential": (1.5, 0.05, 2.0),
        "sub_exponential": (0.2, 2.0, 1.0),
    }

    @pytest.mark.parametrize("family", sorted(_GROWING))
    def test_positive_scale_families_strictly_increase(self, family):
        m = GrowthModel(family, self._GROWING[family])
        ts = np.arange(1.0, 200.0)
        vals = np.asarray(m.evaluate(ts))
        assert np.all(np.diff(vals) > 0)

    def test_sub_exponential_slower_than_matched_exponential(self):
        sub = GrowthModel("sub_exponential", (0.2, 2.0, 1.0))
        t0 = 50.0
        v = sub.evaluate(t0)
        slope = sub.evaluate(t0 + 1e-4) - sub.evaluate(t0 - 1e-4)
        slope /= 2e-4
        r = slope / v
        exp = GrowthModel("exponential", (v * math.exp(-r * t0), r, 0.0))
        assert exp.evaluate(t0) == pytest.approx(v, rel=1e-6)
        assert sub.evaluate(2 * t0) < exp.evaluate(2 * t0)


class TestCatalog:
    def test_contains_exactly_six_models(self):
        cat = model_catalog()
        assert len(cat) == 6
        assert set(cat) == {
            "wiki_articles_increment",
            "wiki_categories",
            "wag_articles",
            "mag_fields",
            "mag_papers_log",
            "wiki_inclusion",
        }
        assert all(m.t_origin is not None for m in cat.values())

    def test_mag_papers_exponentiates_to_increasing_counts(self):
        m = model_catalog()["mag_papers_log"]
        ts = np.arange(3.0, 300.0)
        counts = np.exp(np.asarray(m.evaluate(ts)))
        assert np.all(counts > 0)
        assert np.all(np.diff(counts) > 0)

    def test_inclusion_offset_at_unit_argument(self):
        incl = model_catalog()["wiki_inclusion"]
        assert incl.evaluate(1.0 / 0.033) == pytest.approx(300000.0, rel=1e-9)


_family_params = st.sampled_from(STANDARD_FAMILIES).flatmap(
    lambda fam: st.tuples(
        st.just(fam),
        st.lists(
            st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
            min_size=family_spec(fam).arity,
            max_size=family_spec(fam).arity,
        ),
    )
)


class TestSerialization:
    @given(_family_params)
    @settings(max_examples=80)
    def test_json_round_trip(self, fam_params):
        family, params = fam_params
        model = GrowthModel(family, tuple(params), t_origin="2006-01")
        again = GrowthModel.from_json(model.to_json())
        assert again == model

    def test_json_shape(self):
        doc = model_catalog()["wag_articles"].to_json()
        assert doc == {"family": "linear", "params": [30.0, 3800.0], "t_origin": "2007-01"}

    def test_origin_validation(self):
        with pytest.raises(ValueError):
            GrowthModel("linear", (1.0, 2.0), t_origin="2007-13")

    def test_increment_law_families_listed(self):
        assert set(INCREMENT_LAW_FAMILIES) == {"reciprocal_log", "logarithmic"}
