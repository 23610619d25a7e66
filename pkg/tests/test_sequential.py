import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from attentive_perceptron import (
    Completed,
    ContractError,
    DomainError,
    Filtered,
    LinearModel,
    Order,
    evaluation_order,
    full_margin,
    make_example,
    partial_margin_scan,
    scan_terms,
    stopping_threshold,
)
from oracles import prefix_scan

# frozen from oracles.bisection_quantile
TAU_DELTA_025 = 0.9799819922700195
TAU_THETA1_MEAN4_STD2 = 0.14485362695144488


class TestStoppingThreshold:
    def test_half_delta_gives_zero(self):
        assert stopping_threshold(0.0, 0.0, 1.0, 0.5).tau == 0.0

    def test_known_values(self):
        assert stopping_threshold(0.0, 0.0, 1.0, 0.025).tau == pytest.approx(TAU_DELTA_025, abs=1e-9)
        assert stopping_threshold(1.0, 4.0, 2.0, 0.05).tau == pytest.approx(
            TAU_THETA1_MEAN4_STD2, abs=1e-9
        )

    def test_recomputable_from_fields(self):
        t = stopping_threshold(0.3, -1.2, 2.5, 0.07)
        assert t.tau == 0.5 * (t.theta - t.mean_used + t.std_used * t.quantile)

    @pytest.mark.parametrize("std", [0.0, -1.0, float("nan")])
    def test_bad_std(self, std):
        with pytest.raises(DomainError):
            stopping_threshold(0.0, 0.0, std, 0.1)

    @pytest.mark.parametrize("delta", [0.0, 1.0, -0.5, 2.0])
    def test_bad_delta(self, delta):
        with pytest.raises(DomainError):
            stopping_threshold(0.0, 0.0, 1.0, delta)

    def test_half_delta_closed_form(self):
        for theta, mean in [(0.0, 3.0), (2.0, -1.0), (-5.0, 0.5)]:
            t = stopping_threshold(theta, mean, 7.0, 0.5).tau
            assert t == pytest.approx((theta - mean) / 2, abs=1e-12)

    def test_monotone_in_delta_and_std(self):
        deltas = np.linspace(0.01, 0.49, 20)
        stds = np.linspace(0.1, 10, 20)
        for s in stds:
            taus = [stopping_threshold(0.0, 1.0, s, d).tau for d in deltas]
            assert np.all(np.diff(taus) < 0)
        for d in deltas:
            taus = [stopping_threshold(0.0, 1.0, s, d).tau for s in stds]
            assert np.all(np.diff(taus) > 0)


def outcome_tuple(o):
    if isinstance(o, Filtered):
        return ("filtered", o.step, o.partial_sum)
    return ("completed", o.margin, o.terms)


class TestScan:
    def test_filters_at_first_checkpoint(self):
        o = scan_terms([2.0, -1.0, 0.5], 1.4, 1)
        assert o == Filtered(1, 2.0, 1.4)

    def test_never_crosses(self):
        assert scan_terms([0.5, 0.5, 0.5], 10.0) == Completed(1.5, 3)

    def test_stride_skips_crossing(self):
        assert scan_terms([2.0, -1.0, 0.5], 1.4, 2) == Completed(1.5, 3)

    def test_no_check_after_final_term(self):
        assert scan_terms([0.0, 5.0], 1.0) == Completed(5.0, 2)

    def test_tie_continues(self):
        assert scan_terms([1.0, 1.0, 1.0], 1.0) == Filtered(2, 2.0, 1.0)
        assert scan_terms([1.0, 0.0, 0.0], 1.0) == Completed(1.0, 3)

    def test_disabled_always_completes(self):
        assert scan_terms([5.0, 5.0, 5.0], 0.0, filtering_enabled=False) == Completed(15.0, 3)

    @settings(max_examples=300, deadline=None)
    @given(
        st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=200),
        st.floats(-20, 20, allow_nan=False),
        st.integers(1, 7),
    )
    def test_matches_brute_force_prefix_scan(self, terms, tau, stride):
        assert outcome_tuple(scan_terms(terms, tau, stride)) == prefix_scan(terms, tau, stride)

    @settings(max_examples=200, deadline=None)
    @given(
        st.lists(st.floats(-10, 10, allow_nan=False), min_size=2, max_size=100),
        st.floats(-5, 5, allow_nan=False),
        st.integers(1, 4),
    )
    def test_first_crossing_semantics(self, terms, tau, stride):
        o = scan_terms(terms, tau, stride)
        prefix = np.cumsum(terms)
        if isinstance(o, Filtered):
            assert o.step < len(terms) and o.step % stride == 0
            assert prefix[o.step - 1] == o.partial_sum > tau
            earlier = np.arange(stride, o.step, stride)
            assert np.all(prefix[earlier - 1] <= tau)


class TestPartialMarginScan:
    def setup_method(self):
        rng = np.random.default_rng(3)
        self.model = LinearModel(rng.standard_normal(500))
        self.ex = make_example(zip(range(1, 500), rng.standard_normal(499)), -1, id=9)

    def test_disabled_natural_equals_full_margin(self):
        o = partial_margin_scan(self.model, self.ex, -1e9, None, 1, filtering_enabled=False)
        assert o.margin == full_margin(self.model, self.ex)

    def test_unreachable_tau_natural_equals_full_margin(self):
        o = partial_margin_scan(self.model, self.ex, 1e300)
        assert o == Completed(full_margin(self.model, self.ex), 500)

    def test_order_changes_terms(self):
        order = evaluation_order(self.ex, self.model, Order.SHUFFLE, 5)
        o = partial_margin_scan(self.model, self.ex, 1e300, order)
        assert o.margin == pytest.approx(full_margin(self.model, self.ex), rel=1e-12, abs=1e-12)
        terms = self.ex.label * self.model.weights[self.ex.indices[order]] * self.ex.values[order]
        assert outcome_tuple(partial_margin_scan(self.model, self.ex, 0.3, order)) == prefix_scan(
            terms, 0.3
        )

    def test_rejects_bad_permutation(self):
        with pytest.raises(ContractError):
            partial_margin_scan(self.model, self.ex, 0.0, np.arange(10))
        with pytest.raises(ContractError):
            partial_margin_scan(self.model, self.ex, 0.0, np.zeros(500, dtype=int))


class TestEvaluationOrder:
    def setup_method(self):
        self.ex = make_example([(1, 1.0), (2, 1.0)], 1, id=4)
        self.model = LinearModel([0.1, 5.0, -3.0])

    def test_natural(self):
        assert evaluation_order(self.ex, self.model, Order.NATURAL).tolist() == [0, 1, 2]

    def test_shuffle_deterministic(self):
        a = evaluation_order(self.ex, self.model, Order.SHUFFLE, 11, 4)
        b = evaluation_order(self.ex, self.model, "shuffle", 11, 4)
        assert a.tolist() == b.tolist()
        assert sorted(a.tolist()) == [0, 1, 2]

    def test_shuffle_keyed_by_seed_and_id(self):
        big = make_example(zip(range(1, 50), np.ones(49)), 1, id=0)
        m = LinearModel(np.ones(50))
        base = evaluation_order(big, m, Order.SHUFFLE, 1, 0).tolist()
        assert evaluation_order(big, m, Order.SHUFFLE, 2, 0).tolist() != base
        assert evaluation_order(big, m, Order.SHUFFLE, 1, 1).tolist() != base
        assert evaluation_order(big, LinearModel(np.zeros(50)), Order.SHUFFLE, 1, 0).tolist() == base

    def test_weight_magnitude(self):
        assert evaluation_order(self.ex, self.model, Order.WEIGHT_MAGNITUDE).tolist() == [0, 1, 2]

    def test_weight_magnitude_bias_pinned_and_ties(self):
        ex = make_example([(1, 1.0), (2, 1.0), (3, 1.0), (5, 2.0)], 1)
        m = LinearModel([100.0, 1.0, -2.0, 2.0, 0.0, 0.5])
        assert evaluation_order(ex, m, Order.WEIGHT_MAGNITUDE).tolist() == [0, 2, 3, 1, 4]
