import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsma import (
    OrderTooLargeError,
    UplinkDesign,
    deterministic_channel,
    enumerate_orders,
    evaluate_uplink,
    mac_pentagon,
    mac_sum_capacity,
    pareto_filter,
    receive_filter,
    sample_orders,
    stream_labels,
    stream_rate,
    trace_region_2user,
    uplink_sic_rates,
)
from conftest import random_channel
from rsma.rng import generator

LOG2_1_2 = 0.2630344058337938  # log2(1.2)
LOG2_3_2 = 0.5849625007211562  # log2(3/2)
LOG2_5_3 = 0.7369655941662062  # log2(5/3)
LOG2_3 = 1.5849625007211562


def design_2user(p11, p12, p2, order):
    return UplinkDesign(((p11, p12),), p2, order)


def random_uplink_design(channel, seed, budgets=None):
    rng = generator(seed)
    K = channel.n_users
    budgets = np.ones(K) if budgets is None else np.asarray(budgets, float)
    fracs = rng.uniform(0.0, 1.0, size=K - 1)
    split = tuple(
        (float(f * budgets[k]), float((1.0 - f) * budgets[k]))
        for k, f in enumerate(fracs)
    )
    labels = stream_labels(K)
    order = tuple(labels[i] for i in rng.permutation(len(labels)))
    return UplinkDesign(split, float(budgets[-1]), order)


class TestLabelsAndDesign:
    def test_labels(self):
        assert stream_labels(1) == ((0, 1),)
        assert stream_labels(2) == ((0, 1), (0, 2), (1, 1))
        assert stream_labels(3) == ((0, 1), (0, 2), (1, 1), (1, 2), (2, 1))

    def test_power_lookup(self, siso_mac):
        design = design_2user(0.3, 0.2, 0.9, ((0, 1), (0, 2), (1, 1)))
        assert design.power_of((0, 1)) == 0.3
        assert design.power_of((0, 2)) == 0.2
        assert design.power_of((1, 1)) == 0.9
        assert np.allclose(design.user_powers(), [0.5, 0.9])

    def test_unknown_label(self):
        design = design_2user(0.3, 0.2, 0.9, ((0, 1), (0, 2), (1, 1)))
        with pytest.raises(ValueError):
            design.power_of((1, 2))

    def test_bad_permutation(self):
        with pytest.raises(ValueError):
            design_2user(0.3, 0.2, 0.9, ((0, 1), (0, 1), (1, 1)))
        with pytest.raises(ValueError):
            design_2user(0.3, 0.2, 0.9, ((0, 1), (1, 1)))

    def test_negative_power(self):
        with pytest.raises(ValueError):
            design_2user(-0.1, 0.2, 0.9, ((0, 1), (0, 2), (1, 1)))


class TestEnumerateOrders:
    def test_counts(self):
        assert len(enumerate_orders(1)) == 1
        assert len(enumerate_orders(2)) == 6
        assert len(enumerate_orders(3)) == 120

    def test_lexicographic_and_deterministic(self):
        orders = enumerate_orders(2)
        assert orders[0] == ((0, 1), (0, 2), (1, 1))
        assert orders == enumerate_orders(2)

    def test_guard(self):
        with pytest.raises(OrderTooLargeError):
            enumerate_orders(5)

    def test_sampling_beyond_guard(self):
        orders = sample_orders(5, 10, seed=3)
        assert len(orders) == 10
        labels = set(stream_labels(5))
        for order in orders:
            assert set(order) == labels
        assert orders == sample_orders(5, 10, seed=3)


class TestReceiveFilter:
    def test_last_stream_matched(self):
        channel = deterministic_channel([[1.0]], 2.0)
        design = UplinkDesign((), 3.0, ((0, 1),))
        d = receive_filter(channel, design, (0, 1))
        assert d[0] == pytest.approx(0.5, abs=1e-12)  # h / noise
        assert stream_rate(channel, design, (0, 1)) == pytest.approx(
            math.log2(1.0 + 3.0 / 2.0), abs=1e-12
        )

    def test_equal_power_identical_channels(self, siso_mac):
        # interference-limited early stream: SINR = P / (P + noise)
        design = design_2user(1.0, 0.0, 1.0, ((0, 1), (0, 2), (1, 1)))
        early = stream_rate(siso_mac, design, (0, 1))
        assert early == pytest.approx(math.log2(1.0 + 0.5), abs=1e-12)
        d_early = receive_filter(siso_mac, design, (0, 1))
        d_late = receive_filter(siso_mac, design, (1, 1))
        # both filters align with the (identical) channel direction
        assert d_early[0].real > 0 and d_late[0].real > 0

    def test_orthogonal_channels_null_interference(self):
        channel = deterministic_channel([[1.0, 0.0], [0.0, 1.0]], 1.0)
        design = design_2user(1.0, 0.0, 1.0, ((0, 1), (0, 2), (1, 1)))
        d = receive_filter(channel, design, (0, 1))
        alignment = abs(np.vdot(d, channel.vectors[0])) / (
            np.linalg.norm(d) * np.linalg.norm(channel.vectors[0])
        )
        assert alignment == pytest.approx(1.0, abs=1e-12)

    def test_unknown_label(self, siso_mac):
        design = design_2user(1.0, 0.0, 1.0, ((0, 1), (0, 2), (1, 1)))
        with pytest.raises(ValueError):
            receive_filter(siso_mac, design, (2, 1))

    def test_matched_mode(self, siso_mac):
        design = design_2user(1.0, 0.0, 1.0, ((0, 1), (0, 2), (1, 1)))
        d = receive_filter(siso_mac, design, (0, 1), filter_mode="matched")
        assert d[0] == 1.0


class TestStreamRate:
    def test_single_user(self):
        channel = deterministic_channel([[1.0]], 1.0)
        design = UplinkDesign((), 1.0, ((0, 1),))
        assert stream_rate(channel, design, (0, 1)) == pytest.approx(1.0, abs=1e-12)

    def test_two_user_corner_point(self, siso_mac):
        design = design_2user(1.0, 0.0, 1.0, ((0, 1), (0, 2), (1, 1)))
        r0 = stream_rate(siso_mac, design, (0, 1))
        r1 = stream_rate(siso_mac, design, (1, 1))
        assert r0 == pytest.approx(LOG2_3_2, abs=1e-12)
        assert r1 == pytest.approx(1.0, abs=1e-12)

    def test_split_interior_point(self, siso_mac):
        design = design_2user(0.5, 0.5, 1.0, ((0, 1), (1, 1), (0, 2)))
        assert stream_rate(siso_mac, design, (0, 1)) == pytest.approx(LOG2_1_2, abs=1e-12)
        assert stream_rate(siso_mac, design, (1, 1)) == pytest.approx(LOG2_5_3, abs=1e-12)
        assert stream_rate(siso_mac, design, (0, 2)) == pytest.approx(LOG2_3_2, abs=1e-12)

    def test_zero_power_stream(self, siso_mac):
        design = design_2user(1.0, 0.0, 1.0, ((0, 1), (0, 2), (1, 1)))
        assert stream_rate(siso_mac, design, (0, 2)) == 0.0


class TestEvaluateUplink:
    def test_split_example_user_rates(self, siso_mac):
        design = design_2user(0.5, 0.5, 1.0, ((0, 1), (1, 1), (0, 2)))
        rates = evaluate_uplink(siso_mac, design)
        assert rates.user_rates[0] == pytest.approx(LOG2_1_2 + LOG2_3_2, abs=1e-12)
        assert rates.user_rates[1] == pytest.approx(LOG2_5_3, abs=1e-12)
        assert rates.sum_rate == pytest.approx(LOG2_3, abs=1e-12)

    def test_all_zero_powers(self, siso_mac):
        design = design_2user(0.0, 0.0, 0.0, ((0, 1), (0, 2), (1, 1)))
        rates = evaluate_uplink(siso_mac, design)
        assert np.all(rates.user_rates == 0)
        assert all(r == 0 for r in rates.stream_rates.values())

    def test_matches_stream_rate(self):
        for seed in range(6):
            channel = random_channel(seed, n_tx=2, n_users=3)
            design = random_uplink_design(channel, seed + 40)
            rates = evaluate_uplink(channel, design)
            for label in stream_labels(3):
                assert rates.stream_rates[label] == pytest.approx(
                    stream_rate(channel, design, label), abs=1e-12
                )

    def test_degenerate_split_equals_plain_sic(self):
        for seed in range(10):
            channel = random_channel(seed, n_tx=2, n_users=3)
            budgets = np.array([1.0, 2.0, 0.5])
            full_order = sample_orders(3, 1, seed=seed + 7)[0]
            design = UplinkDesign(
                tuple((float(b), 0.0) for b in budgets[:-1]), float(budgets[-1]), full_order
            )
            rates = evaluate_uplink(channel, design)
            user_order = [lab[0] for lab in full_order if lab[1] == 1]
            plain = uplink_sic_rates(channel, budgets, user_order)
            assert rates.user_rates == pytest.approx(plain, abs=1e-12)

    @given(seed=st.integers(0, 2_000), m=st.sampled_from([1, 2, 4]), k=st.sampled_from([2, 3]))
    @settings(max_examples=30, deadline=None)
    def test_sum_conservation(self, seed, m, k):
        channel = random_channel(seed, n_tx=m, n_users=k)
        design = random_uplink_design(channel, seed + 1)
        rates = evaluate_uplink(channel, design)
        capacity = mac_sum_capacity(channel, design.user_powers())
        assert rates.sum_rate == pytest.approx(capacity, abs=1e-9)

    def test_order_invariance_of_sum(self):
        channel = random_channel(5, n_tx=2, n_users=2)
        sums = []
        for order in enumerate_orders(2):
            design = design_2user(0.7, 0.3, 1.0, order)
            sums.append(evaluate_uplink(channel, design).sum_rate)
        assert max(sums) - min(sums) < 1e-9

    def test_matched_mode_breaks_conservation(self):
        channel = random_channel(3, n_tx=2, n_users=2)
        design = design_2user(0.7, 0.3, 1.0, ((0, 1), (0, 2), (1, 1)))
        mmse = evaluate_uplink(channel, design).sum_rate
        matched = evaluate_uplink(channel, design, filter_mode="matched").sum_rate
        assert matched <= mmse + 1e-12


class TestParetoFilter:
    def test_strictly_dominated_removed(self):
        pts = np.array([[1.0, 1.0], [0.5, 0.5], [1.0, 0.2]])
        kept = pareto_filter(pts)
        assert [1.0, 1.0] in kept.tolist()
        assert [0.5, 0.5] not in kept.tolist()
        assert [1.0, 0.2] in kept.tolist()  # ties on r1 are not strict dominance

    def test_axis_segment_survives(self):
        pts = np.array([[0.2, 0.0], [0.6, 0.0], [1.0, 0.0]])
        assert len(pareto_filter(pts)) == 3

    def test_empty(self):
        assert pareto_filter(np.zeros((0, 2))).shape == (0, 2)


class TestTraceRegion:
    def test_contains_corner_points(self, siso_mac):
        cloud = trace_region_2user(siso_mac, [1.0, 1.0], split_grid=51)
        for corner in ((1.0, LOG2_3 - 1.0), (LOG2_3 - 1.0, 1.0)):
            dist = np.max(np.abs(cloud - corner), axis=1).min()
            assert dist < 1e-9

    def test_cloud_inside_pentagon(self, siso_mac):
        cloud = trace_region_2user(siso_mac, [1.0, 1.0], split_grid=51, share_grid=3)
        pentagon = mac_pentagon(siso_mac, [1.0, 1.0])
        for r1, r2 in cloud:
            assert pentagon.contains(r1, r2, tol=1e-9)

    def test_zero_budget_degenerates_to_axis_segment(self, siso_mac):
        cloud = trace_region_2user(siso_mac, [1.0, 0.0], split_grid=21, share_grid=5)
        assert np.all(cloud[:, 1] == 0)
        assert len(np.unique(cloud[:, 0])) > 1  # a segment, not a single point

    def test_needs_two_users(self):
        channel = random_channel(1, n_tx=2, n_users=3)
        with pytest.raises(ValueError):
            trace_region_2user(channel, [1.0, 1.0, 1.0][:3])
