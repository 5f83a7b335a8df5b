import math

import numpy as np
import pytest

from alpslab import (
    ExperimentReport,
    Metric,
    MixtureTarget,
    ModeSpec,
    RoundTrip,
    Trace,
    acceptance_profile,
    build_ladder,
    complexity_scan,
    excursion_statistics,
    round_trips,
    run,
    skew_constants,
    w_value_table,
    weak_convergence_test,
)
from alpslab.harness import interior_rate, ratio_spread
from alpslab.ladder import Spacing


def synthetic_trace(rungs, ladder, modes=None) -> Trace:
    rungs = np.asarray(rungs, dtype=np.int32)
    n = rungs.size
    if modes is None:
        modes = np.zeros(n, dtype=np.int8)
    return Trace(t=np.arange(n, dtype=float) / 10.0, mode=np.asarray(modes, np.int8),
                 rung=rungs, direction=np.zeros(n, np.int8),
                 accepted=np.zeros(n, bool), ladder=ladder)


class TestRoundTrips:
    def test_never_reaches_top(self, two_mode_target):
        ladder = build_ladder(16, 16.0)
        tr = synthetic_trace([0, 1, 2, 1, 0, 1, 0], ladder)
        assert round_trips(tr) == []

    def test_single_synthetic_trip(self):
        ladder = build_ladder(4, 3.375, ell0=1.0)  # k = 3
        rungs = [0, 1, 2, 3, 2, 1, 0, 1]
        trips = round_trips(synthetic_trace(rungs, ladder))
        assert len(trips) == 1
        trip = trips[0]
        assert (trip.start, trip.jump, trip.end) == (0, 3, 6)
        assert trip.steps == 6
        assert trip.duration == pytest.approx(0.6)

    def test_non_overlapping_and_anchored(self):
        ladder = build_ladder(4, 3.375, ell0=1.0)
        rungs = [1, 0, 1, 3, 3, 0, 1, 2, 3, 1, 0, 0, 3, 0]
        trips = round_trips(synthetic_trace(rungs, ladder))
        # trips: 1->5, 5->10, then 11->13 (the second 0 at 11 anchors)
        assert [(t.start, t.end) for t in trips] == [(1, 5), (5, 10), (10, 13)]

    def test_ordering_invariant(self):
        with pytest.raises(ValueError):
            RoundTrip(start=5, jump=4, end=10, steps=5, duration=1.0)

    def test_real_trace_consistency(self, two_mode_target):
        ladder = build_ladder(16, 8.0)
        tr = run(two_mode_target, ladder, 100_000, seed=2)
        trips = round_trips(tr)
        assert len(trips) > 20
        for t in trips[:50]:
            assert tr.rung[t.start] == 0
            assert tr.rung[t.jump] == ladder.k
            assert tr.rung[t.end] == 0
            assert t.steps == t.end - t.start


class TestAcceptanceProfile:
    def test_boundary_and_interior(self, two_mode_target):
        ladder = build_ladder(16, 8.0)
        tr = run(two_mode_target, ladder, 150_000, seed=3)
        rows = acceptance_profile(tr, ladder, two_mode_target)
        # all in-range proposals are tallied; boundary rejections excluded
        assert all(0 <= r.rate <= 1 for r in rows)
        rate, n = interior_rate(rows, ladder.k)
        assert n > 10_000
        # z-scores against the exact finite-d law are calibrated
        zs = [r.z_score for r in rows if not r.insufficient]
        assert np.mean(np.abs(zs)) < 2.5

    def test_insufficient_flagging(self, two_mode_target):
        ladder = build_ladder(16, 8.0)
        tr = run(two_mode_target, ladder, 2_000, seed=4)
        rows = acceptance_profile(tr, ladder, two_mode_target, min_proposals=10_000)
        assert all(r.insufficient for r in rows)

    def test_dimension_sharpens_rates(self):
        # deviation from the 0.234 limit shrinks from d=100 to d=10000
        modes = (ModeSpec(1.0, 1.0, 0.5), ModeSpec(1.0, 1.0, 0.5))
        devs = {}
        for d in (100, 10_000):
            target = MixtureTarget(modes=modes, dimension=d)
            ladder = build_ladder(d, 8.0)
            tr = run(target, ladder, 150_000, seed=5)
            rows = acceptance_profile(tr, ladder, target)
            rate, _ = interior_rate(rows, ladder.k)
            devs[d] = abs(rate - rows[0].predicted_limit)
        assert devs[10_000] < devs[100]


class TestExcursionStatistics:
    def test_requires_two_zero_visits(self):
        with pytest.raises(ValueError):
            excursion_statistics([1.0, 2.0, 1.0])

    def test_counts_and_signs(self):
        vals = [0, 1, 2, 0, -1, 0, 0, 3, 0, -2, -1]
        st = excursion_statistics(vals)
        # trailing (-2, -1) never returns to 0: dropped
        assert st.n_excursions == 3
        assert st.fraction_positive == pytest.approx(2 / 3)

    def test_min_peak_filter(self):
        vals = [0, 1, 0, -3, 0, 2, 0, -1, 0]
        st = excursion_statistics(vals, min_peak=2.0)
        assert st.n_excursions == 2
        assert st.fraction_positive == pytest.approx(0.5)

    def test_incomplete_head_dropped(self):
        vals = [5, 4, 0, 1, 0]
        st = excursion_statistics(vals)
        assert st.n_excursions == 1
        assert st.fraction_positive == 1.0


class TestWValueTable:
    def test_endpoints_and_junction(self, two_mode_target):
        ladder = build_ladder(16, 16.0)
        c = skew_constants(two_mode_target, ladder.ell0)
        table = w_value_table(ladder, c)
        assert table[0, 0] == pytest.approx(c.wmax)
        assert table[1, 0] == pytest.approx(c.wmin)
        assert table[0, ladder.k] == 0.0 and table[1, ladder.k] == 0.0
        # strictly monotone towards the junction
        assert np.all(np.diff(table[0]) < 0)
        assert np.all(np.diff(table[1]) > 0)


class TestComplexityScan:
    def test_needs_two_dims(self, two_mode_target):
        with pytest.raises(ValueError):
            complexity_scan(two_mode_target, [16], Spacing.standard(), 4, seed=0)

    def test_schema_and_ratios(self, two_mode_target):
        rows = complexity_scan(two_mode_target, (16, 64), Spacing.standard(),
                               replicas=16, seed=1, trips_per_lane=4)
        assert [r.d for r in rows] == [16, 64]
        for r in rows:
            assert r.n_trips > 0
            assert r.ratio_dlog2 == pytest.approx(
                r.mean_steps / (r.d * math.log(r.d) ** 2))
            assert r.ratio_d == pytest.approx(r.mean_steps / r.d)
            # Poissonised duration tracks steps/d
            assert r.mean_duration == pytest.approx(r.mean_steps / r.d, rel=0.1)
        assert ratio_spread(rows, "ratio_dlog2") >= 1.0

    def test_betamax_doubling_h_scaling(self, two_mode_target):
        # T grows by about (h(2*bmax)/h(bmax))^2 when betamax doubles
        d, bmax = 256, 64.0
        r1 = complexity_scan(two_mode_target, (d, d), Spacing.standard(),
                             replicas=32, seed=7, trips_per_lane=12,
                             betamax_factor=bmax / d)[0]
        r2 = complexity_scan(two_mode_target, (d, d), Spacing.standard(),
                             replicas=32, seed=8, trips_per_lane=12,
                             betamax_factor=2 * bmax / d)[0]
        predicted = (math.log(2 * bmax) / math.log(bmax)) ** 2
        assert r2.mean_steps / r1.mean_steps == pytest.approx(predicted, rel=0.25)

    def test_censored_dimension_reported(self, two_mode_target):
        # a budget too small for any trip: row reported as fully censored
        rows = complexity_scan(two_mode_target, (64, 64), Spacing.standard(),
                               replicas=8, seed=2, steps_per_lane=20)
        assert rows[0].n_trips == 0
        assert rows[0].censored_lanes == 8
        assert math.isnan(rows[0].mean_steps)

    def test_route_invariance(self, two_mode_target):
        # round-trip times agree between the energy-statistic route and the
        # full-coordinate route within Monte Carlo error
        a = complexity_scan(two_mode_target, (32, 32), Spacing.standard(),
                            replicas=32, seed=11, trips_per_lane=10)[0]
        b = complexity_scan(two_mode_target, (32, 32), Spacing.standard(),
                            replicas=32, seed=12, trips_per_lane=10,
                            state_mode="coords")[0]
        pooled_se = math.hypot(a.se_steps, b.se_steps)
        assert abs(a.mean_steps - b.mean_steps) < 4 * pooled_se

    def test_threads_agree_with_serial(self, two_mode_target):
        serial = complexity_scan(two_mode_target, (16, 32), Spacing.standard(),
                                 replicas=8, seed=3, trips_per_lane=3, threads=1)
        threaded = complexity_scan(two_mode_target, (16, 32), Spacing.standard(),
                                   replicas=8, seed=3, trips_per_lane=3, threads=2)
        assert [r.mean_steps for r in serial] == [r.mean_steps for r in threaded]


class TestWeakConvergence:
    def test_t0_is_exact_zero(self, two_mode_target):
        rows = weak_convergence_test(two_mode_target, dims=(16,),
                                     t_values=(0.0, 0.5), replicas=64, seed=5)
        by_t = {r.t: r.ks for r in rows}
        assert by_t[0.0] == 0.0
        assert 0 < by_t[0.5] <= 1.0

    def test_mismatched_constants_rejected(self, two_mode_target):
        from alpslab import SkewConstants
        bad = SkewConstants(s1=0.5, s2=0.5, alpha=0.5)
        with pytest.raises(ValueError, match="disagree"):
            weak_convergence_test(two_mode_target, dims=(16,), t_values=(0.5,),
                                  replicas=8, seed=0, constants=bad)

    def test_occupation_check(self, two_mode_target):
        # long-time marginal splits mass per the first mode weight
        rows = weak_convergence_test(two_mode_target, dims=(64,),
                                     t_values=(24.0,), replicas=1500, seed=6)
        assert rows[-1].ks < 0.15


class TestReports:
    def test_metric_check(self):
        m = Metric(name="x", estimate=1.05, target=1.0, tolerance=0.1).check_abs()
        assert m.passed
        m2 = Metric(name="y", estimate=2.0, target=1.0, tolerance=0.1).check_abs()
        assert not m2.passed

    def test_json_roundtrip_lossless(self, tmp_path):
        rep = ExperimentReport(kind="demo", config={"a": 1, "b": [1, 2]}, seed=7)
        rep.add(Metric(name="x", estimate=0.5, se=0.01, n=100, target=0.5,
                       tolerance=0.02, passed=True))
        rep.tables["rows"] = [[1, 2.5], [3, 4.5]]
        text = rep.to_json()
        back = ExperimentReport.from_json(text)
        assert back.to_json() == text
        assert back.passed == rep.passed

    def test_report_passed_logic(self):
        rep = ExperimentReport(kind="k", config={}, seed=0)
        rep.add(Metric(name="informational", estimate=1.0))
        assert rep.passed
        rep.add(Metric(name="bad", estimate=0.0, target=1.0,
                       tolerance=0.1).check_abs())
        assert not rep.passed
