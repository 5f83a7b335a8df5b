import math

import numpy as np
import pytest

from alpslab import (
    MixtureTarget,
    ModeSpec,
    TransformedPath,
    build_ladder,
    h,
    invert_to_X,
    poissonize,
    run,
    skew_constants,
    to_H,
    to_W,
    to_Z,
)
from alpslab.transform import h_to_x, w_to_z, z_to_h


@pytest.fixture
def setup(two_mode_target):
    ladder = build_ladder(16, 16.0)
    constants = skew_constants(two_mode_target, ladder.ell0)
    trace = run(two_mode_target, ladder, 50_000, seed=42)
    return two_mode_target, ladder, constants, trace


def _path(values, stage="X", betamax=None, constants=None):
    times = np.arange(len(values), dtype=float)
    return TransformedPath(stage=stage, times=times, values=np.array(values, float),
                           time_scale=1.0, betamax=betamax, constants=constants)


class TestPointMaps:
    def test_H_endpoints(self):
        ladder = build_ladder(16, 16.0, ell0=1.0)
        ph = to_H(_path([16.0, -1.0, 1.0], betamax=16.0), ladder)
        assert ph.values[0] == pytest.approx(2.0)
        assert ph.values[1] == pytest.approx(-1.0)
        assert ph.values[2] == pytest.approx(1.0)

    def test_H_halfway(self):
        # ell0=1 standard: h = log, betamax = e^2, x = e -> 1 + 1/2
        ladder = build_ladder(4, math.e ** 2, ell0=1.0)
        ph = to_H(_path([math.e], betamax=ladder.betamax), ladder)
        assert ph.values[0] == pytest.approx(1.5, abs=1e-12)

    def test_H_time_rescale(self):
        ladder = build_ladder(16, 16.0)
        h_max = h(16.0, ladder.ell0)
        px = _path([1.0, 16.0], betamax=16.0)
        ph = to_H(px, ladder)
        np.testing.assert_allclose(ph.times, px.times / h_max**2)
        assert ph.time_scale == pytest.approx(h_max**2)

    def test_H_rejects_below_one(self):
        ladder = build_ladder(16, 16.0)
        with pytest.raises(ValueError):
            to_H(_path([0.5], betamax=16.0), ladder)

    def test_Z_values(self):
        pz = to_Z(_path([2.0, 1.0, -1.0, -1.25], stage="H"))
        np.testing.assert_allclose(pz.values, [0.0, 1.0, -1.0, -0.75])

    def test_W_values(self, setup):
        _, _, constants, _ = setup
        pw = to_W(_path([1.0, -1.0, 0.0], stage="Z"), constants)
        assert pw.values[0] == pytest.approx(constants.wmax)
        assert pw.values[1] == pytest.approx(constants.wmin)
        assert pw.values[2] == 0.0

    def test_stage_guards(self, setup):
        _, ladder, constants, _ = setup
        with pytest.raises(ValueError):
            to_Z(_path([1.0], stage="X", betamax=16.0))
        with pytest.raises(ValueError):
            to_W(_path([1.0], stage="H"), constants)
        with pytest.raises(ValueError):
            to_H(_path([1.0], stage="Z"), ladder)


class TestPipeline:
    def test_zero_set_is_top_rung(self, setup):
        target, ladder, constants, trace = setup
        pw = to_W(to_Z(to_H(poissonize(trace), ladder)), constants)
        at_top = trace.rung == ladder.k
        assert np.array_equal(pw.values == 0.0, at_top)
        # sign equals the mode indicator away from the junction
        sign = np.sign(pw.values)
        expect = np.where(trace.mode == 0, 1.0, -1.0)
        assert np.all(sign[~at_top] == expect[~at_top])

    def test_total_time_scale(self, setup):
        target, ladder, constants, trace = setup
        pw = to_W(to_Z(to_H(poissonize(trace), ladder)), constants)
        h_max = h(ladder.betamax, ladder.ell0)
        assert pw.time_scale == pytest.approx(target.dimension * h_max**2, rel=1e-12)

    def test_inverse_recovers_X(self, setup):
        target, ladder, constants, trace = setup
        px = poissonize(trace)
        pw = to_W(to_Z(to_H(px, ladder)), constants)
        back = invert_to_X(pw, ladder, constants)
        off_top = trace.rung != ladder.k
        # bijective per sign away from the junction; mode is lost at W = 0
        assert np.max(np.abs(back.values[off_top] - px.values[off_top])) < 1e-10
        assert np.max(np.abs(np.abs(back.values) - np.abs(px.values))) < 1e-10
        np.testing.assert_allclose(back.times, px.times, rtol=1e-12)

    def test_value_level_inverses(self, setup):
        _, ladder, constants, _ = setup
        w = np.array([0.3, -0.8, constants.wmax, constants.wmin])
        z = w_to_z(w, constants)
        hh = z_to_h(z)
        x = h_to_x(hh, ladder)
        assert np.all(np.abs(x) >= 1.0 - 1e-12)
        # round trip through the forward maps
        hmax = h(ladder.betamax, ladder.ell0)
        hv = np.sign(x) * (1.0 + np.array([h(abs(v), ladder.ell0) for v in x]) / hmax)
        zz = 2.0 * np.sign(hv) - hv
        ww = np.where(zz > 0, zz / constants.s1,
                      np.where(zz < 0, zz / constants.s2, 0.0))
        np.testing.assert_allclose(ww, w, atol=1e-12)

    def test_range_validation(self, setup):
        _, ladder, constants, trace = setup
        px = poissonize(trace)
        px.validate_range()
        ph = to_H(px, ladder)
        ph.validate_range()
        pz = to_Z(ph)
        pz.validate_range()
        pw = to_W(pz, constants)
        pw.validate_range()
        bad = _path([1.5], stage="Z")
        with pytest.raises(ValueError):
            bad.validate_range()


class TestExport:
    def test_csv(self, setup, tmp_path):
        _, ladder, constants, trace = setup
        pw = to_W(to_Z(to_H(poissonize(trace), ladder)), constants)
        p = tmp_path / "w.csv"
        pw.to_csv(p)
        lines = [l for l in p.read_text().splitlines() if not l.startswith("#")]
        assert lines[0] == "t,value"
        assert len(lines) == len(pw.values) + 1
