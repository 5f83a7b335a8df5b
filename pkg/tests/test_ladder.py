import math

import numpy as np
import pytest
from scipy import integrate
from scipy.stats import norm

from alpslab import (
    Ladder,
    MixtureTarget,
    ModeSpec,
    SkewConstants,
    Spacing,
    build_ladder,
    ell,
    h,
    h_inverse,
    skew_constants,
)


class TestSpacing:
    def test_standard_formula(self):
        assert ell(3.0, 1.0) == 3.0
        assert ell(1.0, 2.38) == 2.38

    def test_quanta_formula(self):
        assert ell(4.0, 1.0, Spacing.quanta(3.0)) == pytest.approx(8.0)

    def test_quanta_requires_exponent_above_two(self):
        with pytest.raises(ValueError):
            Spacing.quanta(2.0)
        with pytest.raises(ValueError):
            Spacing.quanta(1.5)
        Spacing.quanta(2.0001)  # boundary is strict


class TestBuildLadder:
    def test_hand_iteration(self):
        lad = build_ladder(4, 3.375, ell0=1.0)
        np.testing.assert_allclose(lad.betas, [1.0, 1.5, 2.25, 3.375], rtol=0, atol=0)
        assert lad.k == 3

    def test_degenerate(self):
        lad = build_ladder(100, 1.0)
        assert lad.k == 0
        assert lad.betas.tolist() == [1.0]

    def test_domain_error(self):
        with pytest.raises(ValueError):
            build_ladder(10, 0.5)

    def test_rung_count_growth(self):
        # k ~ sqrt(d) * log(betamax) for ell0 = 1 (Riemann sum of 1/ell)
        d = 10_000
        lad = build_ladder(d, d, ell0=1.0)
        predicted = math.sqrt(d) * math.log(d)
        assert abs(lad.k - predicted) / predicted < 0.05

    def test_recurrence_residuals(self):
        lad = build_ladder(250, 500.0)
        assert np.max(np.abs(lad.recurrence_residuals())) < 1e-12
        assert lad.clamped
        # the clamped top gap is smaller than prescribed
        prescribed = ell(lad.betas[-2], lad.ell0) / math.sqrt(250)
        assert lad.betas[-1] - lad.betas[-2] < prescribed

    def test_monotone(self):
        lad = build_ladder(64, 64.0)
        assert np.all(np.diff(lad.betas) > 0)
        assert lad.betamax == 64.0


class TestH:
    def test_at_one(self):
        assert h(1.0, 2.38) == 0.0
        assert h(-1.0, 1.7, Spacing.quanta(3.0)) == 0.0

    def test_standard_log(self):
        assert h(math.e, 1.0) == pytest.approx(1.0, abs=1e-14)

    def test_quanta_bounded(self):
        # exponent 4: integral of u^-2 from 1 to infinity equals 1
        assert h(1e12, 1.0, Spacing.quanta(4.0)) == pytest.approx(1.0, abs=1e-10)
        assert h(np.inf, 1.0, Spacing.quanta(4.0)) == 1.0

    def test_domain_error(self):
        with pytest.raises(ValueError):
            h(0.5, 1.0)

    @pytest.mark.parametrize("spacing", [Spacing.standard(), Spacing.quanta(3.0)])
    def test_against_quadrature(self, spacing):
        ell0 = 2.38
        for x in np.geomspace(1.0, 1e6, 7)[1:]:
            val, _ = integrate.quad(lambda u: 1.0 / ell(u, ell0, spacing), 1.0, x,
                                    epsabs=1e-13, epsrel=1e-13, limit=300)
            assert h(x, ell0, spacing) == pytest.approx(val, abs=1e-10)

    def test_custom_spacing_quadrature_fallback(self):
        spacing = Spacing("custom", ell_fn=lambda b: b ** 1.2)
        val, _ = integrate.quad(lambda u: 1.0 / u ** 1.2, 1.0, 50.0)
        assert h(50.0, 1.0, spacing) == pytest.approx(val, rel=1e-9)

    def test_strictly_increasing(self):
        xs = np.linspace(1, 100, 200)
        hs = [h(x, 2.38) for x in xs]
        assert np.all(np.diff(hs) > 0)

    @pytest.mark.parametrize("spacing", [Spacing.standard(), Spacing.quanta(3.0)])
    def test_inverse(self, spacing):
        for x in (1.0, 1.7, 20.0, 4096.0):
            y = h(x, 2.38, spacing)
            assert h_inverse(y, 2.38, spacing) == pytest.approx(x, rel=1e-12)

    def test_riemann_property_small_ladder(self):
        # h(beta_i) tracks i/sqrt(d); the stated 5/d envelope applies while
        # i * ell0 stays below ~10 (deviation accumulates as i*ell0/(2d))
        for d in (100, 400):
            lad = build_ladder(d, math.exp(8.0 / math.sqrt(d)), ell0=1.0)
            assert lad.k * lad.ell0 < 10
            hs = lad.h_of(lad.betas[:-1])  # clamped top rung excluded
            target = np.arange(lad.k) / math.sqrt(d)
            assert np.max(np.abs(hs - target)) <= 5.0 / d

    def test_riemann_property_derived_envelope(self):
        # general standard ladders: |h(beta_i) - i/sqrt(d)| <= 1.2*ell0*i/(2d)
        for d, ell0, bmax in ((100, 1.3, 10.0), (400, 2.38, 100.0)):
            lad = build_ladder(d, bmax, ell0=ell0)
            hs = lad.h_of(lad.betas[:-1])
            i = np.arange(lad.k)
            dev = np.abs(hs - i / math.sqrt(d))
            assert np.all(dev <= 1.2 * ell0 * (i + 1) / (2 * d))

    def test_quanta_h_bounded_over_dimensions(self):
        spacing = Spacing.quanta(3.0)
        vals = [h(float(d), 2.38, spacing) for d in (1e2, 1e3, 1e4, 1e5, 1e6)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 2.0 / 2.38  # analytic supremum for exponent 3


class TestSkewConstants:
    def test_acceptance_anchor(self, two_mode_target):
        c = skew_constants(two_mode_target, 2.38)
        # r=1 side: s^2 = 2 Phi(-1.19), the classical 0.234 level
        assert c.s1 ** 2 == pytest.approx(2 * norm.cdf(-1.19), rel=1e-12)
        assert c.s1 == pytest.approx(0.4838, abs=2e-4)
        # r=2 side: s = sqrt(2 Phi(-2.38 / (2 sqrt(2))))
        assert c.s2 == pytest.approx(math.sqrt(2 * norm.cdf(-2.38 / (2 * math.sqrt(2)))),
                                     rel=1e-12)
        assert c.s2 == pytest.approx(0.6326, abs=2e-4)

    def test_symmetric_alpha(self):
        target = MixtureTarget(modes=(ModeSpec(1, 2, 0.5), ModeSpec(1, 2, 0.5)),
                               dimension=4)
        c = skew_constants(target, 2.38)
        assert c.alpha == pytest.approx(0.5)
        assert c.s1 == c.s2

    def test_sqrt_r_convention_flip(self, two_mode_target):
        c = skew_constants(two_mode_target, 2.38, sqrt_r_convention=True)
        assert c.s2 == pytest.approx(math.sqrt(2 * norm.cdf(-2.38 * math.sqrt(2) / 2)),
                                     rel=1e-12)

    def test_rejects_three_modes(self):
        target = MixtureTarget(
            modes=(ModeSpec(1, 1, 0.4), ModeSpec(1, 1, 0.3), ModeSpec(1, 2, 0.3)),
            dimension=4)
        with pytest.raises(ValueError):
            skew_constants(target, 2.38)

    def test_domain(self, two_mode_target):
        c = skew_constants(two_mode_target, 2.38)
        assert c.wmin < 0 < c.wmax
        assert 0 < c.s1 < math.sqrt(2) and 0 < c.s2 < math.sqrt(2)


class TestLadderCsv(object):
    def test_export_schema(self, tmp_path):
        lad = build_ladder(16, 8.0)
        path = tmp_path / "ladder.csv"
        lad.to_csv(path)
        lines = path.read_text().splitlines()
        header = [l for l in lines if not l.startswith("#")][0]
        assert header == "index,beta,ell_of_beta,h_of_beta"
        data = [l for l in lines if not l.startswith("#")][1:]
        assert len(data) == lad.k + 1
        first = data[0].split(",")
        assert float(first[1]) == 1.0 and float(first[3]) == 0.0
