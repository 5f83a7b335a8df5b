import math

import numpy as np
import pytest
from scipy import stats

from alpslab import (
    SkewBMConfig,
    SkewConstants,
    marginal_sample,
    positive_fraction,
    simulate,
    stationary_occupation,
)
from alpslab.harness import excursion_statistics
from alpslab.skewbm import simulate_ensemble


def constants_for(alpha: float, s1: float = 0.5, s2: float = 0.6) -> SkewConstants:
    return SkewConstants(s1=s1, s2=s2, alpha=alpha)


class TestConfig:
    def test_lattice_alignment(self):
        c = constants_for(0.5)
        cfg = SkewBMConfig(constants=c, dt=1e-3, horizon=1.0)
        # positive boundary exactly on the lattice
        assert cfg.n_pos * cfg.delta == pytest.approx(c.wmax, rel=1e-14)
        # negative boundary snapped inward: paths can never leave [wmin, wmax]
        assert abs(cfg.wmin_eff) <= abs(c.wmin) + 1e-14
        assert abs(cfg.wmin_eff - c.wmin) <= cfg.delta
        assert cfg.dt_eff == pytest.approx(cfg.delta ** 2)

    def test_dt_too_coarse(self):
        with pytest.raises(ValueError, match="too coarse"):
            SkewBMConfig(constants=constants_for(0.5), dt=0.1, horizon=1.0)

    def test_material_adjustment_warns(self):
        # coarse lattice on a short negative side forces a visible snap
        with pytest.warns(UserWarning, match="lattice alignment"):
            SkewBMConfig(constants=constants_for(0.5, s1=0.71, s2=1.40),
                         dt=0.068 ** 2, horizon=1.0)


class TestSimulate:
    def test_steps_are_lattice_increments(self):
        cfg = SkewBMConfig(constants=constants_for(0.6), dt=1e-3, horizon=2.0)
        path = simulate(cfg, np.random.default_rng(0), initial=0.0)
        inc = np.diff(path.values)
        # martingale increments of size exactly +-delta (variance dt each)
        assert set(np.round(np.abs(inc) / cfg.delta).astype(int)) == {1}
        assert path.values.size == cfg.n_steps + 1

    def test_never_exits_domain(self):
        c = constants_for(0.7)
        cfg = SkewBMConfig(constants=c, dt=4e-3, horizon=50.0)
        path = simulate(cfg, np.random.default_rng(3), initial=0.0)
        assert path.values.max() <= c.wmax + 1e-12
        assert path.values.min() >= c.wmin - 1e-12
        # both boundaries actually get visited on this horizon
        assert path.values.max() == pytest.approx(c.wmax)
        assert path.values.min() == pytest.approx(cfg.wmin_eff)

    def test_excursion_sign_law(self):
        alpha = 0.7
        cfg = SkewBMConfig(constants=constants_for(alpha), dt=4e-3, horizon=46.0)
        rng = np.random.default_rng(11)
        pos = total = 0
        # ensemble of short paths: excursions pooled across replicas
        states = simulate_ensemble(cfg, 512, rng, initial=0.0)
        for lane in range(states.shape[1]):
            vals = np.concatenate([[0], states[:, lane]])
            if np.count_nonzero(vals == 0) < 2:
                continue  # lane never returned to the junction
            st = excursion_statistics(vals * cfg.delta)
            pos += round(st.fraction_positive * st.n_excursions)
            total += st.n_excursions
        assert total > 100_000
        se = math.sqrt(alpha * (1 - alpha) / total)
        assert abs(pos / total - alpha) < 3 * se
        # binomial test at the 1% level
        p = stats.binomtest(pos, total, alpha).pvalue
        assert p > 0.01

    def test_symmetric_excursions(self):
        cfg = SkewBMConfig(constants=constants_for(0.5, 0.5, 0.5), dt=4e-3,
                           horizon=5.0)
        states = simulate_ensemble(cfg, 128, np.random.default_rng(4), initial=0.0)
        st = excursion_statistics(
            np.concatenate([[0], states[:, 0]]) * cfg.delta)
        assert st.n_excursions > 50
        assert abs(st.fraction_positive - 0.5) < 4 * math.sqrt(0.25 / st.n_excursions)


class TestOccupation:
    def test_identity_is_exact_algebra(self):
        for w1 in (0.3, 0.5, 0.7, 0.9):
            for (s1, s2) in ((0.5, 0.6), (0.48, 0.63), (1.0, 1.0)):
                alpha = w1 * s1 / (w1 * s1 + (1 - w1) * s2)
                c = SkewConstants(s1=s1, s2=s2, alpha=alpha)
                assert stationary_occupation(c) == pytest.approx(w1, rel=1e-12)

    def test_simulation_matches_identity(self):
        # reduced-scale version of the long-run occupation check: a replica
        # ensemble supplies the same total path time at tighter wall-clock
        w1, s1, s2 = 0.7, 0.4838, 0.6325
        alpha = w1 * s1 / (w1 * s1 + (1 - w1) * s2)
        c = SkewConstants(s1=s1, s2=s2, alpha=alpha)
        cfg = SkewBMConfig(constants=c, dt=1.6e-3, horizon=120.0)
        states = simulate_ensemble(cfg, 384, np.random.default_rng(9),
                                   initial=0.0, collect_from=20.0)
        frac = positive_fraction(states)
        assert abs(frac - w1) < 0.01

    def test_positive_fraction_rejects_constant_zero(self):
        with pytest.raises(ValueError):
            positive_fraction(np.zeros(10))


class TestMarginal:
    def test_t0_point_mass(self):
        c = constants_for(0.5)
        cfg = SkewBMConfig(constants=c, dt=1e-3, horizon=1.0)
        vals = marginal_sample(cfg, 0.0, 64, np.random.default_rng(0),
                               initial=c.wmax)
        assert np.all(vals == vals[0])
        assert vals[0] == pytest.approx(c.wmax)

    def test_beyond_horizon(self):
        cfg = SkewBMConfig(constants=constants_for(0.5), dt=1e-3, horizon=1.0)
        with pytest.raises(ValueError):
            marginal_sample(cfg, 2.0, 8, np.random.default_rng(0))

    def test_symmetric_marginal(self):
        c = SkewConstants(s1=0.5, s2=0.5, alpha=0.5)
        cfg = SkewBMConfig(constants=c, dt=2e-3, horizon=40.0)
        rng = np.random.default_rng(5)
        vals = marginal_sample(cfg, 40.0, 4000, rng, initial=0.0)
        flipped = -vals
        assert stats.ks_2samp(vals, flipped).pvalue > 0.01

    def test_long_t_positive_mass(self):
        w1 = 0.7
        s1, s2 = 0.4838, 0.6325
        alpha = w1 * s1 / (w1 * s1 + (1 - w1) * s2)
        c = SkewConstants(s1=s1, s2=s2, alpha=alpha)
        cfg = SkewBMConfig(constants=c, dt=2e-3, horizon=60.0)
        vals = marginal_sample(cfg, 60.0, 4000, np.random.default_rng(6),
                               initial=0.0)
        frac = positive_fraction(vals)
        assert abs(frac - w1) < 0.035
