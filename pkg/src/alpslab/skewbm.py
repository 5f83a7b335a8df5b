"""Reflecting skew Brownian motion on [wmin, wmax] via a lattice walk.

The walk lives on a uniform lattice containing 0 and both boundaries.
Away from 0 it steps +-delta with probability 1/2 (martingale increments
of variance dt per step); at 0 the excursion sign is drawn with the skew
weight alpha; an overshoot past a boundary folds back, which on the
lattice means the boundary state steps inward deterministically.  This is
the classical random-walk construction of skew Brownian motion, so no
local-time approximation enters.

Lattice alignment: delta is wmax/n1 with n1 = round(wmax/sqrt(dt)), and
the lower boundary is snapped *inward* to the nearest lattice multiple of
delta, so paths never leave [wmin, wmax].  Both adjustments are recorded
on the config and warned about when they are material.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .ladder import SkewConstants
from .util import write_csv

__all__ = ["SkewBMConfig", "SkewBMPath", "simulate", "marginal_sample",
           "stationary_occupation", "positive_fraction"]


@dataclass
class SkewBMConfig:
    """Walk discretisation for a reflecting skew Brownian motion.

    ``dt`` is the requested step duration; the effective values after
    lattice alignment are in ``dt_eff``, ``delta``, ``n_pos``, ``n_neg``.
    """

    constants: SkewConstants
    dt: float
    horizon: float

    def __post_init__(self):
        c = self.constants
        if not self.dt > 0 or not self.horizon > 0:
            raise ValueError("dt and horizon must be positive")
        bound = min(abs(c.wmin), c.wmax) / 10.0
        if math.sqrt(self.dt) >= bound:
            raise ValueError(
                f"dt too coarse: sqrt(dt) must be < {bound:.4g} for this domain")
        n_pos = max(1, round(c.wmax / math.sqrt(self.dt)))
        delta = c.wmax / n_pos
        n_neg = max(1, math.floor(abs(c.wmin) / delta + 1e-12))
        self.delta = delta
        self.dt_eff = delta * delta
        self.n_pos = n_pos
        self.n_neg = n_neg
        self.wmin_eff = -n_neg * delta
        rel_dt = abs(self.dt_eff - self.dt) / self.dt
        rel_lo = abs(self.wmin_eff - c.wmin) / abs(c.wmin)
        if rel_dt > 0.05 or rel_lo > 0.05:
            warnings.warn(
                f"lattice alignment adjusted dt to {self.dt_eff:.4g} "
                f"(relative change {rel_dt:.2%}) and the lower boundary to "
                f"{self.wmin_eff:.4g} (relative change {rel_lo:.2%})",
                stacklevel=2)

    @property
    def n_steps(self) -> int:
        return int(math.ceil(self.horizon / self.dt_eff))


@dataclass
class SkewBMPath:
    times: np.ndarray
    values: np.ndarray
    config: SkewBMConfig

    def to_csv(self, path, meta: dict | None = None) -> None:
        write_csv(path, ["t", "value"], zip(self.times, self.values), meta=meta)


def _advance(states: np.ndarray, cfg: SkewBMConfig, rng: np.random.Generator,
             active: np.ndarray | None = None) -> np.ndarray:
    """One lattice step for an integer state vector, in place."""
    u = rng.random(states.size)
    step = np.where(u < 0.5, 1, -1)
    step = np.where(states == 0, np.where(u < cfg.constants.alpha, 1, -1), step)
    # boundary states fold: the overshoot reflects to one step inward
    step = np.where(states == cfg.n_pos, -1, step)
    step = np.where(states == -cfg.n_neg, 1, step)
    if active is None:
        states += step
    else:
        states += np.where(active, step, 0)
    return states


def _to_lattice(x: float, cfg: SkewBMConfig) -> int:
    j = round(x / cfg.delta)
    if not -cfg.n_neg <= j <= cfg.n_pos:
        raise ValueError(f"initial point {x} outside the walk domain")
    return int(j)


def simulate(config: SkewBMConfig, rng: np.random.Generator,
             initial: float = 0.0) -> SkewBMPath:
    """One full path of length ``horizon`` recorded at every lattice step."""
    n = config.n_steps
    states = np.empty(n + 1, dtype=np.int64)
    states[0] = _to_lattice(initial, config)
    s = np.array([states[0]])
    for i in range(1, n + 1):
        _advance(s, config, rng)
        states[i] = s[0]
    times = np.arange(n + 1) * config.dt_eff
    return SkewBMPath(times=times, values=states * config.delta, config=config)


def simulate_ensemble(config: SkewBMConfig, n_replicas: int,
                      rng: np.random.Generator, initial: float = 0.0,
                      collect_from: float = 0.0) -> np.ndarray:
    """Lattice states of ``n_replicas`` independent walks at every step
    after ``collect_from``; returns an (n_kept, n_replicas) integer array."""
    n = config.n_steps
    first_kept = int(collect_from / config.dt_eff)
    states = np.full(n_replicas, _to_lattice(initial, config), dtype=np.int64)
    kept = np.empty((max(0, n - first_kept), n_replicas), dtype=np.int64)
    for i in range(1, n + 1):
        _advance(states, config, rng)
        if i > first_kept:
            kept[i - first_kept - 1] = states
    return kept


def marginal_sample(config: SkewBMConfig, t: float, n_replicas: int,
                    rng: np.random.Generator, initial: float = 0.0) -> np.ndarray:
    """Values of ``n_replicas`` independent paths at time ``t``."""
    if t > config.horizon:
        raise ValueError("t beyond the configured horizon")
    n = int(round(t / config.dt_eff))
    states = np.full(n_replicas, _to_lattice(initial, config), dtype=np.int64)
    for _ in range(n):
        _advance(states, config, rng)
    return states * config.delta


def stationary_occupation(constants: SkewConstants) -> float:
    """Long-run fraction of (nonzero) time spent on the positive side.

    alpha*wmax / (alpha*wmax + (1-alpha)*|wmin|), which collapses
    algebraically to the first mode weight w1.
    """
    a = constants.alpha
    num = a * constants.wmax
    return num / (num + (1.0 - a) * abs(constants.wmin))


def positive_fraction(values: np.ndarray) -> float:
    """Fraction of strictly positive values among the nonzero ones."""
    pos = int(np.count_nonzero(values > 0))
    neg = int(np.count_nonzero(values < 0))
    if pos + neg == 0:
        raise ValueError("path never leaves zero")
    return pos / (pos + neg)


def ensemble_to_csv(path, values: np.ndarray, meta: dict | None = None) -> None:
    """Write a marginal ensemble (one value per replica) as CSV."""
    write_csv(path, ["replica", "value"], enumerate(np.ravel(values)), meta=meta)
