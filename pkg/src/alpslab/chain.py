"""The vanilla annealed leap-point temperature chain.

One step, in order: (a) if the chain currently sits on the top rung it
redraws its mode from the mixture weights (the leap move); (b) it redraws
the within-mode state at the current temperature -- either the energy
statistic directly, or all d coordinates when ``state_mode='coords'``;
(c) it proposes a neighbouring rung with probability 1/2 each and accepts
with the tempered-density ratio, rejecting outright any proposal past
either end of the ladder.

`run` produces a Trace embedded in continuous time by attaching
exponential increments of mean 1/d per step (a rate-d Poisson clock).
`LaneEnsemble` advances many independent replicas in lock-step with
vectorised draws; the big verification experiments are built on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .ladder import Ladder
from .model import MixtureTarget, SufficientStat, log_norm_const
from .transform import TransformedPath
from .util import write_csv

__all__ = ["ChainState", "StepInfo", "Trace", "step", "run", "poissonize",
           "LaneEnsemble"]


@dataclass
class ChainState:
    """Current (mode, rung, energy statistic); mode indices are 0-based."""

    mode: int
    rung: int
    stat: SufficientStat


@dataclass(frozen=True)
class StepInfo:
    direction: int
    proposed_rung: int
    in_range: bool
    accepted: bool
    mode_jumped: bool


class _Tables:
    """Per-(mode, rung) constants so the inner loop touches no scipy."""

    def __init__(self, target: MixtureTarget, ladder: Ladder):
        d = target.dimension
        betas = ladder.betas
        J = target.J
        self.lam = np.array([m.lam for m in target.modes])
        self.shape_coord = np.array([1.0 / m.r for m in target.modes])
        self.shape_stat = np.array([d / m.r for m in target.modes])
        self.inv_r = self.shape_coord
        self.scale = 1.0 / np.outer(self.lam, betas)          # (J, k+1)
        self.log_z_d = np.empty((J, betas.size))
        for j, m in enumerate(target.modes):
            self.log_z_d[j] = [d * log_norm_const(m, b) for b in betas]
        self.cum_w = np.cumsum(target.weights)
        self.betas = betas
        self.d = d


def _draw_stat(tables: _Tables, mode: int, rung: int, rng: np.random.Generator,
               coords: bool) -> float:
    if coords:
        g = rng.standard_gamma(tables.shape_coord[mode], size=tables.d)
        g *= tables.scale[mode, rung]
        x = g ** tables.inv_r[mode]               # |x_i - c|, signs irrelevant
        return float(np.sum(x ** (1.0 / tables.inv_r[mode])))
    return float(rng.standard_gamma(tables.shape_stat[mode]) * tables.scale[mode, rung])


def step(state: ChainState, ladder: Ladder, target: MixtureTarget,
         rng: np.random.Generator, state_mode: str = "stat") -> tuple[ChainState, StepInfo]:
    """Advance one step and report what happened.

    Consumes random numbers in a fixed order (mode draw only on the top
    rung; one gamma; one direction uniform; one acceptance uniform only for
    in-range proposals) so that a loop over `step` reproduces `run` exactly.
    """
    tables = _Tables(target, ladder)
    return _step_inner(state, tables, ladder.k, rng, state_mode == "coords")


def _step_inner(state, tables, k, rng, coords):
    mode, rung = state.mode, state.rung
    jumped = False
    if rung == k:
        mode = int(np.searchsorted(tables.cum_w, rng.random(), side="right"))
        jumped = True
    s = _draw_stat(tables, mode, rung, rng, coords)
    direction = 1 if rng.random() < 0.5 else -1
    proposed = rung + direction
    in_range = 0 <= proposed <= k
    accepted = False
    if in_range:
        logr = (tables.betas[rung] - tables.betas[proposed]) * tables.lam[mode] * s \
            + tables.log_z_d[mode, rung] - tables.log_z_d[mode, proposed]
        accepted = np.log(rng.random()) < logr
        if accepted:
            rung = proposed
    new = ChainState(mode=mode, rung=rung, stat=SufficientStat(s))
    return new, StepInfo(direction, proposed, in_range, bool(accepted), jumped)


@dataclass
class Trace:
    """Columnar record of one run; row 0 is the initial state at time 0."""

    t: np.ndarray
    mode: np.ndarray
    rung: np.ndarray
    direction: np.ndarray
    accepted: np.ndarray
    ladder: Ladder
    seed: object = None
    config: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.t.size

    @property
    def beta(self) -> np.ndarray:
        return self.ladder.betas[self.rung]

    def to_csv(self, path, meta: dict | None = None) -> None:
        beta = self.beta
        rows = zip(range(len(self)), self.t, self.mode, self.rung, beta,
                   self.direction, self.accepted.astype(int))
        info = {"seed": self.seed}
        if meta:
            info.update(meta)
        write_csv(path, ["n", "t", "mode", "rung", "beta", "dir", "accepted"],
                  rows, meta=info)

    def to_npz(self, path) -> None:
        np.savez_compressed(path, t=self.t, mode=self.mode, rung=self.rung,
                            direction=self.direction, accepted=self.accepted,
                            betas=self.ladder.betas)


def run(target: MixtureTarget, ladder: Ladder, steps: int, seed=None,
        rng: np.random.Generator | None = None, state_mode: str = "stat",
        initial: tuple[int, int] | None = None) -> Trace:
    """Run the temperature chain for ``steps`` steps and record everything.

    The initial state defaults to rung 0 with the mode drawn from the
    mixture weights.  A fixed seed gives a bit-identical trace.
    """
    if state_mode not in ("stat", "coords"):
        raise ValueError("state_mode must be 'stat' or 'coords'")
    if rng is None:
        rng = np.random.default_rng(seed)
    tables = _Tables(target, ladder)
    k = ladder.k
    d = target.dimension
    coords = state_mode == "coords"

    if initial is None:
        mode = int(np.searchsorted(tables.cum_w, rng.random(), side="right"))
        rung = 0
    else:
        mode, rung = initial
        if not 0 <= rung <= k:
            raise ValueError("initial rung outside the ladder")

    n_rec = steps + 1
    mode_a = np.empty(n_rec, dtype=np.int8)
    rung_a = np.empty(n_rec, dtype=np.int32)
    dir_a = np.zeros(n_rec, dtype=np.int8)
    acc_a = np.zeros(n_rec, dtype=bool)
    mode_a[0], rung_a[0] = mode, rung

    # local bindings keep the per-step cost down
    gamma = rng.standard_gamma
    uniform = rng.random
    log = np.log
    betas = tables.betas
    lam = tables.lam
    lzd = tables.log_z_d
    shape_stat = tables.shape_stat
    scale = tables.scale
    cum_w = tables.cum_w

    for n in range(1, n_rec):
        if rung == k:
            mode = int(np.searchsorted(cum_w, uniform(), side="right"))
        if coords:
            g = gamma(tables.shape_coord[mode], size=d) * scale[mode, rung]
            s = float(np.sum((g ** tables.inv_r[mode]) ** (1.0 / tables.inv_r[mode])))
        else:
            s = gamma(shape_stat[mode]) * scale[mode, rung]
        direction = 1 if uniform() < 0.5 else -1
        proposed = rung + direction
        if 0 <= proposed <= k:
            logr = (betas[rung] - betas[proposed]) * lam[mode] * s \
                + lzd[mode, rung] - lzd[mode, proposed]
            if log(uniform()) < logr:
                rung = proposed
                acc_a[n] = True
        mode_a[n] = mode
        rung_a[n] = rung
        dir_a[n] = direction

    t = np.empty(n_rec)
    t[0] = 0.0
    t[1:] = np.cumsum(rng.exponential(1.0 / d, size=steps))
    config = {
        "dimension": d,
        "modes": [{"lambda": m.lam, "r": m.r, "weight": m.weight, "center": m.center}
                  for m in target.modes],
        "ell0": ladder.ell0,
        "spacing": ladder.spacing.describe(),
        "betamax": ladder.betamax,
        "steps": steps,
        "state_mode": state_mode,
    }
    return Trace(t=t, mode=mode_a, rung=rung_a, direction=dir_a, accepted=acc_a,
                 ladder=ladder, seed=seed, config=config)


def poissonize(trace: Trace, d: int | None = None) -> TransformedPath:
    """Signed inverse-temperature path on the Poisson clock (first stage).

    Right-continuous step function: value +beta in mode 0 and -beta in
    mode 1 at each jump time already attached to the trace.  Sign changes
    can only happen while the chain is on the top rung.
    """
    if len(trace) == 0:
        raise ValueError("empty trace")
    if d is not None and d != trace.config.get("dimension", d):
        raise ValueError("d does not match the trace")
    sign = np.where(trace.mode == 0, 1.0, -1.0)
    values = sign * trace.beta
    dim = trace.config.get("dimension", d)
    return TransformedPath(stage="X", times=trace.t.copy(), values=values,
                           time_scale=float(dim), betamax=trace.ladder.betamax)


class LaneEnsemble:
    """Many independent chains advanced in lock-step with vectorised draws.

    ``acceptance_model='epf'`` draws the energy statistic exactly;
    ``'limit'`` replaces the accept test with its dimension-free limiting
    probability per mode (used for spacings, like the quanta ladder, whose
    finite-d statistic law is not modelled here).  ``state_mode='coords'``
    materialises all d coordinates per lane per step.
    """

    def __init__(self, target: MixtureTarget, ladder: Ladder, lanes: int,
                 rng: np.random.Generator, acceptance_model: str = "epf",
                 state_mode: str = "stat", limit_probs=None):
        if acceptance_model not in ("epf", "limit"):
            raise ValueError("acceptance_model must be 'epf' or 'limit'")
        self.target = target
        self.ladder = ladder
        self.tables = _Tables(target, ladder)
        self.k = ladder.k
        self.lanes = lanes
        self.rng = rng
        self.model = acceptance_model
        self.coords = state_mode == "coords"
        self.modes = np.searchsorted(self.tables.cum_w, rng.random(lanes),
                                     side="right").astype(np.int64)
        self.rungs = np.zeros(lanes, dtype=np.int64)
        if limit_probs is not None:
            self.limit_probs = np.asarray(limit_probs, dtype=float)
        else:
            self.limit_probs = np.array([
                2.0 * norm.cdf(-ladder.ell0 / (2.0 * np.sqrt(m.r)))
                for m in target.modes
            ])

    def set_state(self, modes, rungs) -> None:
        self.modes = np.broadcast_to(np.asarray(modes, dtype=np.int64),
                                     (self.lanes,)).copy()
        self.rungs = np.broadcast_to(np.asarray(rungs, dtype=np.int64),
                                     (self.lanes,)).copy()

    def step(self):
        """Advance every lane once; returns (directions, in_range, accepted)."""
        rng = self.rng
        t = self.tables
        k = self.k
        at_top = self.rungs == k
        if at_top.any():
            draws = np.searchsorted(t.cum_w, rng.random(int(at_top.sum())),
                                    side="right")
            self.modes[at_top] = draws
        dirs = np.where(rng.random(self.lanes) < 0.5, 1, -1)
        proposed = self.rungs + dirs
        in_range = (proposed >= 0) & (proposed <= k)
        target_rung = np.clip(proposed, 0, k)
        if self.model == "epf":
            if self.coords:
                g = rng.standard_gamma(t.shape_coord[self.modes][:, None],
                                       size=(self.lanes, t.d))
                g *= t.scale[self.modes, self.rungs][:, None]
                x = g ** t.inv_r[self.modes][:, None]
                s = np.sum(x ** (1.0 / t.inv_r[self.modes][:, None]), axis=1)
            else:
                s = rng.standard_gamma(t.shape_stat[self.modes]) \
                    * t.scale[self.modes, self.rungs]
            logr = (t.betas[self.rungs] - t.betas[target_rung]) * t.lam[self.modes] * s \
                + t.log_z_d[self.modes, self.rungs] - t.log_z_d[self.modes, target_rung]
            accepted = in_range & (np.log(rng.random(self.lanes)) < logr)
        else:
            accepted = in_range & (rng.random(self.lanes) < self.limit_probs[self.modes])
        self.rungs = np.where(accepted, target_rung, self.rungs)
        return dirs, in_range, accepted
