"""Verification experiments tying the chain to its limit theory.

Everything here reduces a simulation to a few numbers with standard
errors and pre-declared tolerances: per-rung acceptance rates against
their exact and limiting values, round-trip times across dimensions
against the d*(log d)^2 and d scalings, marginals of the flattened path
against the skew Brownian reference, and excursion/occupation laws.

Experiment entry points take a master integer seed and derive one
independent stream per replica via ``util.spawn_rngs`` (SeedSequence
keyed on (seed, stream-tag, replica index)), so results are reproducible
and replica counts can grow without disturbing existing streams.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.stats import ks_2samp, norm

from .chain import LaneEnsemble, Trace
from .ladder import Ladder, SkewConstants, Spacing, build_ladder, h, skew_constants
from .model import MixtureTarget, exact_accept_prob
from .skewbm import SkewBMConfig, _advance, _to_lattice, stationary_occupation
from .util import config_hash, spawn_rngs, write_csv

__all__ = [
    "Metric", "ExperimentReport", "RoundTrip", "AcceptanceRow",
    "acceptance_profile", "round_trips", "complexity_scan", "ScalingRow",
    "weak_convergence_test", "excursion_statistics", "ExcursionStats",
    "excursion_experiment", "occupation_identity_test", "w_value_table",
    "oracle_equivalence_test",
]


# ---------------------------------------------------------------------------
# reports

@dataclass
class Metric:
    name: str
    estimate: float
    se: float | None = None
    n: int | None = None
    target: float | None = None
    tolerance: float | None = None
    passed: bool | None = None

    def check_abs(self) -> "Metric":
        """Set ``passed`` from |estimate - target| <= tolerance."""
        self.passed = abs(self.estimate - self.target) <= self.tolerance
        return self


@dataclass
class ExperimentReport:
    """Aggregated result of one experiment; serialises losslessly to JSON."""

    kind: str
    config: dict
    seed: int
    metrics: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(m.passed is not False for m in self.metrics)

    def add(self, metric: Metric) -> Metric:
        self.metrics.append(metric)
        return metric

    def to_json(self) -> str:
        payload = {
            "kind": self.kind,
            "config": self.config,
            "config_hash": config_hash(self.config),
            "seed": self.seed,
            "passed": self.passed,
            "metrics": [asdict(m) for m in self.metrics],
            "tables": self.tables,
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "ExperimentReport":
        obj = json.loads(text)
        rep = ExperimentReport(kind=obj["kind"], config=obj["config"],
                               seed=obj["seed"], tables=obj.get("tables", {}))
        for m in obj["metrics"]:
            rep.metrics.append(Metric(**m))
        return rep

    def write(self, path) -> None:
        with open(path, "w") as f:
            f.write(self.to_json())
            f.write("\n")


# ---------------------------------------------------------------------------
# acceptance profile

@dataclass
class AcceptanceRow:
    rung: int
    mode: int
    proposals: int
    accepts: int
    rate: float
    predicted_limit: float
    predicted_exact: float
    z_score: float
    insufficient: bool
    clamp_adjacent: bool


def acceptance_profile(trace: Trace, ladder: Ladder, target: MixtureTarget,
                       min_proposals: int = 1000) -> list[AcceptanceRow]:
    """Per-(rung, mode) acceptance of in-range proposals, with predictions.

    ``predicted_limit`` is the dimension-free value 2*Phi(-ell0/(2*sqrt(r)));
    ``predicted_exact`` marginalises the actual Gamma law of the statistic
    at this dimension, so the z-score is computed against it.  Rungs with
    fewer than ``min_proposals`` in-range proposals are flagged, not failed.
    Rungs touching the clamped top gap are marked ``clamp_adjacent``.
    """
    k = ladder.k
    d = target.dimension
    acc = trace.accepted[1:]
    drn = trace.direction[1:].astype(np.int64)
    mode = trace.mode[1:].astype(np.int64)
    from_rung = trace.rung[1:].astype(np.int64) - drn * acc
    proposed = from_rung + drn
    in_range = (proposed >= 0) & (proposed <= k)

    # one bincount per tally: cell = ((mode, rung), direction)
    n_cells = target.J * (k + 1) * 2
    code = (mode * (k + 1) + from_rung) * 2 + (drn + 1) // 2
    prop_counts = np.bincount(code[in_range], minlength=n_cells)
    acc_counts = np.bincount(code[in_range & acc], minlength=n_cells)

    limit = np.array([2.0 * norm.cdf(-ladder.ell0 / (2.0 * math.sqrt(m.r)))
                      for m in target.modes])
    rows = []
    for j in range(target.J):
        for i in range(k + 1):
            base = (j * (k + 1) + i) * 2
            n_down, n_up = int(prop_counts[base]), int(prop_counts[base + 1])
            a_down, a_up = int(acc_counts[base]), int(acc_counts[base + 1])
            n, a = n_up + n_down, a_up + a_down
            if n == 0:
                continue
            p_up = exact_accept_prob(target.modes[j], ladder.betas[i],
                                     ladder.betas[min(i + 1, k)], d) if i < k else 0.0
            p_down = exact_accept_prob(target.modes[j], ladder.betas[i],
                                       ladder.betas[max(i - 1, 0)], d) if i > 0 else 0.0
            pred = (n_up * p_up + n_down * p_down) / n
            se = math.sqrt(max(pred * (1 - pred), 1e-12) / n)
            rows.append(AcceptanceRow(
                rung=i, mode=j, proposals=n, accepts=a, rate=a / n,
                predicted_limit=float(limit[j]), predicted_exact=pred,
                z_score=(a / n - pred) / se,
                insufficient=n < min_proposals,
                clamp_adjacent=ladder.clamped and i >= k - 1,
            ))
    return rows


def profile_to_csv(path, rows: list[AcceptanceRow], meta=None) -> None:
    write_csv(path,
              ["rung", "mode", "proposals", "accepts", "rate",
               "predicted_limit", "predicted_exact", "z_score",
               "insufficient", "clamp_adjacent"],
              [(r.rung, r.mode, r.proposals, r.accepts, r.rate,
                r.predicted_limit, r.predicted_exact, r.z_score,
                int(r.insufficient), int(r.clamp_adjacent)) for r in rows],
              meta=meta)


def interior_rate(rows: list[AcceptanceRow], k: int) -> tuple[float, int]:
    """Pooled acceptance over rungs excluding the ends and the clamped gap."""
    ns = [r for r in rows if 0 < r.rung < k and not r.clamp_adjacent]
    total = sum(r.proposals for r in ns)
    if total == 0:
        raise ValueError("no interior proposals in profile")
    return sum(r.accepts for r in ns) / total, total


# ---------------------------------------------------------------------------
# round trips

@dataclass(frozen=True)
class RoundTrip:
    """One bottom -> top -> bottom leg of the temperature walk."""

    start: int
    jump: int
    end: int
    steps: int
    duration: float

    def __post_init__(self):
        if not self.start < self.jump < self.end:
            raise ValueError("round trip indices must be ordered start < jump < end")


def round_trips(trace: Trace) -> list[RoundTrip]:
    """Maximal non-overlapping round trips extracted by a three-phase scan.

    Each trip runs from a visit to rung 0, through its first subsequent
    visit to the top rung, to the next return to rung 0; that return then
    anchors the next trip.
    """
    k = trace.ladder.k
    rung = trace.rung
    t = trace.t
    trips = []
    zeros = np.flatnonzero(rung == 0)
    if zeros.size == 0 or k == 0:
        return trips
    tops = np.flatnonzero(rung == k)
    start = int(zeros[0])
    while True:
        nxt_top = tops[np.searchsorted(tops, start)] if np.searchsorted(tops, start) < tops.size else None
        if nxt_top is None:
            break
        after = zeros[np.searchsorted(zeros, int(nxt_top))] if np.searchsorted(zeros, int(nxt_top)) < zeros.size else None
        if after is None:
            break
        jump, end = int(nxt_top), int(after)
        trips.append(RoundTrip(start=start, jump=jump, end=end,
                               steps=end - start, duration=float(t[end] - t[start])))
        start = end
    return trips


# ---------------------------------------------------------------------------
# complexity scan

@dataclass
class ScalingRow:
    d: int
    k: int
    n_trips: int
    censored_lanes: int
    mean_steps: float
    se_steps: float
    mean_duration: float
    ratio_dlog2: float
    ratio_d: float


def _round_trip_lane_scan(ens: LaneEnsemble, steps: int, d: int,
                          rng: np.random.Generator):
    """Stream round trips off a lane ensemble without storing a trace."""
    k = ens.k
    lanes = ens.lanes
    phase = np.zeros(lanes, dtype=np.int8)       # 0 seeking top, 1 seeking bottom
    start = np.zeros(lanes, dtype=np.int64)
    trips_per_lane = np.zeros(lanes, dtype=np.int64)
    trip_steps: list[int] = []
    for n in range(1, steps + 1):
        ens.step()
        at_top = ens.rungs == k
        phase = np.where(at_top & (phase == 0), 1, phase)
        done = (ens.rungs == 0) & (phase == 1)
        if done.any():
            for lane in np.flatnonzero(done):
                trip_steps.append(n - int(start[lane]))
                start[lane] = n
            trips_per_lane[done] += 1
            phase[done] = 0
    censored = int((trips_per_lane == 0).sum())
    arr = np.array(trip_steps, dtype=np.int64)
    # Poissonised durations: a trip of s steps lasts Gamma(s, 1/d) time
    durations = rng.standard_gamma(arr.astype(float)) / d if arr.size else np.array([])
    return arr, durations, censored


def complexity_scan(target: MixtureTarget, dims, spacing: Spacing, replicas: int,
                    seed: int, ell0: float = 2.38, betamax_factor: float = 1.0,
                    trips_per_lane: int = 10, steps_per_lane: int | None = None,
                    acceptance_model: str | None = None, state_mode: str = "stat",
                    threads: int = 1) -> list[ScalingRow]:
    """Mean round-trip step counts across dimensions, with scaling ratios.

    ``betamax = betamax_factor * d`` per dimension.  The exact energy-
    statistic acceptance is used for standard spacing; ladders whose
    spacing presumes the transformed swap move (quanta) use the limiting
    per-mode acceptance probabilities instead.  ``ratio_dlog2`` is
    T_d / (d log^2 d), ``ratio_d`` is T_d / d.
    """
    if len(dims) < 2:
        raise ValueError("complexity scan needs at least two dimensions")
    model = acceptance_model or ("epf" if spacing.kind == "standard" else "limit")
    rngs = spawn_rngs(seed, len(dims), stream="complexity")

    def one_dim(idx: int) -> ScalingRow:
        d = int(dims[idx])
        rng = rngs[idx]
        scaled = MixtureTarget(modes=target.modes, dimension=d)
        ladder = build_ladder(d, betamax_factor * d, ell0, spacing)
        k = ladder.k
        ens = LaneEnsemble(scaled, ladder, replicas, rng, acceptance_model=model,
                           state_mode=state_mode)
        if steps_per_lane is None:
            a_bar = float(np.mean(ens.limit_probs))
            expected_trip = 2.0 * k * k / a_bar + 8.0 * k / a_bar
            steps = int(expected_trip * (trips_per_lane + 1.5))
        else:
            steps = steps_per_lane
        arr, durations, censored = _round_trip_lane_scan(ens, steps, d, rng)
        if arr.size == 0:
            return ScalingRow(d=d, k=k, n_trips=0, censored_lanes=replicas,
                              mean_steps=float("nan"), se_steps=float("nan"),
                              mean_duration=float("nan"),
                              ratio_dlog2=float("nan"), ratio_d=float("nan"))
        mean = float(arr.mean())
        se = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else float("nan")
        return ScalingRow(d=d, k=k, n_trips=int(arr.size), censored_lanes=censored,
                          mean_steps=mean, se_steps=se,
                          mean_duration=float(durations.mean()),
                          ratio_dlog2=mean / (d * math.log(d) ** 2),
                          ratio_d=mean / d)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            rows = list(ex.map(one_dim, range(len(dims))))
    else:
        rows = [one_dim(i) for i in range(len(dims))]
    return rows


def ratio_spread(rows: list[ScalingRow], which: str = "ratio_dlog2") -> float:
    vals = np.array([getattr(r, which) for r in rows])
    if np.any(~np.isfinite(vals)):
        return float("inf")
    return float(vals.max() / vals.min())


def scan_to_csv(path, rows: list[ScalingRow], meta=None) -> None:
    write_csv(path,
              ["d", "k", "n_trips", "censored_lanes", "mean_steps", "se_steps",
               "mean_duration", "ratio_dlog2", "ratio_d"],
              [(r.d, r.k, r.n_trips, r.censored_lanes, r.mean_steps, r.se_steps,
                r.mean_duration, r.ratio_dlog2, r.ratio_d) for r in rows],
              meta=meta)


# ---------------------------------------------------------------------------
# transformed-path values and marginals

def w_value_table(ladder: Ladder, constants: SkewConstants) -> np.ndarray:
    """W value of each (mode, rung): shape (2, k+1); exactly 0 on the top rung."""
    h_max = h(ladder.betamax, ladder.ell0, ladder.spacing)
    hv = np.array([h(b, ladder.ell0, ladder.spacing) for b in ladder.betas])
    z_pos = 1.0 - hv / h_max
    table = np.empty((2, ladder.k + 1))
    table[0] = z_pos / constants.s1
    table[1] = -z_pos / constants.s2
    table[:, ladder.k] = 0.0
    return table


def _chain_w_marginals(target, ladder, constants, t_values, lanes, rng):
    """Per-lane W values at each rescaled time, from (mode 0, rung 0).

    Each lane advances by a Poisson(d * h(betamax)^2 * t) number of raw
    steps, coupled across the increasing t values so the snapshots are
    marginals of one path.
    """
    d = target.dimension
    h_max = h(ladder.betamax, ladder.ell0, ladder.spacing)
    rate = d * h_max * h_max
    table = w_value_table(ladder, constants)
    ens = LaneEnsemble(target, ladder, lanes, rng)
    ens.set_state(np.zeros(lanes, dtype=np.int64), np.zeros(lanes, dtype=np.int64))
    ts = sorted(t_values)
    counts = np.zeros(lanes, dtype=np.int64)
    snapshots = {}
    prev_t = 0.0
    for t in ts:
        counts = counts + rng.poisson(rate * (t - prev_t), size=lanes)
        prev_t = t
        snapshots[t] = counts.copy()
    max_steps = int(counts.max())
    out = {t: np.empty(lanes) for t in ts}
    pending = {t: snapshots[t] for t in ts}
    for t in ts:
        ready = pending[t] == 0
        if ready.any():
            out[t][ready] = table[ens.modes[ready], ens.rungs[ready]]
    for n in range(1, max_steps + 1):
        active = counts >= n
        # freeze finished lanes by stepping only active ones
        if active.all():
            ens.step()
        else:
            keep_m = ens.modes.copy()
            keep_r = ens.rungs.copy()
            ens.step()
            ens.modes = np.where(active, ens.modes, keep_m)
            ens.rungs = np.where(active, ens.rungs, keep_r)
        for t in ts:
            hit = pending[t] == n
            if hit.any():
                out[t][hit] = table[ens.modes[hit], ens.rungs[hit]]
    return out


def _skewbm_marginals(config: SkewBMConfig, t_values, lanes, rng, initial):
    ts = sorted(t_values)
    states = np.full(lanes, _to_lattice(initial, config), dtype=np.int64)
    out = {}
    step_marks = [int(round(t / config.dt_eff)) for t in ts]
    n = 0
    for t, mark in zip(ts, step_marks):
        while n < mark:
            _advance(states, config, rng)
            n += 1
        out[t] = states * config.delta
    return out


@dataclass
class KSRow:
    d: int
    t: float
    ks: float
    n_chain: int
    n_ref: int


def weak_convergence_test(target: MixtureTarget, dims, t_values, replicas: int,
                          seed: int, ell0: float = 2.38,
                          betamax_factor: float = 1.0, bm_dt: float = 2.5e-4,
                          bm_replicas: int | None = None,
                          constants: SkewConstants | None = None) -> list[KSRow]:
    """Two-sample KS distance between chain W-marginals and the reference.

    Chains start at (mode 0, rung 0); the reference starts at wmax.  The
    same constants drive both sides; passing explicit mismatched constants
    is a config error.
    """
    derived = skew_constants(target, ell0)
    if constants is not None:
        if not (math.isclose(constants.s1, derived.s1, rel_tol=1e-12)
                and math.isclose(constants.s2, derived.s2, rel_tol=1e-12)
                and math.isclose(constants.alpha, derived.alpha, rel_tol=1e-12)):
            raise ValueError("explicit skew constants disagree with the target")
    constants = derived
    bm_replicas = bm_replicas or replicas
    horizon = max(t_values) * 1.01 + 1e-9
    rows = []
    rngs = spawn_rngs(seed, len(dims) + 1, stream="weak-convergence")
    bm_cfg = SkewBMConfig(constants=constants, dt=bm_dt, horizon=horizon)
    ref = _skewbm_marginals(bm_cfg, t_values, bm_replicas, rngs[-1],
                            initial=constants.wmax)
    for i, d in enumerate(dims):
        scaled = MixtureTarget(modes=target.modes, dimension=int(d))
        ladder = build_ladder(int(d), betamax_factor * int(d), ell0)
        chain = _chain_w_marginals(scaled, ladder, constants, t_values,
                                   replicas, rngs[i])
        for t in sorted(t_values):
            if t == 0:
                ks = 0.0
            else:
                ks = float(ks_2samp(chain[t], ref[t]).statistic)
            rows.append(KSRow(d=int(d), t=float(t), ks=ks,
                              n_chain=replicas, n_ref=bm_replicas))
    return rows


# ---------------------------------------------------------------------------
# excursions

@dataclass(frozen=True)
class ExcursionStats:
    n_excursions: int
    fraction_positive: float


def excursion_statistics(values, min_peak: float = 0.0) -> ExcursionStats:
    """Count completed excursions from 0 in a path and their sign split.

    An excursion is a maximal run of nonzero values delimited by zeros;
    incomplete runs at either end of the path are dropped.  Only
    excursions whose peak |value| reaches ``min_peak`` are counted --
    the limit's w*s excursion law concerns excursions of macroscopic
    scale, while arbitrarily small wiggles follow the departure law.
    """
    v = np.asarray(values, dtype=float)
    zero = v == 0.0
    if zero.sum() < 2:
        raise ValueError("path must visit 0 at least twice")
    first, last = np.flatnonzero(zero)[[0, -1]]
    v = v[first:last + 1]
    nz = v != 0.0
    if not nz.any():
        return ExcursionStats(0, float("nan"))
    # segment boundaries: starts where nz turns on, ends where it turns off
    d = np.diff(nz.astype(np.int8))
    starts = np.flatnonzero(d == 1) + 1
    ends = np.flatnonzero(d == -1) + 1
    n_pos = n_count = 0
    for s, e in zip(starts, ends):
        seg = v[s:e]
        if np.max(np.abs(seg)) >= min_peak:
            n_count += 1
            n_pos += bool(seg[0] > 0)
    frac = n_pos / n_count if n_count else float("nan")
    return ExcursionStats(n_excursions=n_count, fraction_positive=frac)


def excursion_experiment(target: MixtureTarget, ladder: Ladder,
                         constants: SkewConstants, lanes: int, steps: int,
                         seed: int, min_peak: float) -> ExcursionStats:
    """Streamed excursion counts for long runs (no trace storage).

    Tracks, per lane, the deepest rung reached since the last top-rung
    visit; an excursion completes on the next top visit and is counted
    when its peak |W| reached ``min_peak``.  The excursion sign is the
    mode, which is constant between top visits.
    """
    rng = spawn_rngs(seed, 1, stream="excursions")[0]
    table = w_value_table(ladder, constants)
    peak_ok = np.abs(table) >= min_peak       # (2, k+1)
    k = ladder.k
    ens = LaneEnsemble(target, ladder, lanes, rng)
    ens.set_state(np.zeros(lanes, dtype=np.int64),
                  np.full(lanes, k, dtype=np.int64))
    min_rung = np.full(lanes, k, dtype=np.int64)
    away = np.zeros(lanes, dtype=bool)
    n_pos = n_count = 0
    for _ in range(steps):
        ens.step()
        at_top = ens.rungs == k
        finishing = away & at_top
        if finishing.any():
            idx = np.flatnonzero(finishing)
            counted = peak_ok[ens.modes[idx], min_rung[idx]]
            n_count += int(counted.sum())
            n_pos += int((counted & (ens.modes[idx] == 0)).sum())
            min_rung[idx] = k
        away = ~at_top
        min_rung = np.minimum(min_rung, ens.rungs)
    frac = n_pos / n_count if n_count else float("nan")
    return ExcursionStats(n_excursions=n_count, fraction_positive=frac)


# ---------------------------------------------------------------------------
# occupation identity

def occupation_identity_test(target: MixtureTarget, d: int, betamax: float,
                             lanes: int, steps: int, seed: int,
                             ell0: float = 2.38, burn_in: float = 0.25,
                             bm_dt: float = 1e-3, bm_horizon: float = 120.0,
                             bm_lanes: int = 512, bm_burn_in: float = 20.0):
    """Fraction of nonzero time spent positive, chain vs reference vs w1.

    Returns (chain_fraction, reference_fraction, analytic_value).  Both
    empirical fractions exclude junction (top rung / lattice origin) time.
    """
    rng_chain, rng_bm = spawn_rngs(seed, 2, stream="occupation")
    scaled = MixtureTarget(modes=target.modes, dimension=d)
    ladder = build_ladder(d, betamax, ell0)
    constants = skew_constants(scaled, ell0)
    k = ladder.k
    ens = LaneEnsemble(scaled, ladder, lanes, rng_chain)
    skip = int(burn_in * steps)
    pos = neg = 0
    for n in range(steps):
        ens.step()
        if n < skip:
            continue
        off_top = ens.rungs < k
        pos += int((off_top & (ens.modes == 0)).sum())
        neg += int((off_top & (ens.modes == 1)).sum())
    chain_frac = pos / (pos + neg)

    cfg = SkewBMConfig(constants=constants, dt=bm_dt, horizon=bm_horizon)
    states = np.full(bm_lanes, _to_lattice(constants.wmax, cfg), dtype=np.int64)
    first_kept = int(bm_burn_in / cfg.dt_eff)
    bm_pos = bm_neg = 0
    for n in range(cfg.n_steps):
        _advance(states, cfg, rng_bm)
        if n < first_kept:
            continue
        bm_pos += int((states > 0).sum())
        bm_neg += int((states < 0).sum())
    bm_frac = bm_pos / (bm_pos + bm_neg)
    return chain_frac, bm_frac, stationary_occupation(constants)


# ---------------------------------------------------------------------------
# dual-route check

def oracle_equivalence_test(target: MixtureTarget, d: int, betamax: float,
                            lanes: int, steps: int, seed: int,
                            ell0: float = 2.38, snapshot_stride: int | None = None):
    """Rung-occupancy snapshots and acceptance counts for both state routes.

    Runs the energy-statistic route and the full-coordinate route with
    independent streams.  Returns, per route, a rung-occupancy vector
    (lane states sampled every ``snapshot_stride`` steps after burn-in,
    pooled over modes -- the rung law is uniform within each mode, so the
    pooled counts are mode-mix free) and per-(mode, rung) acceptance and
    proposal counts, which are iid Bernoulli tallies conditional on the
    counts and hence valid chi-square cells.
    """
    scaled = MixtureTarget(modes=target.modes, dimension=d)
    ladder = build_ladder(d, betamax, ell0)
    k = ladder.k
    if snapshot_stride is None:
        # a few relaxation times of the rung walk, so lane snapshots decorrelate
        snapshot_stride = max(100, int(6 * k * k / 0.3))
    rngs = spawn_rngs(seed, 2, stream="oracle-equivalence")
    n_cells = target.J * (k + 1)
    out = {}
    for route, rng in zip(("stat", "coords"), rngs):
        ens = LaneEnsemble(scaled, ladder, lanes, rng, state_mode=route)
        occupancy = np.zeros(k + 1, dtype=np.int64)
        accepts = np.zeros(n_cells, dtype=np.int64)
        proposals = np.zeros(n_cells, dtype=np.int64)
        burn = int(0.2 * steps)
        for n in range(steps):
            pre_rungs = ens.rungs.copy()
            dirs, in_range, accepted = ens.step()
            if n < burn:
                continue
            # the mode in force for the proposal is the post-jump one
            cell = ens.modes * (k + 1) + pre_rungs
            proposals += np.bincount(cell[in_range], minlength=n_cells)
            accepts += np.bincount(cell[accepted], minlength=n_cells)
            if (n - burn) % snapshot_stride == 0:
                occupancy += np.bincount(ens.rungs, minlength=k + 1)
        out[route] = {"occupancy": occupancy,
                      "accepts": accepts.reshape(target.J, k + 1),
                      "proposals": proposals.reshape(target.J, k + 1)}
    return out
