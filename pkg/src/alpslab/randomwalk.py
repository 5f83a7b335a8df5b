"""Reflecting-walk occupation bounds, verified exactly.

Covers three results about birth-death chains on {0, ..., m}: the exact
n-step law of the reflecting simple symmetric walk (dynamic programming),
the pointwise bound P(Y_n = 0) <= 2/sqrt(n) + 1/m, and the vanishing
average occupation of state 0 for lazy chains, via the jump-chain and
holding-multiplicity decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .util import write_csv

__all__ = [
    "exact_distribution",
    "BoundCheck",
    "verify_refrw_bound",
    "bound_sweep",
    "lift_map",
    "lifted_walk_distribution",
    "JumpDecomposition",
    "jump_decompose",
    "BirthDeathChain",
    "occupation_experiment",
]


def _reflecting_step(p: np.ndarray) -> np.ndarray:
    """One DP step for the reflecting simple symmetric walk on {0..m}."""
    m = p.size - 1
    q = np.zeros_like(p)
    if m == 1:
        q[0], q[1] = p[1], p[0]
        return q
    # push right: all of state 0, half of each interior state
    q[1] += p[0]
    q[2:m + 1] += 0.5 * p[1:m]
    # push left: all of state m, half of each interior state
    q[m - 1] += p[m]
    q[0:m - 1] += 0.5 * p[1:m]
    return q


def exact_distribution(m: int, n: int, initial: int = 0) -> np.ndarray:
    """Exact law of the reflecting walk after n steps from ``initial``.

    Plain double-precision DP; the accumulated rounding error is below
    n * 2**-52, far under anything the bound checks care about.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 0 <= initial <= m:
        raise ValueError("initial state outside {0..m}")
    p = np.zeros(m + 1)
    p[initial] = 1.0
    for _ in range(n):
        p = _reflecting_step(p)
    return p


@dataclass(frozen=True)
class BoundCheck:
    m: int
    n: int
    initial: int
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def verify_refrw_bound(m: int, n: int, initial: int = 0, n0: int = 16) -> BoundCheck:
    """Evaluate P(Y_n = 0) against 2/sqrt(n) + 1/m.

    The bound is asserted only for n >= n0 ("sufficiently large"); smaller
    n raise instead of silently passing.
    """
    if n < n0:
        raise ValueError(f"bound is asserted for n >= {n0}")
    lhs = float(exact_distribution(m, n, initial)[0])
    rhs = 2.0 / np.sqrt(n) + 1.0 / m
    return BoundCheck(m=m, n=n, initial=initial, lhs=lhs, rhs=rhs)


def bound_sweep(ms, n_max: int, n_min: int = 16, initials=(0, 1), state: int = 0):
    """Check the occupation bound at every step of every DP run.

    For each (m, initial) one DP pass checks all n in [n_min, n_max] on the
    fly.  Returns (worst_rows, violations): per-m rows at the n of smallest
    margin with columns (m, n, lhs, rhs, holds), and every violating tuple.
    ``state`` generalises the check to P(Y_n = state) via the same lifting
    argument; interior states have two preimage residue classes per period,
    which doubles both terms of the bound.
    """
    worst_rows = []
    violations = []
    sqrt_n = 2.0 / np.sqrt(np.arange(1, n_max + 1))
    for m in ms:
        worst = None
        factor = 1.0 if state in (0, m) else 2.0
        for initial in initials:
            if initial > m or state > m:
                continue
            p = np.zeros(m + 1)
            p[initial] = 1.0
            for n in range(1, n_max + 1):
                p = _reflecting_step(p)
                if n < n_min:
                    continue
                lhs = p[state]
                rhs = factor * (sqrt_n[n - 1] + 1.0 / m)
                margin = rhs - lhs
                if worst is None or margin < worst[0]:
                    worst = (margin, n, initial, lhs, rhs)
                if lhs > rhs:
                    violations.append((m, n, initial, float(lhs), float(rhs)))
        if worst is not None:
            worst_rows.append((m, worst[1], float(worst[3]), float(worst[4]),
                               worst[3] <= worst[4]))
    return worst_rows, violations


def sweep_to_csv(path, worst_rows, meta=None) -> None:
    write_csv(path, ["m", "n", "lhs", "rhs", "holds"], worst_rows, meta=meta)


def lift_map(z: int, m: int) -> int:
    """Fold the integer line onto {0..m}: min over j of |z - 2jm|."""
    if m < 1:
        raise ValueError("m must be >= 1")
    rem = z % (2 * m)          # python modulo keeps this in [0, 2m)
    return min(rem, 2 * m - rem)


def lifted_walk_distribution(m: int, n: int, initial: int = 0) -> np.ndarray:
    """Law of g(Z_n) where Z is the free walk on the integers.

    Independent of the reflecting DP: runs the free-walk DP on the reachable
    window of the integer lattice, then folds through the lifting map.  Must
    agree exactly with ``exact_distribution``.
    """
    offset = n  # reachable states are initial - n .. initial + n
    p = np.zeros(2 * n + 1)
    p[offset] = 1.0
    for _ in range(n):
        q = np.zeros_like(p)
        q[1:] += 0.5 * p[:-1]
        q[:-1] += 0.5 * p[1:]
        p = q
    folded = np.zeros(m + 1)
    for idx, mass in enumerate(p):
        if mass:
            folded[lift_map(initial + idx - offset, m)] += mass
    return folded


@dataclass
class JumpDecomposition:
    """Distinct successive states and how long each was held."""

    states: list
    multiplicities: list

    def expand(self) -> list:
        out = []
        for s, mult in zip(self.states, self.multiplicities):
            out.extend([s] * mult)
        return out


def jump_decompose(path) -> JumpDecomposition:
    """Collapse immediate repetitions; inverse of ``JumpDecomposition.expand``."""
    seq = list(path)
    if not seq:
        raise ValueError("path must be nonempty")
    states = [seq[0]]
    mults = [1]
    for x in seq[1:]:
        if x == states[-1]:
            mults[-1] += 1
        else:
            states.append(x)
            mults.append(1)
    return JumpDecomposition(states=states, multiplicities=mults)


@dataclass(frozen=True)
class BirthDeathChain:
    """Lazy birth-death chain on {0..m} with symmetric move probabilities.

    ``hold`` is the holding probability p_ii, a scalar or per-state array;
    the remaining mass splits evenly between the two neighbours (entirely
    to the single neighbour at the ends).  ``a`` is the guaranteed move
    probability: max(hold) <= 1 - a.
    """

    m: int
    hold: object = 0.0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        h = np.broadcast_to(np.asarray(self.hold, dtype=float), (self.m + 1,))
        if np.any(h < 0) or np.any(h >= 1):
            raise ValueError("holding probabilities must lie in [0, 1)")
        object.__setattr__(self, "_hold_vec", h.copy())

    @property
    def hold_vec(self) -> np.ndarray:
        return self._hold_vec

    @property
    def a(self) -> float:
        return float(1.0 - self._hold_vec.max())

    def transition_matrix(self) -> np.ndarray:
        P = np.zeros((self.m + 1, self.m + 1))
        h = self._hold_vec
        for i in range(self.m + 1):
            P[i, i] = h[i]
            move = 1.0 - h[i]
            if i == 0:
                P[i, 1] = move
            elif i == self.m:
                P[i, i - 1] = move
            else:
                P[i, i - 1] = move / 2.0
                P[i, i + 1] = move / 2.0
        return P


def occupation_experiment(chain: BirthDeathChain, n: int, replicas: int,
                          rng: np.random.Generator, initial: int = 0) -> np.ndarray:
    """Empirical law of N0/n: fraction of the first n steps spent at 0.

    All replicas advance in lock-step with vectorised draws; counts include
    the state before each of the n transitions, matching the definition
    N0 = #{0 <= i <= n-1 : X_i = 0}.
    """
    m = chain.m
    hold = chain.hold_vec
    x = np.full(replicas, initial, dtype=np.int64)
    n0 = np.zeros(replicas, dtype=np.int64)
    for _ in range(n):
        n0 += x == 0
        u = rng.random(replicas)
        moving = u >= hold[x]
        up = rng.random(replicas) < 0.5
        step = np.where(up, 1, -1)
        step = np.where(x == 0, 1, step)
        step = np.where(x == m, -1, step)
        x = np.where(moving, x + step, x)
    return n0 / n
