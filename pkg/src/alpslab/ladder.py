"""Inverse-temperature grids, the clock-change integral h, and skew constants.

The grid starts at 1 and follows ``beta_{i+1} = beta_i + ell(beta_i)/sqrt(d)``
until it would pass ``betamax``, where the last rung is clamped to exactly
``betamax``.  The spacing function ``ell`` is ``ell0 * beta`` for standard
spacing (information function beta**-2) and ``ell0 * beta**(q/2)`` with
``q > 2`` for the quanta variant, whose h integral stays bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.stats import norm

from .model import MixtureTarget
from .util import write_csv

__all__ = [
    "Spacing",
    "Ladder",
    "SkewConstants",
    "ell",
    "build_ladder",
    "h",
    "h_inverse",
    "skew_constants",
]

_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class Spacing:
    """Spacing family: ``standard``, ``quanta`` (exponent > 2), or ``custom``.

    ``custom`` carries a user callable ``ell_fn(beta)`` and falls back to
    adaptive quadrature for h.
    """

    kind: str = "standard"
    exponent: float | None = None
    ell_fn: object = None

    def __post_init__(self):
        if self.kind not in ("standard", "quanta", "custom"):
            raise ValueError(f"unknown spacing kind {self.kind!r}")
        if self.kind == "quanta":
            if self.exponent is None or not self.exponent > 2:
                raise ValueError("quanta spacing requires an exponent > 2")
        if self.kind == "custom" and not callable(self.ell_fn):
            raise ValueError("custom spacing requires a callable ell_fn")

    @staticmethod
    def standard() -> "Spacing":
        return Spacing("standard")

    @staticmethod
    def quanta(exponent: float) -> "Spacing":
        return Spacing("quanta", exponent=exponent)

    def describe(self) -> str:
        if self.kind == "quanta":
            return f"quanta(k={self.exponent})"
        return self.kind


def ell(beta: float, ell0: float, spacing: Spacing = Spacing.standard()) -> float:
    """Rung spacing scale at inverse temperature ``beta`` (>= 1)."""
    if spacing.kind == "standard":
        return ell0 * beta
    if spacing.kind == "quanta":
        return ell0 * beta ** (spacing.exponent / 2.0)
    return float(spacing.ell_fn(beta)) * ell0


def h(x: float, ell0: float, spacing: Spacing = Spacing.standard()) -> float:
    """Integral of 1/ell from 1 to |x|; the clock change of the second stage.

    Closed forms: ``log|x| / ell0`` (standard) and
    ``(1 - |x|**(1 - q/2)) / (ell0 * (q/2 - 1))`` (quanta, bounded as
    x -> infinity).  Custom spacings integrate adaptively.
    """
    ax = abs(float(x))
    if ax < 1.0:
        raise ValueError(f"h is defined for |x| >= 1, got {x}")
    if spacing.kind == "standard":
        return math.log(ax) / ell0
    if spacing.kind == "quanta":
        q = spacing.exponent
        return (1.0 - ax ** (1.0 - q / 2.0)) / (ell0 * (q / 2.0 - 1.0))
    val, _ = quad(lambda u: 1.0 / ell(u, ell0, spacing), 1.0, ax,
                  epsabs=1e-13, epsrel=1e-13, limit=400)
    return val


def h_inverse(y: float, ell0: float, spacing: Spacing = Spacing.standard()) -> float:
    """Positive x >= 1 with h(x) = y, for the closed-form spacings."""
    if y < 0:
        raise ValueError("h is nonnegative")
    if spacing.kind == "standard":
        return math.exp(ell0 * y)
    if spacing.kind == "quanta":
        q = spacing.exponent
        base = 1.0 - y * ell0 * (q / 2.0 - 1.0)
        if base <= 0.0:
            raise ValueError("y beyond the bounded range of quanta h")
        return base ** (1.0 / (1.0 - q / 2.0))
    raise NotImplementedError("no closed-form inverse for custom spacing")


@dataclass(frozen=True)
class Ladder:
    """Immutable inverse-temperature grid with its generating parameters."""

    betas: np.ndarray
    ell0: float
    spacing: Spacing
    d: int

    def __post_init__(self):
        betas = np.asarray(self.betas, dtype=float)
        object.__setattr__(self, "betas", betas)
        betas.setflags(write=False)
        if betas[0] != 1.0:
            raise ValueError("ladder must start at beta = 1")
        if betas.size > 1 and not np.all(np.diff(betas) > 0):
            raise ValueError("ladder rungs must be strictly increasing")

    @property
    def k(self) -> int:
        """Index of the top rung (number of gaps)."""
        return self.betas.size - 1

    @property
    def betamax(self) -> float:
        return float(self.betas[-1])

    @property
    def clamped(self) -> bool:
        """True when the top gap is smaller than the recurrence prescribes."""
        if self.k == 0:
            return False
        prescribed = ell(self.betas[-2], self.ell0, self.spacing) / math.sqrt(self.d)
        return self.betas[-1] - self.betas[-2] < prescribed * (1 - 1e-12)

    def h_of(self, beta) -> np.ndarray:
        return np.array([h(b, self.ell0, self.spacing) for b in np.atleast_1d(beta)])

    def recurrence_residuals(self) -> np.ndarray:
        """`beta_{i+1} - beta_i - ell(beta_i)/sqrt(d)` on unclamped gaps."""
        b = self.betas
        pres = np.array([ell(x, self.ell0, self.spacing) for x in b[:-1]])
        res = np.diff(b) - pres / math.sqrt(self.d)
        return res[:-1] if self.clamped else res

    def to_csv(self, path, meta: dict | None = None) -> None:
        hvals = self.h_of(self.betas)
        rows = [
            (i, self.betas[i], ell(self.betas[i], self.ell0, self.spacing), hvals[i])
            for i in range(self.betas.size)
        ]
        info = {"ell0": self.ell0, "spacing": self.spacing.describe(),
                "d": self.d, "clamped": int(self.clamped)}
        if meta:
            info.update(meta)
        write_csv(path, ["index", "beta", "ell_of_beta", "h_of_beta"], rows,
                  meta=info)


def build_ladder(d: int, betamax: float, ell0: float = 2.38,
                 spacing: Spacing = Spacing.standard()) -> Ladder:
    """Iterate the spacing recurrence from 1 up to ``betamax``.

    The first value at or past ``betamax`` becomes the top rung, set to
    exactly ``betamax``.  ``betamax = 1`` yields the degenerate one-rung
    ladder (k = 0).
    """
    if d < 1:
        raise ValueError("d must be a positive integer")
    if betamax < 1.0:
        raise ValueError(f"betamax must be >= 1, got {betamax}")
    sqrt_d = math.sqrt(d)
    betas = [1.0]
    while betas[-1] < betamax:
        nxt = betas[-1] + ell(betas[-1], ell0, spacing) / sqrt_d
        if nxt >= betamax:
            betas.append(betamax)
            break
        betas.append(nxt)
    return Ladder(np.array(betas), ell0, spacing, d)


@dataclass(frozen=True)
class SkewConstants:
    """Side diffusion coefficients and the excursion weight of the limit.

    ``s_i = sqrt(2 * Phi(-ell0 / (2 * sqrt(r_i))))`` so the flattened domain
    is [wmin, wmax] = [-1/s2, 1/s1], and excursions from the junction go
    positive with probability ``alpha = w1*s1 / (w1*s1 + w2*s2)``.
    """

    s1: float
    s2: float
    alpha: float

    def __post_init__(self):
        for s in (self.s1, self.s2):
            if not 0.0 < s < math.sqrt(2.0):
                raise ValueError(f"side coefficient out of range: {s}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"excursion weight must be in (0,1): {self.alpha}")

    @property
    def wmax(self) -> float:
        return 1.0 / self.s1

    @property
    def wmin(self) -> float:
        return -1.0 / self.s2


def skew_constants(target: MixtureTarget, ell0: float,
                   sqrt_r_convention: bool = False) -> SkewConstants:
    """Limit constants for a two-mode target.

    By default the argument of Phi is ``-ell0 / (2*sqrt(r_i))``, the value
    the acceptance rate actually approaches for exponential-power modes
    under the proportionality spacing; ``sqrt_r_convention=True`` flips the
    exponent to ``-ell0 * sqrt(r_i) / 2`` for comparison.
    """
    if target.J != 2:
        raise ValueError("skew constants are defined for exactly two modes; "
                         "more modes lead to a star-shaped limit (unsupported)")
    r1, r2 = target.modes[0].r, target.modes[1].r
    w1, w2 = target.modes[0].weight, target.modes[1].weight

    def s_of(r):
        arg = ell0 * math.sqrt(r) / 2.0 if sqrt_r_convention else ell0 / (2.0 * math.sqrt(r))
        return math.sqrt(2.0 * norm.cdf(-arg))

    s1, s2 = s_of(r1), s_of(r2)
    alpha = w1 * s1 / (w1 * s1 + w2 * s2)
    return SkewConstants(s1=s1, s2=s2, alpha=alpha)
