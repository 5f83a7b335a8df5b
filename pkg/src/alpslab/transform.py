"""Deterministic path transformations: signed beta -> H -> Z -> W.

Values map pointwise; only the first map rescales time (by h(betamax)**2),
so a path carries one cumulative ``time_scale`` relative to raw chain steps.
Stage X lives on +-[1, betamax], H on +-[1, 2], Z on [-1, 1] with the
junction at 0 (the top rung), and W on [wmin, wmax] after dividing each
side by its diffusion coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ladder import Ladder, SkewConstants, h, h_inverse
from .util import write_csv

__all__ = ["TransformedPath", "to_H", "to_Z", "to_W",
           "w_to_z", "z_to_h", "h_to_x", "invert_to_X"]

_STAGES = ("X", "H", "Z", "W")


@dataclass
class TransformedPath:
    """Right-continuous step function: value[i] holds on [times[i], times[i+1])."""

    stage: str
    times: np.ndarray
    values: np.ndarray
    time_scale: float
    betamax: float | None = None
    constants: SkewConstants | None = None

    def __post_init__(self):
        if self.stage not in _STAGES:
            raise ValueError(f"stage must be one of {_STAGES}")
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.size != self.values.size:
            raise ValueError("times and values must have equal length")
        if self.times.size and np.any(np.diff(self.times) < 0):
            raise ValueError("times must be nondecreasing")

    def validate_range(self, atol: float = 1e-9) -> None:
        """Check the stage's domain invariant on every value."""
        v = self.values
        a = np.abs(v)
        if self.stage == "X":
            ok = (a >= 1.0 - atol) & (a <= self.betamax + atol)
        elif self.stage == "H":
            ok = (a >= 1.0 - atol) & (a <= 2.0 + atol)
        elif self.stage == "Z":
            ok = a <= 1.0 + atol
        else:
            c = self.constants
            ok = (v >= c.wmin - atol) & (v <= c.wmax + atol)
        if not ok.all():
            bad = v[~ok][:3]
            raise ValueError(f"{self.stage}-stage values outside domain, e.g. {bad}")

    def to_csv(self, path, meta: dict | None = None) -> None:
        info = {"stage": self.stage, "time_scale": self.time_scale}
        if meta:
            info.update(meta)
        write_csv(path, ["t", "value"], zip(self.times, self.values), meta=info)


def to_H(path_X: TransformedPath, ladder: Ladder) -> TransformedPath:
    """Flatten: sign(x) * (1 + h(|x|)/h(betamax)), time divided by h(betamax)**2."""
    if path_X.stage != "X":
        raise ValueError("to_H expects a stage-X path")
    h_max = h(ladder.betamax, ladder.ell0, ladder.spacing)
    a = np.abs(path_X.values)
    if np.any(a < 1.0):
        raise ValueError("stage-X values must satisfy |x| >= 1")
    # beta values come from ladder rungs; map h over the distinct rungs once
    uniq = np.unique(a)
    h_uniq = np.array([h(x, ladder.ell0, ladder.spacing) for x in uniq])
    hv = h_uniq[np.searchsorted(uniq, a)]
    values = np.sign(path_X.values) * (1.0 + hv / h_max)
    return TransformedPath(stage="H", times=path_X.times / h_max**2,
                           values=values,
                           time_scale=path_X.time_scale * h_max**2,
                           betamax=ladder.betamax)


def to_Z(path_H: TransformedPath) -> TransformedPath:
    """Fold the junction to 0: z = 2*sign(h) - h.  No time change."""
    if path_H.stage != "H":
        raise ValueError("to_Z expects a stage-H path")
    values = 2.0 * np.sign(path_H.values) - path_H.values
    return TransformedPath(stage="Z", times=path_H.times.copy(), values=values,
                           time_scale=path_H.time_scale, betamax=path_H.betamax)


def to_W(path_Z: TransformedPath, constants: SkewConstants) -> TransformedPath:
    """Per-side rescale: z/s1 for z > 0, z/s2 for z < 0, fixed point at 0."""
    if path_Z.stage != "Z":
        raise ValueError("to_W expects a stage-Z path")
    z = path_Z.values
    values = np.where(z > 0, z / constants.s1, z / constants.s2)
    values = np.where(z == 0.0, 0.0, values)
    return TransformedPath(stage="W", times=path_Z.times.copy(), values=values,
                           time_scale=path_Z.time_scale, betamax=path_Z.betamax,
                           constants=constants)


def w_to_z(w, constants: SkewConstants):
    w = np.asarray(w, dtype=float)
    return np.where(w > 0, w * constants.s1, w * constants.s2)


def z_to_h(z):
    """Inverse fold; z = 0 maps to +2 by convention (mode lost at the junction)."""
    z = np.asarray(z, dtype=float)
    sign = np.where(z >= 0, 1.0, -1.0)
    return 2.0 * sign - z


def h_to_x(hval, ladder: Ladder):
    hval = np.asarray(hval, dtype=float)
    h_max = h(ladder.betamax, ladder.ell0, ladder.spacing)
    mag = np.array([h_inverse((abs(v) - 1.0) * h_max, ladder.ell0, ladder.spacing)
                    for v in np.ravel(hval)]).reshape(hval.shape)
    return np.sign(hval) * mag


def invert_to_X(path_W: TransformedPath, ladder: Ladder,
                constants: SkewConstants) -> TransformedPath:
    """Undo W -> Z -> H -> X, restoring the raw-step time scale."""
    if path_W.stage != "W":
        raise ValueError("invert_to_X expects a stage-W path")
    h_max = h(ladder.betamax, ladder.ell0, ladder.spacing)
    values = h_to_x(z_to_h(w_to_z(path_W.values, constants)), ladder)
    return TransformedPath(stage="X", times=path_W.times * h_max**2,
                           values=values,
                           time_scale=path_W.time_scale / h_max**2,
                           betamax=ladder.betamax)
