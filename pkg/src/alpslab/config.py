"""TOML run configuration: parsing, exhaustive validation, defaults.

A minimal file needs only the target:

    dimension = 16

    [[modes]]
    lambda = 0.5
    r = 2.0
    weight = 0.5

    [[modes]]
    lambda = 0.5
    r = 2.0
    weight = 0.5

Everything else (ladder, simulation, experiment, output sections) is
optional and defaulted; unknown keys anywhere are rejected.  Validation
collects every problem before raising, so one round trip fixes them all.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:                      # python < 3.11
    import tomli as tomllib

from .ladder import Spacing
from .model import MixtureTarget, ModeSpec
from .util import config_hash

__all__ = ["RunConfig", "ConfigError", "parse_config", "default_config"]

_TOP_KEYS = {"dimension", "modes", "seed", "ladder", "simulation",
             "experiment", "output"}
_MODE_KEYS = {"lambda", "r", "weight", "center"}
_LADDER_KEYS = {"ell0", "spacing", "quanta_k", "betamax", "betamax_factor"}
_SIM_KEYS = {"steps", "replicas", "state_mode"}
_EXP_KEYS = {"kind", "dims", "t_values", "tolerance", "min_peak",
             "seed_replications", "m_max", "n_max", "occupancy_weights"}
_OUT_KEYS = {"dir", "plots"}


class ConfigError(ValueError):
    """Carries the complete list of validation problems."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("invalid configuration:\n  - " + "\n  - ".join(self.errors))


@dataclass
class RunConfig:
    target: MixtureTarget
    ell0: float = 2.38
    spacing: Spacing = field(default_factory=Spacing.standard)
    betamax: float | None = None
    betamax_factor: float = 1.0
    steps: int = 200_000
    replicas: int = 8
    state_mode: str = "stat"
    seed: int | None = None
    kind: str = "simulate"
    dims: tuple = (16, 64, 256, 1024)
    t_values: tuple = (0.5, 1.0, 2.0)
    tolerance: float = 0.01
    min_peak: float = 0.35
    seed_replications: int = 20
    m_max: int = 100
    n_max: int = 10_000
    occupancy_weights: tuple = (0.3, 0.5, 0.7)
    out_dir: str = "out"
    plots: bool = False
    threads: int = 1

    @property
    def resolved_betamax(self) -> float:
        if self.betamax is not None:
            return self.betamax
        return self.betamax_factor * self.target.dimension

    def to_dict(self) -> dict:
        return {
            "dimension": self.target.dimension,
            "modes": [{"lambda": m.lam, "r": m.r, "weight": m.weight,
                       "center": m.center} for m in self.target.modes],
            "ell0": self.ell0,
            "spacing": self.spacing.describe(),
            "betamax": self.resolved_betamax,
            "steps": self.steps,
            "replicas": self.replicas,
            "state_mode": self.state_mode,
            "seed": self.seed,
            "kind": self.kind,
            "dims": list(self.dims),
            "t_values": list(self.t_values),
            "tolerance": self.tolerance,
            "min_peak": self.min_peak,
            "seed_replications": self.seed_replications,
            "out_dir": self.out_dir,
        }

    @property
    def hash(self) -> str:
        return config_hash(self.to_dict())


def default_config() -> RunConfig:
    """Built-in two-mode target used when no config file is given."""
    target = MixtureTarget(
        modes=(ModeSpec(lam=1.0, r=1.0, weight=0.5),
               ModeSpec(lam=1.0, r=2.0, weight=0.5)),
        dimension=64,
    )
    return RunConfig(target=target)


def _check_keys(section: dict, allowed: set, where: str, errors: list[str]) -> None:
    for key in section:
        if key not in allowed:
            errors.append(f"unknown key {key!r} in {where}")


def _number(section, key, where, errors, required=False, default=None):
    if key not in section:
        if required:
            errors.append(f"missing required key {key!r} in {where}")
        return default
    val = section[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        errors.append(f"{where}.{key} must be a number, got {val!r}")
        return default
    return val


def parse_config(path) -> RunConfig:
    """Parse and validate; raises ConfigError listing every problem found."""
    if not os.path.exists(path):
        raise ConfigError([f"config file not found: {path}"])
    with open(path, "rb") as f:
        try:
            raw = tomllib.load(f)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError([f"TOML syntax error: {e}"]) from e

    errors: list[str] = []
    _check_keys(raw, _TOP_KEYS, "top level", errors)

    dimension = _number(raw, "dimension", "top level", errors, required=True)
    if dimension is not None and (int(dimension) != dimension or dimension < 1):
        errors.append(f"dimension must be a positive integer, got {dimension!r}")

    modes_raw = raw.get("modes")
    mode_specs = []
    if not isinstance(modes_raw, list) or len(modes_raw) < 2:
        errors.append("at least two [[modes]] tables are required")
    else:
        for i, m in enumerate(modes_raw):
            where = f"modes[{i}]"
            _check_keys(m, _MODE_KEYS, where, errors)
            lam = _number(m, "lambda", where, errors, required=True)
            r = _number(m, "r", where, errors, required=True)
            weight = _number(m, "weight", where, errors, required=True)
            center = _number(m, "center", where, errors, default=0.0)
            if None not in (lam, r, weight):
                try:
                    mode_specs.append(ModeSpec(lam=lam, r=r, weight=weight,
                                               center=center))
                except ValueError as e:
                    errors.append(f"{where}: {e}")

    target = None
    dim_ok = dimension is not None and int(dimension) == dimension and dimension >= 1
    if (isinstance(modes_raw, list) and len(mode_specs) == len(modes_raw)
            and len(mode_specs) >= 2 and dim_ok):
        try:
            target = MixtureTarget(modes=tuple(mode_specs), dimension=int(dimension))
        except ValueError as e:
            errors.append(str(e))

    cfg_kwargs: dict = {}
    lad = raw.get("ladder", {})
    _check_keys(lad, _LADDER_KEYS, "[ladder]", errors)
    ell0 = _number(lad, "ell0", "[ladder]", errors, default=2.38)
    if ell0 is not None and ell0 <= 0:
        errors.append("[ladder].ell0 must be positive")
    spacing = Spacing.standard()
    spacing_name = lad.get("spacing", "standard")
    if spacing_name not in ("standard", "quanta"):
        errors.append(f"[ladder].spacing must be 'standard' or 'quanta', "
                      f"got {spacing_name!r}")
    elif spacing_name == "quanta":
        qk = _number(lad, "quanta_k", "[ladder]", errors, required=True)
        if qk is not None:
            try:
                spacing = Spacing.quanta(qk)
            except ValueError as e:
                errors.append(f"[ladder].quanta_k: {e}")
    betamax = _number(lad, "betamax", "[ladder]", errors)
    if betamax is not None and betamax < 1.0:
        errors.append(f"[ladder].betamax must be >= 1, got {betamax}")
    betamax_factor = _number(lad, "betamax_factor", "[ladder]", errors, default=1.0)

    sim = raw.get("simulation", {})
    _check_keys(sim, _SIM_KEYS, "[simulation]", errors)
    steps = _number(sim, "steps", "[simulation]", errors, default=200_000)
    replicas = _number(sim, "replicas", "[simulation]", errors, default=8)
    state_mode = sim.get("state_mode", "stat")
    if state_mode not in ("stat", "coords"):
        errors.append(f"[simulation].state_mode must be 'stat' or 'coords', "
                      f"got {state_mode!r}")

    exp = raw.get("experiment", {})
    _check_keys(exp, _EXP_KEYS, "[experiment]", errors)

    out = raw.get("output", {})
    _check_keys(out, _OUT_KEYS, "[output]", errors)
    plots = out.get("plots", False)
    if not isinstance(plots, bool):
        errors.append("[output].plots must be a boolean")

    seed = raw.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        errors.append(f"seed must be an integer, got {seed!r}")

    if errors or target is None:
        if not errors:
            errors.append("target could not be constructed")
        raise ConfigError(errors)

    return RunConfig(
        target=target, ell0=float(ell0), spacing=spacing,
        betamax=float(betamax) if betamax is not None else None,
        betamax_factor=float(betamax_factor),
        steps=int(steps), replicas=int(replicas), state_mode=state_mode,
        seed=seed, kind=exp.get("kind", "simulate"),
        dims=tuple(exp.get("dims", (16, 64, 256, 1024))),
        t_values=tuple(exp.get("t_values", (0.5, 1.0, 2.0))),
        tolerance=float(exp.get("tolerance", 0.01)),
        min_peak=float(exp.get("min_peak", 0.35)),
        seed_replications=int(exp.get("seed_replications", 20)),
        m_max=int(exp.get("m_max", 100)),
        n_max=int(exp.get("n_max", 10_000)),
        occupancy_weights=tuple(exp.get("occupancy_weights", (0.3, 0.5, 0.7))),
        out_dir=out.get("dir", "out"), plots=bool(plots),
    )
