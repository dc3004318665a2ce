"""Run configuration: a flat JSON document mapped onto dataclasses.

The parse -> serialize -> parse round trip is the identity, which the CLI
relies on for reproducible fixtures.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .geometry import DeSitterPatch, SpacetimeConfig, ThermalBath, euclidean_separation


class ConfigError(ValueError):
    """A configuration document failed validation; the message names the field."""


@dataclass(frozen=True)
class AtomPair:
    """Transition frequency, coupling, and separation of the two probes.

    The separation is either the chord distance L directly, or the pair
    (r, delta_theta) on the sphere of static radius r.
    """

    omega0: float
    mu: float
    L: float | None = None
    r: float | None = None
    delta_theta: float | None = None

    def __post_init__(self) -> None:
        if self.omega0 <= 0:
            raise ConfigError(f"atoms.omega0 must be positive, got {self.omega0}")
        if self.mu <= 0:
            raise ConfigError(f"atoms.mu must be positive, got {self.mu}")
        by_angle = self.r is not None or self.delta_theta is not None
        if self.L is None and not (self.r is not None and self.delta_theta is not None):
            raise ConfigError("atoms: give either L or both r and delta_theta")
        if self.L is not None and by_angle:
            raise ConfigError("atoms: give L or (r, delta_theta), not both")
        if self.L is not None and self.L <= 0:
            raise ConfigError(f"atoms.L must be positive, got {self.L}")

    def separation(self) -> float:
        if self.L is not None:
            return self.L
        return euclidean_separation(self.r, self.delta_theta)


@dataclass(frozen=True)
class SweepSettings:
    L_min: float
    L_max: float
    n_points: int
    spacing: str = "log"

    def __post_init__(self) -> None:
        if not (0 < self.L_min < self.L_max):
            raise ConfigError(f"sweep bounds must satisfy 0 < L_min < L_max, got [{self.L_min}, {self.L_max}]")
        if self.n_points < 2:
            raise ConfigError(f"sweep.n_points must be at least 2, got {self.n_points}")
        if self.spacing not in ("log", "linear"):
            raise ConfigError(f"sweep.spacing must be 'log' or 'linear', got {self.spacing!r}")


@dataclass(frozen=True)
class EvolveSettings:
    rho0: str
    tau_max: float
    stride: float

    def __post_init__(self) -> None:
        if self.rho0 not in ("G", "E", "S", "A"):
            raise ConfigError(f"evolve.rho0 must be one of G, E, S, A, got {self.rho0!r}")
        if self.tau_max <= 0:
            raise ConfigError(f"evolve.tau_max must be positive, got {self.tau_max}")
        if not (0 < self.stride <= self.tau_max):
            raise ConfigError(f"evolve.stride must lie in (0, tau_max], got {self.stride}")


@dataclass(frozen=True)
class ToleranceSettings:
    quad_abs_tol: float = 1e-9
    quad_rel_tol: float = 1e-7
    ode_rtol: float = 1e-10
    ode_atol: float = 1e-12

    def __post_init__(self) -> None:
        for name in ("quad_abs_tol", "quad_rel_tol", "ode_rtol", "ode_atol"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"tolerances.{name} must be positive")


@dataclass(frozen=True)
class OutputSettings:
    path: str | None = None
    format: str = "csv"

    def __post_init__(self) -> None:
        if self.format not in ("csv", "json"):
            raise ConfigError(f"output.format must be 'csv' or 'json', got {self.format!r}")


@dataclass(frozen=True)
class RunConfig:
    spacetime: SpacetimeConfig
    atoms: AtomPair
    sweep: SweepSettings | None = None
    evolve: EvolveSettings | None = None
    tolerances: ToleranceSettings = field(default_factory=ToleranceSettings)
    output: OutputSettings = field(default_factory=OutputSettings)


def _spacetime_from_dict(d: dict) -> SpacetimeConfig:
    kind = d.get("type")
    try:
        if kind == "desitter":
            return DeSitterPatch(alpha=float(d["alpha"]), r=float(d.get("r", 0.0)))
        if kind == "thermal":
            return ThermalBath(temperature=float(d["temperature"]))
    except KeyError as exc:
        raise ConfigError(f"spacetime: missing field {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"spacetime: {exc}") from None
    raise ConfigError(f"spacetime.type must be 'desitter' or 'thermal', got {kind!r}")


def _spacetime_to_dict(st: SpacetimeConfig) -> dict:
    if isinstance(st, DeSitterPatch):
        return {"type": "desitter", "alpha": st.alpha, "r": st.r}
    return {"type": "thermal", "temperature": st.temperature}


def _section(cls, d: dict | None, name: str):
    if d is None:
        return None
    if not isinstance(d, dict):
        raise ConfigError(f"{name}: expected an object, got {type(d).__name__}")
    try:
        return cls(**d)
    except TypeError as exc:
        raise ConfigError(f"{name}: {exc}") from None


def config_from_dict(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("configuration document must be a JSON object")
    unknown = set(doc) - {"spacetime", "atoms", "sweep", "evolve", "tolerances", "output"}
    if unknown:
        raise ConfigError(f"unknown configuration fields: {sorted(unknown)}")
    if "spacetime" not in doc:
        raise ConfigError("spacetime: section is required")
    if "atoms" not in doc:
        raise ConfigError("atoms: section is required")
    try:
        spacetime = _spacetime_from_dict(doc["spacetime"])
        atoms = _section(AtomPair, doc["atoms"], "atoms")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig(
        spacetime=spacetime,
        atoms=atoms,
        sweep=_section(SweepSettings, doc.get("sweep"), "sweep"),
        evolve=_section(EvolveSettings, doc.get("evolve"), "evolve"),
        tolerances=_section(ToleranceSettings, doc.get("tolerances"), "tolerances") or ToleranceSettings(),
        output=_section(OutputSettings, doc.get("output"), "output") or OutputSettings(),
    )


def config_to_dict(cfg: RunConfig) -> dict:
    doc: dict = {
        "spacetime": _spacetime_to_dict(cfg.spacetime),
        "atoms": {
            k: v
            for k, v in (
                ("omega0", cfg.atoms.omega0),
                ("mu", cfg.atoms.mu),
                ("L", cfg.atoms.L),
                ("r", cfg.atoms.r),
                ("delta_theta", cfg.atoms.delta_theta),
            )
            if v is not None
        },
    }
    if cfg.sweep is not None:
        doc["sweep"] = {
            "L_min": cfg.sweep.L_min,
            "L_max": cfg.sweep.L_max,
            "n_points": cfg.sweep.n_points,
            "spacing": cfg.sweep.spacing,
        }
    if cfg.evolve is not None:
        doc["evolve"] = {"rho0": cfg.evolve.rho0, "tau_max": cfg.evolve.tau_max, "stride": cfg.evolve.stride}
    doc["tolerances"] = {
        "quad_abs_tol": cfg.tolerances.quad_abs_tol,
        "quad_rel_tol": cfg.tolerances.quad_rel_tol,
        "ode_rtol": cfg.tolerances.ode_rtol,
        "ode_atol": cfg.tolerances.ode_atol,
    }
    doc["output"] = {"path": cfg.output.path, "format": cfg.output.format}
    return doc


def load_config(path: str) -> RunConfig:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return config_from_dict(doc)


def dump_config(cfg: RunConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2)
