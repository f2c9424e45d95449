"""INI experiment configuration: schema, parsing and validation.

Every key has a type and a default; unknown sections or keys are errors.
Example::

    [run]
    seed = 7

    [schedule]
    family = u2
    theta0 = 1.0471975511965976
    total_times = 250, 500, 1000

    [noise]
    kind = phase_kicks
    strength = 0.3
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from pathlib import Path

from .core import ValidationError

PI = math.pi


def _float(s: str) -> float:
    v = float(s)
    if not math.isfinite(v):
        raise ValueError("must be finite")
    return v


def _int(s: str) -> int:
    return int(s)


def _bool(s: str) -> bool:
    low = s.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def _float_list(s: str) -> list[float]:
    items = [x for x in s.replace(";", ",").split(",") if x.strip()]
    if not items:
        raise ValueError("expected at least one number")
    return [_float(x) for x in items]


def _opt(conv):
    def f(s: str):
        return None if s.strip().lower() in ("", "none") else conv(s)

    return f


def _str(s: str) -> str:
    return s.strip()


# section -> key -> (converter, default)
SCHEMA = {
    "run": {"seed": (_int, 0), "name": (_opt(_str), None)},
    "trap": {"eta": (_float, 0.1), "n_max": (_int, 3), "n_ions": (_int, 2), "nu": (_float, 1.0)},
    "drive": {
        "rabi": (_float, 0.01),
        "detuning": (_float, 0.01),
        "periods": (_opt(_int), None),
        "steps_per_period": (_int, 512),
    },
    "schedule": {
        "family": (_str, "u1"),
        "theta0": (_float, PI / 3),
        "theta1": (_opt(_float), None),
        "windings": (_int, 1),
        "direction": (_int, 1),
        "samples": (_int, 4096),
        "total_times": (_float_list, [2000.0]),
        "omega": (_float, 1.0),
        "ramp_shape": (_str, "linear"),
        "timing": (_str, "gap_locked"),
        "steps_per_unit": (_int, 64),
        "trajectory_samples": (_int, 201),
        "initial": (_opt(_str), None),
        "refine": (_bool, False),
        "connection": (_str, "analytic"),
    },
    "noise": {
        "kind": (_str, "none"),
        "strength": (_float, 0.0),
        "seed": (_opt(_int), None),
        "kick_count": (_opt(_int), None),
        "realizations": (_int, 32),
        "duration": (_float, 1.0),
    },
    "synthesize": {
        "target": (_str, "hadamard"),
        "phi3": (_float, PI),
        "samples": (_int, 4096),
    },
}


@dataclass
class ExperimentConfig:
    """Resolved configuration: ``values[section][key]``."""

    values: dict

    def __getitem__(self, section: str) -> dict:
        return self.values[section]

    def resolved(self) -> dict:
        return {s: dict(v) for s, v in self.values.items()}

    @property
    def noise_seed(self) -> int:
        s = self.values["noise"]["seed"]
        return self.values["run"]["seed"] if s is None else s


def defaults() -> dict:
    return {s: {k: (list(d) if isinstance(d, list) else d) for k, (_, d) in keys.items()} for s, keys in SCHEMA.items()}


def parse_text(text: str, source: str = "<config>") -> dict:
    """Parse INI text into typed values layered over the defaults."""
    cp = configparser.ConfigParser(interpolation=None, default_section="__none__")
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ValidationError(f"{source}: malformed config: {exc}") from exc
    values = defaults()
    for section in cp.sections():
        if section not in SCHEMA:
            raise ValidationError(f"{source}: unknown section [{section}]")
        for key, raw in cp.items(section):
            if key not in SCHEMA[section]:
                raise ValidationError(f"{source}: unknown key {key!r} in [{section}]")
            conv = SCHEMA[section][key][0]
            try:
                values[section][key] = conv(raw)
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"{source}: [{section}] {key} = {raw!r}: {exc}") from exc
    return values


def load(path) -> dict:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config {p}: {exc.strerror or exc}") from exc
    return parse_text(text, str(p))


def set_value(values: dict, section: str, key: str, value) -> None:
    if section not in SCHEMA or key not in SCHEMA[section]:
        raise ValidationError(f"unknown setting [{section}] {key}")
    values[section][key] = value


def validate(values: dict) -> ExperimentConfig:
    """Check every field against the physics and plumbing invariants.

    Builds the library objects once so that their own checks run before any
    output is produced.
    """
    from .holonomy import three_segment_loop
    from .ion_model import BichromaticDrive, TrapIonConfig
    from .adiabatic import NoiseModel, RAMP_SHAPES, TIMINGS

    t = values["trap"]
    TrapIonConfig(eta=t["eta"], n_max=t["n_max"], n_ions=t["n_ions"], nu=t["nu"])
    d = values["drive"]
    BichromaticDrive(0, "1", d["rabi"], d["detuning"])
    if d["rabi"] <= 0:
        raise ValidationError("drive rabi must be positive")
    if d["detuning"] >= t["nu"]:
        raise ValidationError("drive detuning must be below the trap frequency")
    if d["steps_per_period"] < 16:
        raise ValidationError("drive steps_per_period must be >= 16")
    if d["periods"] is not None and d["periods"] < 1:
        raise ValidationError("drive periods must be >= 1")

    s = values["schedule"]
    if s["family"] not in ("u1", "u2", "u3"):
        raise ValidationError(f"schedule family must be u1, u2 or u3, got {s['family']!r}")
    if not 0 <= s["theta0"] <= PI / 2:
        raise ValidationError("schedule theta0 must lie in [0, pi/2]")
    if s["theta1"] is not None and not 0 <= s["theta1"] <= PI / 2:
        raise ValidationError("schedule theta1 must lie in [0, pi/2]")
    if s["samples"] < 3:
        raise ValidationError("schedule samples must be >= 3")
    if any(x <= 0 for x in s["total_times"]):
        raise ValidationError("schedule total_times must be positive")
    if s["omega"] <= 0:
        raise ValidationError("schedule omega must be positive")
    if s["ramp_shape"] not in RAMP_SHAPES:
        raise ValidationError(f"schedule ramp_shape must be one of {RAMP_SHAPES}")
    if s["timing"] not in TIMINGS:
        raise ValidationError(f"schedule timing must be one of {TIMINGS}")
    if s["steps_per_unit"] < 1 or s["trajectory_samples"] < 2:
        raise ValidationError("schedule steps_per_unit >= 1 and trajectory_samples >= 2 required")
    if s["connection"] not in ("analytic", "numeric"):
        raise ValidationError("schedule connection must be analytic or numeric")
    three_segment_loop(s["theta0"], s["samples"], s["windings"], s["direction"], s["theta1"])

    n = values["noise"]
    NoiseModel(n["kind"], n["strength"], 0, n["kick_count"], n["realizations"], n["duration"])
    if n["seed"] is not None and n["seed"] < 0:
        raise ValidationError("noise seed must be non-negative")
    if values["run"]["seed"] < 0:
        raise ValidationError("run seed must be non-negative")
    name = values["run"]["name"]
    if name is not None and (not name or "/" in name or name in (".", "..")):
        raise ValidationError("run name must be a plain directory name")

    y = values["synthesize"]
    if y["samples"] < 3:
        raise ValidationError("synthesize samples must be >= 3")
    return ExperimentConfig(values)


__all__ = ["SCHEMA", "ExperimentConfig", "defaults", "load", "parse_text", "set_value", "validate"]
