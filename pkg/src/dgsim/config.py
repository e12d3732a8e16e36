"""INI run configuration: schemas, defaults and validation.

A config file is a set of ``[section]`` blocks of ``key = value`` lines.
Which sections a subcommand accepts, and the keys and defaults within
each, are listed in :data:`COMMAND_SECTIONS` and :data:`SCHEMAS`.  Unknown
sections or keys, malformed values and values that fail the library's
own validation are all rejected with :class:`ConfigError`.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from .errors import ConfigError
from .grid import Grid1D, make_grid
from .intervals import IntervalSet
from .propagators import POTENTIAL_PARAMS, Potential

COMMANDS = ("evolve", "overlap", "ftl", "mixture", "momentum", "conservation", "logic", "gpvm-check")


def _float(text: str) -> float:
    return float(text)


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.replace(",", " ").split()]


def _words(text: str) -> list[str]:
    return [t for t in text.replace(",", " ").split()]


def _interval(text: str) -> list[float]:
    vals = _floats(text)
    if len(vals) != 2:
        raise ValueError(f"an interval needs two endpoints, got {text!r}")
    IntervalSet.of(tuple(vals))
    return vals


def _choice(*options: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        value = text.strip()
        if value not in options:
            raise ValueError(f"{value!r} is not one of {options}")
        return value
    parse.__name__ = "one of " + "|".join(options)
    return parse


# section -> key -> (parser, default)
SCHEMAS: dict[str, dict[str, tuple[Callable[[str], Any], Any]]] = {
    "run": {"experiment": (_choice(*COMMANDS), None), "seed": (int, 42), "dt": (_float, 1e-3)},
    "grid": {"n": (int, 4096), "x_min": (_float, -8.0), "x_max": (_float, 8.0)},
    "state": {
        "kind": (_choice("gaussian", "two_plateau", "exp_gaussian"), "gaussian"),
        "center": (_float, 0.0), "sigma": (_float, 1.0), "k0": (_float, 0.0),
        "plateau_D": (_float, 1.0), "decay": (_float, 1.0),
    },
    "potential": {
        "kind": (_choice("zero", "harmonic", "gaussian", "barrier"), "zero"),
        "omega": (_float, None), "center": (_float, None), "height": (_float, None),
        "width": (_float, None), "a": (_float, None), "b": (_float, None),
        "t_on": (_float, -math.inf), "t_off": (_float, math.inf),
    },
    "evolve": {
        "D": (_float, 0.0), "t_final": (_float, 1.0), "mode": (_choice("dg", "linear"), "dg"),
        "checks": (_words, []), "n_random": (int, 100), "gap_delta": (_float, 1e-5),
    },
    "overlap": {"D": (_floats, [1.0]), "aligned": (_bool, True), "refinements": (int, 0)},
    "ftl": {
        "D": (_floats, [1.0, 0.0]), "t_final": (_float, 4.0), "dt": (_float, 2e-3),
        "distance": (_float, 100.0), "far_factor": (_float, 2.0),
        "lab_n": (int, 128), "lab_half_width": (_float, 32.0), "lab_centers": (_floats, [-14.0, 14.0]),
        "lab_sigma": (_float, 1.5), "moon_n": (int, 512), "moon_half_width": (_float, 32.0),
        "moon_offsets": (_floats, [-10.0, 10.0]), "moon_sigma": (_float, 2.0),
        "moon_kick": (_float, 5.0), "pulse_height": (_float, 10.0), "pulse_width": (_float, 0.25),
        "pulse_t_on": (_float, 0.0), "pulse_t_off": (_float, math.inf), "dump_state": (_bool, True),
    },
    "mixture": {
        "D": (_floats, [1.0, 0.0]), "times": (_floats, [0.0, 0.25, 0.5, 1.0]),
        "centers": (_floats, [-0.75, 0.75]), "sigma": (_float, 1.0), "probes": (int, 16),
        "probe_lo": (_float, -4.0), "probe_hi": (_float, 4.0),
    },
    "momentum": {
        "D": (_floats, [0.0, 1.0]), "region": (_interval, [0.0, math.inf]),
        "times": (_floats, [4.0, 8.0, 16.0, 32.0]), "boundary_tol": (_float, 1e-10),
        "overflow_tol": (_float, 1e-3), "agreement_times": (_floats, []),
        "agreement_D": (_float, 1.0),
    },
    "conservation": {
        "D": (_float, 1.0), "region": (_interval, [0.0, math.inf]),
        "times": (_floats, [0.0, 0.5, 1.0, 2.0]),
    },
    "logic": {
        "D": (_float, 1.0), "n_states": (int, 100), "n_projections": (int, 20),
        "momentum_span": (_float, 4.0), "spread": (_float, 4.0), "heisenberg_t": (_float, 0.5),
    },
    "gpvm": {
        "D": (_floats, [0.0, 0.5, 1.0]), "base": (_choice("momentum", "position"), "momentum"),
        "n_states": (int, 10), "n_pairs": (int, 10),
        "edges": (_floats, [-3.0, -1.5, -0.5, 0.0, 0.5, 1.5, 3.0]),
        "spread": (_float, 4.0), "negative_control": (_bool, True),
    },
}

COMMAND_SECTIONS: dict[str, tuple[str, ...]] = {
    "evolve": ("run", "grid", "state", "potential", "evolve"),
    "overlap": ("run", "grid", "overlap"),
    "ftl": ("run", "ftl"),
    "mixture": ("run", "grid", "mixture"),
    "momentum": ("run", "grid", "state", "momentum"),
    "conservation": ("run", "grid", "state", "conservation"),
    "logic": ("run", "grid", "logic"),
    "gpvm-check": ("run", "grid", "gpvm"),
}

_STATE_KEYS = {
    "gaussian": {"center", "sigma", "k0"},
    "two_plateau": {"plateau_D"},
    "exp_gaussian": {"center", "sigma", "decay"},
}
_POTENTIAL_KEYS = {"t_on", "t_off"}
_EVOLVE_CHECKS = {"direct", "hamiltonian_gap", "identities"}


@dataclass
class RunConfig:
    """A fully validated configuration for one subcommand."""

    command: str
    sections: dict[str, dict[str, Any]]
    source: str | None = None
    out_dir: str | None = None
    extras: dict = field(default_factory=dict)

    def __getitem__(self, section: str) -> dict[str, Any]:
        return self.sections[section]

    @property
    def seed(self) -> int:
        return self.sections["run"]["seed"]

    def grid(self) -> Grid1D:
        g = self.sections["grid"]
        return make_grid(g["n"], g["x_min"], g["x_max"])

    def potential(self) -> Potential:
        return build_potential(self.sections.get("potential", {"kind": "zero"}))

    def resolved(self) -> dict:
        return {"command": self.command, **{k: dict(v) for k, v in self.sections.items()}}


def build_potential(section: dict) -> Potential:
    params = {k: v for k, v in section.items() if k not in ("kind", "t_on", "t_off") and v is not None}
    window = {k: section[k] for k in ("t_on", "t_off") if k in section}
    return Potential(section.get("kind", "zero"), params, **window)


def _parse_section(name: str, raw: dict[str, str], path: str) -> dict[str, Any]:
    schema = SCHEMAS[name]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {unknown} in [{name}]")
    out: dict[str, Any] = {}
    for key, (parse, default) in schema.items():
        if key in raw:
            try:
                out[key] = parse(raw[key])
            except ValueError as exc:
                raise ConfigError(f"{path}: [{name}] {key} = {raw[key]!r}: {exc}") from None
        elif default is not None:
            out[key] = list(default) if isinstance(default, list) else default
    return out


def _restrict(section: dict[str, Any], raw: dict[str, str], allowed: set[str], always: set[str],
              label: str, path: str) -> dict[str, Any]:
    extra = sorted(set(raw) - allowed - always)
    if extra:
        raise ConfigError(f"key(s) {extra} do not apply to {label}")
    return {k: v for k, v in section.items() if k in allowed | always}


def _validate(cfg: RunConfig, raw: dict[str, dict[str, str]], path: str) -> None:
    s = cfg.sections
    try:
        if "grid" in s:
            cfg.grid()
        if "run" in s and s["run"]["dt"] <= 0:
            raise ConfigError("dt must be positive")
        if "state" in s:
            kind = s["state"]["kind"]
            s["state"] = _restrict(s["state"], raw.get("state", {}), _STATE_KEYS[kind], {"kind"},
                                   f"state kind {kind!r}", path)
            if "sigma" in s["state"] and s["state"]["sigma"] <= 0:
                raise ConfigError("state sigma must be positive")
        if "potential" in s:
            kind = s["potential"]["kind"]
            required = set(POTENTIAL_PARAMS[kind])
            s["potential"] = _restrict(s["potential"], raw.get("potential", {}),
                                       required | _POTENTIAL_KEYS, {"kind"},
                                       f"potential kind {kind!r}", path)
            cfg.potential()
        if "evolve" in s:
            bad = sorted(set(s["evolve"]["checks"]) - _EVOLVE_CHECKS)
            if bad:
                raise ConfigError(f"unknown evolve check(s) {bad}")
            if s["evolve"]["t_final"] < 0:
                raise ConfigError("t_final must be nonnegative")
        if "ftl" in s:
            f = s["ftl"]
            if len(f["lab_centers"]) != 2 or len(f["moon_offsets"]) != 2:
                raise ConfigError("ftl needs exactly two lab centers and two moon offsets")
            make_grid(f["lab_n"], -f["lab_half_width"], f["lab_half_width"])
            make_grid(f["moon_n"], -f["moon_half_width"], f["moon_half_width"])
            if f["pulse_t_on"] > f["pulse_t_off"]:
                raise ConfigError("pulse_t_on must not exceed pulse_t_off")
        if "mixture" in s and len(s["mixture"]["centers"]) != 2:
            raise ConfigError("mixture needs exactly two centers")
        if "gpvm" in s and len(s["gpvm"]["edges"]) < 1:
            raise ConfigError("gpvm needs at least one partition edge")
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def parse_config_text(text: str, command: str | None = None, source: str = "<string>") -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None, default_section="__no_default__")
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    raw = {name: dict(parser.items(name)) for name in parser.sections()}

    declared = raw.get("run", {}).get("experiment")
    if command is None:
        if declared is None:
            raise ConfigError(f"{source}: no subcommand given and no [run] experiment key")
        command = declared.strip()
    if command not in COMMANDS:
        raise ConfigError(f"unknown subcommand {command!r}")
    if declared is not None and declared.strip() != command:
        raise ConfigError(f"{source}: config is for {declared.strip()!r}, not {command!r}")

    allowed = COMMAND_SECTIONS[command]
    unknown = sorted(set(raw) - set(allowed))
    if unknown:
        raise ConfigError(f"{source}: section(s) {unknown} are not used by {command!r}")
    sections = {name: _parse_section(name, raw.get(name, {}), source) for name in allowed}
    sections["run"].pop("experiment", None)
    cfg = RunConfig(command, sections, source)
    _validate(cfg, raw, source)
    return cfg


def parse_config(path, command: str | None = None) -> RunConfig:
    """Read and validate ``path``; ``command`` overrides (and must agree with) ``[run] experiment``."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {str(path)!r}: {exc.strerror or exc}") from None
    return parse_config_text(text, command, str(p))
