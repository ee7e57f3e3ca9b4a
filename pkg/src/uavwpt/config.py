"""INI-style configuration for the command-line tools.

Sections and keys (all have built-in defaults, shown by ``defaults_text``):

    [eh]        a, b, c                  harvester curve parameters (1/mW, mW, mW)
    [topology]  height, r_min, r_max,    UAV altitude and the horizontal-distance
                frozen                   band; frozen=true reuses one topology draw
                                         for every trial of a sweep
    [channel]   kappa, alpha,            Rician factor, pathloss exponent, and
                independent_dl           whether the downlink gets its own draw
                                         instead of reusing the uplink one
    [ue]        count, antennas,         fleet shape; p_max and weights accept a
                p_max, weights           single value (broadcast) or a comma list
    [system]    noise_power,             receiver noise (mW), amplifier
                amp_efficiency,          efficiency in (0, 1], circuit power (mW)
                circuit_power
    [solver]    tol, max_iter            power-allocation stopping controls
    [sweep]     p_cir, c, trials, seed   comma lists of circuit powers and
                                         harvester saturation levels, Monte-Carlo
                                         trials per cell, base RNG seed

A missing file is fine when ``path`` is None (pure defaults); a named file
that does not exist or does not parse is a ConfigError carrying a line-level
message where one exists.  Command-line ``--set section.key=value`` overrides
are applied after the file.
"""

import configparser
from dataclasses import dataclass

import numpy as np

from .eh_model import EhParams
from .emwt import SystemConfig

_DEFAULTS = {
    "eh": {"a": "6400", "b": "0.003", "c": "200"},
    "topology": {"height": "50", "r_min": "10", "r_max": "20", "frozen": "false"},
    "channel": {"kappa": "2", "alpha": "2.5", "independent_dl": "false"},
    "ue": {
        "count": "5",
        "antennas": "3",
        "p_max": "200",
        "weights": "0.3, 0.25, 0.2, 0.15, 0.1",
    },
    "system": {
        "noise_power": "0.001",
        "amp_efficiency": "0.8",
        "circuit_power": "40",
    },
    "solver": {"tol": "1e-8", "max_iter": "10000"},
    "sweep": {
        "p_cir": "40, 45, 50, 55, 60, 65, 70, 75, 80",
        "c": "100, 200",
        "trials": "10000",
        "seed": "12345",
    },
}


class ConfigError(ValueError):
    """Unreadable, unparsable, or semantically invalid configuration."""


@dataclass(frozen=True)
class AppConfig:
    """Fully parsed configuration, ready to drive the pipeline."""

    eh_a: float
    eh_b: float
    eh_c: float
    height: float
    r_min: float
    r_max: float
    frozen_topology: bool
    kappa: float
    alpha: float
    independent_dl: bool
    n_ues: int
    n_antennas: int
    p_max: np.ndarray
    weights: np.ndarray
    noise_power: float
    amp_efficiency: float
    circuit_power: float
    solver_tol: float
    solver_max_iter: int
    sweep_p_cir: tuple
    sweep_c: tuple
    trials: int
    seed: int

    def system(self, circuit_power=None, eh_c=None) -> SystemConfig:
        """Materialize a SystemConfig, optionally overriding the swept knobs."""
        c = self.eh_c if eh_c is None else eh_c
        return SystemConfig(
            n_ues=self.n_ues,
            n_antennas=self.n_antennas,
            noise_power=self.noise_power,
            amp_efficiency=self.amp_efficiency,
            circuit_power=self.circuit_power if circuit_power is None else circuit_power,
            p_max=self.p_max,
            weights=self.weights,
            eh=EhParams(self.eh_a, self.eh_b, c),
        )


def defaults_text() -> str:
    """The built-in configuration, rendered as an INI document."""
    lines = []
    for section, keys in _DEFAULTS.items():
        lines.append(f"[{section}]")
        for key, value in keys.items():
            lines.append(f"{key} = {value}")
        lines.append("")
    return "\n".join(lines)


def _fresh_parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None)
    parser.read_dict(_DEFAULTS)
    return parser


def _float_list(raw: str) -> list:
    items = [part.strip() for part in raw.split(",") if part.strip()]
    if not items:
        raise ValueError("empty list")
    return [float(part) for part in items]


def _vector(raw: str, n_ues: int, what: str) -> np.ndarray:
    values = _float_list(raw)
    if len(values) == 1:
        return np.full(n_ues, values[0])
    if len(values) != n_ues:
        raise ConfigError(
            f"ue.{what} needs 1 or {n_ues} comma-separated values, got {len(values)}"
        )
    return np.asarray(values)


def apply_overrides(parser: configparser.ConfigParser, overrides) -> None:
    """Apply --set entries of the form section.key=value."""
    for item in overrides or ():
        head, sep, value = item.partition("=")
        section, dot, key = head.partition(".")
        if not sep or not dot or not section or not key:
            raise ConfigError(f"override {item!r} is not of the form section.key=value")
        if section not in parser or key not in parser[section]:
            raise ConfigError(f"override names unknown key {section}.{key}")
        parser[section][key] = value.strip()


def load_config(path=None, overrides=()) -> AppConfig:
    """Read an INI file (or pure defaults), apply overrides, validate."""
    parser = _fresh_parser()
    if path is not None:
        try:
            with open(path, encoding="utf-8") as handle:
                parser.read_file(handle, source=str(path))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except configparser.Error as exc:
            raise ConfigError(f"malformed config: {exc}") from exc
        for section in parser.sections():
            if section not in _DEFAULTS:
                raise ConfigError(f"unknown config section [{section}]")
            for key in parser[section]:
                if key not in _DEFAULTS[section]:
                    raise ConfigError(f"unknown config key {section}.{key}")
    apply_overrides(parser, overrides)

    def number(section, key, kind=float):
        raw = parser[section][key]
        try:
            return kind(raw)
        except ValueError as exc:
            raise ConfigError(f"{section}.{key}: cannot parse {raw!r}") from exc

    try:
        n_ues = number("ue", "count", int)
        n_antennas = number("ue", "antennas", int)
        if n_ues < 1 or n_antennas < 1:
            raise ConfigError("ue.count and ue.antennas must be at least 1")
        p_max = _vector(parser["ue"]["p_max"], n_ues, "p_max")
        weights = _vector(parser["ue"]["weights"], n_ues, "weights")
        sweep_p_cir = tuple(_float_list(parser["sweep"]["p_cir"]))
        sweep_c = tuple(_float_list(parser["sweep"]["c"]))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad list value in config: {exc}") from exc

    trials = number("sweep", "trials", int)
    if trials < 1:
        raise ConfigError("sweep.trials must be at least 1")
    if any(v < 0 for v in sweep_p_cir) or any(v < 0 for v in sweep_c):
        raise ConfigError("sweep values must be nonnegative")

    try:
        frozen = parser.getboolean("topology", "frozen")
        independent_dl = parser.getboolean("channel", "independent_dl")
    except ValueError as exc:
        raise ConfigError(f"boolean config key: {exc}") from exc

    cfg = AppConfig(
        eh_a=number("eh", "a"),
        eh_b=number("eh", "b"),
        eh_c=number("eh", "c"),
        height=number("topology", "height"),
        r_min=number("topology", "r_min"),
        r_max=number("topology", "r_max"),
        frozen_topology=frozen,
        kappa=number("channel", "kappa"),
        alpha=number("channel", "alpha"),
        independent_dl=independent_dl,
        n_ues=n_ues,
        n_antennas=n_antennas,
        p_max=p_max,
        weights=weights,
        noise_power=number("system", "noise_power"),
        amp_efficiency=number("system", "amp_efficiency"),
        circuit_power=number("system", "circuit_power"),
        solver_tol=number("solver", "tol"),
        solver_max_iter=number("solver", "max_iter", int),
        sweep_p_cir=sweep_p_cir,
        sweep_c=sweep_c,
        trials=trials,
        seed=number("sweep", "seed", int),
    )
    try:
        cfg.system()  # runs the SystemConfig/EhParams validators once
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg
