"""Experiment configuration: flat ``.cfg`` files with typed keys.

Every key has a default; unknown sections or keys are rejected, and every
error names the offending ``section.key``.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .propagate import default_flight_time

EXPERIMENTS = ("two_slit", "three_slit", "n_slit", "momentum_space")
BASES = ("which_way", "fourier", "three_slit", "general_two_slit", "custom")
MODES = ("fraunhofer", "fresnel_exact")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


# section -> key -> (default, help); None means "derived"
SCHEMA: dict[str, dict[str, tuple[object, str]]] = {
    "experiment": {
        "experiment": ("two_slit", "one of " + ", ".join(EXPERIMENTS)),
        "n": (None, "number of slits; fixed by two_slit/three_slit/momentum_space"),
        "d": (1.0, "slit spacing (unit of length)"),
        "sigma": (None, "slit width; default d/20"),
        "profile": ("gaussian", "gaussian or tophat"),
        "origin": ("at_zero", "at_zero (slits at 0, d, ...) or centered"),
        "grid_points": (None, "position grid points; default resolves sigma"),
        "p1": (0.0, "momentum_space: lower peak"),
        "p2": (1.0, "momentum_space: upper peak"),
        "width": (None, "momentum_space: peak width; default (p2-p1)/20"),
    },
    "basis": {
        "basis": ("fourier", "one of " + ", ".join(BASES)),
        "thetas": ("0, 0, 0", "general_two_slit: theta1, theta2, theta3 in radians"),
        "matrix": ("", "custom: rows separated by ';', complex entries separated by ','"),
    },
    "propagation": {
        "mode": ("fraunhofer", "fraunhofer or fresnel_exact"),
        "t": (None, "flight time; default 40 d^2 / 2 pi"),
        "screen_points": (16384, "far-field screen grid points"),
    },
    "montecarlo": {
        "enabled": (True, "draw particle-by-particle samples"),
        "n_samples": (100000, "number of samples"),
        "seed": (12345, "64-bit run seed"),
        "bins": (200, "histogram bins"),
    },
    "output": {
        "dir": ("kicksim_out", "output directory"),
    },
}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "two_slit"
    n: int = 2
    d: float = 1.0
    sigma: float | None = None
    profile: str = "gaussian"
    origin: str = "at_zero"
    grid_points: int | None = None
    p1: float = 0.0
    p2: float = 1.0
    width: float | None = None
    basis: str = "fourier"
    thetas: tuple[float, float, float] = (0.0, 0.0, 0.0)
    matrix: np.ndarray | None = field(default=None, compare=False)
    mode: str = "fraunhofer"
    t: float | None = None
    screen_points: int = 16384
    montecarlo: bool = True
    n_samples: int = 100000
    seed: int = 12345
    bins: int = 200
    output_dir: str = "kicksim_out"

    @property
    def flight_time(self) -> float:
        return default_flight_time(self.d) if self.t is None else self.t

    def summary(self) -> dict:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "matrix"}
        out["thetas"] = list(self.thetas)
        if self.matrix is not None:
            out["matrix"] = [[[z.real, z.imag] for z in row] for row in self.matrix.tolist()]
        return out


def _num(key, raw, kind, positive=False):
    try:
        v = kind(raw)
    except ValueError:
        raise ConfigError(key, f"expected {kind.__name__}, got {raw!r}") from None
    if kind is float and not math.isfinite(v):
        raise ConfigError(key, "must be finite")
    if positive and v <= 0:
        raise ConfigError(key, f"must be positive, got {raw!r}")
    return v


def _choice(key, raw, options):
    if raw not in options:
        raise ConfigError(key, f"expected one of {', '.join(options)}, got {raw!r}")
    return raw


def _matrix(key, raw):
    try:
        rows = [[complex(e.replace(" ", "")) for e in r.split(",")] for r in raw.split(";")
                if r.strip()]
        m = np.array(rows, dtype=complex)
    except ValueError:
        raise ConfigError(key, f"cannot parse matrix {raw!r}") from None
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ConfigError(key, "matrix must be square")
    return m


def read_config(path) -> ExperimentConfig:
    """Load and validate a config file."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as err:
        raise ConfigError("config", f"cannot read {path}: {err.strerror}") from None
    except configparser.Error as err:
        raise ConfigError("config", f"malformed file: {err.message}") from None
    raw: dict[str, str] = {}
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(section, "unknown section")
        for key, value in parser.items(section):
            if key not in SCHEMA[section]:
                raise ConfigError(f"{section}.{key}", "unknown key")
            raw[f"{section}.{key}"] = value.strip()
    return build_config(raw)


def build_config(raw: dict[str, str]) -> ExperimentConfig:
    get = raw.get
    kw: dict = {}
    exp = kw["experiment"] = _choice("experiment.experiment",
                                     get("experiment.experiment", "two_slit"), EXPERIMENTS)
    fixed = {"two_slit": 2, "three_slit": 3, "momentum_space": 2}.get(exp)
    if "experiment.n" in raw:
        n = _num("experiment.n", raw["experiment.n"], int)
        if fixed is not None and n != fixed:
            raise ConfigError("experiment.n", f"{exp} requires n = {fixed}, got {n}")
        if n < 2:
            raise ConfigError("experiment.n", f"need at least 2 slits, got {n}")
    elif fixed is None:
        raise ConfigError("experiment.n", "required for n_slit")
    else:
        n = fixed
    kw["n"] = n
    kw["d"] = d = _num("experiment.d", get("experiment.d", "1.0"), float, True)
    if "experiment.sigma" in raw:
        kw["sigma"] = _num("experiment.sigma", raw["experiment.sigma"], float, True)
        if kw["sigma"] > d / 4:
            raise ConfigError("experiment.sigma", f"must be at most d/4, got {kw['sigma']}")
    kw["profile"] = _choice("experiment.profile", get("experiment.profile", "gaussian"),
                            ("gaussian", "tophat"))
    kw["origin"] = _choice("experiment.origin", get("experiment.origin", "at_zero"),
                           ("at_zero", "centered"))
    if "experiment.grid_points" in raw:
        g = _num("experiment.grid_points", raw["experiment.grid_points"], int, True)
        if g & (g - 1):
            raise ConfigError("experiment.grid_points", f"must be a power of two, got {g}")
        kw["grid_points"] = g
    kw["p1"] = _num("experiment.p1", get("experiment.p1", "0.0"), float)
    kw["p2"] = _num("experiment.p2", get("experiment.p2", "1.0"), float)
    if exp == "momentum_space" and not kw["p2"] > kw["p1"]:
        raise ConfigError("experiment.p2", "must exceed experiment.p1")
    if "experiment.width" in raw:
        kw["width"] = w = _num("experiment.width", raw["experiment.width"], float, True)
        if exp == "momentum_space" and w > (kw["p2"] - kw["p1"]) / 8:
            raise ConfigError("experiment.width", "must be at most (p2 - p1)/8")

    basis = kw["basis"] = _choice("basis.basis", get("basis.basis", "fourier"), BASES)
    parts = get("basis.thetas", "0, 0, 0").split(",")
    if len(parts) != 3:
        raise ConfigError("basis.thetas", "expected three angles")
    kw["thetas"] = tuple(_num("basis.thetas", p.strip(), float) for p in parts)
    if basis == "general_two_slit" and n != 2:
        raise ConfigError("basis.basis", "general_two_slit needs n = 2")
    if basis == "three_slit" and (n != 3 or kw["origin"] != "centered"):
        raise ConfigError("basis.basis", "three_slit basis needs n = 3 and centered origin")
    if basis == "custom":
        if "basis.matrix" not in raw:
            raise ConfigError("basis.matrix", "required for a custom basis")
        m = _matrix("basis.matrix", raw["basis.matrix"])
        if m.shape[0] != n:
            raise ConfigError("basis.matrix", f"expected {n}x{n}, got {m.shape[0]}x{m.shape[0]}")
        if np.max(np.abs(m @ m.conj().T - np.eye(n))) > 1e-10:
            raise ConfigError("basis.matrix", "matrix is not unitary")
        kw["matrix"] = m

    kw["mode"] = _choice("propagation.mode", get("propagation.mode", "fraunhofer"), MODES)
    if "propagation.t" in raw:
        kw["t"] = _num("propagation.t", raw["propagation.t"], float, True)
    if exp == "momentum_space" and kw["mode"] != "fraunhofer":
        raise ConfigError("propagation.mode", "momentum_space supports fraunhofer only")
    sp = kw["screen_points"] = _num("propagation.screen_points",
                                    get("propagation.screen_points", "16384"), int, True)
    if sp < 16:
        raise ConfigError("propagation.screen_points", "need at least 16 points")

    flag = get("montecarlo.enabled", "true").lower()
    if flag not in ("true", "false", "yes", "no", "1", "0", "on", "off"):
        raise ConfigError("montecarlo.enabled", f"expected a boolean, got {flag!r}")
    kw["montecarlo"] = flag in ("true", "yes", "1", "on")
    kw["n_samples"] = _num("montecarlo.n_samples", get("montecarlo.n_samples", "100000"), int)
    if kw["n_samples"] < 0:
        raise ConfigError("montecarlo.n_samples", "must be non-negative")
    kw["seed"] = _num("montecarlo.seed", get("montecarlo.seed", "12345"), int)
    if not 0 <= kw["seed"] < 2**64:
        raise ConfigError("montecarlo.seed", "must fit in 64 unsigned bits")
    kw["bins"] = _num("montecarlo.bins", get("montecarlo.bins", "200"), int, True)
    kw["output_dir"] = get("output.dir", "kicksim_out")
    cfg = ExperimentConfig(**kw)
    _revalidate(cfg)
    return cfg


def _revalidate(cfg: ExperimentConfig) -> None:
    """Construct the library objects so their own preconditions run at load."""
    from .pspace import MomentumPeaks
    from .qstate import SlitArray

    try:
        if cfg.experiment == "momentum_space":
            width = cfg.width if cfg.width is not None else (cfg.p2 - cfg.p1) / 20
            MomentumPeaks(cfg.p1, cfg.p2, width, profile=cfg.profile)
        else:
            SlitArray(cfg.n, cfg.d, cfg.sigma, cfg.profile, cfg.origin)
    except ValueError as err:
        raise ConfigError("experiment", str(err)) from None


def defaults_text() -> str:
    """Config file listing every key with its default and meaning."""
    lines = ["# kicksim defaults; every key is optional unless noted", ""]
    for section, keys in SCHEMA.items():
        lines.append(f"[{section}]")
        for key, (default, text) in keys.items():
            lines.append(f"# {text}")
            if default is None:
                lines.append(f"# {key} =")
            else:
                v = str(default).lower() if isinstance(default, bool) else default
                lines.append(f"{key} = {v}")
        lines.append("")
    return "\n".join(lines)


def bundled(name: str) -> Path | None:
    """Path of a config shipped with the package, by file name or stem."""
    stem = name[:-4] if name.endswith(".cfg") else name
    path = resources.files("kicksim") / "configs" / f"{stem}.cfg"
    return Path(str(path)) if path.is_file() else None
