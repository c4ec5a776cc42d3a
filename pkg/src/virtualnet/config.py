"""Flat ``key = value`` run configuration.

One setting per line; ``#`` starts a comment; blank lines are ignored.  Keys
are the field names of RunConfig.  Unknown keys, repeated keys and values of
the wrong type are errors that carry the line (and column of the value).
"""

from dataclasses import dataclass, fields, replace
import math

from .errors import ConfigError
from .optimize import GaConfig
from .gaussian import (
    FM_SQUEEZING_DB,
    GM_SQUEEZING_DB,
    SOURCE_ANTISQUEEZING_DB,
    SOURCE_SQUEEZING_DB,
)


@dataclass(frozen=True)
class RunConfig:
    # inputs; anti-squeezing "auto" propagates the source value through the inferred loss
    gm_squeezing_db: float = GM_SQUEEZING_DB
    fm_squeezing_db: float = FM_SQUEEZING_DB
    gm_antisqueezing_db: object = "auto"
    fm_antisqueezing_db: object = "auto"
    source_squeezing_db: float = SOURCE_SQUEEZING_DB
    source_antisqueezing_db: float = SOURCE_ANTISQUEEZING_DB
    # networks
    network_file: str = ""
    long_arm: int = 1
    n_min: int = 2
    n_max: int = 8
    pattern_modes: int = 5
    # criteria
    optimizer: str = "genetic"
    cluster_neighbor_gain: float = 1.0
    # genetic algorithm
    ga_population: int = 64
    ga_generations: int = 200
    ga_mutation_scale: float = 0.3
    ga_objective_weight: float = 0.9
    ga_mode: str = "independent"
    seed: int = 0
    # average-vs-N sweep
    sweep_n_max: int = 30
    sweep_levels_db: tuple = (-1.0, -3.0, -6.0, -10.0)
    # detection
    losses: bool = False
    fill_factor: float = 0.9
    quantum_efficiency: float = 0.8
    # output
    output_format: str = "csv"

    def __post_init__(self):
        if self.optimizer not in ("genetic", "closed_form"):
            raise ValueError(f"optimizer must be 'genetic' or 'closed_form', got {self.optimizer!r}")
        if self.output_format not in ("csv", "json", "svg"):
            raise ValueError(f"output_format must be csv, json or svg, got {self.output_format!r}")
        if self.long_arm not in (1, 2):
            raise ValueError(f"long_arm must be 1 or 2, got {self.long_arm!r}")
        if not 2 <= self.n_min <= self.n_max:
            raise ValueError(f"need 2 <= n_min <= n_max, got {self.n_min} and {self.n_max}")
        if self.sweep_n_max < 2:
            raise ValueError("sweep_n_max must be at least 2")
        if not self.sweep_levels_db:
            raise ValueError("sweep_levels_db must not be empty")
        if any(level > 0 for level in self.sweep_levels_db):
            raise ValueError("sweep_levels_db entries are squeezing levels and must be <= 0 dB")
        if not 1 <= self.pattern_modes <= 8:
            raise ValueError("pattern_modes must lie in 1..8")
        for name in ("gm_antisqueezing_db", "fm_antisqueezing_db"):
            v = getattr(self, name)
            if v != "auto" and (isinstance(v, bool) or not isinstance(v, (int, float))):
                raise ValueError(f"{name} must be 'auto' or a number")
        for name in ("gm_squeezing_db", "fm_squeezing_db", "source_squeezing_db"):
            if getattr(self, name) > 0:
                raise ValueError(f"{name} must be <= 0 dB")
        if self.ga_mode not in ("independent", "shared"):
            raise ValueError(f"ga_mode must be 'independent' or 'shared', got {self.ga_mode!r}")
        if self.ga_population < 3:
            raise ValueError("ga_population must be at least 3")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.ga_generations < 1:
            raise ValueError("ga_generations must be at least 1")
        if not 0.0 <= self.ga_objective_weight <= 1.0:
            raise ValueError("ga_objective_weight must lie in [0, 1]")
        if not 0.0 < self.fill_factor <= 1.0 or not 0.0 < self.quantum_efficiency <= 1.0:
            raise ValueError("fill_factor and quantum_efficiency must lie in (0, 1]")

    def ga_config(self):
        return GaConfig(
            population=self.ga_population,
            generations=self.ga_generations,
            mutation_scale=self.ga_mutation_scale,
            seed=self.seed,
            objective_weight=self.ga_objective_weight,
            mode=self.ga_mode,
        )


def _to_bool(text):
    t = text.lower()
    if t in ("on", "true", "yes", "1"):
        return True
    if t in ("off", "false", "no", "0"):
        return False
    raise ValueError(f"expected on/off, got {text!r}")


def _to_float(text):
    v = float(text)
    if not math.isfinite(v):
        raise ValueError(f"expected a finite number, got {text!r}")
    return v


def _to_int(text):
    v = int(text, 10)
    if v < 0:
        raise ValueError(f"expected a nonnegative integer, got {text!r}")
    return v


def _to_levels(text):
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("expected a comma-separated list of dB values")
    return tuple(_to_float(p) for p in parts)


def _to_anti(text):
    return "auto" if text.lower() == "auto" else _to_float(text)


_CONVERTERS = {
    float: _to_float,
    int: _to_int,
    str: str,
    bool: _to_bool,
    tuple: _to_levels,
    object: _to_anti,
}

_FIELDS = {f.name: f for f in fields(RunConfig)}


def _field_type(f):
    default = f.default
    if isinstance(default, bool):
        return bool
    if f.type in ("object", object):
        return object
    return type(default)


def parse_config(text, source=None, base=None):
    """Parse config text on top of ``base`` (defaults when omitted)."""
    values = {}
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        code = raw.split("#", 1)[0].rstrip()
        if not code.strip():
            continue
        if "=" not in code:
            col = len(code) - len(code.lstrip()) + 1
            raise ConfigError("expected 'key = value'", lineno, col, source)
        key_part, value_part = code.split("=", 1)
        key = key_part.strip()
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        value = value_part.strip()
        value_col = len(key_part) + 2 + (len(value_part) - len(value_part.lstrip()))
        if key not in _FIELDS:
            raise ConfigError(f"unknown key {key!r}", lineno, key_col, source)
        if key in seen:
            raise ConfigError(f"key {key!r} already set on line {seen[key]}", lineno, key_col, source)
        seen[key] = lineno
        if not value:
            raise ConfigError(f"missing value for {key!r}", lineno, value_col, source)
        try:
            values[key] = _CONVERTERS[_field_type(_FIELDS[key])](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", lineno, value_col, source) from None
    try:
        return replace(base or RunConfig(), **values)
    except ValueError as exc:
        # point at the first key the message names, when it came from the file
        line = next((seen[k] for k in seen if k in str(exc)), None)
        raise ConfigError(str(exc), line, None, source) from None


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", None, None, str(path)) from None
    return parse_config(text, source=str(path))


def format_config(config):
    """Config text that parses back to ``config``."""
    lines = []
    for name in _FIELDS:
        v = getattr(config, name)
        if isinstance(v, bool):
            text = "on" if v else "off"
        elif isinstance(v, tuple):
            text = ", ".join(repr(x) for x in v)
        elif isinstance(v, float):
            text = repr(v)
        else:
            text = str(v)
        if text == "":
            continue
        lines.append(f"{name} = {text}")
    return "\n".join(lines) + "\n"
