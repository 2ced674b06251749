"""Flat ``key = value [unit]`` experiment configuration.

Example::

    # collinear layout, relay forwarding energy 20% of capacity
    p        = 10 W
    n0       = -80 dBm      # n1 = n2 = n0 / 2 unless given
    capacity = 0.2 J
    levels   = 200
    delta    = 40
    sweep        = p
    sweep_values = 1, 2, 5, 10 W

Powers accept ``W``, ``mW``, ``dBm`` and ``dBW`` (bare numbers are watts),
distances ``m``, energies ``J``. ``p``, ``m`` and ``sigma`` set both sources'
values at once and may not be combined with their per-source keys. Every
value is normalized to SI units on load; ``ExperimentConfig.values`` holds the
resolved set.
"""

import math
import re
from dataclasses import dataclass

from .chain import BatteryModel
from .channel import SystemParams, Topology
from .errors import ConfigError, DomainError
from .sim import BATTERY_MODES, SCHEMES, SimConfig

__all__ = ["KEYS", "ExperimentConfig", "parse_config", "parse_config_text"]

_POWER_UNITS = {
    "": lambda x: x,
    "w": lambda x: x,
    "mw": lambda x: x * 1e-3,
    "dbm": lambda x: 10.0 ** ((x - 30.0) / 10.0),
    "dbw": lambda x: 10.0 ** (x / 10.0),
}
_DISTANCE_UNITS = {"": lambda x: x, "m": lambda x: x}
_ENERGY_UNITS = {"": lambda x: x, "j": lambda x: x, "mj": lambda x: x * 1e-3}
_PLAIN = {"": lambda x: x}

# key -> (kind, default, description)
KEYS = {
    "p": ("power", None, "transmit power of both sources (sets p_a and p_b)"),
    "p_a": ("power", 1.0, "transmit power of source A [W]"),
    "p_b": ("power", 1.0, "transmit power of source B [W]"),
    "n0": ("power", 1e-11, "noise power at the sources [W] (-80 dBm)"),
    "n1": ("power", None, "relay antenna noise [W] (default n0 / 2)"),
    "n2": ("power", None, "relay conversion noise [W] (default n0 / 2)"),
    "eta": ("float", 0.5, "energy conversion efficiency"),
    "lambda": ("float", 0.9, "power splitting ratio routed to harvesting"),
    "m": ("int", None, "Nakagami severity of both links (sets m_a and m_b)"),
    "m_a": ("int", 2, "Nakagami severity of the A-R link"),
    "m_b": ("int", 2, "Nakagami severity of the B-R link"),
    "sigma": ("float", None, "rate of both sources (sets sigma_a and sigma_b)"),
    "sigma_a": ("float", 1.0, "rate of source A [bit/s/Hz]"),
    "sigma_b": ("float", 1.0, "rate of source B [bit/s/Hz]"),
    "d_ab": ("distance", 20.0, "A-B distance [m]"),
    "d_ar": ("distance", 8.0, "A-R distance [m]; d_br = d_ab - d_ar"),
    "alpha": ("float", 2.0, "path-loss exponent in [2, 5]"),
    "omega_a": ("float", None, "override the A-R average gain (default from path loss)"),
    "omega_b": ("float", None, "override the B-R average gain (default from path loss)"),
    "capacity": ("energy", 0.2, "battery capacity [J]"),
    "levels": ("int", 200, "battery levels L, excluding the empty level"),
    "delta": ("int", 40, "forwarding energy in levels, 1..L"),
    "delta_fraction": ("float", None, "set delta = round(fraction * L) instead of delta"),
    "scheme": ("choice", "ps-ea", "ps-ea | ts-ea | ps-noea"),
    "battery_mode": ("choice", "discrete", "discrete | continuous (simulation)"),
    "n_blocks": ("int", 1_000_000, "simulated blocks per point"),
    "seed": ("int", 0, "simulation seed"),
    "sweep": ("name", None, "parameter swept by 'sweep' and 'compare'"),
    "sweep_min": ("axis", None, "first sweep value"),
    "sweep_max": ("axis", None, "last sweep value (inclusive)"),
    "sweep_step": ("axis", None, "sweep increment"),
    "sweep_values": ("list", None, "explicit comma-separated sweep values"),
    "sweep_simulate": ("bool", True, "also simulate every sweep point"),
    "lambda_min": ("float", 0.01, "smallest lambda searched by optimize/compare"),
    "lambda_max": ("float", 0.99, "largest lambda searched"),
    "lambda_step": ("float", 0.01, "lambda search step"),
    "workers": ("int", 1, "processes used for sweeps and searches"),
}

_CHOICES = {"scheme": SCHEMES, "battery_mode": BATTERY_MODES}
_SHORTHANDS = {"p": ("p_a", "p_b"), "m": ("m_a", "m_b"), "sigma": ("sigma_a", "sigma_b")}
# keys that may be swept
SWEEPABLE = [k for k, (kind, _, _) in KEYS.items() if kind in ("power", "float", "int", "energy", "distance")
             and not k.startswith(("lambda_", "sweep")) and k not in ("workers", "n_blocks", "seed")]

_NUM = re.compile(r"^([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z]*)$")


def _units_for(kind):
    return {"power": _POWER_UNITS, "distance": _DISTANCE_UNITS, "energy": _ENERGY_UNITS}.get(kind, _PLAIN)


def _parse_number(text, kind, key, line):
    m = _NUM.match(text.strip())
    if not m:
        raise ConfigError(f"{key}: cannot parse number {text!r}", line=line, key=key)
    value, unit = float(m.group(1)), m.group(2).lower()
    units = _units_for(kind)
    if unit not in units:
        raise ConfigError(f"{key}: unit {m.group(2)!r} not valid here (allowed: {sorted(u for u in units if u)})",
                          line=line, key=key)
    return units[unit](value), unit


def _parse_value(key, text, line, sweep_kind):
    kind = KEYS[key][0]
    text = text.strip()
    if kind == "choice":
        v = text.lower()
        if v not in _CHOICES[key]:
            raise ConfigError(f"{key} must be one of {', '.join(_CHOICES[key])}", line=line, key=key)
        return v
    if kind == "bool":
        v = text.lower()
        if v in ("true", "yes", "1", "on"):
            return True
        if v in ("false", "no", "0", "off"):
            return False
        raise ConfigError(f"{key} must be a boolean", line=line, key=key)
    if kind == "name":
        v = text.lower()
        if v not in SWEEPABLE:
            raise ConfigError(f"cannot sweep {text!r}; choose one of {', '.join(SWEEPABLE)}", line=line, key=key)
        return v
    if kind in ("axis", "list"):
        if sweep_kind is None:
            raise ConfigError(f"{key} given before 'sweep'", line=line, key=key)
        if kind == "axis":
            return _parse_number(text, sweep_kind, key, line)[0]
        parts = [p for p in text.split(",")]
        if not parts or any(not p.strip() for p in parts):
            raise ConfigError(f"{key}: empty list entry", line=line, key=key)
        # a trailing unit on the last element applies to the whole list
        m = _NUM.match(parts[-1].strip())
        unit = m.group(2) if m else ""
        out = []
        for p in parts:
            p = p.strip()
            if unit and not p.lower().endswith(unit.lower()):
                p = f"{p} {unit}"
            out.append(_parse_number(p, sweep_kind, key, line)[0])
        return out
    value, _ = _parse_number(text, kind, key, line)
    if kind == "int":
        if value != int(value):
            raise ConfigError(f"{key} must be an integer", line=line, key=key)
        return int(value)
    return value


def parse_config_text(text, source="<config>"):
    """Parse configuration text; see the module docstring for the format."""
    raw = {}
    sweep_kind = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {body!r}", line=lineno)
        key, value = (s.strip() for s in body.split("=", 1))
        key = key.lower()
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}", line=lineno, key=key)
        if key in raw:
            raise ConfigError(f"duplicate key {key!r}", line=lineno, key=key)
        if not value:
            raise ConfigError(f"{key}: missing value", line=lineno, key=key)
        raw[key] = _parse_value(key, value, lineno, sweep_kind)
        if key == "sweep":
            sweep_kind = _sweep_kind(raw[key])
    return ExperimentConfig.from_raw(raw, source=source)


def parse_config(path):
    """Read and validate a configuration file."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config_text(text, source=str(path))


def _sweep_kind(name):
    kind = KEYS[name][0]
    return kind if kind in ("power", "distance", "energy") else "float"


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated configuration; ``values`` maps canonical keys to SI values."""

    values: dict
    source: str = "<config>"

    @classmethod
    def from_raw(cls, raw, source="<config>"):
        vals = dict(raw)
        for short, (ka, kb) in _SHORTHANDS.items():
            if short in vals:
                for k in (ka, kb):
                    if k in vals:
                        raise ConfigError(f"{short} conflicts with {k}; give one or the other", key=short)
                vals[ka] = vals[kb] = vals.pop(short)
        if "delta_fraction" in vals and "delta" in vals:
            raise ConfigError("delta_fraction conflicts with delta", key="delta_fraction")
        for k, (_, default, _) in KEYS.items():
            if k not in vals and default is not None and k not in _SHORTHANDS:
                vals[k] = default
        vals.setdefault("n1", vals["n0"] / 2.0)
        vals.setdefault("n2", vals["n0"] / 2.0)
        if vals.get("delta_fraction") is not None:
            frac = vals["delta_fraction"]
            if not 0 < frac <= 1:
                raise ConfigError("delta_fraction must lie in (0, 1]", key="delta_fraction")
            vals["delta"] = max(1, int(round(frac * vals["levels"])))
        cfg = cls(vals, source)
        cfg.validate()
        return cfg

    def validate(self):
        v = self.values
        if not 1 <= v["delta"] <= v["levels"]:
            raise ConfigError(f"delta must lie in 1..L (L={v['levels']}), got {v['delta']}", key="delta")
        for k in ("n_blocks", "workers"):
            if v[k] < 1:
                raise ConfigError(f"{k} must be >= 1", key=k)
        if v["seed"] < 0 or v["seed"] >= 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer", key="seed")
        if not 0 < v["lambda_min"] <= v["lambda_max"] < 1 or not v["lambda_step"] > 0:
            raise ConfigError("need 0 < lambda_min <= lambda_max < 1 and lambda_step > 0", key="lambda_step")
        for builder in (self.topology, self.system_params, self.battery, self.sim_config):
            try:
                builder()
            except DomainError as exc:
                raise ConfigError(str(exc), key=_guess_key(str(exc))) from exc
        if v.get("sweep") is not None:
            self.axis_values()
        elif any(k in v for k in ("sweep_min", "sweep_max", "sweep_step", "sweep_values")):
            raise ConfigError("sweep range given without 'sweep'", key="sweep")

    def topology(self):
        v = self.values
        return Topology(v["d_ab"], v["d_ar"], v["alpha"])

    def system_params(self):
        v = self.values
        oa, ob = self.topology().gains()
        return SystemParams(
            p_a=v["p_a"], p_b=v["p_b"], n0=v["n0"], n1=v["n1"], n2=v["n2"],
            eta=v["eta"], lam=v["lambda"], m_a=v["m_a"], m_b=v["m_b"],
            omega_a=v.get("omega_a") or oa, omega_b=v.get("omega_b") or ob,
            sigma_a=v["sigma_a"], sigma_b=v["sigma_b"],
        )

    def battery(self):
        v = self.values
        return BatteryModel(v["capacity"], v["levels"], v["delta"])

    def sim_config(self):
        v = self.values
        return SimConfig(v["n_blocks"], v["seed"], v["battery_mode"], v["scheme"])

    def lambdas(self):
        from .optimize import lambda_grid

        v = self.values
        return lambda_grid(v["lambda_min"], v["lambda_max"], v["lambda_step"])

    def axis_values(self):
        """Values of the declared sweep axis, in SI units."""
        v = self.values
        name = v.get("sweep")
        if name is None:
            raise ConfigError("no sweep axis declared (set 'sweep')", key="sweep")
        if v.get("sweep_values") is not None:
            if any(k in v for k in ("sweep_min", "sweep_max", "sweep_step")):
                raise ConfigError("give either sweep_values or sweep_min/max/step", key="sweep_values")
            vals = list(v["sweep_values"])
        else:
            try:
                lo, hi, step = v["sweep_min"], v["sweep_max"], v["sweep_step"]
            except KeyError as exc:
                raise ConfigError(f"sweep axis needs {exc.args[0]}", key=exc.args[0]) from None
            if not step > 0 or hi < lo:
                raise ConfigError("empty sweep axis: need sweep_step > 0 and sweep_max >= sweep_min",
                                  key="sweep_step")
            n = int(math.floor((hi - lo) / step + 1e-9)) + 1
            vals = [lo + k * step for k in range(n)]
        if not vals:
            raise ConfigError("empty sweep axis", key="sweep")
        if KEYS[name][0] == "int":
            vals = [int(round(x)) for x in vals]
        return vals

    def with_value(self, name, value):
        """Copy with one parameter replaced (shorthand keys expand) and revalidated."""
        vals = dict(self.values)
        targets = _SHORTHANDS.get(name, (name,))
        for k in targets:
            vals[k] = value
        if name == "levels" and vals.get("delta_fraction") is not None:
            vals["delta"] = max(1, int(round(vals["delta_fraction"] * value)))
        cfg = ExperimentConfig(vals, self.source)
        cfg.validate()
        return cfg

    def resolved(self):
        """JSON-friendly resolved configuration for provenance lines."""
        return {k: v for k, v in sorted(self.values.items())}


def _guess_key(message):
    if message.startswith("lam "):
        return "lambda"
    for k in sorted(KEYS, key=len, reverse=True):
        if message.startswith(k) or f" {k} " in message:
            return k
    return None
