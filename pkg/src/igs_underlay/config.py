"""JSON scenario, statistics and sweep files.

Scenario file (one channel realization)::

    {
      "p": [1.0, 1.0],            # primary powers, W
      "r0": [1.0, 1.0],           # primary target rates, bits/s/Hz
      "gamma_p_db": [15, 15],     # primary direct CNRs
      "gamma_s_db": 15,           # secondary direct CNR
      "i_s_db": [20, 10],         # secondary -> primary node j
      "i_p_db": [5, 8],           # primary node i -> secondary
      "upsilon_p_db": [10, 10],   # residual self-interference
      "ps_max": 1.0               # secondary budget, W
    }

Each CNR may instead be given in linear scale by dropping the ``_db``
suffix. Pair-valued fields accept a single number meaning "both nodes".

Statistics files use the same keys (dB only, holding mean values) plus an
optional ``pu_direct_correlation`` (default 0.95).

Sweep files::

    {
      "base": {...statistics overrides...},
      "axis": "gamma_s_db", "axis_values": [0, 5, 10],
      "family": "gamma_p_db", "family_values": [10, 15, 20],
      "trials": 10000, "seed": 1
    }
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .model import ScenarioInstance, ScenarioStatistics
from .montecarlo import SweepSpec

__all__ = [
    "ConfigError",
    "CNR_FIELDS",
    "load_json",
    "parse_overrides",
    "scenario_from_dict",
    "scenario_to_dict",
    "statistics_from_dict",
    "statistics_to_dict",
    "default_statistics",
    "canonical_scenario",
    "sweep_spec_from_dict",
    "write_json",
]

CNR_FIELDS = ("gamma_p", "gamma_s", "i_s", "i_p", "upsilon_p")
PLAIN_FIELDS = ("p", "r0", "ps_max")


class ConfigError(ValueError):
    """Malformed or incomplete input document."""


def load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


def parse_overrides(items: Iterable[str]) -> dict:
    """Turn ``key=value`` strings into a dict; values are parsed as JSON."""
    out = {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override must be key=value, got {item!r}")
        try:
            out[key.strip()] = json.loads(raw)
        except json.JSONDecodeError:
            raise ConfigError(f"cannot parse value in override {item!r}") from None
    return out


def _db_to_lin(value):
    if isinstance(value, (list, tuple)):
        return [10.0 ** (float(v) / 10.0) for v in value]
    return 10.0 ** (float(value) / 10.0)


def scenario_from_dict(data: Mapping) -> ScenarioInstance:
    data = dict(data)
    kwargs = {}
    for name in PLAIN_FIELDS:
        if name not in data:
            raise ConfigError(f"missing field {name!r}")
        kwargs[name] = data.pop(name)
    for name in CNR_FIELDS:
        db, lin = f"{name}_db", name
        if db in data and lin in data:
            raise ConfigError(f"give either {db!r} or {lin!r}, not both")
        if db in data:
            kwargs[name] = _db_to_lin(data.pop(db))
        elif lin in data:
            kwargs[name] = data.pop(lin)
        else:
            raise ConfigError(f"missing field {db!r}")
    data.pop("pu_direct_correlation", None)
    if data:
        raise ConfigError(f"unknown fields: {sorted(data)}")
    try:
        return ScenarioInstance(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def scenario_to_dict(scenario: ScenarioInstance) -> dict:
    """Linear-scale representation accepted by :func:`scenario_from_dict`."""
    return {
        "p": list(scenario.p),
        "r0": list(scenario.r0),
        "gamma_p": list(scenario.gamma_p),
        "gamma_s": scenario.gamma_s,
        "i_s": list(scenario.i_s),
        "i_p": list(scenario.i_p),
        "upsilon_p": list(scenario.upsilon_p),
        "ps_max": scenario.ps_max,
    }


def statistics_from_dict(data: Mapping, base: ScenarioStatistics | None = None) -> ScenarioStatistics:
    """Read statistics; fields missing from ``data`` are taken from ``base``."""
    fields = ScenarioStatistics.__dataclass_fields__
    unknown = set(data) - set(fields)
    if unknown:
        raise ConfigError(f"unknown fields: {sorted(unknown)}")
    merged = {} if base is None else statistics_to_dict(base)
    merged.update(data)
    missing = [k for k in fields if k not in merged and k != "pu_direct_correlation"]
    if missing:
        raise ConfigError(f"missing fields: {missing}")
    try:
        return ScenarioStatistics(**merged)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def statistics_to_dict(stats: ScenarioStatistics) -> dict:
    out = {}
    for name in ScenarioStatistics.__dataclass_fields__:
        value = getattr(stats, name)
        out[name] = list(value) if isinstance(value, tuple) else value
    return out


def _bundled(name: str) -> dict:
    with resources.files("igs_underlay").joinpath("data").joinpath(name).open(encoding="utf-8") as fh:
        return json.load(fh)


def default_statistics() -> ScenarioStatistics:
    """Simulation defaults: 15 dB primary links, (20, 10) dB secondary
    interference, 10 dB RSI, 1 W budgets and 1 bit/s/Hz targets."""
    return statistics_from_dict(_bundled("default_stats.json"))


def canonical_scenario() -> ScenarioInstance:
    """The default mean values taken as one instantaneous realization."""
    return scenario_from_dict(_bundled("canonical_scenario.json"))


def sweep_spec_from_dict(data: Mapping, base: ScenarioStatistics | None = None) -> SweepSpec:
    data = dict(data)
    base = default_statistics() if base is None else base
    stats = statistics_from_dict(data.pop("base", {}), base)
    try:
        spec = SweepSpec(
            base=stats,
            axis=data.pop("axis"),
            axis_values=tuple(float(v) for v in data.pop("axis_values")),
            family=data.pop("family", None),
            family_values=tuple(float(v) for v in data.pop("family_values", ())),
            trials=int(data.pop("trials", 10_000)),
            seed=int(data.pop("seed", 1)),
        )
    except KeyError as exc:
        raise ConfigError(f"missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if data:
        raise ConfigError(f"unknown fields: {sorted(data)}")
    return spec


def write_json(data, path: Path | None) -> str:
    text = json.dumps(data, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text

