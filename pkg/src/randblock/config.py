"""Experiment configuration files: strict JSON parsing and echo.

A config is one JSON document with a ``schema_version`` field.  Unknown keys
are errors, not warnings: a typo in a disorder parameter silently changes
the physics otherwise.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .disorder import ConstantValue, Density, DensitySpec, DisorderModel
from .lattice import Cube, PeriodicPotential
from .spectra import ExperimentConfig

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Invalid or malformed experiment configuration."""


def _check_keys(record: dict, allowed: set[str], required: set[str], where: str):
    if not isinstance(record, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(record) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    missing = required - set(record)
    if missing:
        raise ConfigError(f"{where}: missing key(s) {sorted(missing)}")


def parse_density(record: dict, where: str) -> Density:
    _check_keys(record, {"type", "lo", "hi", "value", "breakpoints", "heights"},
                {"type"}, where)
    kind = record["type"]
    try:
        if kind == "uniform":
            _check_keys(record, {"type", "lo", "hi"}, {"type", "lo", "hi"}, where)
            return DensitySpec.uniform(float(record["lo"]), float(record["hi"]))
        if kind == "piecewise":
            _check_keys(record, {"type", "breakpoints", "heights"},
                        {"type", "breakpoints", "heights"}, where)
            return DensitySpec(tuple(record["breakpoints"]), tuple(record["heights"]))
        if kind == "constant":
            _check_keys(record, {"type", "value"}, {"type", "value"}, where)
            return ConstantValue(float(record["value"]))
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}: unknown density type {kind!r}")


def density_record(density: Density) -> dict:
    if isinstance(density, ConstantValue):
        return {"type": "constant", "value": density.value}
    if len(density.heights) == 1:
        return {"type": "uniform", "lo": density.breakpoints[0], "hi": density.breakpoints[-1]}
    return {"type": "piecewise", "breakpoints": list(density.breakpoints),
            "heights": list(density.heights)}


_TOP_KEYS = {"schema_version", "cube", "boundary", "laplacian_sign", "potential",
             "disorder", "realizations", "seed", "grid", "bin_width",
             "lifshits", "wegner", "dos_transform"}
_TOP_REQUIRED = {"schema_version", "cube", "boundary", "disorder", "realizations", "seed"}


def parse_config(doc: dict, seed_override: int | None = None,
                 threads: int = 1) -> tuple[ExperimentConfig, dict]:
    """Parse the top-level document into an ExperimentConfig.

    Returns (config, extras) where extras holds the per-command sections
    (lifshits / wegner / dos_transform), already key-checked.
    """
    _check_keys(doc, _TOP_KEYS, _TOP_REQUIRED, "config")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ConfigError(f"config: unsupported schema_version {doc['schema_version']}")

    cube_rec = doc["cube"]
    _check_keys(cube_rec, {"dim", "side", "centered"}, {"dim", "side"}, "cube")
    try:
        cube = Cube(int(cube_rec["dim"]), int(cube_rec["side"]),
                    bool(cube_rec.get("centered", False)))
    except ValueError as exc:
        raise ConfigError(f"cube: {exc}") from exc

    dis_rec = doc["disorder"]
    _check_keys(dis_rec, {"V", "b"}, {"V", "b"}, "disorder")
    disorder = DisorderModel(parse_density(dis_rec["V"], "disorder.V"),
                             parse_density(dis_rec["b"], "disorder.b"))

    if "potential" in doc:
        pot_rec = doc["potential"]
        _check_keys(pot_rec, {"period", "values"}, {"period", "values"}, "potential")
        try:
            potential = PeriodicPotential(tuple(pot_rec["period"]),
                                          np.asarray(pot_rec["values"], dtype=float))
        except ValueError as exc:
            raise ConfigError(f"potential: {exc}") from exc
    else:
        potential = PeriodicPotential.zero(cube.dim)

    grid_lo = grid_hi = None
    grid_points = 512
    if "grid" in doc:
        grid_rec = doc["grid"]
        _check_keys(grid_rec, {"lo", "hi", "points"}, set(), "grid")
        grid_lo = grid_rec.get("lo")
        grid_hi = grid_rec.get("hi")
        grid_points = int(grid_rec.get("points", 512))

    seed = int(doc["seed"]) if seed_override is None else int(seed_override)
    try:
        config = ExperimentConfig(
            cube=cube,
            boundary=str(doc["boundary"]),
            disorder=disorder,
            potential=potential,
            realizations=int(doc["realizations"]),
            base_seed=seed,
            laplacian_sign=int(doc.get("laplacian_sign", -1)),
            grid_lo=grid_lo,
            grid_hi=grid_hi,
            grid_points=grid_points,
            bin_width=doc.get("bin_width"),
            threads=threads,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    extras = {}
    if "lifshits" in doc:
        rec = doc["lifshits"]
        _check_keys(rec, {"epsilons", "lam", "c", "alpha", "realizations"},
                    {"epsilons", "lam"}, "lifshits")
        extras["lifshits"] = rec
    if "wegner" in doc:
        rec = doc["wegner"]
        _check_keys(rec, {"mode", "lower_constant", "min_count"},
                    {"mode", "lower_constant"}, "wegner")
        extras["wegner"] = rec
    if "dos_transform" in doc:
        rec = doc["dos_transform"]
        _check_keys(rec, {"beta", "source", "energies"}, {"beta", "source"}, "dos_transform")
        extras["dos_transform"] = rec
    return config, extras


def load_config(path: str | Path, seed_override: int | None = None,
                threads: int = 1) -> tuple[ExperimentConfig, dict, dict]:
    """Load and validate a config file; returns (config, extras, raw doc)."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    config, extras = parse_config(doc, seed_override, threads)
    return config, extras, doc


def config_echo(config: ExperimentConfig) -> dict:
    """Round-trippable record of an ExperimentConfig (re-parses to an
    equivalent config)."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "cube": {"dim": config.cube.dim, "side": config.cube.side,
                 "centered": config.cube.centered},
        "boundary": config.boundary,
        "laplacian_sign": config.laplacian_sign,
        "potential": {"period": list(config.potential.period),
                      "values": config.potential.values.tolist()},
        "disorder": {"V": density_record(config.disorder.mu_v),
                     "b": density_record(config.disorder.mu_b)},
        "realizations": config.realizations,
        "seed": config.base_seed,
        "grid": {"lo": config.grid_lo, "hi": config.grid_hi,
                 "points": config.grid_points},
    }
    if config.bin_width is not None:
        doc["bin_width"] = config.bin_width
    return doc
