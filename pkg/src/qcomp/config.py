"""Run configuration: a flat ``key = value`` file naming the RNG and tolerances.

Example::

    rng = pcg64
    eps_unitary = 1e-10
    eps_rank = 1e-8
    tol = 1e-9
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, fields

import numpy as np

from .linalg import EPS_RANK, EPS_UNITARY

BIT_GENERATORS = {
    "pcg64": np.random.PCG64,
    "pcg64dxsm": np.random.PCG64DXSM,
    "philox": np.random.Philox,
    "sfc64": np.random.SFC64,
    "mt19937": np.random.MT19937,
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    rng: str = "pcg64"
    eps_unitary: float = EPS_UNITARY
    eps_rank: float = EPS_RANK
    tol: float = 1e-9

    def generator(self, seed: int) -> np.random.Generator:
        return make_rng(self.rng, seed)


def make_rng(name: str, seed: int) -> np.random.Generator:
    try:
        bitgen = BIT_GENERATORS[name.lower()]
    except KeyError:
        raise ConfigError(f"unknown RNG {name!r}; choose from {', '.join(sorted(BIT_GENERATORS))}") from None
    return np.random.Generator(bitgen(seed))


def parse_config(text: str) -> Config:
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"), inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string("[qcomp]\n" + text)
    except configparser.Error as e:
        raise ConfigError(str(e)) from None
    known = {f.name: f.type for f in fields(Config)}
    values = {}
    for key, raw in cp["qcomp"].items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        if key == "rng":
            make_rng(raw, 0)
            values[key] = raw.lower()
        else:
            try:
                values[key] = float(raw)
            except ValueError:
                raise ConfigError(f"{key} must be a number, got {raw!r}") from None
    return Config(**values)


def load_config(path: str | None) -> Config:
    if path is None:
        return Config()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
    return parse_config(text)
