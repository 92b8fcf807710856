"""Experiment configuration shared by the protocol, bounds and harness layers."""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass
from pathlib import Path


class ConfigError(ValueError):
    """An ExperimentConfig (or a sweep built from one) violates an invariant."""


@dataclass(frozen=True)
class ExperimentConfig:
    """All parameters of one SBACC scenario.

    ``N1=None`` means "reconstruct from every surviving return". ``p_loc`` is
    the probability of *imperfect* localization used by the adversarial bound;
    ``None`` lets the harness plug in the empirical rate. ``sigma_q2=None``
    likewise defers to the empirical residual-noise variance.
    """

    N: int = 53
    K: int = 4
    S: int = 0
    A: int = 0
    K1: int = 43
    N1: int | None = 35
    sigma_p2: float = 1e-8
    sigma_a2: float = 1e4
    sigma_q2: float | None = None
    function: str = "exp"
    functions: tuple[str, ...] = ()
    m: int = 5
    n: int = 5
    data_low: float = 0.0
    data_high: float = 1.0
    seed: int = 7
    trials: int = 50
    p_loc: float | None = None
    adversary_density: float = 1.0
    noise_floor: float | None = None
    noise_margin: float = 4.0

    def __post_init__(self):
        self.validate()

    @property
    def M(self) -> int:
        return self.N - self.S

    @property
    def n1_effective(self) -> int:
        return self.M if self.N1 is None else self.N1

    @property
    def function_list(self) -> tuple[str, ...]:
        return self.functions or (self.function,)

    def validate(self) -> None:
        def need(cond: bool, msg: str) -> None:
            if not cond:
                raise ConfigError(msg)

        need(self.N >= 3, f"N >= 3 required (N={self.N})")
        need(1 <= self.K <= self.N, f"1 <= K <= N required (K={self.K}, N={self.N})")
        need(0 <= self.S < self.N - 2, f"0 <= S < N-2 required (S={self.S}, N={self.N})")
        need(1 < self.K1 < self.N - self.S,
             f"1 < K1 < N-S required (K1={self.K1}, N-S={self.N - self.S})")
        need(2 <= self.n1_effective <= self.M,
             f"2 <= N1 <= N-S required (N1={self.n1_effective}, N-S={self.M})")
        need(0 <= self.A <= self.M, f"0 <= A <= N-S required (A={self.A}, N-S={self.M})")
        need(self.sigma_p2 >= 0 and self.sigma_a2 >= 0, "noise variances must be >= 0")
        need(self.sigma_q2 is None or self.sigma_q2 >= 0, "sigma_q2 must be >= 0")
        need(self.p_loc is None or 0.0 <= self.p_loc <= 1.0, "p_loc must lie in [0, 1]")
        need(0.0 < self.adversary_density <= 1.0, "adversary_density must lie in (0, 1]")
        need(self.m >= 1 and self.n >= 1, "matrix dimensions must be positive")
        need(self.trials >= 1, "trials must be positive")
        need(self.data_high > self.data_low, "data_high must exceed data_low")

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}


def _coerce(key: str, raw: str):
    raw = raw.strip()
    kind = str(_FIELD_TYPES[key])
    if raw.lower() in ("none", "") and "None" in kind:
        return None
    if kind.startswith("tuple"):
        return tuple(s.strip() for s in raw.split(",") if s.strip())
    if kind.startswith("int"):
        return int(raw)
    if kind.startswith("float"):
        return float(raw)
    return raw


def parse_config_text(text: str, **overrides) -> ExperimentConfig:
    """Parse the flat ``key = value`` format (``#`` comments, field names as keys)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        parser.read_string("[experiment]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    values = {}
    for key, raw in parser["experiment"].items():
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            values[key] = _coerce(key, raw)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def load_config(path: str | Path, **overrides) -> ExperimentConfig:
    return parse_config_text(Path(path).read_text(), **overrides)


def dump_config(cfg: ExperimentConfig) -> str:
    lines = []
    for f in dataclasses.fields(cfg):
        v = getattr(cfg, f.name)
        if isinstance(v, tuple):
            v = ",".join(v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"


__all__ = ["ConfigError", "ExperimentConfig", "load_config", "parse_config_text",
           "dump_config"]
