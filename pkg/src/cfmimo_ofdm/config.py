"""Scenario configuration: defaults, YAML loading and validation."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

NORMALIZATIONS = ("per_subcarrier", "total_split")
ALLOCATION_PRESETS = ("mbb", "mtc", "custom")


class ConfigError(ValueError):
    """Raised when a configuration violates one of its invariants."""

    def __init__(self, field_name: str, constraint: str):
        self.field_name = field_name
        self.constraint = constraint
        super().__init__(f"{field_name}: {constraint}")


@dataclass
class PathlossParams:
    L_dB: float = 140.72
    d0: float = 10.0
    d1: float = 50.0
    f_c: float = 1.9e9
    h_AP: float = 15.0
    h_u: float = 1.65


@dataclass
class SimConfig:
    """Every parameter of one simulation scenario.

    Units are SI unless the field name says otherwise. ``group_sizes`` and
    ``rb_assignment`` are only read when ``allocation == "custom"``; the
    ``mbb`` and ``mtc`` presets derive them from ``K`` and ``N_RB``. RB
    indices in ``rb_assignment`` are 1-based.
    """

    area_side: float = 1000.0
    M: int = 128
    N_t: int = 1
    K: int = 6
    allocation: str = "mbb"
    group_sizes: Optional[List[int]] = None
    rb_assignment: Optional[Dict[int, List[int]]] = None

    N: int = 1200
    N_RB: int = 100
    lambda_RB: int = 12
    delta_f: float = 15e3
    B_w: float = 20e6
    N_T: int = 10
    tau_p: Optional[int] = None
    tau_u: int = 0

    p_d: float = 0.2
    p_u: float = 0.1
    power_normalization: str = "per_subcarrier"
    noise_density_dBm_per_Hz: float = -174.0
    noise_figure_dB: float = 9.0

    shadowing_sigma_dB: float = 8.0
    shadowing_below_d1: bool = True
    min_distance: float = 1.0
    pathloss: PathlossParams = field(default_factory=PathlossParams)

    pdp: str = "etu"
    pdp_delays_us: Optional[List[float]] = None
    pdp_powers_dB: Optional[List[float]] = None

    drops: int = 100
    seed: int = 0
    engine: str = "closed-form"

    waveform_N: int = 64
    waveform_lambda_RB: int = 1
    waveform_realizations: int = 200

    def __post_init__(self):
        if isinstance(self.pathloss, dict):
            self.pathloss = PathlossParams(**self.pathloss)
        if self.rb_assignment is not None:
            self.rb_assignment = {int(s): [int(r) for r in rbs]
                                  for s, rbs in self.rb_assignment.items()}

    @property
    def N_AP(self) -> int:
        return self.M // self.N_t

    @property
    def sigma_z2(self) -> float:
        """Per-subcarrier noise power in watts."""
        dbm = (self.noise_density_dBm_per_Hz + self.noise_figure_dB
               + 10 * math.log10(self.delta_f))
        return 10 ** ((dbm - 30) / 10)

    @property
    def p_d_subcarrier(self) -> float:
        if self.power_normalization == "total_split":
            return self.p_d / self.N
        return self.p_d

    @property
    def p_u_subcarrier(self) -> float:
        if self.power_normalization == "total_split":
            return self.p_u / self.N
        return self.p_u

    @property
    def sample_interval(self) -> float:
        return 1.0 / self.B_w

    def groups(self) -> List[int]:
        """Group sizes after preset expansion."""
        if self.allocation == "mbb":
            return [self.K]
        if self.allocation == "mtc":
            return [self.K // self.N_RB] * self.N_RB
        return list(self.group_sizes or [])

    def rb_sets(self) -> Dict[int, List[int]]:
        """Group index (0-based) -> sorted list of 1-based RB indices."""
        if self.allocation == "mbb":
            return {0: list(range(1, self.N_RB + 1))}
        if self.allocation == "mtc":
            return {s: [s + 1] for s in range(self.N_RB)}
        return {int(s): sorted(rbs) for s, rbs in (self.rb_assignment or {}).items()}

    def pilot_symbols(self) -> int:
        """Uplink training length; the minimum feasible value when unset."""
        if self.tau_p is not None:
            return self.tau_p
        largest = max(self.groups(), default=1)
        return max(1, math.ceil(largest / self.lambda_RB))

    def replace(self, **changes: Any) -> "SimConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


def validate(cfg: SimConfig) -> SimConfig:
    """Check every invariant; raise ConfigError naming the offending field."""
    if cfg.area_side <= 0:
        raise ConfigError("area_side", "must be > 0")
    for name in ("M", "N_t", "K", "N", "N_RB", "lambda_RB", "N_T", "drops"):
        if int(getattr(cfg, name)) < 1:
            raise ConfigError(name, "must be a positive integer")
    if cfg.N != cfg.N_RB * cfg.lambda_RB:
        raise ConfigError("N", f"N != N_RB*lambda_RB ({cfg.N} != {cfg.N_RB}*{cfg.lambda_RB})")
    if cfg.M % cfg.N_t:
        raise ConfigError("M", f"M must be a multiple of N_t ({cfg.M} % {cfg.N_t} != 0)")
    for name in ("p_d", "p_u", "delta_f", "B_w"):
        if not getattr(cfg, name) > 0:
            raise ConfigError(name, "must be > 0")
    if cfg.power_normalization not in NORMALIZATIONS:
        raise ConfigError("power_normalization", f"must be one of {NORMALIZATIONS}")
    if cfg.allocation not in ALLOCATION_PRESETS:
        raise ConfigError("allocation", f"must be one of {ALLOCATION_PRESETS}")
    if cfg.engine not in ("closed-form", "waveform"):
        raise ConfigError("engine", "must be 'closed-form' or 'waveform'")
    if cfg.shadowing_sigma_dB < 0:
        raise ConfigError("shadowing_sigma_dB", "must be >= 0")
    if cfg.min_distance <= 0:
        raise ConfigError("min_distance", "must be > 0")
    if cfg.tau_p is not None and cfg.tau_p < 1:
        raise ConfigError("tau_p", "must be >= 1")
    if cfg.tau_u < 0:
        raise ConfigError("tau_u", "must be >= 0")

    if cfg.allocation == "mtc" and cfg.K % cfg.N_RB:
        raise ConfigError("K", f"mtc preset needs K divisible by N_RB ({cfg.K} % {cfg.N_RB})")
    if cfg.allocation == "custom":
        if not cfg.group_sizes or cfg.rb_assignment is None:
            raise ConfigError("group_sizes", "custom allocation needs group_sizes and rb_assignment")
    sizes = cfg.groups()
    if any(s < 1 for s in sizes):
        raise ConfigError("group_sizes", "every group needs at least one user")
    if sum(sizes) != cfg.K:
        raise ConfigError("group_sizes", f"group sizes sum to {sum(sizes)}, expected K={cfg.K}")
    seen: Dict[int, int] = {}
    for s, rbs in cfg.rb_sets().items():
        if not 0 <= s < len(sizes):
            raise ConfigError("rb_assignment", f"unknown group {s}")
        for r in rbs:
            if not 1 <= r <= cfg.N_RB:
                raise ConfigError("rb_assignment", f"RB {r} outside 1..{cfg.N_RB}")
            if r in seen:
                raise ConfigError("rb_assignment", f"RB {r} assigned to groups {seen[r]} and {s}")
            seen[r] = s

    tau_p = cfg.pilot_symbols()
    if tau_p + cfg.tau_u >= cfg.N_T:
        raise ConfigError("tau_p", f"tau_p + tau_u must be < N_T ({tau_p}+{cfg.tau_u} >= {cfg.N_T})")
    for s, rbs in cfg.rb_sets().items():
        if rbs and sizes[s] > tau_p * cfg.lambda_RB:
            raise ConfigError(
                "group_sizes",
                f"pilot capacity exceeded: group {s} has {sizes[s]} users > "
                f"tau_p*lambda_RB = {tau_p * cfg.lambda_RB}")

    if (cfg.pdp_delays_us is None) != (cfg.pdp_powers_dB is None):
        raise ConfigError("pdp_delays_us", "pdp_delays_us and pdp_powers_dB go together")
    if cfg.pdp_delays_us is not None and len(cfg.pdp_delays_us) != len(cfg.pdp_powers_dB):
        raise ConfigError("pdp_powers_dB", "length differs from pdp_delays_us")
    if cfg.waveform_N % cfg.waveform_lambda_RB:
        raise ConfigError("waveform_N", "must be a multiple of waveform_lambda_RB")
    return cfg


def _coerce(name: str, value: Any, kind: type):
    """YAML 1.1 reads e.g. ``20.0e6`` as a string; accept any numeric spelling."""
    if value is None:
        return None
    if isinstance(value, bool):
        raise ConfigError(name, f"expected {kind.__name__}, got {value!r}")
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigError(name, f"expected {kind.__name__}, got {value!r}") from None
    if kind is int:
        if not number.is_integer():
            raise ConfigError(name, f"expected an integer, got {value!r}")
        return int(number)
    return number


def from_mapping(data: Optional[Dict[str, Any]]) -> SimConfig:
    data = dict(data or {})
    known = {f.name for f in dataclasses.fields(SimConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(unknown[0], "unknown configuration key")
    for f in dataclasses.fields(SimConfig):
        if f.name in data and f.type in ("int", "float", "Optional[int]"):
            data[f.name] = _coerce(f.name, data[f.name], int if "int" in f.type else float)
    try:
        cfg = SimConfig(**data)
    except TypeError as exc:
        raise ConfigError("pathloss", str(exc)) from exc
    return validate(cfg)


def load_config(path) -> SimConfig:
    """Read a YAML key/value file; omitted keys take their defaults."""
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<file>", f"parse failure: {exc}") from exc
    if data is not None and not isinstance(data, dict):
        raise ConfigError("<file>", "top level must be a mapping of keys to values")
    return from_mapping(data)
