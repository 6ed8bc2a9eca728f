"""Sweep configuration: a flat key-value text format with dotted keys.

Lines look like ``section.key = value``; ``#`` starts a comment; blank lines
are skipped.  Unknown keys produce a warning and are ignored so configs stay
forward compatible.  Validation collects *every* violated constraint before
failing, so one round trip fixes a bad file.
"""

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .beamforming import NodeConfig
from .canceller import TapImpairments
from .channel import ClusteredChannelParams, SiChannelParams


class ConfigError(ValueError):
    """Raised with the full list of config problems in `problems`."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class SweepConfig:
    """Everything a rate-versus-power experiment needs."""

    node: NodeConfig = field(default_factory=NodeConfig)
    clustered: ClusteredChannelParams = field(default_factory=ClusteredChannelParams)
    si: SiChannelParams = field(default_factory=SiChannelParams)
    array_spacing_wavelengths: float = 0.5
    codebook_subsample_step: int = 1
    num_taps: int = 4
    impairments: TapImpairments = field(default_factory=TapImpairments.ideal)
    powers_dbm: tuple[float, ...] = (0.0, 10.0, 20.0, 30.0, 40.0, 50.0)
    trials: int = 1000
    seed: int = 1
    strategy: str = "shortlist"
    shortlist_size: int = 4
    workers: int = 1
    output: str = "sweep.csv"


# key -> (python type, default); bool values accept on/off/true/false/yes/no/1/0
_SCHEMA: dict[str, type] = {
    "node.tx_antennas": int,
    "node.rx_antennas": int,
    "node.tx_chains": int,
    "node.rx_chains": int,
    "node.dl_rx_antennas": int,
    "node.ul_tx_antennas": int,
    "node.rx_noise_dbm": float,
    "node.dl_rx_noise_dbm": float,
    "node.si_budget_dbm": float,
    "node.max_dl_streams": int,
    "node.max_ul_streams": int,
    "array.spacing_wavelengths": float,
    "channel.clusters": int,
    "channel.rays": int,
    "channel.angle_spread_rad": float,
    "channel.pathloss_db": float,
    "si.k_factor_db": float,
    "si.pathloss_db": float,
    "si.distance_wavelengths": float,
    "si.angle_rad": float,
    "codebook.subsample_step": int,
    "canceller.taps": int,
    "canceller.impaired": bool,
    "canceller.attenuation_step_db": float,
    "canceller.phase_bits": int,
    "sweep.powers_dbm": "float_list",
    "sweep.trials": int,
    "sweep.seed": int,
    "sweep.strategy": str,
    "sweep.shortlist": int,
    "sweep.workers": int,
    "sweep.output": str,
}

_BOOL_WORDS = {
    "1": True, "true": True, "yes": True, "on": True,
    "0": False, "false": False, "no": False, "off": False,
}


def _convert(key: str, raw: str, problems: list[str]):
    kind = _SCHEMA[key]
    try:
        if kind is bool:
            word = raw.strip().lower()
            if word not in _BOOL_WORDS:
                raise ValueError(raw)
            return _BOOL_WORDS[word]
        if kind == "float_list":
            values = tuple(float(tok) for tok in raw.replace(",", " ").split())
            if not values:
                raise ValueError("empty list")
            return values
        return kind(raw.strip())
    except ValueError:
        problems.append(f"{key}: cannot parse {raw.strip()!r} as {getattr(kind, '__name__', kind)}")
        return None


def parse_config_text(text: str) -> dict:
    """Parse the flat key-value format into a {key: typed value} dict."""
    values: dict = {}
    problems: list[str] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            problems.append(f"line {lineno}: expected 'key = value', got {stripped!r}")
            continue
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _SCHEMA:
            warnings.warn(f"unknown config key {key!r} ignored", stacklevel=2)
            continue
        converted = _convert(key, raw, problems)
        if converted is not None:
            values[key] = converted
    if problems:
        raise ConfigError(problems)
    return values


def _validate(v: dict) -> list[str]:
    problems = []

    def check(cond: bool, message: str):
        if not cond:
            problems.append(message)

    node = _build_node(v)
    problems.extend(node.validate())
    check(v.get("array.spacing_wavelengths", 0.5) > 0, "array.spacing_wavelengths must be > 0")
    check(v.get("channel.clusters", 6) >= 1, "channel.clusters must be >= 1")
    check(v.get("channel.rays", 8) >= 1, "channel.rays must be >= 1")
    check(v.get("channel.angle_spread_rad", 0.17) >= 0, "channel.angle_spread_rad must be >= 0")
    check(v.get("si.distance_wavelengths", 2.0) > 0, "si.distance_wavelengths must be > 0")
    check(v.get("codebook.subsample_step", 1) >= 1, "codebook.subsample_step must be >= 1")
    max_taps = node.tx_chains * node.rx_chains
    taps = v.get("canceller.taps", 4)
    check(0 <= taps <= max_taps,
          f"canceller.taps must lie in 0..{max_taps} (tx_chains * rx_chains)")
    check(v.get("canceller.attenuation_step_db", 0.25) >= 0,
          "canceller.attenuation_step_db must be >= 0")
    check(v.get("canceller.phase_bits", 10) >= 0, "canceller.phase_bits must be >= 0")
    powers = v.get("sweep.powers_dbm", SweepConfig.powers_dbm)
    check(len(powers) >= 1 and all(np.isfinite(p) for p in powers),
          "sweep.powers_dbm must be a nonempty list of finite values")
    check(v.get("sweep.trials", 1000) >= 1, "sweep.trials must be >= 1")
    check(v.get("sweep.seed", 1) >= 0, "sweep.seed must be >= 0")
    check(v.get("sweep.strategy", "shortlist") in ("shortlist", "exhaustive"),
          "sweep.strategy must be 'shortlist' or 'exhaustive'")
    check(v.get("sweep.shortlist", 4) >= 1, "sweep.shortlist must be >= 1")
    check(v.get("sweep.workers", 1) >= 1, "sweep.workers must be >= 1")
    return problems


def _build_node(v: dict) -> NodeConfig:
    return NodeConfig(
        tx_antennas=v.get("node.tx_antennas", 64),
        rx_antennas=v.get("node.rx_antennas", 32),
        tx_chains=v.get("node.tx_chains", 4),
        rx_chains=v.get("node.rx_chains", 2),
        dl_rx_antennas=v.get("node.dl_rx_antennas", 4),
        ul_tx_antennas=v.get("node.ul_tx_antennas", 1),
        rx_noise_dbm=v.get("node.rx_noise_dbm", -110.0),
        dl_rx_noise_dbm=v.get("node.dl_rx_noise_dbm", -110.0),
        si_budget_dbm=v.get("node.si_budget_dbm", -47.0),
        max_dl_streams=v.get("node.max_dl_streams"),
        max_ul_streams=v.get("node.max_ul_streams"),
    )


def config_from_values(v: dict) -> SweepConfig:
    """Build a validated SweepConfig from parsed values (defaults fill gaps)."""
    problems = _validate(v)
    if problems:
        raise ConfigError(problems)
    return SweepConfig(
        node=_build_node(v),
        clustered=ClusteredChannelParams(
            num_clusters=v.get("channel.clusters", 6),
            rays_per_cluster=v.get("channel.rays", 8),
            angle_spread_rad=v.get("channel.angle_spread_rad", float(np.deg2rad(10.0))),
            pathloss_db=v.get("channel.pathloss_db", 110.0),
        ),
        si=SiChannelParams(
            k_factor_db=v.get("si.k_factor_db", 35.0),
            pathloss_db=v.get("si.pathloss_db", 40.0),
            tx_rx_distance_wavelengths=v.get("si.distance_wavelengths", 2.0),
            tx_rx_angle_rad=v.get("si.angle_rad", float(np.pi / 6.0)),
        ),
        array_spacing_wavelengths=v.get("array.spacing_wavelengths", 0.5),
        codebook_subsample_step=v.get("codebook.subsample_step", 1),
        num_taps=v.get("canceller.taps", 4),
        impairments=TapImpairments(
            enabled=v.get("canceller.impaired", False),
            attenuation_step_db=v.get("canceller.attenuation_step_db", 0.25),
            phase_bits=v.get("canceller.phase_bits", 10),
        ),
        powers_dbm=tuple(v.get("sweep.powers_dbm", SweepConfig.powers_dbm)),
        trials=v.get("sweep.trials", 1000),
        seed=v.get("sweep.seed", 1),
        strategy=v.get("sweep.strategy", "shortlist"),
        shortlist_size=v.get("sweep.shortlist", 4),
        workers=v.get("sweep.workers", 1),
        output=v.get("sweep.output", "sweep.csv"),
    )


def load_config(path) -> SweepConfig:
    """Read, parse and validate a config file.

    I/O failures propagate as :class:`OSError`; content problems raise
    :class:`ConfigError`.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return config_from_values(parse_config_text(text))


def with_overrides(cfg: SweepConfig, **kwargs) -> SweepConfig:
    """Functional update helper (CLI flags override file values)."""
    clean = {k: v for k, v in kwargs.items() if v is not None}
    return replace(cfg, **clean) if clean else cfg
